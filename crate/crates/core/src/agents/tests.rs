use super::*;
use alloc::vec::Vec;
use proptest::prelude::*;

/// Plain recursion over one-step reducts: the reference value of `N(a)`.
fn brute(a: &Agent) -> u64 {
    a.reduction_steps().iter().map(|b| brute(b) + 1).max().unwrap_or(0)
}

fn arb_agent(max_label: u32, max_edge: u32) -> impl Strategy<Value = Agent> {
    let leaf = (0..=max_label).prop_map(Agent::leaf);
    leaf.prop_recursive(3, 6, 3, move |inner| {
        (0..=max_label, prop::collection::vec((0..=max_edge, inner), 0..3)).prop_map(|(l, cs)| Agent::new(l, cs))
    })
}

/// Rebuilds `a` with every child list rotated and reversed.
fn rotated(a: &Agent, k: usize) -> Agent {
    let mut cs: Vec<(u32, Agent)> = a.children().iter().map(|(e, c)| (*e, rotated(c, k + 1))).collect();
    if !cs.is_empty() {
        let r = k % cs.len();
        cs.rotate_left(r);
        cs.reverse();
    }
    Agent::new(a.label(), cs)
}

const BUDGET: SearchBudget = SearchBudget { max_agents: 200_000 };

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, ..ProptestConfig::default() })]

    #[test]
    fn search_terminates_and_matches_recursion(a in arb_agent(2, 2)) {
        prop_assume!(a.size() <= 4);
        let st = longest_reduction(&a, &BUDGET).unwrap();
        prop_assert_eq!(st.longest, brute(&a));
    }

    #[test]
    fn bound_is_sound(a in arb_agent(3, 3)) {
        let Ok(bound) = upper_bound(&a) else { return Ok(()) };
        let Ok(st) = longest_reduction(&a, &BUDGET) else { return Ok(()) };
        prop_assert!(Tower::from(st.longest) <= bound, "{} > {}", st.longest, bound);
    }

    #[test]
    fn nd_is_monotone(n in 0u32..=2, p in 0u32..=2, d in 2u32..=3, dn in 0u32..=1, dp in 0u32..=1, dd in 0u32..=1) {
        let lo = nd_via_agents(n, p, d, &BUDGET).unwrap();
        let hi = nd_via_agents(n + dn, p + dp, d + dd, &BUDGET).unwrap();
        prop_assert!(lo <= hi);
    }

    #[test]
    fn child_order_is_irrelevant(a in arb_agent(3, 3), k in 0usize..4) {
        let b = rotated(&a, k);
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(
            longest_reduction(&a, &BUDGET).map(|s| s.longest),
            longest_reduction(&b, &BUDGET).map(|s| s.longest)
        );
    }

    #[test]
    fn steps_are_grafts(a in arb_agent(3, 3)) {
        let rest = a.decrement_root();
        for b in a.reduction_steps() {
            let rest = rest.clone().unwrap();
            prop_assert!(a
                .children()
                .iter()
                .any(|(e, c)| *e >= 1 && graft(c, e - 1, &rest) == b));
        }
    }
}
