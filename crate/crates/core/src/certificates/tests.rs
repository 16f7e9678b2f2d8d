use super::*;
use alloc::vec;
use alloc::vec::Vec;
use proptest::prelude::*;

fn big(v: u64) -> BigUint {
    BigUint::from(v)
}

fn node(l: u32, cs: Vec<(u32, Agent)>) -> Agent {
    Agent::new(l, cs)
}

/// Plain recursion over one-step reducts: the reference value of `N(a)`.
fn longest(a: &Agent) -> u64 {
    a.reduction_steps()
        .iter()
        .map(|b| longest(b) + 1)
        .max()
        .unwrap_or(0)
}

fn arb_agent(max_label: u32, max_edge: u32) -> impl Strategy<Value = Agent> {
    let leaf = (0..=max_label).prop_map(Agent::leaf);
    leaf.prop_recursive(3, 6, 3, move |inner| {
        (0..=max_label, prop::collection::vec((0..=max_edge, inner), 0..3))
            .prop_map(|(l, cs)| Agent::new(l, cs))
    })
}

/// Attaches `{edge}x` under every node whose preorder index has its flag set.
fn with_holes(a: &Agent, edge: u32, flags: &[bool], next: &mut usize) -> ContextAgent {
    let here = flags.get(*next).copied().unwrap_or(false);
    *next += 1;
    let children = a
        .children()
        .iter()
        .map(|(e, c)| (*e, Slot::Node(with_holes(c, edge, flags, next))))
        .collect();
    let ctx = ContextAgent::new(a.label(), children);
    if here {
        ctx.graft_hole(edge)
    } else {
        ctx
    }
}

#[test]
fn recompose_examples() {
    let d = recompose(&Agent::leaf(0)).unwrap();
    assert_eq!((d.alpha.clone(), d.rho, d.rule_name()), (big(0), 0, "BASE"));

    let d = recompose(&Agent::leaf(2)).unwrap();
    assert_eq!((d.alpha.clone(), d.rho, d.rule_name()), (big(2), 0, "RED"));
    assert!(check(&d));
    assert_eq!(d.tree_size(), 3);

    let a = node(1, vec![(1, Agent::leaf(1))]);
    let d = recompose(&a).unwrap();
    assert_eq!((d.alpha.clone(), d.rho), (big(2), 1));
    assert_eq!(d.subject, a);
    assert!(check(&d));
}

#[test]
fn weaken_examples() {
    let b = Derivation::base(big(0), 0, Agent::leaf(0));
    assert_eq!(*weaken(&b, &big(0), 0).unwrap(), *b);
    let w = weaken(&b, &big(5), 3).unwrap();
    assert_eq!((w.alpha.clone(), w.rho, w.rule_name()), (big(5), 3, "BASE"));
    assert!(weaken(&w, &big(4), 3).is_err());

    let d = recompose(&node(2, vec![(2, Agent::leaf(1))])).unwrap();
    let w = weaken(&d, &big(11), 4).unwrap();
    assert!(check(&w));
    assert_eq!((w.alpha.clone(), w.rho, &w.subject), (big(11), 4, &d.subject));
}

#[test]
fn substitute_examples() {
    // BASE stays BASE with alpha 0
    let a0 = Derivation::base(big(0), 1, Agent::leaf(0));
    let ctx = ContextAgent::from_agent(&Agent::leaf(0)).graft_hole(2);
    let b = recompose(&Agent::leaf(3)).unwrap();
    let b = weaken(&b, &b.alpha, 1).unwrap();
    let out = substitute(&a0, &ctx, &b).unwrap();
    assert_eq!((out.alpha.clone(), out.rule_name()), (big(0), "BASE"));
    assert_eq!(out.subject, node(0, vec![(2, Agent::leaf(3))]));

    // n[{d}x] with n[] and p[] at level d - 1 gives n(p+1)
    for (n, p, d) in [(1, 1, 2), (2, 1, 3), (2, 3, 3), (3, 2, 4)] {
        let mut t = Transformer::default();
        let head = t.base_prime(n, &big(n.into()), d - 1).unwrap();
        let arg = t.base_prime(p, &big(p.into()), d - 1).unwrap();
        let ctx = ContextAgent::from_agent(&Agent::leaf(n)).graft_hole(d);
        let out = t.substitute(&head, &ctx, &arg).unwrap();
        assert_eq!(out.alpha, big(u64::from(n * (p + 1))));
        assert_eq!(out.subject, node(n, vec![(d, Agent::leaf(p))]));
        assert!(check(&out), "{}", diagnose(&out).unwrap_err());
    }
}

#[test]
fn substitute_rejects_bad_inputs() {
    let a = recompose(&Agent::leaf(1)).unwrap();
    let b = recompose(&Agent::leaf(1)).unwrap();
    let too_deep = ContextAgent::from_agent(&Agent::leaf(1)).graft_hole(2);
    assert!(matches!(substitute(&a, &too_deep, &b), Err(Error::Precondition(_))));
    let wrong_shape = ContextAgent::from_agent(&Agent::leaf(2)).graft_hole(1);
    assert!(substitute(&a, &wrong_shape, &b).is_err());
}

#[test]
fn base_substitute_examples() {
    let ctx = ContextAgent::from_agent(&Agent::leaf(2)).graft_hole(1);
    let a = recompose(&Agent::leaf(2)).unwrap();
    let zero = Derivation::base(big(0), 0, node(0, vec![(3, Agent::leaf(1))]));
    let out = base_substitute(&a, &ctx, &zero).unwrap();
    assert_eq!(out.alpha, big(2));
    assert!(check(&out));

    let a0 = Derivation::base(big(0), 0, Agent::leaf(0));
    let ctx0 = ContextAgent::from_agent(&Agent::leaf(0)).graft_hole(1);
    let b = recompose(&Agent::leaf(3)).unwrap();
    let out = base_substitute(&a0, &ctx0, &b).unwrap();
    assert_eq!(out.alpha, big(3));
    assert!(check(&out));
}

#[test]
fn cut_elimination_examples() {
    let z = Derivation::base(big(0), 2, Agent::leaf(0));
    let out = cut_eliminate(&z).unwrap();
    assert_eq!((out.alpha.clone(), out.rho), (big(0), 1));

    let d = recompose(&node(1, vec![(2, Agent::leaf(1))])).unwrap();
    let d = weaken(&d, &big(3), 2).unwrap();
    let out = cut_eliminate(&d).unwrap();
    assert_eq!((out.alpha.clone(), out.rho), (big(4), 1));
    assert!(check(&out), "{}", diagnose(&out).unwrap_err());

    assert!(cut_eliminate(&Derivation::base(big(0), 0, Agent::leaf(0))).is_err());
}

#[test]
fn base_cut_elimination_examples() {
    let d = recompose(&Agent::leaf(2)).unwrap();
    let d1 = weaken(&d, &big(2), 1).unwrap();
    let out = base_cut_eliminate(&d1).unwrap();
    assert_eq!((out.alpha.clone(), out.rho, out.cut_count()), (big(2), 0, 0));

    let a = node(1, vec![(1, Agent::leaf(1))]);
    let d = recompose(&a).unwrap();
    assert_eq!(d.cut_count(), 1);
    let out = base_cut_eliminate(&d).unwrap();
    assert_eq!((out.alpha.clone(), out.rho), (big(2), 0));
    assert_eq!(out.cut_count(), 0);
    assert!(check(&out));
}

#[test]
fn extract_bound_examples() {
    let d = Derivation::base(big(0), 0, Agent::leaf(0));
    assert_eq!(extract_bound(&d).unwrap(), big(0));
    let bad = Derivation::base(big(0), 0, Agent::leaf(1));
    assert!(extract_bound(&bad).is_err());
}

#[test]
fn certify_examples() {
    let a = node(1, vec![(1, Agent::leaf(1))]);
    let c = certify(&a).unwrap();
    assert_eq!(c.bound.to_u64(), Some(1));
    assert!(check(&c.derivation));
    assert!(extract_bound(&c.derivation).unwrap() >= big(longest(&a)));

    let a = node(1, vec![(2, Agent::leaf(1))]);
    let c = certify(&a).unwrap();
    assert_eq!(c.bound.to_u64(), Some(2));
    assert_eq!(c.derivation.alpha, big(2));
    assert!(check(&c.derivation));
    assert_eq!(longest(&a), 2);

    assert!(matches!(certify(&Agent::leaf(3)), Err(Error::Hypothesis(_))));
}

#[test]
fn atomic_pair_route() {
    for (n, p, d, expect) in [(1, 1, 2, 2), (2, 1, 2, 4), (1, 1, 3, 2), (1, 2, 3, 4), (2, 1, 3, 8)] {
        let dv = certify_atomic_pair(n, p, d, Limits::default()).unwrap();
        assert_eq!(dv.alpha, big(expect), "({n},{p},{d})");
        assert!(check(&dv));
        let a = node(n, vec![(d, Agent::leaf(p))]);
        assert!(dv.alpha >= big(longest(&a)));
    }
}

#[test]
fn node_guard_aborts() {
    let limits = Limits {
        max_nodes: 10,
        max_alpha_bits: 64,
        ..Limits::default()
    };
    let a = node(2, vec![(3, Agent::leaf(2))]);
    assert!(matches!(certify_with(&a, limits), Err(Error::DerivationTooLarge(_))));
    let limits = Limits {
        max_total_bits: 100,
        ..Limits::default()
    };
    assert!(matches!(certify_with(&a, limits), Err(Error::DerivationTooLarge(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn certified_bound_is_sound(a in arb_agent(2, 3)) {
        prop_assume!(a.depth() >= 1 && a.max_label() >= 1 && a.size() <= 5);
        let c = certify(&a);
        prop_assume!(c.is_ok());
        let c = c.unwrap();
        prop_assert!(check(&c.derivation), "{}", diagnose(&c.derivation).unwrap_err());
        prop_assert_eq!(c.derivation.rho, 0);
        let alpha = extract_bound(&c.derivation).unwrap();
        prop_assert!(alpha >= big(longest(&a)));
        if a.depth() >= 2 {
            prop_assert!(Tower::exact(alpha) <= c.bound);
        } else {
            prop_assert_eq!(alpha, BigUint::from(a.max_label()) * a.size());
        }
    }

    #[test]
    fn substitution_is_exact(a in arb_agent(2, 2), b in arb_agent(2, 2),
                             flags in prop::collection::vec(any::<bool>(), 8), ty in 0u32..3) {
        let mut t = Transformer::default();
        let rho = a.depth().max(b.depth()).max(ty.saturating_sub(1));
        let da = t.recompose(&a).unwrap();
        let da = t.weaken(&da, &da.alpha, rho).unwrap();
        let db = t.recompose(&b).unwrap();
        let db = t.weaken(&db, &db.alpha, rho).unwrap();
        let ctx = with_holes(&a, ty, &flags, &mut 0);
        let out = t.substitute(&da, &ctx, &db).unwrap();
        prop_assert!(check(&out), "{}", diagnose(&out).unwrap_err());
        prop_assert_eq!(&out.subject, &ctx.fill(&b));
        prop_assert_eq!(out.alpha.clone(), &da.alpha * (&db.alpha + 1u32));
    }

    #[test]
    fn substitution_through_red_nodes(a in arb_agent(2, 2), b in arb_agent(1, 1),
                                      flags in prop::collection::vec(any::<bool>(), 8)) {
        prop_assume!(a.depth() >= 1 && a.size() <= 4);
        let mut t = Transformer::default();
        let da = t.recompose(&a).unwrap();
        let da = t.weaken(&da, &da.alpha, da.rho + 1).unwrap();
        let da = t.cut_eliminate(&da).unwrap();
        let rho = da.rho;
        let db = t.recompose(&b).unwrap();
        let db = t.weaken(&db, &db.alpha, rho).unwrap();
        let ctx = with_holes(&a, rho + 1, &flags, &mut 0);
        let out = t.substitute(&da, &ctx, &db).unwrap();
        prop_assert!(check(&out), "{}", diagnose(&out).unwrap_err());
        prop_assert_eq!(out.alpha.clone(), &da.alpha * (&db.alpha + 1u32));
    }

    #[test]
    fn null_substitution_keeps_alpha_and_cuts(a in arb_agent(2, 2), b in arb_agent(3, 3),
                                              flags in prop::collection::vec(any::<bool>(), 8),
                                              eliminate in any::<bool>()) {
        let mut t = Transformer::default();
        let mut da = t.recompose(&a).unwrap();
        if eliminate && da.rho >= 1 {
            da = t.cut_eliminate(&da).unwrap();
        }
        let ctx = with_holes(&a, 0, &flags, &mut 0);
        let out = t.null_substitute(&da, &ctx, &b).unwrap();
        prop_assert!(check(&out), "{}", diagnose(&out).unwrap_err());
        prop_assert_eq!(&out.alpha, &da.alpha);
        prop_assert_eq!(out.cut_count(), da.cut_count());
        prop_assert_eq!(&out.subject, &ctx.fill(&b));
    }

    #[test]
    fn base_substitution_adds(a in arb_agent(2, 1), b in arb_agent(2, 1),
                              flags in prop::collection::vec(any::<bool>(), 8)) {
        let mut t = Transformer::default();
        let da = t.recompose(&a).unwrap();
        let da = t.weaken(&da, &da.alpha, 1).unwrap();
        let da = t.base_cut_eliminate(&da).unwrap();
        let db = t.recompose(&b).unwrap();
        let db = t.weaken(&db, &db.alpha, 1).unwrap();
        let db = t.base_cut_eliminate(&db).unwrap();
        let ctx = with_holes(&a, 1, &flags, &mut 0);
        let out = t.base_substitute(&da, &ctx, &db).unwrap();
        prop_assert!(check(&out), "{}", diagnose(&out).unwrap_err());
        prop_assert_eq!(out.alpha.clone(), &da.alpha + &db.alpha);
        prop_assert!(out.alpha >= big(longest(&out.subject)));
    }

    #[test]
    fn cut_elimination_level_and_alpha(a in arb_agent(2, 3)) {
        prop_assume!(a.depth() >= 1 && a.size() <= 4);
        let mut t = Transformer::default();
        let d = t.recompose(&a).unwrap();
        let out = t.cut_eliminate(&d);
        prop_assume!(out.is_ok());
        let out = out.unwrap();
        prop_assert!(check(&out), "{}", diagnose(&out).unwrap_err());
        prop_assert_eq!(out.rho, d.rho - 1);
        let expect = if d.alpha == big(0) {
            big(0)
        } else {
            BigUint::from(1u32) << (u64::try_from(&d.alpha).unwrap() - 1)
        };
        prop_assert_eq!(&out.alpha, &expect);
    }

    #[test]
    fn weaken_keeps_subject_and_raises(a in arb_agent(2, 2), extra in 0u64..4, lift in 0u32..3) {
        let mut t = Transformer::default();
        let d = t.recompose(&a).unwrap();
        let alpha = &d.alpha + extra;
        let out = t.weaken(&d, &alpha, d.rho + lift).unwrap();
        prop_assert!(check(&out), "{}", diagnose(&out).unwrap_err());
        prop_assert_eq!(&out.subject, &d.subject);
        prop_assert_eq!((out.alpha.clone(), out.rho), (alpha, d.rho + lift));
    }
}
