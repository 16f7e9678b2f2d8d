use alloc::format;
use alloc::vec::Vec;

use super::play::PointerStructure;
use crate::agents::Agent;
use crate::{Error, Result};

/// A perfect matching in the bipartite graph `compat[l][r]`, found by
/// augmenting paths, as `out[l] = r`.
fn perfect_matching(compat: &[Vec<bool>], right: usize) -> Option<Vec<usize>> {
    let left = compat.len();
    if left != right {
        return None;
    }
    let mut owner: Vec<Option<usize>> = alloc::vec![None; right];
    for l in 0..left {
        let mut seen = alloc::vec![false; right];
        if !augment(l, compat, &mut owner, &mut seen) {
            return None;
        }
    }
    let mut out = alloc::vec![0; left];
    for (r, o) in owner.iter().enumerate() {
        out[o.expect("perfect matching covers every right vertex")] = r;
    }
    Some(out)
}

fn augment(l: usize, compat: &[Vec<bool>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for r in 0..owner.len() {
        if compat[l][r] && !seen[r] {
            seen[r] = true;
            if owner[r].is_none_or(|o| augment(o, compat, owner, seen)) {
                owner[r] = Some(l);
                return true;
            }
        }
    }
    false
}

impl PointerStructure {
    /// Whether the context member `m` can stand for the child `{edge}child`.
    fn fits(&self, m: usize, edge: u32, child: &Agent) -> bool {
        self.residual_depth(m) <= edge && self.is_cotrace(m, child)
    }

    fn compat(&self, members: &[usize], a: &Agent) -> Vec<Vec<bool>> {
        members
            .iter()
            .map(|&m| {
                a.children()
                    .iter()
                    .map(|(e, c)| self.fits(m, *e, c))
                    .collect()
            })
            .collect()
    }

    /// Pairs each context member with a distinct child of `a`, when possible.
    fn pair_context(&self, members: &[usize], a: &Agent) -> Option<Vec<usize>> {
        perfect_matching(&self.compat(members, a), a.children().len())
    }

    /// `(s, i) ∈ Tr(a)`. Children are matched to context members by any
    /// bijection respecting the edge labels; agents do not remember the order
    /// in which their children were added.
    pub fn is_trace(&self, i: usize, a: &Agent) -> bool {
        self.rsize(i) as u64 <= 2 * u64::from(a.label())
            && self.pair_context(&self.context(i), a).is_some()
    }

    /// `(s, i) ∈ coTr(a)`.
    pub fn is_cotrace(&self, i: usize, a: &Agent) -> bool {
        self.rcosize(i) as u64 <= 2 * u64::from(a.label()) + 1
            && self.pair_context(&self.cocontext(i), a).is_some()
    }

    /// `(s, i) ∈ a ⋆_d b`.
    pub fn is_interaction(&self, i: usize, a: &Agent, d: u32, b: &Agent) -> bool {
        self.residual_depth(i) <= d && self.is_trace(i, a) && self.is_cotrace(i, b)
    }

    /// One simulation step: given `(s, i) ∈ a ⋆_d b` and a next move, returns
    /// `(a′, d′, b′)` with `a ·_d b ~> a′ ·_d′ b′` and `(s, i+1) ∈ a′ ⋆_d′ b′`.
    pub fn simulate_step(&self, i: usize, a: &Agent, d: u32, b: &Agent) -> Result<(Agent, u32, Agent)> {
        if i + 1 >= self.len() {
            return Err(Error::Precondition(format!("no move after {i}")));
        }
        if !self.is_interaction(i, a, d, b) {
            return Err(Error::Precondition(format!(
                "({i}) is not an interaction of {a} and {b} at depth {d}"
            )));
        }
        let rest = a
            .decrement_root()
            .ok_or_else(|| Error::Precondition("head agent has root 0".into()))?
            .graft(d, b.clone());
        let target = self.justifier(i + 1).expect("only move 0 is initial");
        let candidates: Vec<(Agent, u32)> = if target == i {
            alloc::vec![(b.clone(), d)]
        } else {
            if !self.context(i).contains(&target) {
                return Err(Error::InvalidPlay(format!(
                    "move {} points to {target}, outside the context of {i}",
                    i + 1
                )));
            }
            let mut cs: Vec<(Agent, u32)> = a
                .children()
                .iter()
                .filter(|(e, c)| self.fits(target, *e, c))
                .map(|(e, c)| (c.clone(), *e))
                .collect();
            cs.dedup();
            cs
        };
        let before = a.graft(d, b.clone());
        let reducts = before.reduction_steps();
        for (head, edge) in candidates {
            let Some(next_d) = edge.checked_sub(1) else {
                continue;
            };
            if !self.is_interaction(i + 1, &head, next_d, &rest) {
                continue;
            }
            let after = head.graft(next_d, rest.clone());
            if !reducts.contains(&after) {
                return Err(Error::InvalidPlay(format!(
                    "step to {after} is not a reduct of {before}"
                )));
            }
            return Ok((head, next_d, rest));
        }
        Err(Error::InvalidPlay(format!(
            "no child of {a} continues the interaction at move {}",
            i + 1
        )))
    }

    /// Runs [`Self::simulate_step`] from `(s, 0) ∈ n ⋆_d p` to the end,
    /// returning the agents `a_k ·_{d_k} b_k` for `k = 0..len`.
    pub fn simulate(&self, n: u32, p: u32, d: u32) -> Result<Vec<Agent>> {
        let (mut a, mut depth, mut b) = (Agent::leaf(n), d, Agent::leaf(p));
        let mut out = alloc::vec![a.graft(depth, b.clone())];
        for i in 0..self.len().saturating_sub(1) {
            (a, depth, b) = self.simulate_step(i, &a, depth, &b)?;
            out.push(a.graft(depth, b.clone()));
        }
        Ok(out)
    }
}
