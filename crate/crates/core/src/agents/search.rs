use alloc::boxed::Box;
use alloc::vec::Vec;
use core::hash::{BuildHasher, Hash, Hasher};

use hashbrown::{DefaultHashBuilder, HashTable};

use super::Agent;
use crate::{Error, Result};

/// Limits for exhaustive reduction search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of distinct canonical agents whose `N` is computed.
    pub max_agents: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_agents: 10_000_000,
        }
    }
}

/// Result of [`longest_reduction`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStats {
    /// `N(a)`, the length of the longest reduction sequence from `a`.
    pub longest: u64,
    /// Distinct canonical agents whose `N` was computed.
    pub explored: u64,
    /// When requested: `a_1, ..., a_N` with `a ~> a_1 ~> ... ~> a_N` and `a_N` stuck.
    pub witness: Option<Vec<Agent>>,
}

type Id = u32;
const UNKNOWN: u64 = u64::MAX;

/// Hash-consed agents: every distinct canonical agent gets one dense id.
struct Store {
    labels: Vec<u32>,
    kids: Vec<Box<[(u32, Id)]>>,
    table: HashTable<Id>,
    hasher: DefaultHashBuilder,
}

impl Store {
    fn new() -> Self {
        Store {
            labels: Vec::new(),
            kids: Vec::new(),
            table: HashTable::new(),
            hasher: DefaultHashBuilder::default(),
        }
    }

    fn hash_of(hasher: &DefaultHashBuilder, label: u32, kids: &[(u32, Id)]) -> u64 {
        let mut h = hasher.build_hasher();
        label.hash(&mut h);
        kids.hash(&mut h);
        h.finish()
    }

    fn intern(&mut self, label: u32, mut kids: Vec<(u32, Id)>) -> Id {
        kids.sort_unstable();
        let hash = Self::hash_of(&self.hasher, label, &kids);
        let (labels, all_kids) = (&self.labels, &self.kids);
        if let Some(&id) = self.table.find(hash, |&id| {
            labels[id as usize] == label && *all_kids[id as usize] == *kids
        }) {
            return id;
        }
        let id = self.labels.len() as Id;
        self.labels.push(label);
        self.kids.push(kids.into_boxed_slice());
        let (labels, all_kids, hasher) = (&self.labels, &self.kids, &self.hasher);
        self.table.insert_unique(hash, id, |&other| {
            Self::hash_of(hasher, labels[other as usize], &all_kids[other as usize])
        });
        id
    }

    fn intern_agent(&mut self, a: &Agent) -> Id {
        let kids = a
            .children()
            .iter()
            .map(|(e, c)| (*e, self.intern_agent(c)))
            .collect();
        self.intern(a.label(), kids)
    }

    fn to_agent(&self, id: Id) -> Agent {
        let kids = self.kids[id as usize]
            .iter()
            .map(|&(e, c)| (e, self.to_agent(c)))
            .collect();
        Agent::new(self.labels[id as usize], kids)
    }

    fn successors(&mut self, id: Id) -> Vec<Id> {
        let label = self.labels[id as usize];
        if label == 0 {
            return Vec::new();
        }
        let kids = self.kids[id as usize].clone();
        let rest = self.intern(label - 1, kids.to_vec());
        let mut out = Vec::with_capacity(kids.len());
        let mut prev = None;
        for &(edge, child) in kids.iter() {
            if edge == 0 || prev == Some((edge, child)) {
                continue;
            }
            prev = Some((edge, child));
            let mut grafted = self.kids[child as usize].to_vec();
            grafted.push((edge - 1, rest));
            out.push(self.intern(self.labels[child as usize], grafted));
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Memoized longest-reduction search. The memo persists across queries, so
/// sweeping many related agents through one explorer shares work; the budget
/// bounds the total number of agents evaluated over its lifetime.
pub struct Explorer {
    store: Store,
    memo: Vec<u64>,
    explored: u64,
    budget: SearchBudget,
}

struct Frame {
    id: Id,
    succs: Vec<Id>,
    next: usize,
    best: u64,
}

impl Explorer {
    pub fn new(budget: SearchBudget) -> Self {
        Explorer {
            store: Store::new(),
            memo: Vec::new(),
            explored: 0,
            budget,
        }
    }

    /// Distinct agents evaluated so far.
    pub fn explored(&self) -> u64 {
        self.explored
    }

    fn memo_of(&self, id: Id) -> u64 {
        self.memo.get(id as usize).copied().unwrap_or(UNKNOWN)
    }

    fn set_memo(&mut self, id: Id, value: u64) {
        let i = id as usize;
        if self.memo.len() <= i {
            self.memo.resize(i + 1, UNKNOWN);
        }
        self.memo[i] = value;
    }

    fn enter(&mut self, id: Id, stack: &mut Vec<Frame>) -> Result<()> {
        self.explored += 1;
        if self.explored > self.budget.max_agents {
            return Err(Error::BudgetExceeded {
                explored: self.explored - 1,
                limit: self.budget.max_agents,
            });
        }
        let succs = self.store.successors(id);
        stack.push(Frame {
            id,
            succs,
            next: 0,
            best: 0,
        });
        Ok(())
    }

    fn solve(&mut self, root: Id) -> Result<u64> {
        let known = self.memo_of(root);
        if known != UNKNOWN {
            return Ok(known);
        }
        let mut stack = Vec::new();
        self.enter(root, &mut stack)?;
        while let Some(top) = stack.last_mut() {
            if top.next < top.succs.len() {
                let s = top.succs[top.next];
                top.next += 1;
                let v = self.memo_of(s);
                if v == UNKNOWN {
                    self.enter(s, &mut stack)?;
                } else {
                    top.best = top.best.max(v + 1);
                }
            } else {
                let done = stack.pop().expect("non-empty stack");
                self.set_memo(done.id, done.best);
                if let Some(parent) = stack.last_mut() {
                    parent.best = parent.best.max(done.best + 1);
                }
            }
        }
        Ok(self.memo_of(root))
    }

    /// `N(a)`.
    pub fn longest(&mut self, a: &Agent) -> Result<u64> {
        let id = self.store.intern_agent(a);
        self.solve(id)
    }

    /// `N(a)` together with one maximal reduction sequence.
    pub fn longest_with_witness(&mut self, a: &Agent) -> Result<(u64, Vec<Agent>)> {
        let mut id = self.store.intern_agent(a);
        let n = self.solve(id)?;
        let mut witness = Vec::with_capacity(n as usize);
        let mut remaining = n;
        while remaining > 0 {
            let next = self
                .store
                .successors(id)
                .into_iter()
                .find(|&s| self.memo_of(s) == remaining - 1)
                .expect("memo is consistent along a longest path");
            witness.push(self.store.to_agent(next));
            id = next;
            remaining -= 1;
        }
        Ok((n, witness))
    }
}

/// Computes `N(a)` by memoized depth-first search over canonical agents.
pub fn longest_reduction(a: &Agent, budget: &SearchBudget) -> Result<ReductionStats> {
    let mut ex = Explorer::new(*budget);
    let longest = ex.longest(a)?;
    Ok(ReductionStats {
        longest,
        explored: ex.explored(),
        witness: None,
    })
}

/// As [`longest_reduction`], also reconstructing a maximal sequence from the memo.
pub fn longest_reduction_with_witness(a: &Agent, budget: &SearchBudget) -> Result<ReductionStats> {
    let mut ex = Explorer::new(*budget);
    let (longest, witness) = ex.longest_with_witness(a)?;
    Ok(ReductionStats {
        longest,
        explored: ex.explored(),
        witness: Some(witness),
    })
}

/// `N(n[{d}p[]]) + 1`, the length of the longest interaction at depth `d`
/// between atomic agents `n` and `p`. Requires `d >= 2`.
pub fn nd_via_agents(n: u32, p: u32, d: u32, budget: &SearchBudget) -> Result<u64> {
    let mut ex = Explorer::new(*budget);
    nd_with(&mut ex, n, p, d)
}

/// [`nd_via_agents`] reusing an existing explorer.
pub fn nd_with(ex: &mut Explorer, n: u32, p: u32, d: u32) -> Result<u64> {
    if d < 2 {
        return Err(Error::Precondition(alloc::format!(
            "N_d(n, p) needs d >= 2, got d = {d}"
        )));
    }
    Ok(ex.longest(&atomic_pair(n, p, d))? + 1)
}

/// `n[{d}p[]]`.
pub fn atomic_pair(n: u32, p: u32, d: u32) -> Agent {
    Agent::leaf(n).graft(d, Agent::leaf(p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    /// Plain recursion over `reduction_steps`, no memo: an independent oracle.
    fn brute(a: &Agent) -> u64 {
        a.reduction_steps()
            .iter()
            .map(|b| brute(b) + 1)
            .max()
            .unwrap_or(0)
    }

    fn node(n: u32, cs: Vec<(u32, Agent)>) -> Agent {
        Agent::new(n, cs)
    }

    #[test]
    fn small_values() {
        let b = SearchBudget::default();
        assert_eq!(longest_reduction(&Agent::leaf(0), &b).unwrap().longest, 0);
        let a = node(1, vec![(1, Agent::leaf(0))]);
        assert_eq!(brute(&a), 1);
        assert_eq!(longest_reduction(&a, &b).unwrap().longest, 1);
        let a = node(1, vec![(3, Agent::leaf(1))]);
        assert_eq!(brute(&a), 2);
        assert_eq!(longest_reduction(&a, &b).unwrap().longest, 2);
    }

    #[test]
    fn nd_small() {
        let b = SearchBudget::default();
        assert_eq!(nd_via_agents(1, 1, 3, &b).unwrap(), 3);
        for p in 0..4 {
            for d in 2..5 {
                assert_eq!(nd_via_agents(0, p, d, &b).unwrap(), 1);
            }
        }
        assert!(matches!(
            nd_via_agents(1, 1, 1, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn matches_brute_force() {
        let b = SearchBudget::default();
        let cases = [
            node(2, vec![(2, Agent::leaf(1)), (1, Agent::leaf(1))]),
            node(2, vec![(3, Agent::leaf(2))]),
            node(1, vec![(2, node(1, vec![(2, Agent::leaf(1))]))]),
            node(3, vec![(3, Agent::leaf(1)), (0, Agent::leaf(3))]),
        ];
        for a in cases {
            assert_eq!(longest_reduction(&a, &b).unwrap().longest, brute(&a), "{a}");
        }
    }

    #[test]
    fn witness_is_a_reduction_chain() {
        let a = atomic_pair(2, 2, 3);
        let stats = longest_reduction_with_witness(&a, &SearchBudget::default()).unwrap();
        let w = stats.witness.unwrap();
        assert_eq!(w.len() as u64, stats.longest);
        let mut prev = a;
        for next in &w {
            assert!(prev.reduction_steps().contains(next));
            prev = next.clone();
        }
        assert!(prev.reduction_steps().is_empty());
    }

    #[test]
    fn budget_is_an_error() {
        let a = atomic_pair(3, 3, 3);
        let err = longest_reduction(&a, &SearchBudget { max_agents: 5 }).unwrap_err();
        assert_eq!(
            err,
            Error::BudgetExceeded {
                explored: 5,
                limit: 5
            }
        );
    }
}
