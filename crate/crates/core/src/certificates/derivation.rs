use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};
use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::agents::Agent;

/// A witness tree for the judgement "`subject` is bounded by `alpha` at level `rho`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub alpha: BigUint,
    pub rho: u32,
    pub subject: Agent,
    pub rule: Rule,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Rule {
    /// The subject's root is labelled 0.
    Base,
    /// One premise per one-step reduct of the subject, plus one for the
    /// subject with its root decremented; all premises sit at `alpha - 1`.
    Red {
        successors: Vec<Rc<Derivation>>,
        decrement: Rc<Derivation>,
    },
    /// `subject = left.subject ·_edge right.subject` with `edge <= rho`
    /// and `alpha = left.alpha + right.alpha`.
    Cut {
        edge: u32,
        left: Rc<Derivation>,
        right: Rc<Derivation>,
    },
}

impl Derivation {
    pub fn base(alpha: BigUint, rho: u32, subject: Agent) -> Rc<Derivation> {
        Rc::new(Derivation {
            alpha,
            rho,
            subject,
            rule: Rule::Base,
        })
    }

    pub fn red(
        alpha: BigUint,
        rho: u32,
        subject: Agent,
        successors: Vec<Rc<Derivation>>,
        decrement: Rc<Derivation>,
    ) -> Rc<Derivation> {
        Rc::new(Derivation {
            alpha,
            rho,
            subject,
            rule: Rule::Red {
                successors,
                decrement,
            },
        })
    }

    /// A CUT node whose conclusion is computed from its premises.
    pub fn cut(rho: u32, edge: u32, left: Rc<Derivation>, right: Rc<Derivation>) -> Rc<Derivation> {
        Rc::new(Derivation {
            alpha: &left.alpha + &right.alpha,
            rho,
            subject: left.subject.graft(edge, right.subject.clone()),
            rule: Rule::Cut { edge, left, right },
        })
    }

    pub fn rule_name(&self) -> &'static str {
        match self.rule {
            Rule::Base => "BASE",
            Rule::Red { .. } => "RED",
            Rule::Cut { .. } => "CUT",
        }
    }

    /// Premises in serialization order: RED successors then the decrement,
    /// CUT left then right.
    pub fn premises(&self) -> Vec<&Rc<Derivation>> {
        match &self.rule {
            Rule::Base => Vec::new(),
            Rule::Red {
                successors,
                decrement,
            } => successors.iter().chain(core::iter::once(decrement)).collect(),
            Rule::Cut { left, right, .. } => alloc::vec![left, right],
        }
    }

    /// Node count of the tree this derivation denotes, shared subtrees
    /// counted once per occurrence. Saturates at `u64::MAX`.
    pub fn tree_size(&self) -> u64 {
        self.fold_tree(&mut HashMap::new(), &|_| 1)
    }

    /// Number of CUT nodes in the denoted tree, per occurrence.
    pub fn cut_count(&self) -> u64 {
        self.fold_tree(&mut HashMap::new(), &|d| u64::from(matches!(d.rule, Rule::Cut { .. })))
    }

    /// Distinct nodes in memory.
    pub fn distinct_nodes(&self) -> u64 {
        let mut seen = HashSet::new();
        let mut stack = alloc::vec![self];
        while let Some(d) = stack.pop() {
            if seen.insert(d as *const Derivation) {
                stack.extend(d.premises().into_iter().map(|p| &**p));
            }
        }
        seen.len() as u64
    }

    fn fold_tree(&self, memo: &mut HashMap<*const Derivation, u64>, weight: &dyn Fn(&Derivation) -> u64) -> u64 {
        if let Some(&v) = memo.get(&(self as *const _)) {
            return v;
        }
        let mut total = weight(self);
        for p in self.premises() {
            total = total.saturating_add(p.fold_tree(memo, weight));
        }
        memo.insert(self as *const _, total);
        total
    }
}

/// Why a derivation fails to check, and where: `path` lists premise
/// indices from the root, in the order of [`Derivation::premises`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckFailure {
    pub path: Vec<usize>,
    pub reason: String,
}

impl core::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str("at /")?;
        for (k, i) in self.path.iter().enumerate() {
            if k > 0 {
                f.write_str("/")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ": {}", self.reason)
    }
}

/// Whether every node satisfies the side conditions of its rule.
pub fn check(dv: &Derivation) -> bool {
    diagnose(dv).is_ok()
}

/// As [`check`], reporting the first failing node.
pub fn diagnose(dv: &Derivation) -> Result<(), CheckFailure> {
    let mut valid = HashSet::new();
    let mut path = Vec::new();
    visit(dv, &mut valid, &mut path).map_err(|reason| CheckFailure { path, reason })
}

fn visit(
    dv: &Derivation,
    valid: &mut HashSet<*const Derivation>,
    path: &mut Vec<usize>,
) -> Result<(), String> {
    if valid.contains(&(dv as *const _)) {
        return Ok(());
    }
    local(dv)?;
    for (i, p) in dv.premises().into_iter().enumerate() {
        path.push(i);
        visit(p, valid, path)?;
        path.pop();
    }
    valid.insert(dv as *const _);
    Ok(())
}

fn local(dv: &Derivation) -> Result<(), String> {
    for p in dv.premises() {
        if p.rho != dv.rho {
            return Err(format!("premise at level {} under a node at level {}", p.rho, dv.rho));
        }
    }
    match &dv.rule {
        Rule::Base => {
            if dv.subject.label() != 0 {
                return Err(format!("BASE on root label {}", dv.subject.label()));
            }
        }
        Rule::Red {
            successors,
            decrement,
        } => {
            let Some(dec) = dv.subject.decrement_root() else {
                return Err("RED on root label 0".into());
            };
            if dv.alpha.is_zero() {
                return Err("RED concluding alpha = 0".into());
            }
            let below = &dv.alpha - BigUint::one();
            for p in dv.premises() {
                if p.alpha != below {
                    return Err(format!("RED premise at alpha {} instead of {below}", p.alpha));
                }
            }
            if decrement.subject != dec {
                return Err(format!("decrement premise on {} instead of {dec}", decrement.subject));
            }
            let mut got: Vec<&Agent> = successors.iter().map(|s| &s.subject).collect();
            got.sort();
            let expected = dv.subject.reduction_steps();
            if got.len() != expected.len() || got.iter().zip(&expected).any(|(g, e)| *g != e) {
                return Err(format!(
                    "RED premises do not match the {} one-step reducts of {}",
                    expected.len(),
                    dv.subject
                ));
            }
        }
        Rule::Cut { edge, left, right } => {
            if *edge > dv.rho {
                return Err(format!("CUT on edge {edge} above level {}", dv.rho));
            }
            if dv.alpha != &left.alpha + &right.alpha {
                return Err("CUT alpha is not the sum of its premises".into());
            }
            if left.subject.graft(*edge, right.subject.clone()) != dv.subject {
                return Err(format!(
                    "{} is not {} grafted with {} on edge {edge}",
                    dv.subject, left.subject, right.subject
                ));
            }
        }
    }
    Ok(())
}
