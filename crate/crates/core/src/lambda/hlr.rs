use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec::Vec;

use super::term::{Fresh, Name, Term};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HlrBudget {
    /// Maximum number of linear substitutions.
    pub max_steps: u64,
}

impl Default for HlrBudget {
    fn default() -> Self {
        HlrBudget {
            max_steps: 100_000_000,
        }
    }
}

/// One linear substitution.
#[derive(Debug, Clone)]
pub struct HlrStep {
    /// The head variable that was replaced.
    pub variable: Name,
    /// Nodes on the path from the root to the replaced occurrence.
    pub position: usize,
    /// The argument copied in its place, before renaming.
    pub argument: Term,
}

#[derive(Debug, Clone)]
pub struct HlrRun {
    pub steps: u64,
    /// The term reached, with every redex still in place.
    pub term: Term,
}

/// Replaces the head occurrence by a fresh copy of the argument of its prime
/// redex, when it has one. Binders of `t` must be pairwise distinct.
pub fn hlr_step(t: &Term, fresh: &mut Fresh) -> Option<(Term, HlrStep)> {
    let mut pending: Vec<&Term> = Vec::new();
    let mut env: BTreeMap<&Name, Option<&Term>> = BTreeMap::new();
    let mut path: Vec<&Term> = Vec::new();
    let mut cur = t;
    let (variable, argument) = loop {
        path.push(cur);
        match cur {
            Term::App(f, a) => {
                pending.push(a);
                cur = f;
            }
            Term::Lam(x, _, b) => {
                env.insert(x, pending.pop());
                cur = b;
            }
            Term::Var(x) => match env.get(x) {
                Some(Some(a)) => break (x, *a),
                _ => return None,
            },
            Term::Const(..) => return None,
        }
    };
    let mut out = fresh.rename_binders(argument);
    let position = path.len();
    path.pop();
    for node in path.into_iter().rev() {
        out = match node {
            Term::App(_, a) => Term::App(Rc::new(out), a.clone()),
            Term::Lam(x, ty, _) => Term::Lam(x.clone(), ty.clone(), Rc::new(out)),
            _ => unreachable!("leaves end the walk"),
        };
    }
    let step = HlrStep {
        variable: variable.clone(),
        position,
        argument: argument.clone(),
    };
    Some((out, step))
}

/// Head linear reduction to the end, calling `visit` after every step.
/// The input is first renamed so that all binders are distinct.
pub fn hlr_run_with<F>(t: &Term, budget: HlrBudget, mut visit: F) -> Result<HlrRun>
where
    F: FnMut(&HlrStep, &Term),
{
    t.typecheck()?;
    let mut fresh = Fresh::above(t);
    let mut term = fresh.rename_binders(t);
    let mut steps = 0u64;
    while let Some((next, step)) = hlr_step(&term, &mut fresh) {
        if steps >= budget.max_steps {
            return Err(Error::BudgetExceeded {
                explored: steps,
                limit: budget.max_steps,
            });
        }
        steps += 1;
        visit(&step, &next);
        term = next;
    }
    Ok(HlrRun { steps, term })
}

pub fn hlr_run(t: &Term, budget: HlrBudget) -> Result<HlrRun> {
    hlr_run_with(t, budget, |_, _| {})
}

const EMPTY: usize = usize::MAX;

struct Binding<'a> {
    name: &'a Name,
    closure: Option<usize>,
    parent: usize,
}

/// Where the machine stopped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HlrHead {
    /// A variable bound by an abstraction that receives no argument.
    Bound(Name),
    Constant(Name),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HlrCount {
    pub steps: u64,
    pub head: HlrHead,
}

/// Counts head linear reduction steps without building terms: a Krivine
/// machine that keeps going under abstractions left without an argument.
/// Each lookup of a variable bound to a closure is one linear substitution.
pub fn hlr_steps(t: &Term, budget: HlrBudget) -> Result<HlrCount> {
    t.typecheck()?;
    let mut closures: Vec<(&Term, usize)> = Vec::new();
    let mut bindings: Vec<Binding<'_>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let (mut cur, mut env) = (t, EMPTY);
    let mut steps = 0u64;
    loop {
        match cur {
            Term::App(f, a) => {
                closures.push((a, env));
                stack.push(closures.len() - 1);
                cur = f;
            }
            Term::Lam(x, _, b) => {
                bindings.push(Binding {
                    name: x,
                    closure: stack.pop(),
                    parent: env,
                });
                env = bindings.len() - 1;
                cur = b;
            }
            Term::Var(x) => {
                let mut e = env;
                while e != EMPTY && bindings[e].name != x {
                    e = bindings[e].parent;
                }
                let Some(c) = bindings.get(e).and_then(|b| b.closure) else {
                    return Ok(HlrCount {
                        steps,
                        head: HlrHead::Bound(x.clone()),
                    });
                };
                if steps >= budget.max_steps {
                    return Err(Error::BudgetExceeded {
                        explored: steps,
                        limit: budget.max_steps,
                    });
                }
                steps += 1;
                (cur, env) = closures[c];
            }
            Term::Const(c, _) => {
                return Ok(HlrCount {
                    steps,
                    head: HlrHead::Constant(c.clone()),
                })
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lambda::term::{app, id_base, konst, lam, var, Type};
    use alloc::string::ToString;

    fn o() -> Type {
        Type::Base
    }

    #[test]
    fn abstraction_is_stuck() {
        let r = hlr_run(&id_base(), HlrBudget::default()).unwrap();
        assert_eq!(r.steps, 0);
        assert_eq!(hlr_steps(&id_base(), HlrBudget::default()).unwrap().steps, 0);
    }

    #[test]
    fn one_substitution() {
        let t = app(id_base(), konst("c", o()));
        let r = hlr_run(&t, HlrBudget::default()).unwrap();
        assert_eq!(r.steps, 1);
        // the redex stays in place
        assert!(r.term.alpha_eq(&app(lam("x", o(), konst("c", o())), konst("c", o()))));
        let c = hlr_steps(&t, HlrBudget::default()).unwrap();
        assert_eq!(c, HlrCount { steps: 1, head: HlrHead::Constant(Name::new("c")) });
    }

    #[test]
    fn twice_identity_by_hand() {
        // (λf.λx. f (f x)) id: f, then the identity's variable, then f, then again
        let f1 = Type::church(1);
        let two = lam("f", f1, lam("x", o(), app(var("f"), app(var("f"), var("x")))));
        let t = app(two, id_base());
        let mut trail = Vec::new();
        let r = hlr_run_with(&t, HlrBudget::default(), |s, _| trail.push(s.variable.base.to_string())).unwrap();
        assert_eq!(r.steps, 4);
        assert_eq!(trail, ["f", "x", "f", "x"]);
        assert_eq!(hlr_steps(&t, HlrBudget::default()).unwrap().steps, 4);
    }

    #[test]
    fn budget_is_enforced() {
        let t = app(id_base(), konst("c", o()));
        let tight = HlrBudget { max_steps: 0 };
        assert!(matches!(hlr_run(&t, tight), Err(Error::BudgetExceeded { .. })));
        assert!(matches!(hlr_steps(&t, tight), Err(Error::BudgetExceeded { .. })));
    }
}
