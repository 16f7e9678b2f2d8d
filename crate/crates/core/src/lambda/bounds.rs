use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigUint;

use super::metrics::{degree, delay_redexes, eta_long, height, is_beta_normal, is_eta_long, sh};
use super::term::{app, apply, id_base, lam, var, Fresh, Name, Term, Type};
use crate::agents::Tower;
use crate::{Error, Result};

/// `λf:A_{p+1}. λx:A_p. f (f (... (f x)))` with `n` occurrences of `f`, of type `A_{p+2}`.
pub fn church(n: u32, p: u32) -> Term {
    let mut body = var("x");
    for _ in 0..n {
        body = app(var("f"), body);
    }
    lam("f", Type::church(p + 1), lam("x", Type::church(p), body))
}

/// `2_n 2_{n-1} ... 2_0 id`, writing `2_k` for `church(2, k)`.
pub fn lower_bound_family(n: u32) -> Term {
    let numerals = (0..n).rev().map(|k| church(2, k));
    app(apply(church(2, n), numerals), id_base())
}

/// Rebuilds an application spine with its head and arguments η-expanded separately.
pub fn eta_long_spine(t: &Term) -> Result<Term> {
    let (head, args) = t.spine();
    let mut out = eta_long(head)?;
    for a in args {
        out = app(out, eta_long(a)?);
    }
    Ok(out)
}

/// `S T_1 ... T_p` with `S` and the `T_i` closed, η-long and β-normal.
#[derive(Debug, Clone)]
pub struct GameSituation {
    pub head: Term,
    pub args: Vec<Term>,
    /// `2_{max lv(A_i) - 1}^{sh(S)(max sh(T_i) + 1)}`, the height floored at 0.
    pub bound: Tower,
}

pub fn game_situation(t: &Term) -> Result<GameSituation> {
    t.typecheck()?;
    let (head, args) = t.spine();
    if args.is_empty() {
        return Err(Error::NotGameSituation(format!("{t} is not an application")));
    }
    let mut failures: Vec<String> = Vec::new();
    let mut inspect = |role: String, c: &Term| -> Result<()> {
        if !is_beta_normal(c) {
            failures.push(format!("{role} is not β-normal"));
        } else if !is_eta_long(c)? {
            failures.push(format!("{role} is not η-long"));
        }
        Ok(())
    };
    inspect(String::from("head"), head)?;
    for (i, a) in args.iter().enumerate() {
        inspect(format!("argument {}", i + 1), a)?;
    }
    if !failures.is_empty() {
        return Err(Error::NotGameSituation(failures.join("; ")));
    }
    let level = args
        .iter()
        .map(|a| a.typecheck().map(|ty| ty.level()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(0);
    let arg_sh = args.iter().map(|a| sh(a)).max().unwrap_or(0);
    let top = u64::from(sh(head)) * (u64::from(arg_sh) + 1);
    Ok(GameSituation {
        head: head.clone(),
        args: args.into_iter().cloned().collect(),
        bound: Tower::new(level.saturating_sub(1), BigUint::from(top)),
    })
}

/// The η-long evaluator `λf:A -> B. λa:A. f a` of type `(A -> B) -> A -> B`.
pub fn evaluator(redex: &Type) -> Result<Term> {
    let Type::Arrow(a, _) = redex else {
        return Err(Error::Precondition(format!("{redex} is not an arrow type")));
    };
    eta_long(&lam("f", redex.clone(), lam("a", (**a).clone(), app(var("f"), var("a")))))
}

/// The game situation built from a closed term, and the bound it yields.
#[derive(Debug, Clone)]
pub struct GeneralBound {
    /// `2_g^{(h+g+1)(g+1)}` with `g`, `h` the degree and height of the input.
    pub bound: Tower,
    /// The input with every redex delayed.
    pub delayed: Term,
    /// `(λy_1 ... y_p. η(delayed)) ev_1 ... ev_p`, or `η(delayed)` when there is no redex.
    pub wrapped: Term,
}

pub fn general_bound(t: &Term) -> Result<GeneralBound> {
    if !t.is_closed() {
        return Err(Error::Precondition(format!("{t} is not closed")));
    }
    let g = degree(t)?;
    let h = height(t);
    let delayed = delay_redexes(t)?;
    let long = eta_long(&delayed)?;
    let mut kinds: Vec<Type> = Vec::new();
    collect_delays(&long, &mut kinds);
    let mut fresh = Fresh::above(&long);
    let base: Rc<str> = "y".into();
    let names: Vec<Name> = kinds.iter().map(|_| fresh.name(&base)).collect();
    let mut body = abstract_delays(&long, &kinds, &names);
    for (y, ty) in names.iter().zip(&kinds).rev() {
        body = Term::Lam(y.clone(), ty.clone(), Rc::new(body));
    }
    let mut wrapped = body;
    for ty in &kinds {
        let Type::Arrow(redex, _) = ty else {
            unreachable!("delaying constants have arrow types")
        };
        wrapped = app(wrapped, evaluator(redex)?);
    }
    let top = (u64::from(h) + u64::from(g) + 1) * (u64::from(g) + 1);
    Ok(GeneralBound {
        bound: Tower::new(g, BigUint::from(top)),
        delayed,
        wrapped,
    })
}

fn is_delay(c: &Name) -> bool {
    c.id == 0 && &*c.base == "y"
}

fn collect_delays(t: &Term, out: &mut Vec<Type>) {
    match t {
        Term::Const(c, ty) if is_delay(c) => {
            if !out.contains(ty) {
                out.push(ty.clone());
            }
        }
        Term::Var(_) | Term::Const(..) => {}
        Term::Lam(_, _, b) => collect_delays(b, out),
        Term::App(f, a) => {
            collect_delays(f, out);
            collect_delays(a, out);
        }
    }
}

fn abstract_delays(t: &Term, kinds: &[Type], names: &[Name]) -> Term {
    match t {
        Term::Const(c, ty) if is_delay(c) => {
            let i = kinds.iter().position(|k| k == ty).expect("collected");
            Term::Var(names[i].clone())
        }
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) => Term::Lam(x.clone(), ty.clone(), Rc::new(abstract_delays(b, kinds, names))),
        Term::App(f, a) => Term::App(
            Rc::new(abstract_delays(f, kinds, names)),
            Rc::new(abstract_delays(a, kinds, names)),
        ),
    }
}
