use alloc::format;
use alloc::rc::Rc;
use alloc::vec::Vec;

use super::term::{Fresh, Name, Term, Type};
use crate::{Error, Result};

/// `sh(x) = 1`, `sh(λx.S) = sh(S)`, `sh(S T) = max(sh(S), sh(T) + 1)`.
pub fn sh(t: &Term) -> u32 {
    match t {
        Term::Var(_) | Term::Const(..) => 1,
        Term::Lam(_, _, b) => sh(b),
        Term::App(f, a) => sh(f).max(sh(a) + 1),
    }
}

/// `h(x) = 1`, `h(λx.M) = h(M)`, `h(M N) = max(h(M), h(N)) + 1`.
pub fn height(t: &Term) -> u32 {
    match t {
        Term::Var(_) | Term::Const(..) => 1,
        Term::Lam(_, _, b) => height(b),
        Term::App(f, a) => height(f).max(height(a)) + 1,
    }
}

/// Maximal level of the type of a subterm of a closed term.
pub fn degree(t: &Term) -> Result<u32> {
    fn go(t: &Term, env: &mut Vec<(Name, Type)>) -> Result<(Type, u32)> {
        match t {
            Term::Var(_) | Term::Const(..) => {
                let ty = t.type_in(env)?;
                let lv = ty.level();
                Ok((ty, lv))
            }
            Term::Lam(x, ty, b) => {
                env.push((x.clone(), ty.clone()));
                let r = go(b, env);
                env.pop();
                let (bt, g) = r?;
                let out = Type::arrow(ty.clone(), bt);
                let lv = out.level();
                Ok((out, g.max(lv)))
            }
            Term::App(f, a) => {
                let (ft, gf) = go(f, env)?;
                let (at, ga) = go(a, env)?;
                match ft {
                    Type::Arrow(dom, cod) if *dom == at => {
                        let lv = cod.level();
                        Ok(((*cod).clone(), gf.max(ga).max(lv)))
                    }
                    _ => Err(Error::Type(format!("ill-typed application {t}"))),
                }
            }
        }
    }
    Ok(go(t, &mut Vec::new())?.1)
}

/// `(sh, h, g)` of a closed term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Metrics {
    pub sh: u32,
    pub height: u32,
    pub degree: u32,
}

pub fn metrics(t: &Term) -> Result<Metrics> {
    Ok(Metrics {
        sh: sh(t),
        height: height(t),
        degree: degree(t)?,
    })
}

/// No subterm of the form `(λx.S) T`.
pub fn is_beta_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Const(..) => true,
        Term::Lam(_, _, b) => is_beta_normal(b),
        Term::App(f, a) => !matches!(**f, Term::Lam(..)) && is_beta_normal(f) && is_beta_normal(a),
    }
}

/// β-normal and fully η-expanded: `λx⃗. h N⃗` at base type with every `N_i`
/// η-long, all the way down. Requires `t` to type under `ctx`.
pub fn is_eta_long_in(t: &Term, ctx: &[(Name, Type)]) -> Result<bool> {
    let mut env = ctx.to_vec();
    let mut body = t;
    while let Term::Lam(x, ty, b) = body {
        env.push((x.clone(), ty.clone()));
        body = b;
    }
    if !body.type_in(&env)?.is_base() {
        return Ok(false);
    }
    let (head, args) = body.spine();
    if matches!(head, Term::Lam(..)) {
        return Ok(false);
    }
    for a in args {
        if !is_eta_long_in(a, &env)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_eta_long(t: &Term) -> Result<bool> {
    is_eta_long_in(t, &[])
}

/// Full η-expansion: every maximal application of arrow type, and every
/// variable of arrow type standing as an argument, is expanded.
pub fn eta_long(t: &Term) -> Result<Term> {
    t.typecheck()?;
    let mut fresh = Fresh::above(t);
    eta(t, &mut Vec::new(), &mut fresh)
}

fn eta(t: &Term, env: &mut Vec<(Name, Type)>, fresh: &mut Fresh) -> Result<Term> {
    let depth = env.len();
    let mut binders = Vec::new();
    let mut body = t;
    while let Term::Lam(x, ty, b) = body {
        env.push((x.clone(), ty.clone()));
        binders.push((x.clone(), ty.clone()));
        body = b;
    }
    let result = (|| {
        let ty = body.type_in(env)?;
        let (head, args) = body.spine();
        let mut out = match head {
            Term::Lam(..) => eta(head, env, fresh)?,
            _ => head.clone(),
        };
        for a in args {
            out = Term::App(Rc::new(out), Rc::new(eta(a, env, fresh)?));
        }
        let base: Rc<str> = "z".into();
        for a in ty.arguments() {
            let z = fresh.name(&base);
            env.push((z.clone(), a.clone()));
            binders.push((z.clone(), a));
            let arg = eta(&Term::Var(z), env, fresh)?;
            out = Term::App(Rc::new(out), Rc::new(arg));
        }
        Ok(out)
    })();
    env.truncate(depth);
    let mut out = result?;
    for (x, ty) in binders.into_iter().rev() {
        out = Term::Lam(x, ty, Rc::new(out));
    }
    Ok(out)
}

/// The delaying constant `y : (A -> B) -> A -> B` for a redex of type `A -> B`.
pub fn delay_constant(redex: &Type) -> Term {
    Term::Const(Name::new("y"), Type::arrow(redex.clone(), redex.clone()))
}

/// Replaces every redex `(λx.S) T` by `y (λx.S) T`, leaving a β-normal term.
pub fn delay_redexes(t: &Term) -> Result<Term> {
    t.typecheck()?;
    delay(t, &mut Vec::new())
}

fn delay(t: &Term, env: &mut Vec<(Name, Type)>) -> Result<Term> {
    Ok(match t {
        Term::Var(_) | Term::Const(..) => t.clone(),
        Term::Lam(x, ty, b) => {
            env.push((x.clone(), ty.clone()));
            let body = delay(b, env);
            env.pop();
            Term::Lam(x.clone(), ty.clone(), Rc::new(body?))
        }
        Term::App(f, a) => {
            let nf = delay(f, env)?;
            let na = delay(a, env)?;
            if matches!(**f, Term::Lam(..)) {
                let y = delay_constant(&f.type_in(env)?);
                Term::App(Rc::new(Term::App(Rc::new(y), Rc::new(nf))), Rc::new(na))
            } else {
                Term::App(Rc::new(nf), Rc::new(na))
            }
        }
    })
}
