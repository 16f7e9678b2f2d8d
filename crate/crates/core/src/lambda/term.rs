use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

/// Simple types over a single base type `o`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Type {
    Base,
    Arrow(Rc<Type>, Rc<Type>),
}

impl Type {
    pub fn arrow(from: Type, to: Type) -> Type {
        Type::Arrow(Rc::new(from), Rc::new(to))
    }

    /// `o`, `o -> o`, `(o -> o) -> o -> o`, ...: `A_0 = o`, `A_{k+1} = A_k -> A_k`.
    pub fn church(k: u32) -> Type {
        let mut t = Type::Base;
        for _ in 0..k {
            t = Type::arrow(t.clone(), t);
        }
        t
    }

    /// `lv(o) = 0`, `lv(A -> B) = max(lv(A) + 1, lv(B))`.
    pub fn level(&self) -> u32 {
        match self {
            Type::Base => 0,
            Type::Arrow(a, b) => (a.level() + 1).max(b.level()),
        }
    }

    /// Argument types and final base target.
    pub fn arguments(&self) -> Vec<Type> {
        let mut out = Vec::new();
        let mut t = self;
        while let Type::Arrow(a, b) = t {
            out.push((**a).clone());
            t = b;
        }
        out
    }

    pub fn is_base(&self) -> bool {
        matches!(self, Type::Base)
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Base => f.write_str("o"),
            Type::Arrow(a, b) if a.is_base() => write!(f, "o -> {b}"),
            Type::Arrow(a, b) => write!(f, "({a}) -> {b}"),
        }
    }
}

impl fmt::Debug for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A variable name; `id` tells apart the copies made by renaming.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name {
    pub base: Rc<str>,
    pub id: u32,
}

impl Name {
    pub fn new(base: &str) -> Name {
        Name {
            base: base.into(),
            id: 0,
        }
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.id == 0 {
            f.write_str(&self.base)
        } else {
            write!(f, "{}'{}", self.base, self.id)
        }
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Simply typed terms. Bound variables take their type from the binder;
/// constants carry their own and are never substituted.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Const(Name, Type),
    Lam(Name, Type, Rc<Term>),
    App(Rc<Term>, Rc<Term>),
}

pub fn var(x: &str) -> Term {
    Term::Var(Name::new(x))
}

pub fn konst(c: &str, ty: Type) -> Term {
    Term::Const(Name::new(c), ty)
}

pub fn lam(x: &str, ty: Type, body: Term) -> Term {
    Term::Lam(Name::new(x), ty, Rc::new(body))
}

pub fn app(f: Term, a: Term) -> Term {
    Term::App(Rc::new(f), Rc::new(a))
}

/// `f a_1 ... a_k`.
pub fn apply(f: Term, args: impl IntoIterator<Item = Term>) -> Term {
    args.into_iter().fold(f, app)
}

/// `λx:o. x`.
pub fn id_base() -> Term {
    lam("x", Type::Base, var("x"))
}

impl Term {
    /// Head and arguments of an application spine.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }

    /// Number of nodes.
    pub fn size(&self) -> u64 {
        match self {
            Term::Var(_) | Term::Const(..) => 1,
            Term::Lam(_, _, b) => 1 + b.size(),
            Term::App(f, a) => 1 + f.size() + a.size(),
        }
    }

    /// Equality up to renaming of bound variables.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        fn go<'a>(s: &'a Term, t: &'a Term, env: &mut Vec<(&'a Name, &'a Name)>) -> bool {
            match (s, t) {
                (Term::Var(x), Term::Var(y)) => {
                    match env.iter().rev().find(|(a, b)| *a == x || *b == y) {
                        Some((a, b)) => *a == x && *b == y,
                        None => x == y,
                    }
                }
                (Term::Const(c, a), Term::Const(d, b)) => c == d && a == b,
                (Term::Lam(x, a, s), Term::Lam(y, b, t)) => {
                    if a != b {
                        return false;
                    }
                    env.push((x, y));
                    let eq = go(s, t, env);
                    env.pop();
                    eq
                }
                (Term::App(f, a), Term::App(g, b)) => go(f, g, env) && go(a, b, env),
                _ => false,
            }
        }
        go(self, other, &mut Vec::new())
    }

    /// Variables occurring free.
    pub fn free_vars(&self) -> Vec<Name> {
        fn go(t: &Term, bound: &mut Vec<Name>, out: &mut Vec<Name>) {
            match t {
                Term::Var(x) => {
                    if !bound.contains(x) && !out.contains(x) {
                        out.push(x.clone());
                    }
                }
                Term::Const(..) => {}
                Term::Lam(x, _, b) => {
                    bound.push(x.clone());
                    go(b, bound, out);
                    bound.pop();
                }
                Term::App(f, a) => {
                    go(f, bound, out);
                    go(a, bound, out);
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// The type of a closed term.
    pub fn typecheck(&self) -> Result<Type> {
        self.type_in(&[])
    }

    /// The type under the variable typing `ctx`, later entries shadowing earlier ones.
    pub fn type_in(&self, ctx: &[(Name, Type)]) -> Result<Type> {
        let mut env: Vec<(Name, Type)> = ctx.to_vec();
        let mut path = String::new();
        infer(self, &mut env, &mut path)
    }
}

fn infer(t: &Term, env: &mut Vec<(Name, Type)>, path: &mut String) -> Result<Type> {
    let at = |path: &String| if path.is_empty() { String::from("/") } else { path.clone() };
    match t {
        Term::Var(x) => env
            .iter()
            .rev()
            .find(|(y, _)| y == x)
            .map(|(_, ty)| ty.clone())
            .ok_or_else(|| Error::Type(format!("at {}: unbound variable {x}", at(path)))),
        Term::Const(_, ty) => Ok(ty.clone()),
        Term::Lam(x, ty, body) => {
            env.push((x.clone(), ty.clone()));
            let len = path.len();
            path.push_str("/body");
            let out = infer(body, env, path);
            path.truncate(len);
            env.pop();
            Ok(Type::arrow(ty.clone(), out?))
        }
        Term::App(f, a) => {
            let len = path.len();
            path.push_str("/fun");
            let ft = infer(f, env, path)?;
            path.truncate(len);
            path.push_str("/arg");
            let at_ = infer(a, env, path)?;
            path.truncate(len);
            match ft {
                Type::Arrow(dom, cod) if *dom == at_ => Ok((*cod).clone()),
                Type::Arrow(dom, _) => Err(Error::Type(format!(
                    "at {}: argument of type {at_} where {dom} is expected",
                    at(path)
                ))),
                Type::Base => Err(Error::Type(format!(
                    "at {}: {f} has base type and cannot be applied",
                    at(path)
                ))),
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Lam(x, ty, b) => write!(f, "\\{x}:{ty}. {b}"),
            Term::App(..) => {
                let (head, args) = self.spine();
                fmt_atom(head, f)?;
                for a in args {
                    f.write_str(" ")?;
                    fmt_atom(a, f)?;
                }
                Ok(())
            }
            Term::Var(x) => write!(f, "{x}"),
            Term::Const(c, Type::Base) => write!(f, "{c}"),
            Term::Const(c, ty) => write!(f, "({c} : {ty})"),
        }
    }
}

fn fmt_atom(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Lam(..) | Term::App(..) => write!(f, "({t})"),
        _ => write!(f, "{t}"),
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Fresh-name supply: every name it hands out has a new `id`.
#[derive(Debug, Default)]
pub struct Fresh {
    next: u32,
}

impl Fresh {
    /// A supply whose names avoid every `id` used in `t`.
    pub fn above(t: &Term) -> Fresh {
        fn max_id(t: &Term) -> u32 {
            match t {
                Term::Var(x) | Term::Const(x, _) => x.id,
                Term::Lam(x, _, b) => x.id.max(max_id(b)),
                Term::App(f, a) => max_id(f).max(max_id(a)),
            }
        }
        Fresh { next: max_id(t) + 1 }
    }

    pub fn name(&mut self, base: &Rc<str>) -> Name {
        let id = self.next;
        self.next += 1;
        Name {
            base: base.clone(),
            id,
        }
    }

    /// A copy of `t` whose binders are all fresh.
    pub fn rename_binders(&mut self, t: &Term) -> Term {
        let mut scope = BTreeMap::new();
        self.rename(t, &mut scope)
    }

    fn rename(&mut self, t: &Term, scope: &mut BTreeMap<Name, Vec<Name>>) -> Term {
        match t {
            Term::Var(x) => match scope.get(x).and_then(|v| v.last()) {
                Some(y) => Term::Var(y.clone()),
                None => t.clone(),
            },
            Term::Const(..) => t.clone(),
            Term::Lam(x, ty, b) => {
                let y = self.name(&x.base);
                scope.entry(x.clone()).or_default().push(y.clone());
                let body = self.rename(b, scope);
                scope.get_mut(x).expect("pushed above").pop();
                Term::Lam(y, ty.clone(), Rc::new(body))
            }
            Term::App(f, a) => Term::App(Rc::new(self.rename(f, scope)), Rc::new(self.rename(a, scope))),
        }
    }
}
