//! Seeded random corpora: agents, closed well-typed terms, and game situations.

use std::rc::Rc;

use agentred_core::agents::Agent;
use agentred_core::lambda::{Name, Term, Type};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape limits for random agents.
#[derive(Debug, Clone, Copy)]
pub struct AgentShape {
    pub max_size: u32,
    pub max_label: u32,
    pub max_edge: u32,
}

/// A random agent within `shape`, built by attaching each new node below a
/// uniformly chosen earlier one.
pub fn random_agent(rng: &mut impl Rng, shape: AgentShape) -> Agent {
    let size = rng.gen_range(1..=shape.max_size) as usize;
    let mut parent = vec![None; size];
    let mut edge = vec![0; size];
    let label: Vec<u32> = (0..size).map(|_| rng.gen_range(0..=shape.max_label)).collect();
    for k in 1..size {
        parent[k] = Some(rng.gen_range(0..k));
        edge[k] = rng.gen_range(0..=shape.max_edge);
    }
    fn build(k: usize, parent: &[Option<usize>], edge: &[u32], label: &[u32]) -> Agent {
        let children = (k + 1..parent.len())
            .filter(|&c| parent[c] == Some(k))
            .map(|c| (edge[c], build(c, parent, edge, label)))
            .collect();
        Agent::new(label[k], children)
    }
    build(0, &parent, &edge, &label)
}

/// A random type of level at most `level`.
pub fn random_type(rng: &mut impl Rng, level: u32) -> Type {
    if level == 0 || rng.gen_bool(0.4) {
        return Type::Base;
    }
    let arity = rng.gen_range(1..=2);
    let mut t = Type::Base;
    for _ in 0..arity {
        t = Type::arrow(random_type(rng, level - 1), t);
    }
    t
}

struct Gen<'r, R: Rng> {
    rng: &'r mut R,
    next: u32,
    ctx: Vec<(Name, Type)>,
}

impl<R: Rng> Gen<'_, R> {
    fn fresh(&mut self) -> Name {
        self.next += 1;
        Name::new(&format!("v{}", self.next))
    }

    fn base(&mut self) -> Term {
        let vars: Vec<&Name> = self.ctx.iter().filter(|(_, t)| t.is_base()).map(|(x, _)| x).collect();
        match vars.choose(self.rng) {
            Some(x) if self.rng.gen_bool(0.7) => Term::Var((*x).clone()),
            _ => Term::Const(Name::new("c"), Type::Base),
        }
    }

    fn with<T>(&mut self, x: Name, ty: Type, f: impl FnOnce(&mut Self) -> T) -> T {
        self.ctx.push((x, ty));
        let out = f(self);
        self.ctx.pop();
        out
    }

    /// Variables that reach `ty` after some arguments: `(name, argument types)`.
    fn heads(&self, ty: &Type) -> Vec<(Name, Vec<Type>)> {
        let mut out = Vec::new();
        for (x, t) in &self.ctx {
            let mut args = Vec::new();
            let mut cur = t;
            loop {
                if cur == ty {
                    out.push((x.clone(), args.clone()));
                }
                match cur {
                    Type::Arrow(a, b) => {
                        args.push((**a).clone());
                        cur = b;
                    }
                    Type::Base => break,
                }
            }
        }
        out
    }

    /// Any well-typed term of type `ty`, possibly with redexes.
    fn term(&mut self, ty: &Type, fuel: u32) -> Term {
        if let Type::Arrow(a, b) = ty {
            if fuel == 0 || self.rng.gen_bool(0.5) {
                let x = self.fresh();
                let body = self.with(x.clone(), (**a).clone(), |g| g.term(b, fuel.saturating_sub(1)));
                return Term::Lam(x, (**a).clone(), Rc::new(body));
            }
        }
        if fuel == 0 {
            return self.base_or_head(ty, 0);
        }
        if self.rng.gen_bool(0.3) {
            let a = random_type(self.rng, 1);
            let x = self.fresh();
            let body = self.with(x.clone(), a.clone(), |g| g.term(ty, fuel - 1));
            let arg = self.term(&a, fuel / 2);
            return Term::App(Rc::new(Term::Lam(x, a, Rc::new(body))), Rc::new(arg));
        }
        self.base_or_head(ty, fuel)
    }

    fn base_or_head(&mut self, ty: &Type, fuel: u32) -> Term {
        let mut heads = self.heads(ty);
        if fuel == 0 {
            heads.retain(|(_, args)| args.is_empty());
        }
        if let Some((x, args)) = heads.choose(self.rng).cloned() {
            let share = fuel / (args.len() as u32 + 1);
            return args
                .iter()
                .fold(Term::Var(x), |f, a| Term::App(Rc::new(f), Rc::new(self.term(a, share))));
        }
        match ty {
            Type::Base => self.base(),
            Type::Arrow(a, b) => {
                let x = self.fresh();
                let body = self.with(x.clone(), (**a).clone(), |g| g.base_or_head(b, fuel));
                Term::Lam(x, (**a).clone(), Rc::new(body))
            }
        }
    }

    /// An η-long β-normal term of type `ty`.
    fn normal(&mut self, ty: &Type, fuel: u32) -> Term {
        let args = ty.arguments();
        let xs: Vec<Name> = args.iter().map(|_| self.fresh()).collect();
        for (x, a) in xs.iter().zip(&args) {
            self.ctx.push((x.clone(), a.clone()));
        }
        let heads: Vec<(Name, Type)> = self.ctx.clone();
        let body = match heads.choose(self.rng) {
            Some((h, t)) if fuel > 0 || t.is_base() => {
                let t = t.clone();
                let share = fuel.saturating_sub(1) / (t.arguments().len() as u32).max(1);
                t.arguments()
                    .iter()
                    .fold(Term::Var(h.clone()), |f, a| Term::App(Rc::new(f), Rc::new(self.normal(a, share))))
            }
            _ => Term::Const(Name::new("c"), Type::Base),
        };
        self.ctx.truncate(self.ctx.len() - args.len());
        let mut out = body;
        for (x, a) in xs.into_iter().zip(args).rev() {
            out = Term::Lam(x, a, Rc::new(out));
        }
        out
    }
}

/// A closed well-typed term of a random type of level at most `level`.
pub fn random_term(rng: &mut impl Rng, level: u32, fuel: u32) -> Term {
    let ty = random_type(rng, level);
    let mut g = Gen {
        rng,
        next: 0,
        ctx: Vec::new(),
    };
    g.term(&ty, fuel)
}

/// A closed η-long β-normal term of type `ty`.
pub fn random_normal(rng: &mut impl Rng, ty: &Type, fuel: u32) -> Term {
    let mut g = Gen {
        rng,
        next: 0,
        ctx: Vec::new(),
    };
    g.normal(ty, fuel)
}

/// `S T_1 ... T_p` with every component closed, η-long and β-normal, and the
/// argument types of level at most `level`.
pub fn random_game_situation(rng: &mut impl Rng, level: u32, fuel: u32) -> Term {
    let p = rng.gen_range(1..=3);
    let args: Vec<Type> = (0..p).map(|_| random_type(rng, level)).collect();
    let head_ty = args.iter().rev().fold(Type::Base, |t, a| Type::arrow(a.clone(), t));
    let head = random_normal(rng, &head_ty, fuel);
    args.iter().fold(head, |f, a| {
        let t = random_normal(rng, a, fuel / 2);
        Term::App(Rc::new(f), Rc::new(t))
    })
}
