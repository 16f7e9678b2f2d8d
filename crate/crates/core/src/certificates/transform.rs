use alloc::format;
use alloc::rc::Rc;
use alloc::vec::Vec;

use hashbrown::HashMap;
use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::context::{ContextAgent, Slot};
use super::derivation::{diagnose, Derivation, Rule};
use crate::agents::Agent;
use crate::{Error, Result};

/// Guards against derivations that outgrow memory.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of derivation nodes created by one [`Transformer`].
    pub max_nodes: u64,
    /// Maximum bit length of any `alpha` annotation.
    pub max_alpha_bits: u64,
    /// Maximum sum of the bit lengths of all `alpha` annotations created,
    /// which bounds the memory held by large annotations.
    pub max_total_bits: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_nodes: 10_000_000,
            max_alpha_bits: 1 << 16,
            max_total_bits: 1 << 31,
        }
    }
}

type Dv = Rc<Derivation>;

fn key(d: &Dv) -> usize {
    Rc::as_ptr(d) as usize
}

/// Memo tables map an input node to `(input, output)`; the input is kept
/// alive so its address cannot be reused by a later allocation.
type Memo<K> = HashMap<K, (Dv, Dv)>;

/// Builds derivations through the admissible rules, sharing repeated work
/// within one instance.
pub struct Transformer {
    limits: Limits,
    nodes: u64,
    bits: u64,
    weaken_memo: Memo<(usize, BigUint, u32)>,
    subst_memo: Memo<(usize, ContextAgent, usize)>,
    null_memo: Memo<(usize, ContextAgent, Agent)>,
    base_subst_memo: Memo<(usize, ContextAgent, usize)>,
    cut_elim_memo: Memo<usize>,
    base_cut_memo: Memo<usize>,
    cut_free_memo: Memo<usize>,
}

fn sub1(x: &BigUint) -> BigUint {
    x - BigUint::one()
}

fn precondition<T>(msg: impl Into<alloc::string::String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}

fn lookup<K: core::hash::Hash + Eq>(memo: &Memo<K>, k: &K) -> Option<Dv> {
    memo.get(k).map(|(_, out)| out.clone())
}

impl Default for Transformer {
    fn default() -> Self {
        Transformer::new(Limits::default())
    }
}

impl Transformer {
    pub fn new(limits: Limits) -> Transformer {
        Transformer {
            limits,
            nodes: 0,
            bits: 0,
            weaken_memo: HashMap::new(),
            subst_memo: HashMap::new(),
            null_memo: HashMap::new(),
            base_subst_memo: HashMap::new(),
            cut_elim_memo: HashMap::new(),
            base_cut_memo: HashMap::new(),
            cut_free_memo: HashMap::new(),
        }
    }

    /// Derivation nodes created so far.
    pub fn nodes_built(&self) -> u64 {
        self.nodes
    }

    fn admit(&mut self, alpha: &BigUint) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.limits.max_nodes {
            return Err(Error::DerivationTooLarge(format!(
                "more than {} nodes",
                self.limits.max_nodes
            )));
        }
        self.bits += alpha.bits();
        if self.bits > self.limits.max_total_bits {
            return Err(Error::DerivationTooLarge(format!(
                "annotations exceed {} bits in total",
                self.limits.max_total_bits
            )));
        }
        if alpha.bits() > self.limits.max_alpha_bits {
            return Err(Error::DerivationTooLarge(format!(
                "alpha needs {} bits, limit {}",
                alpha.bits(),
                self.limits.max_alpha_bits
            )));
        }
        Ok(())
    }

    fn base(&mut self, alpha: BigUint, rho: u32, subject: Agent) -> Result<Dv> {
        self.admit(&alpha)?;
        Ok(Derivation::base(alpha, rho, subject))
    }

    fn red(&mut self, alpha: BigUint, rho: u32, subject: Agent, mut successors: Vec<Dv>, decrement: Dv) -> Result<Dv> {
        self.admit(&alpha)?;
        successors.sort_by(|x, y| x.subject.cmp(&y.subject));
        successors.dedup_by(|x, y| x.subject == y.subject);
        Ok(Derivation::red(alpha, rho, subject, successors, decrement))
    }

    fn cut(&mut self, rho: u32, edge: u32, left: Dv, right: Dv) -> Result<Dv> {
        let d = Derivation::cut(rho, edge, left, right);
        self.admit(&d.alpha)?;
        Ok(d)
    }

    /// `⊢(alpha)/rho n[]` for `alpha >= n`: `n` RED steps down to BASE.
    pub fn base_prime(&mut self, label: u32, alpha: &BigUint, rho: u32) -> Result<Dv> {
        let label_big = BigUint::from(label);
        if *alpha < label_big {
            return precondition(format!("alpha {alpha} below node label {label}"));
        }
        let mut d = self.base(alpha - &label_big, rho, Agent::leaf(0))?;
        for k in 1..=label {
            let a = &d.alpha + BigUint::one();
            d = self.red(a, rho, Agent::leaf(k), Vec::new(), d)?;
        }
        Ok(d)
    }

    /// Same subject at a higher `(alpha, rho)`.
    pub fn weaken(&mut self, d: &Dv, alpha: &BigUint, rho: u32) -> Result<Dv> {
        self.weaken_inner(d, alpha, rho)
    }

    fn weaken_inner(&mut self, d: &Dv, alpha: &BigUint, rho: u32) -> Result<Dv> {
        if *alpha < d.alpha || rho < d.rho {
            return precondition(format!(
                "cannot weaken ({}, {}) to ({alpha}, {rho})",
                d.alpha, d.rho
            ));
        }
        if d.alpha == *alpha && d.rho == rho {
            return Ok(d.clone());
        }
        let k = (key(d), alpha.clone(), rho);
        if let Some(out) = lookup(&self.weaken_memo, &k) {
            return Ok(out);
        }
        let out = match &d.rule {
            Rule::Base => self.base(alpha.clone(), rho, d.subject.clone())?,
            Rule::Red {
                successors,
                decrement,
            } => {
                let below = sub1(alpha);
                let succ = successors
                    .iter()
                    .map(|s| self.weaken_inner(s, &below, rho))
                    .collect::<Result<Vec<_>>>()?;
                let dec = self.weaken_inner(decrement, &below, rho)?;
                self.red(alpha.clone(), rho, d.subject.clone(), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let r = self.weaken_inner(right, &right.alpha, rho)?;
                let l = self.weaken_inner(left, &(alpha - &right.alpha), rho)?;
                self.cut(rho, *edge, l, r)?
            }
        };
        self.weaken_memo.insert(k, (d.clone(), out.clone()));
        Ok(out)
    }

    /// Structural derivation of `a` at `(max(a)·|a|, depth(a))`, from BASE′
    /// nodes and CUTs.
    pub fn recompose(&mut self, a: &Agent) -> Result<Dv> {
        let rho = a.depth();
        let tight = self.recompose_tight(a, rho)?;
        let alpha = BigUint::from(a.max_label()) * BigUint::from(a.size());
        self.weaken(&tight, &alpha, rho)
    }

    /// `alpha` = sum of node labels.
    fn recompose_tight(&mut self, a: &Agent, rho: u32) -> Result<Dv> {
        let mut acc = self.base_prime(a.label(), &BigUint::from(a.label()), rho)?;
        for (edge, child) in a.children() {
            let c = self.recompose_tight(child, rho)?;
            acc = self.cut(rho, *edge, acc, c)?;
        }
        Ok(acc)
    }

    fn hole_type(ctx: &ContextAgent, subject: &Agent) -> Result<Option<u32>> {
        if ctx.erase() != *subject {
            return precondition(format!(
                "context {ctx} does not erase to the derived agent {subject}"
            ));
        }
        ctx.hole_type()
    }

    /// From `⊢α/ρ ctx(∅)` and `⊢β/ρ b` with `x` of type `<= ρ+1`,
    /// derives `⊢α(β+1)/ρ ctx(b)`.
    pub fn substitute(&mut self, dva: &Dv, ctx: &ContextAgent, dvb: &Dv) -> Result<Dv> {
        let ty = Self::hole_type(ctx, &dva.subject)?;
        if dva.rho != dvb.rho {
            return precondition(format!("levels differ: {} and {}", dva.rho, dvb.rho));
        }
        if let Some(t) = ty {
            if t > dva.rho + 1 {
                return precondition(format!("x has type {t}, above level {} + 1", dva.rho));
            }
        }
        self.subst(dva, ctx, dvb)
    }

    fn subst(&mut self, d: &Dv, ctx: &ContextAgent, b: &Dv) -> Result<Dv> {
        let k = (key(d), ctx.clone(), key(b));
        if let Some(out) = lookup(&self.subst_memo, &k) {
            return Ok(out);
        }
        let beta1 = &b.alpha + BigUint::one();
        let rho = d.rho;
        let out = match &d.rule {
            Rule::Base => self.base(&d.alpha * &beta1, rho, ctx.fill(&b.subject))?,
            Rule::Red {
                successors,
                decrement,
            } => {
                let below = sub1(&d.alpha) * &beta1 + &b.alpha;
                let dec_ctx = ctx.relabel(ctx.label() - 1);
                let dec = self.subst(decrement, &dec_ctx, b)?;
                let mut succ = Vec::new();
                let mut hole_done = false;
                for (edge, slot) in ctx.children() {
                    if *edge == 0 {
                        continue;
                    }
                    match slot {
                        Slot::Node(c) => {
                            let next = c.graft(edge - 1, Slot::Node(dec_ctx.clone()));
                            let prem = find_successor(successors, &next.erase())?;
                            let s = self.subst(prem, &next, b)?;
                            succ.push(self.weaken_inner(&s, &below, rho)?);
                        }
                        Slot::Hole if !hole_done => {
                            hole_done = true;
                            succ.push(self.cut(rho, edge - 1, b.clone(), dec.clone())?);
                        }
                        Slot::Hole => {}
                    }
                }
                let dec = self.weaken_inner(&dec, &below, rho)?;
                self.red(&d.alpha * &beta1, rho, ctx.fill(&b.subject), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let (lctx, rctx) = split(ctx, *edge, &right.subject)?;
                let l = self.subst(left, &lctx, b)?;
                let r = self.subst(right, &rctx, b)?;
                self.cut(rho, *edge, l, r)?
            }
        };
        self.subst_memo.insert(k, (d.clone(), out.clone()));
        Ok(out)
    }

    /// From `⊢α/ρ ctx(∅)` with `x` of type 0, derives `⊢α/ρ ctx(b)` with the
    /// same number of CUT nodes.
    pub fn null_substitute(&mut self, dva: &Dv, ctx: &ContextAgent, b: &Agent) -> Result<Dv> {
        match Self::hole_type(ctx, &dva.subject)? {
            Some(t) if t != 0 => precondition(format!("x has type {t}, expected 0")),
            _ => self.null_subst(dva, ctx, b),
        }
    }

    fn null_subst(&mut self, d: &Dv, ctx: &ContextAgent, b: &Agent) -> Result<Dv> {
        let k = (key(d), ctx.clone(), b.clone());
        if let Some(out) = lookup(&self.null_memo, &k) {
            return Ok(out);
        }
        let rho = d.rho;
        let out = match &d.rule {
            Rule::Base => self.base(d.alpha.clone(), rho, ctx.fill(b))?,
            Rule::Red {
                successors,
                decrement,
            } => {
                let dec_ctx = ctx.relabel(ctx.label() - 1);
                let dec = self.null_subst(decrement, &dec_ctx, b)?;
                let mut succ = Vec::new();
                for (edge, slot) in ctx.children() {
                    if let (1.., Slot::Node(c)) = (*edge, slot) {
                        let next = c.graft(edge - 1, Slot::Node(dec_ctx.clone()));
                        let prem = find_successor(successors, &next.erase())?;
                        succ.push(self.null_subst(prem, &next, b)?);
                    }
                }
                self.red(d.alpha.clone(), rho, ctx.fill(b), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let (lctx, rctx) = split(ctx, *edge, &right.subject)?;
                let l = self.null_subst(left, &lctx, b)?;
                let r = self.null_subst(right, &rctx, b)?;
                self.cut(rho, *edge, l, r)?
            }
        };
        self.null_memo.insert(k, (d.clone(), out.clone()));
        Ok(out)
    }

    /// From `⊢α/0 ctx(∅)` and `⊢β/0 b` with `x` of type 1, derives
    /// `⊢(α+β)/0 ctx(b)`.
    pub fn base_substitute(&mut self, dva: &Dv, ctx: &ContextAgent, dvb: &Dv) -> Result<Dv> {
        if dva.rho != 0 || dvb.rho != 0 {
            return precondition("base substitution works at level 0");
        }
        match Self::hole_type(ctx, &dva.subject)? {
            Some(t) if t != 1 => precondition(format!("x has type {t}, expected 1")),
            _ => self.base_subst(dva, ctx, dvb),
        }
    }

    fn base_subst(&mut self, d: &Dv, ctx: &ContextAgent, b: &Dv) -> Result<Dv> {
        let k = (key(d), ctx.clone(), key(b));
        if let Some(out) = lookup(&self.base_subst_memo, &k) {
            return Ok(out);
        }
        let total = &d.alpha + &b.alpha;
        let out = match &d.rule {
            Rule::Base => self.base(total, 0, ctx.fill(&b.subject))?,
            Rule::Red {
                successors,
                decrement,
            } => {
                let below = sub1(&total);
                let dec_ctx = ctx.relabel(ctx.label() - 1);
                let dec = self.base_subst(decrement, &dec_ctx, b)?;
                let mut succ = Vec::new();
                let mut hole_done = false;
                for (edge, slot) in ctx.children() {
                    if *edge == 0 {
                        continue;
                    }
                    match slot {
                        Slot::Node(c) => {
                            let next = c.graft(edge - 1, Slot::Node(dec_ctx.clone()));
                            let prem = find_successor(successors, &next.erase())?;
                            succ.push(self.base_subst(prem, &next, b)?);
                        }
                        Slot::Hole if !hole_done => {
                            hole_done = true;
                            // b now heads, with the decremented context parked under edge 0
                            let parked = ContextAgent::from_agent(&b.subject).graft_hole(0);
                            let s = self.null_subst(b, &parked, &dec_ctx.fill(&b.subject))?;
                            succ.push(self.weaken_inner(&s, &below, 0)?);
                        }
                        Slot::Hole => {}
                    }
                }
                self.red(total, 0, ctx.fill(&b.subject), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let (lctx, rctx) = split(ctx, *edge, &right.subject)?;
                let l = self.base_subst(left, &lctx, b)?;
                let parked = ContextAgent::from_agent(&l.subject).graft_hole(*edge);
                let s = self.null_subst(&l, &parked, &rctx.fill(&b.subject))?;
                self.weaken_inner(&s, &total, 0)?
            }
        };
        self.base_subst_memo.insert(k, (d.clone(), out.clone()));
        Ok(out)
    }

    /// From `⊢α/(ρ+1) a`, derives `⊢α′/ρ a` with `α′ = 0` when `α = 0` and
    /// `α′ = 2^(α-1)` otherwise.
    pub fn cut_eliminate(&mut self, d: &Dv) -> Result<Dv> {
        if d.rho == 0 {
            return precondition("cut elimination needs level >= 1");
        }
        self.cut_elim(d)
    }

    fn exp_alpha(&self, alpha: &BigUint) -> Result<BigUint> {
        if alpha.is_zero() {
            return Ok(BigUint::zero());
        }
        let e = sub1(alpha);
        match u64::try_from(&e) {
            Ok(e) if e < self.limits.max_alpha_bits => Ok(BigUint::one() << e),
            _ => Err(Error::DerivationTooLarge(format!(
                "2^(alpha - 1) with a {}-bit alpha exceeds the {}-bit alpha limit",
                alpha.bits(),
                self.limits.max_alpha_bits
            ))),
        }
    }

    fn cut_elim(&mut self, d: &Dv) -> Result<Dv> {
        if let Some(out) = lookup(&self.cut_elim_memo, &key(d)) {
            return Ok(out);
        }
        let rho = d.rho - 1;
        let target = self.exp_alpha(&d.alpha)?;
        let out = match &d.rule {
            Rule::Base => self.base(target, rho, d.subject.clone())?,
            Rule::Red {
                successors,
                decrement,
            } => {
                let below = sub1(&target);
                let mut succ = Vec::with_capacity(successors.len());
                for s in successors {
                    let e = self.cut_elim(s)?;
                    succ.push(self.weaken_inner(&e, &below, rho)?);
                }
                let e = self.cut_elim(decrement)?;
                let dec = self.weaken_inner(&e, &below, rho)?;
                self.red(target, rho, d.subject.clone(), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let l = self.cut_elim(left)?;
                let r = self.cut_elim(right)?;
                let joined = if *edge <= rho {
                    self.cut(rho, *edge, l, r)?
                } else {
                    let ctx = ContextAgent::from_agent(&left.subject).graft_hole(*edge);
                    self.subst(&l, &ctx, &r)?
                };
                self.weaken_inner(&joined, &target, rho)?
            }
        };
        self.cut_elim_memo.insert(key(d), (d.clone(), out.clone()));
        Ok(out)
    }

    /// From `⊢α/1 a`, derives `⊢α/0 a`.
    pub fn base_cut_eliminate(&mut self, d: &Dv) -> Result<Dv> {
        if d.rho != 1 {
            return precondition(format!("base cut elimination needs level 1, got {}", d.rho));
        }
        self.base_cut(d)
    }

    fn base_cut(&mut self, d: &Dv) -> Result<Dv> {
        if let Some(out) = lookup(&self.base_cut_memo, &key(d)) {
            return Ok(out);
        }
        let out = match &d.rule {
            Rule::Base => self.base(d.alpha.clone(), 0, d.subject.clone())?,
            Rule::Red {
                successors,
                decrement,
            } => {
                let succ = successors
                    .iter()
                    .map(|s| self.base_cut(s))
                    .collect::<Result<Vec<_>>>()?;
                let dec = self.base_cut(decrement)?;
                self.red(d.alpha.clone(), 0, d.subject.clone(), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let l = self.base_cut(left)?;
                let r = self.base_cut(right)?;
                if *edge == 0 {
                    self.cut(0, 0, l, r)?
                } else {
                    let ctx = ContextAgent::from_agent(&left.subject).graft_hole(*edge);
                    self.base_subst(&l, &ctx, &r)?
                }
            }
        };
        self.base_cut_memo.insert(key(d), (d.clone(), out.clone()));
        Ok(out)
    }

    /// Removes every CUT from a level-0 derivation without changing its conclusion.
    pub fn eliminate_cuts(&mut self, d: &Dv) -> Result<Dv> {
        if d.rho != 0 {
            return precondition(format!("needs level 0, got {}", d.rho));
        }
        self.cut_free(d)
    }

    fn cut_free(&mut self, d: &Dv) -> Result<Dv> {
        if let Some(out) = lookup(&self.cut_free_memo, &key(d)) {
            return Ok(out);
        }
        let out = match &d.rule {
            Rule::Base => d.clone(),
            Rule::Red {
                successors,
                decrement,
            } => {
                let succ = successors
                    .iter()
                    .map(|s| self.cut_free(s))
                    .collect::<Result<Vec<_>>>()?;
                let dec = self.cut_free(decrement)?;
                self.red(d.alpha.clone(), 0, d.subject.clone(), succ, dec)?
            }
            Rule::Cut { edge, left, right } => {
                let l = self.cut_free(left)?;
                let ctx = ContextAgent::from_agent(&left.subject).graft_hole(*edge);
                let s = self.null_subst(&l, &ctx, &right.subject)?;
                self.weaken_inner(&s, &d.alpha, 0)?
            }
        };
        self.cut_free_memo.insert(key(d), (d.clone(), out.clone()));
        Ok(out)
    }

    /// The certified bound on the longest reduction of a checking level-0
    /// derivation's subject: its `alpha`, after confirming that CUTs can be
    /// removed.
    pub fn extract_bound(&mut self, d: &Dv) -> Result<BigUint> {
        if let Err(f) = diagnose(d) {
            return precondition(format!("derivation does not check {f}"));
        }
        let free = self.eliminate_cuts(d)?;
        Ok(free.alpha.clone())
    }
}

fn find_successor<'a>(successors: &'a [Dv], subject: &Agent) -> Result<&'a Dv> {
    successors
        .iter()
        .find(|s| s.subject == *subject)
        .map_or_else(|| precondition(format!("RED premise for {subject} is missing")), Ok)
}

fn split(ctx: &ContextAgent, edge: u32, right: &Agent) -> Result<(ContextAgent, ContextAgent)> {
    ctx.split(edge, right).map_or_else(
        || precondition(format!("context {ctx} has no child {{{edge}}}{right}")),
        Ok,
    )
}
