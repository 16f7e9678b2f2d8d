//! Derivations bounding reduction length, their checker, and the
//! transformations that turn a structural derivation into a reduction-shaped
//! one whose annotation bounds `N(a)`.
//!
//! A derivation concludes `(alpha, rho, a)`. `alpha` bounds the number of
//! reduction steps; `rho` bounds the edge labels that may be cut. The free
//! functions below each run on a fresh [`Transformer`] with default
//! [`Limits`]; use a transformer directly to share work or change limits.

mod context;
mod derivation;
mod transform;

use alloc::format;
use alloc::rc::Rc;

use num_bigint::BigUint;

pub use context::{ContextAgent, Slot};
pub use derivation::{check, diagnose, CheckFailure, Derivation, Rule};
pub use transform::{Limits, Transformer};

use crate::agents::{Agent, Tower};
use crate::{Error, Result};

pub fn weaken(dv: &Rc<Derivation>, alpha: &BigUint, rho: u32) -> Result<Rc<Derivation>> {
    Transformer::default().weaken(dv, alpha, rho)
}

pub fn recompose(a: &Agent) -> Result<Rc<Derivation>> {
    Transformer::default().recompose(a)
}

pub fn substitute(
    dva: &Rc<Derivation>,
    ctx: &ContextAgent,
    dvb: &Rc<Derivation>,
) -> Result<Rc<Derivation>> {
    Transformer::default().substitute(dva, ctx, dvb)
}

pub fn null_substitute(dva: &Rc<Derivation>, ctx: &ContextAgent, b: &Agent) -> Result<Rc<Derivation>> {
    Transformer::default().null_substitute(dva, ctx, b)
}

pub fn base_substitute(
    dva: &Rc<Derivation>,
    ctx: &ContextAgent,
    dvb: &Rc<Derivation>,
) -> Result<Rc<Derivation>> {
    Transformer::default().base_substitute(dva, ctx, dvb)
}

pub fn cut_eliminate(dv: &Rc<Derivation>) -> Result<Rc<Derivation>> {
    Transformer::default().cut_eliminate(dv)
}

pub fn base_cut_eliminate(dv: &Rc<Derivation>) -> Result<Rc<Derivation>> {
    Transformer::default().base_cut_eliminate(dv)
}

pub fn extract_bound(dv: &Rc<Derivation>) -> Result<BigUint> {
    Transformer::default().extract_bound(dv)
}

/// A level-0 derivation for an agent together with the closed-form bound it realises.
#[derive(Debug, Clone)]
pub struct Certificate {
    /// `2_{depth(a)-1}^{max(a)·|a|-1}`. At least `derivation.alpha` when
    /// `depth(a) >= 2`; at depth 1 no cut elimination runs and the derivation
    /// only reaches `max(a)·|a|`.
    pub bound: Tower,
    pub derivation: Rc<Derivation>,
    /// Derivation nodes built along the way.
    pub nodes_built: u64,
}

/// Recomposition, `depth(a) - 1` cut eliminations, then base cut elimination.
pub fn certify(a: &Agent) -> Result<Certificate> {
    certify_with(a, Limits::default())
}

pub fn certify_with(a: &Agent, limits: Limits) -> Result<Certificate> {
    let bound = crate::agents::upper_bound(a)?;
    let mut t = Transformer::new(limits);
    let mut dv = t.recompose(a)?;
    while dv.rho > 1 {
        dv = t.cut_eliminate(&dv)?;
    }
    let derivation = t.base_cut_eliminate(&dv)?;
    Ok(Certificate {
        bound,
        derivation,
        nodes_built: t.nodes_built(),
    })
}

/// The sharper route for `n[{d}p[]]`: substitute `p[]` into `n[{d}x]` at
/// level `d - 1`, then `d - 2` cut eliminations and base cut elimination.
/// The resulting `alpha` bounds `N(n[{d}p[]])`, not counting the initial move.
pub fn certify_atomic_pair(n: u32, p: u32, d: u32, limits: Limits) -> Result<Rc<Derivation>> {
    if d < 2 {
        return Err(Error::Hypothesis(format!("needs d >= 2, got {d}")));
    }
    let mut t = Transformer::new(limits);
    let rho = d - 1;
    let head = t.base_prime(n, &BigUint::from(n), rho)?;
    let arg = t.base_prime(p, &BigUint::from(p), rho)?;
    let ctx = ContextAgent::from_agent(&Agent::leaf(n)).graft_hole(d);
    let mut dv = t.substitute(&head, &ctx, &arg)?;
    while dv.rho > 1 {
        dv = t.cut_eliminate(&dv)?;
    }
    t.base_cut_eliminate(&dv)
}

#[cfg(test)]
mod tests;
