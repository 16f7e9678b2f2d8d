use alloc::format;

use num_bigint::BigUint;

use super::{Agent, Tower};
use crate::{Error, Result};

/// `2_{depth(a)-1}^{max(a)·|a|-1}`, the general upper bound on `N(a)`.
/// Requires `depth(a) >= 1` and `max(a) >= 1`.
pub fn upper_bound(a: &Agent) -> Result<Tower> {
    let m = a.metrics();
    if m.depth == 0 || m.max_label == 0 {
        return Err(Error::Hypothesis(format!(
            "bound needs depth(a) >= 1 and max(a) >= 1, got depth {} and max {}",
            m.depth, m.max_label
        )));
    }
    Ok(Tower::new(m.depth - 1, u64::from(m.max_label) * m.size - 1))
}

fn check_depth(d: u32) -> Result<()> {
    if d < 2 {
        return Err(Error::Hypothesis(format!("needs d >= 2, got {d}")));
    }
    Ok(())
}

/// `2_{d-2}^{n(p+1)}`, the bound on `N_d(n, p)` as stated for interactions.
pub fn nd_bound(n: u32, p: u32, d: u32) -> Result<Tower> {
    check_depth(d)?;
    Ok(Tower::new(d - 2, u64::from(n) * (u64::from(p) + 1)))
}

/// `2_{d-2}^{n(p+1)-1}`, the sharper variant obtained by running the
/// substitution and cut-elimination route on `n[{d}p[]]`. Requires `n >= 1`.
pub fn nd_bound_sharp(n: u32, p: u32, d: u32) -> Result<Tower> {
    check_depth(d)?;
    if n == 0 {
        return Err(Error::Hypothesis("needs n >= 1".into()));
    }
    Ok(Tower::new(d - 2, u64::from(n) * (u64::from(p) + 1) - 1))
}

/// What the derivation route certifies for the agent `n[{d}p[]]` itself:
/// `n(p+1)` at `d = 2` (no cut elimination runs) and `2_{d-2}^{n(p+1)-1}` above.
pub fn atomic_pair_certified_bound(n: u32, p: u32, d: u32) -> Result<Tower> {
    check_depth(d)?;
    let np = u64::from(n) * (u64::from(p) + 1);
    if d == 2 {
        Ok(Tower::exact(np))
    } else if np == 0 {
        Ok(Tower::exact(0u32))
    } else {
        Ok(Tower::new(d - 2, np - 1))
    }
}

/// `(2_{d-2}^2, 2_{d-2}^{n(p+1)})`, valid for `3 <= d <= min(n - 1, p)`.
pub fn sandwich(n: u32, p: u32, d: u32) -> Result<(Tower, Tower)> {
    if d < 3 || n == 0 || d > (n - 1).min(p) {
        return Err(Error::Hypothesis(format!(
            "needs 3 <= d <= min(n - 1, p), got n = {n}, p = {p}, d = {d}"
        )));
    }
    Ok((Tower::new(d - 2, 2u32), Tower::new(d - 2, u64::from(n) * (u64::from(p) + 1))))
}

/// `min(2n, 2p + 1)`: no pointer chain in an interaction between `n` and `p`
/// can be deeper, so `N(n, p) = N_{min(2n, 2p+1)}(n, p)`.
pub fn collapse_depth(n: u32, p: u32) -> u32 {
    (2 * n).min(2 * p + 1)
}

/// The two readings of the closed form conjectured for `N_3(n, p)`, `n >= 1`,
/// `p >= 2`: `2(p^n - 1)/(p - 1) + 1` and `2^((p^n - 1)/(p - 1)) + 1`.
pub fn conjecture_readings(n: u32, p: u32) -> Result<(BigUint, BigUint)> {
    if n == 0 || p < 2 {
        return Err(Error::Hypothesis(format!("needs n >= 1 and p >= 2, got n = {n}, p = {p}")));
    }
    let p = BigUint::from(p);
    let k = (num_traits::Pow::pow(&p, n) - 1u32) / (p - 1u32);
    let exponent = u32::try_from(&k)
        .map_err(|_| Error::Hypothesis(format!("exponent {k} is too large to evaluate")))?;
    let product = BigUint::from(2u32) * &k + 1u32;
    let power = (BigUint::from(1u32) << exponent) + 1u32;
    Ok((product, power))
}
