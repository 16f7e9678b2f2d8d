use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

/// Default cap, in bits, for materialising a tower as an exact integer.
pub const DEFAULT_TOWER_BITS: u64 = 4096;

/// The iterated exponential `2_h^t`, with `2_0^t = t` and `2_{h+1}^t = 2^(2_h^t)`.
///
/// Towers are compared exactly without being evaluated (see [`Ord`]), so
/// hyper-exponential bounds can be checked against measured values.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Tower {
    height: u32,
    top: BigUint,
}

impl Tower {
    pub fn new(height: u32, top: impl Into<BigUint>) -> Tower {
        Tower {
            height,
            top: top.into(),
        }
    }

    pub fn exact(value: impl Into<BigUint>) -> Tower {
        Tower::new(0, value)
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn top(&self) -> &BigUint {
        &self.top
    }

    /// Unfolds `2_{h}^{t}` into `2_{h-1}^{2^t}` while the new top stays
    /// within `bit_cap` bits. The value is unchanged.
    pub fn normalize(&self, bit_cap: u64) -> Tower {
        let mut t = self.clone();
        while t.height > 0 {
            match pow2(&t.top, bit_cap) {
                Some(v) => {
                    t.top = v;
                    t.height -= 1;
                }
                None => break,
            }
        }
        t
    }

    /// The exact value, when it has at most `bit_cap` bits.
    pub fn to_biguint(&self, bit_cap: u64) -> Option<BigUint> {
        let t = self.normalize(bit_cap);
        (t.height == 0 && t.top.bits() <= bit_cap).then_some(t.top)
    }

    /// The exact value as `u64`, when it fits.
    pub fn to_u64(&self) -> Option<u64> {
        let v = self.to_biguint(64)?;
        u64::try_from(&v).ok()
    }

    /// Human-readable rendering: the exact value when short, else `2_h^t`.
    pub fn render(&self, bit_cap: u64) -> String {
        let t = self.normalize(bit_cap.min(256));
        if t.height == 0 {
            alloc::format!("{}", t.top)
        } else {
            alloc::format!("{self}")
        }
    }
}

/// `2^e`, when the result has at most `bit_cap` bits.
fn pow2(e: &BigUint, bit_cap: u64) -> Option<BigUint> {
    let e = u64::try_from(e).ok()?;
    if e >= bit_cap {
        return None;
    }
    Some(BigUint::one() << e)
}

/// Compares `x` against `2^y`.
fn cmp_exact_pow2(x: &BigUint, y: &Tower) -> Ordering {
    if x.is_zero() {
        return Ordering::Less;
    }
    // x lies in [2^k, 2^(k+1))
    let k = x.bits() - 1;
    match y.cmp(&Tower::exact(k)) {
        Ordering::Greater => Ordering::Less,
        Ordering::Less => Ordering::Greater,
        Ordering::Equal => {
            if x.trailing_zeros() == Some(k) {
                Ordering::Equal
            } else {
                Ordering::Greater
            }
        }
    }
}

impl Ord for Tower {
    fn cmp(&self, other: &Self) -> Ordering {
        // 2^x is strictly increasing, so equal-height layers cancel.
        let common = self.height.min(other.height);
        let (h1, h2) = (self.height - common, other.height - common);
        match (h1, h2) {
            (0, 0) => self.top.cmp(&other.top),
            (0, _) => cmp_exact_pow2(&self.top, &Tower::new(h2 - 1, other.top.clone())),
            (_, 0) => cmp_exact_pow2(&other.top, &Tower::new(h1 - 1, self.top.clone())).reverse(),
            _ => unreachable!("one side has height zero after cancelling"),
        }
    }
}

impl PartialOrd for Tower {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<u64> for Tower {
    fn from(v: u64) -> Tower {
        Tower::exact(v)
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "2_{}^{}", self.height, self.top)
    }
}

impl fmt::Debug for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Exact comparison of `2_h^t` with an integer.
pub fn tower_compare(x: &Tower, y: &Tower) -> Ordering {
    x.cmp(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(h: u32, top: u64) -> Tower {
        Tower::new(h, top)
    }

    /// Direct evaluation by repeated shifting: the oracle for small towers.
    fn eval(h: u32, top: u64) -> Option<BigUint> {
        let mut v = BigUint::from(top);
        for _ in 0..h {
            let e = u64::try_from(&v).ok()?;
            if e > 20_000 {
                return None;
            }
            v = BigUint::one() << e;
        }
        Some(v)
    }

    #[test]
    fn worked_examples() {
        assert_eq!(t(1, 3).cmp(&t(0, 9)), Ordering::Less);
        assert_eq!(t(2, 1).cmp(&t(1, 2)), Ordering::Equal);
        assert_eq!(t(3, 1).cmp(&t(2, 2)), Ordering::Equal);
        assert_eq!(t(1, 16).to_u64(), Some(65536));
        assert_eq!(t(2, 2).to_u64(), Some(16));
        assert_eq!(t(4, 1).to_u64(), Some(65536));
    }

    #[test]
    fn huge_towers_compare_symbolically() {
        // 2_2^25 = 2^(2^25) against its neighbours
        let big = t(2, 25);
        assert!(big.to_biguint(4096).is_none());
        assert!(big > t(0, u64::MAX));
        assert!(big > t(1, 1 << 24));
        assert_eq!(big.cmp(&t(1, 1 << 25)), Ordering::Equal);
        assert!(big < t(1, (1 << 25) + 1));
        assert!(t(5, 2) > t(4, 3));
        assert!(t(7, 1) < t(7, 2));
    }

    #[test]
    fn normalize_keeps_value() {
        assert_eq!(t(3, 2).normalize(64), t(0, 65536));
        assert_eq!(t(3, 2).normalize(8), t(1, 16));
    }

    proptest! {
        #[test]
        fn order_matches_exact_values(h1 in 0u32..4, a in 0u64..20, h2 in 0u32..4, b in 0u64..20) {
            if let (Some(x), Some(y)) = (eval(h1, a), eval(h2, b)) {
                prop_assert_eq!(t(h1, a).cmp(&t(h2, b)), x.cmp(&y));
                prop_assert_eq!(t(h1, a).to_biguint(1 << 16), Some(x));
            }
        }

        #[test]
        fn exact_vs_one_level(x in 0u64..5000, e in 0u64..14) {
            let y = BigUint::one() << e;
            prop_assert_eq!(t(0, x).cmp(&t(1, e)), BigUint::from(x).cmp(&y));
        }
    }
}
