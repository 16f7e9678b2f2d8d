use alloc::vec::Vec;

use super::play::{Move, Polarity, PointerStructure};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PlayBudget {
    /// Maximum number of plays visited, prefixes included.
    pub max_plays: u64,
    /// Maximum play length.
    pub max_len: usize,
}

impl Default for PlayBudget {
    fn default() -> Self {
        PlayBudget {
            max_plays: 10_000_000,
            max_len: 1 << 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteractionStats {
    /// Length of the longest play in `n ⋆_d p`.
    pub max_length: usize,
    /// Number of non-empty plays in `n ⋆_d p`, prefixes included.
    pub count: u64,
    /// A play of length `max_length`.
    pub longest: PointerStructure,
}

/// Justifiers that keep `s·m` visible, of depth at most `d`, and inside
/// `Tr(n) ∩ coTr(p)`.
fn candidates(s: &PointerStructure, n: u32, p: u32, d: u32) -> Vec<usize> {
    let k = s.len();
    let (view, len, limit) = match Polarity::at(k) {
        Polarity::P => (s.pview(k - 1), s.pview_len(k - 1), 2 * u64::from(n)),
        Polarity::O => (s.oview(k - 1), s.oview_len(k - 1), 2 * u64::from(p) + 1),
    };
    if len as u64 + 1 > limit {
        return Vec::new();
    }
    let opp = Polarity::at(k).opposite();
    view.into_iter()
        .filter(|&j| s.polarity(j) == opp && s.move_depth(j) < d)
        .collect()
}

/// Visits every play of `n ⋆_d p` in depth-first order, calling `visit` on
/// each non-empty play.
pub fn for_each_interaction<F>(n: u32, p: u32, d: u32, budget: PlayBudget, mut visit: F) -> Result<u64>
where
    F: FnMut(&PointerStructure),
{
    let mut s = PointerStructure::default();
    s.push(Move {
        polarity: Polarity::O,
        justifier: None,
    })?;
    let mut count = 1u64;
    visit(&s);
    let mut stack: Vec<Vec<usize>> = alloc::vec![candidates(&s, n, p, d)];
    while let Some(top) = stack.last_mut() {
        let Some(j) = top.pop() else {
            stack.pop();
            s.pop();
            continue;
        };
        if s.len() >= budget.max_len {
            return Err(Error::PlayTooLong {
                limit: budget.max_len,
            });
        }
        if count >= budget.max_plays {
            return Err(Error::BudgetExceeded {
                explored: count,
                limit: budget.max_plays,
            });
        }
        s.push(Move {
            polarity: Polarity::at(s.len()),
            justifier: Some(j),
        })?;
        count += 1;
        visit(&s);
        stack.push(candidates(&s, n, p, d));
    }
    Ok(count)
}

/// Exhaustive enumeration of `n ⋆_d p`; its longest play has length `N_d(n, p)`.
pub fn enumerate_interactions(n: u32, p: u32, d: u32, budget: PlayBudget) -> Result<InteractionStats> {
    let mut longest = PointerStructure::default();
    let count = for_each_interaction(n, p, d, budget, |s| {
        if s.len() > longest.len() {
            longest = s.clone();
        }
    })?;
    Ok(InteractionStats {
        max_length: longest.len(),
        count,
        longest,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_len(n: u32, p: u32, d: u32) -> usize {
        enumerate_interactions(n, p, d, PlayBudget::default())
            .unwrap()
            .max_length
    }

    #[test]
    fn silent_head() {
        for (p, d) in [(0, 2), (3, 3), (2, 5)] {
            assert_eq!(max_len(0, p, d), 1);
        }
    }

    #[test]
    fn small_values() {
        assert_eq!(max_len(1, 1, 3), 3);
        assert_eq!(max_len(1, 1, 2), 3);
        assert_eq!(max_len(1, 0, 2), 2);
    }

    #[test]
    fn counts_include_prefixes() {
        // O@-, O@- P@0 and O@- P@0 O@1
        let st = enumerate_interactions(1, 1, 3, PlayBudget::default()).unwrap();
        assert_eq!(st.count, 3);
        assert_eq!(st.longest.len(), 3);
    }

    #[test]
    fn budget_is_enforced() {
        let tight = PlayBudget {
            max_plays: 2,
            max_len: 100,
        };
        assert!(matches!(
            enumerate_interactions(2, 2, 3, tight),
            Err(Error::BudgetExceeded { .. })
        ));
        let short = PlayBudget {
            max_plays: 100,
            max_len: 2,
        };
        assert!(matches!(
            enumerate_interactions(1, 1, 3, short),
            Err(Error::PlayTooLong { limit: 2 })
        ));
    }
}
