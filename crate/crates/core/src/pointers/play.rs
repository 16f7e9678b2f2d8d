use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    O,
    P,
}

impl Polarity {
    /// Polarity of the move at `index`: moves alternate starting with O.
    pub fn at(index: usize) -> Polarity {
        if index.is_multiple_of(2) {
            Polarity::O
        } else {
            Polarity::P
        }
    }

    pub fn opposite(self) -> Polarity {
        match self {
            Polarity::O => Polarity::P,
            Polarity::P => Polarity::O,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Move {
    pub polarity: Polarity,
    /// Index of the justifying move; `None` only for the initial move.
    pub justifier: Option<usize>,
}

/// A visible pointer structure: an alternating justified sequence on the
/// pure arenas in which every move points inside the view of its player.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct PointerStructure {
    moves: Vec<Move>,
    // Predecessor links along the two views, and the view lengths.
    pview_prev: Vec<Option<usize>>,
    oview_prev: Vec<Option<usize>>,
    pview_len: Vec<usize>,
    oview_len: Vec<usize>,
    depth_of: Vec<u32>,
}

impl PointerStructure {
    /// Validates alternation, justification and visibility.
    pub fn new(moves: Vec<Move>) -> Result<PointerStructure> {
        let mut s = PointerStructure {
            moves: Vec::with_capacity(moves.len()),
            pview_prev: Vec::new(),
            oview_prev: Vec::new(),
            pview_len: Vec::new(),
            oview_len: Vec::new(),
            depth_of: Vec::new(),
        };
        for m in moves {
            s.push(m)?;
        }
        Ok(s)
    }

    /// Builds a play from justifier indices alone, polarities alternating from O.
    pub fn from_justifiers(justifiers: &[Option<usize>]) -> Result<PointerStructure> {
        PointerStructure::new(
            justifiers
                .iter()
                .enumerate()
                .map(|(k, j)| Move {
                    polarity: Polarity::at(k),
                    justifier: *j,
                })
                .collect(),
        )
    }

    /// Appends a move after checking it keeps the structure visible.
    pub fn push(&mut self, m: Move) -> Result<()> {
        let k = self.moves.len();
        if m.polarity != Polarity::at(k) {
            return Err(Error::InvalidPlay(format!(
                "move {k} has polarity {:?}; plays alternate starting with O",
                m.polarity
            )));
        }
        match (k, m.justifier) {
            (0, None) => {
                self.moves.push(m);
                self.pview_prev.push(None);
                self.oview_prev.push(None);
                self.pview_len.push(1);
                self.oview_len.push(1);
                self.depth_of.push(0);
                return Ok(());
            }
            (0, Some(_)) => return Err(Error::InvalidPlay("the initial move has no justifier".into())),
            (_, None) => {
                return Err(Error::InvalidPlay(format!("move {k} lacks a justifier")));
            }
            (_, Some(j)) if j >= k => {
                return Err(Error::InvalidPlay(format!("move {k} points forward to {j}")));
            }
            _ => {}
        }
        let j = m.justifier.expect("checked above");
        if self.moves[j].polarity == m.polarity {
            return Err(Error::InvalidPlay(format!(
                "move {k} points to {j}, a move of its own polarity"
            )));
        }
        let visible = match m.polarity {
            Polarity::P => self.pview(k - 1).contains(&j),
            Polarity::O => self.oview(k - 1).contains(&j),
        };
        if !visible {
            return Err(Error::InvalidPlay(format!(
                "move {k} points to {j}, outside its player's view"
            )));
        }
        let (pp, op) = match m.polarity {
            Polarity::P => (k - 1, j),
            Polarity::O => (j, k - 1),
        };
        self.moves.push(m);
        self.pview_prev.push(Some(pp));
        self.oview_prev.push(Some(op));
        self.pview_len.push(self.pview_len[pp] + 1);
        self.oview_len.push(self.oview_len[op] + 1);
        self.depth_of.push(self.depth_of[j] + 1);
        Ok(())
    }

    /// Removes the last move.
    pub fn pop(&mut self) -> Option<Move> {
        let m = self.moves.pop()?;
        self.pview_prev.pop();
        self.oview_prev.pop();
        self.pview_len.pop();
        self.oview_len.pop();
        self.depth_of.pop();
        Some(m)
    }

    pub fn len(&self) -> usize {
        self.moves.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moves.is_empty()
    }

    pub fn moves(&self) -> &[Move] {
        &self.moves
    }

    pub fn polarity(&self, i: usize) -> Polarity {
        self.moves[i].polarity
    }

    pub fn justifier(&self, i: usize) -> Option<usize> {
        self.moves[i].justifier
    }

    /// The prefix of length `len`.
    pub fn prefix(&self, len: usize) -> PointerStructure {
        PointerStructure {
            moves: self.moves[..len].to_vec(),
            pview_prev: self.pview_prev[..len].to_vec(),
            oview_prev: self.oview_prev[..len].to_vec(),
            pview_len: self.pview_len[..len].to_vec(),
            oview_len: self.oview_len[..len].to_vec(),
            depth_of: self.depth_of[..len].to_vec(),
        }
    }

    fn walk(prev: &[Option<usize>], upto: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = Some(upto);
        while let Some(k) = cur {
            out.push(k);
            cur = prev[k];
        }
        out.reverse();
        out
    }

    /// The P-view of the prefix ending at `upto`, as increasing indices.
    pub fn pview(&self, upto: usize) -> Vec<usize> {
        Self::walk(&self.pview_prev, upto)
    }

    /// The (long) O-view of the prefix ending at `upto`, as increasing indices.
    pub fn oview(&self, upto: usize) -> Vec<usize> {
        Self::walk(&self.oview_prev, upto)
    }

    pub fn pview_len(&self, upto: usize) -> usize {
        self.pview_len[upto]
    }

    pub fn oview_len(&self, upto: usize) -> usize {
        self.oview_len[upto]
    }

    /// Whether computing the view at `j` passes through `i`.
    fn reaches(prev: &[Option<usize>], j: usize, i: usize) -> bool {
        let mut cur = Some(j);
        while let Some(k) = cur {
            if k == i {
                return true;
            }
            if k < i {
                return false;
            }
            cur = prev[k];
        }
        false
    }

    /// Pointers from move `i` back to the initial move.
    pub fn move_depth(&self, i: usize) -> u32 {
        self.depth_of[i]
    }

    /// Longest pointer chain: the least `d` such that this is a play on the
    /// arena of depth `d`.
    pub fn depth(&self) -> u32 {
        self.depth_of.iter().copied().max().unwrap_or(0)
    }

    /// Longest pointer chain of later moves ending at `i`, counted in pointers.
    pub fn residual_depth(&self, i: usize) -> u32 {
        let mut below = alloc::vec![0u32; self.len()];
        for k in (i + 1..self.len()).rev() {
            let j = self.moves[k].justifier.expect("only move 0 is initial");
            if j >= i {
                below[j] = below[j].max(below[k] + 1);
            }
        }
        below[i]
    }

    /// `max |view(j)| - |view(i)| + 1` over moves `j >= i` of polarity `who`
    /// whose view, of the kind `pview` selects, reaches `i`; 0 when none does.
    fn residual(&self, i: usize, who: Polarity, pview: bool) -> usize {
        let (prev, len) = if pview {
            (&self.pview_prev, &self.pview_len)
        } else {
            (&self.oview_prev, &self.oview_len)
        };
        (i..self.len())
            .filter(|&j| Polarity::at(j) == who && Self::reaches(prev, j, i))
            .map(|j| len[j] - len[i] + 1)
            .max()
            .unwrap_or(0)
    }

    /// How much of its own view the player answering `s_i` has used from
    /// `i` on: measured on P-views at P-moves after an O-move, and on
    /// O-views at O-moves after a P-move.
    pub fn rsize(&self, i: usize) -> usize {
        match self.polarity(i) {
            Polarity::O => self.residual(i, Polarity::P, true),
            Polarity::P => self.residual(i, Polarity::O, false),
        }
    }

    /// The dual measure, on the view of the player who made `s_i`, over
    /// that player's moves from `i` on.
    pub fn rcosize(&self, i: usize) -> usize {
        match self.polarity(i) {
            Polarity::O => self.residual(i, Polarity::O, false),
            Polarity::P => self.residual(i, Polarity::P, true),
        }
    }

    /// Moves other than `s_i` that `s_{i+1}` may point to.
    pub fn context(&self, i: usize) -> Vec<usize> {
        let (view, who) = match self.polarity(i) {
            Polarity::O => (self.pview(i), Polarity::O),
            Polarity::P => (self.oview(i), Polarity::P),
        };
        view.into_iter()
            .filter(|&k| k != i && Polarity::at(k) == who)
            .collect()
    }

    /// Moves the other player may point to later on.
    pub fn cocontext(&self, i: usize) -> Vec<usize> {
        let (view, who) = match self.polarity(i) {
            Polarity::O => (self.oview(i), Polarity::P),
            Polarity::P => (self.pview(i), Polarity::O),
        };
        view.into_iter().filter(|&k| Polarity::at(k) == who).collect()
    }

    /// Every P-ending prefix has a P-view of length at most `2n`.
    pub fn in_atomic_trace(&self, n: u32) -> bool {
        (0..self.len())
            .filter(|&k| Polarity::at(k) == Polarity::P)
            .all(|k| self.pview_len[k] as u64 <= 2 * u64::from(n))
    }

    /// Every O-ending prefix has an O-view of length at most `2p + 1`.
    pub fn in_atomic_cotrace(&self, p: u32) -> bool {
        (0..self.len())
            .filter(|&k| Polarity::at(k) == Polarity::O)
            .all(|k| self.oview_len[k] as u64 <= 2 * u64::from(p) + 1)
    }
}

impl fmt::Display for PointerStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, m) in self.moves.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let tag = match m.polarity {
                Polarity::O => 'O',
                Polarity::P => 'P',
            };
            match m.justifier {
                Some(j) => write!(f, "{tag}@{j}")?,
                None => write!(f, "{tag}@-")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn play(js: &[Option<usize>]) -> PointerStructure {
        PointerStructure::from_justifiers(js).unwrap()
    }

    #[test]
    fn views_of_small_plays() {
        let s = play(&[None]);
        assert_eq!(s.pview(0), vec![0]);
        assert_eq!(s.oview(0), vec![0]);

        // O@- P@0 O@1 P@0 O@3
        let s = play(&[None, Some(0), Some(1), Some(0), Some(3)]);
        assert_eq!(s.pview(2), vec![0, 1, 2]);
        assert_eq!(s.pview(3), vec![0, 1, 2, 3]);
        assert_eq!(s.pview(4), vec![0, 1, 2, 3, 4]);
        assert_eq!(s.oview(3), vec![0, 3]);
        assert_eq!(s.oview(4), vec![0, 3, 4]);
        assert_eq!(s.to_string(), "O@- P@0 O@1 P@0 O@3");
    }

    #[test]
    fn ladder_views_cover_the_prefix() {
        // every move points to its predecessor
        let js: Vec<Option<usize>> = (0usize..7).map(|k| k.checked_sub(1)).collect();
        let s = play(&js);
        for k in 0..7 {
            let all: Vec<usize> = (0..=k).collect();
            assert_eq!(s.pview(k), all);
            assert_eq!(s.oview(k), all);
        }
        assert_eq!(s.depth(), 6);
        assert_eq!(s.residual_depth(0), 6);
        assert_eq!(s.residual_depth(6), 0);
    }

    #[test]
    fn invalid_plays() {
        assert!(PointerStructure::from_justifiers(&[Some(0)]).is_err());
        assert!(PointerStructure::from_justifiers(&[None, None]).is_err());
        // P-move pointing at a P-move
        assert!(PointerStructure::from_justifiers(&[None, Some(0), Some(1), Some(1)]).is_err());
        // O-move 4 pointing to P-move 1, hidden from the O-view [0, 3]
        assert!(PointerStructure::from_justifiers(&[None, Some(0), Some(1), Some(0), Some(1)]).is_err());
        let wrong = vec![Move {
            polarity: Polarity::P,
            justifier: None,
        }];
        assert!(PointerStructure::new(wrong).is_err());
    }

    #[test]
    fn residual_sizes_by_hand() {
        // O@- P@0 O@1 P@2
        let s = play(&[None, Some(0), Some(1), Some(2)]);
        // P-moves whose P-view reaches 0: 1 (length 2) and 3 (length 4)
        assert_eq!(s.rsize(0), 4);
        // O-moves after 1 whose O-view reaches it: 2 (O-view [0,1,2])
        assert_eq!(s.rsize(1), 2);
        assert_eq!(s.rsize(2), 2);
        assert_eq!(s.rsize(3), 0);
        // O-moves from 0 on with O-view through 0: 0 and 2
        assert_eq!(s.rcosize(0), 3);
        // P-moves from 1 on with P-view through 1: 1 and 3
        assert_eq!(s.rcosize(1), 3);
        assert_eq!(s.rcosize(3), 1);
    }

    #[test]
    fn last_o_move_has_nothing_left_to_answer() {
        let s = play(&[None, Some(0), Some(1)]);
        assert_eq!(s.rsize(2), 0);
        assert_eq!(s.rcosize(2), 1);
    }

    #[test]
    fn contexts() {
        let s = play(&[None]);
        assert!(s.context(0).is_empty());
        assert!(s.cocontext(0).is_empty());
        // O@- P@0 O@1
        let s = play(&[None, Some(0), Some(1)]);
        assert_eq!(s.context(2), vec![0]);
        assert_eq!(s.cocontext(2), vec![1]);
        assert_eq!(s.context(1), Vec::<usize>::new());
        assert_eq!(s.cocontext(1), vec![0]);
    }

    #[test]
    fn atomic_membership() {
        let s = play(&[None, Some(0), Some(1)]);
        assert!(s.in_atomic_trace(1));
        assert!(!s.in_atomic_trace(0));
        assert!(s.in_atomic_cotrace(1));
        assert!(!s.in_atomic_cotrace(0));
    }
}
