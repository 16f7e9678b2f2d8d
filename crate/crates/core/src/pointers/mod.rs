//! Visible pointer structures on the pure arenas of depth `d`: views,
//! residual measures, trace and co-trace membership against agents,
//! exhaustive enumeration of the plays in `n ⋆_d p`, and the map from plays
//! to agent reductions.
//!
//! Moves alternate starting with an Opponent move at index 0, the only move
//! without a justifier. Residual measures range over moves `j >= i`.

mod enumerate;
mod play;
mod trace;

pub use enumerate::{enumerate_interactions, for_each_interaction, InteractionStats, PlayBudget};
pub use play::{Move, Polarity, PointerStructure};
