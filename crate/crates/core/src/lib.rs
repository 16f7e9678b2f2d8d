//! Length of interactions between bounded strategies, made executable.
//!
//! The crate is organised around *agents*: finite trees whose nodes and
//! edges carry natural numbers, rewritten by a single non-deterministic rule.
//! Around that rule sit
//!
//! * [`agents`]: the tree type, the rule, exhaustive longest-reduction search
//!   and the iterated-exponential [`Tower`] used to state bounds;
//! * [`certificates`]: the `BASE`/`RED`/`CUT` derivation calculus with a
//!   checker and constructive cut elimination, producing certified bounds;
//! * [`pointers`]: visible pointer structures on the pure arenas, views,
//!   residual sizes, trace membership, an exhaustive interaction enumerator
//!   and the step-by-step simulation into agent reductions;
//! * [`lambda`]: a simply typed lambda-calculus front end with a head linear
//!   reduction interpreter, size metrics and the two reduction-length bounds.
//!
//! Everything here is pure and allocation-only; text formats, corpus
//! generation and the command-line driver live in the companion `agentred`
//! crate.

#![no_std]

extern crate alloc;

pub mod agents;
pub mod certificates;
mod error;
pub mod lambda;
pub mod pointers;

pub use agents::{Agent, AgentMetrics, ReductionStats, SearchBudget, Tower};
pub use error::{Error, Result};
