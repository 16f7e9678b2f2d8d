//! Simply typed λ-terms over a base type `o`: typing, the size measures
//! `sh`, `h` and `g`, η-expansion, redex delaying, head linear reduction with
//! step counting, the Church numeral family `2_n ... 2_0 id`, and the two
//! closed-form bounds on head linear reduction length.
//!
//! Head linear reduction replaces only the head occurrence, through its prime
//! redex, and leaves the redex in place. A step is one such replacement.
//! Constants never get substituted and stop reduction at head position.

mod bounds;
mod hlr;
mod metrics;
mod term;

pub use bounds::{
    church, eta_long_spine, evaluator, game_situation, general_bound, lower_bound_family, GameSituation,
    GeneralBound,
};
pub use hlr::{hlr_run, hlr_run_with, hlr_step, hlr_steps, HlrBudget, HlrCount, HlrHead, HlrRun, HlrStep};
pub use metrics::{
    degree, delay_constant, delay_redexes, eta_long, height, is_beta_normal, is_eta_long, is_eta_long_in, metrics,
    sh, Metrics,
};
pub use term::{app, apply, id_base, konst, lam, var, Fresh, Name, Term, Type};

#[cfg(test)]
mod tests;
