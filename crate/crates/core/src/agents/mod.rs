//! Agents, their rewriting rule, exhaustive longest-reduction search and
//! iterated-exponential bounds.

mod bounds;
mod search;
mod tower;
mod tree;

pub use bounds::{
    atomic_pair_certified_bound, collapse_depth, conjecture_readings, nd_bound, nd_bound_sharp, sandwich, upper_bound,
};
pub use search::{
    atomic_pair, longest_reduction, longest_reduction_with_witness, nd_via_agents, nd_with,
    Explorer, ReductionStats, SearchBudget,
};
pub use tower::{tower_compare, Tower, DEFAULT_TOWER_BITS};
pub use tree::{Agent, AgentMetrics};

/// `graft(a, d, b) = a ·_d b`.
pub fn graft(a: &Agent, d: u32, b: &Agent) -> Agent {
    a.graft(d, b.clone())
}

/// One successor per eligible child; see [`Agent::reduction_steps`].
pub fn reduction_steps(a: &Agent) -> alloc::vec::Vec<Agent> {
    a.reduction_steps()
}

pub fn agent_metrics(a: &Agent) -> AgentMetrics {
    a.metrics()
}

#[cfg(test)]
mod tests;
