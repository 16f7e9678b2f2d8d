use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::agents::Agent;
use crate::{Error, Result};

/// A child position of a [`ContextAgent`]: either the variable `x` or a subtree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    Hole,
    Node(ContextAgent),
}

/// An agent some of whose non-root nodes are the variable `x`.
///
/// Children are kept sorted, like agent children. The root is never `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ContextAgent {
    label: u32,
    children: Vec<(u32, Slot)>,
}

impl ContextAgent {
    pub fn new(label: u32, mut children: Vec<(u32, Slot)>) -> ContextAgent {
        children.sort();
        ContextAgent { label, children }
    }

    /// The agent itself, with no occurrence of `x`.
    pub fn from_agent(a: &Agent) -> ContextAgent {
        ContextAgent {
            label: a.label(),
            children: a
                .children()
                .iter()
                .map(|(e, c)| (*e, Slot::Node(ContextAgent::from_agent(c))))
                .collect(),
        }
    }

    pub fn label(&self) -> u32 {
        self.label
    }

    pub fn children(&self) -> &[(u32, Slot)] {
        &self.children
    }

    /// Adds a child `slot` to the root on edge `edge`.
    pub fn graft(&self, edge: u32, slot: Slot) -> ContextAgent {
        let mut children = self.children.clone();
        let entry = (edge, slot);
        let at = children.partition_point(|c| *c < entry);
        children.insert(at, entry);
        ContextAgent {
            label: self.label,
            children,
        }
    }

    /// `self ·_edge x`.
    pub fn graft_hole(&self, edge: u32) -> ContextAgent {
        self.graft(edge, Slot::Hole)
    }

    pub fn relabel(&self, label: u32) -> ContextAgent {
        ContextAgent {
            label,
            children: self.children.clone(),
        }
    }

    /// The common label of all edges leading to `x`; `None` when `x` does not
    /// occur. Errors when two such edges disagree.
    pub fn hole_type(&self) -> Result<Option<u32>> {
        let mut found = None;
        self.collect_hole_type(&mut found)?;
        Ok(found)
    }

    fn collect_hole_type(&self, found: &mut Option<u32>) -> Result<()> {
        for (edge, slot) in &self.children {
            match slot {
                Slot::Hole => match *found {
                    Some(d) if d != *edge => {
                        return Err(Error::Precondition(format!(
                            "edges to x carry both {d} and {edge}"
                        )))
                    }
                    _ => *found = Some(*edge),
                },
                Slot::Node(c) => c.collect_hole_type(found)?,
            }
        }
        Ok(())
    }

    /// `a(b)`: every `x` replaced by `b`.
    pub fn fill(&self, b: &Agent) -> Agent {
        Agent::new(
            self.label,
            self.children
                .iter()
                .map(|(e, s)| match s {
                    Slot::Hole => (*e, b.clone()),
                    Slot::Node(c) => (*e, c.fill(b)),
                })
                .collect(),
        )
    }

    /// `a(∅)`: every `x` deleted together with its incoming edge.
    pub fn erase(&self) -> Agent {
        Agent::new(
            self.label,
            self.children
                .iter()
                .filter_map(|(e, s)| match s {
                    Slot::Hole => None,
                    Slot::Node(c) => Some((*e, c.erase())),
                })
                .collect(),
        )
    }

    /// Splits off a root child `{edge}c` with `c(∅) = right`, returning the
    /// remaining context and `c`.
    pub(crate) fn split(&self, edge: u32, right: &Agent) -> Option<(ContextAgent, ContextAgent)> {
        let pos = self.children.iter().position(|(e, s)| {
            *e == edge && matches!(s, Slot::Node(c) if c.erase() == *right)
        })?;
        let mut rest = self.clone();
        let (_, slot) = rest.children.remove(pos);
        match slot {
            Slot::Node(c) => Some((rest, c)),
            Slot::Hole => None,
        }
    }
}

impl fmt::Display for ContextAgent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.label)?;
        for (i, (edge, slot)) in self.children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            match slot {
                Slot::Hole => write!(f, "{{{edge}}}x")?,
                Slot::Node(c) => write!(f, "{{{edge}}}{c}")?,
            }
        }
        f.write_str("]")
    }
}
