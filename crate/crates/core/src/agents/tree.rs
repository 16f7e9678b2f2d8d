use alloc::rc::Rc;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::hash::{Hash, Hasher};

/// A finite tree with natural-number labels on nodes and edges.
///
/// Children are kept sorted by `(edge label, child)`, so two agents that
/// differ only by the order of siblings are the same value. Subtrees are
/// reference counted; cloning is cheap.
#[derive(Clone)]
pub struct Agent(Rc<Node>);

struct Node {
    label: u32,
    children: Vec<(u32, Agent)>,
    size: u64,
    max_label: u32,
    depth: u32,
}

/// `(|a|, max(a), depth(a))`: node count, highest node label, highest edge label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AgentMetrics {
    pub size: u64,
    pub max_label: u32,
    pub depth: u32,
}

impl Agent {
    pub fn leaf(label: u32) -> Agent {
        Agent::new(label, Vec::new())
    }

    /// Builds `label[{d_1}c_1, ..., {d_p}c_p]`, sorting the children into canonical order.
    pub fn new(label: u32, mut children: Vec<(u32, Agent)>) -> Agent {
        children.sort();
        Agent::from_sorted(label, children)
    }

    fn from_sorted(label: u32, children: Vec<(u32, Agent)>) -> Agent {
        let mut size = 1;
        let mut max_label = label;
        let mut depth = 0;
        for (edge, child) in &children {
            size += child.0.size;
            max_label = max_label.max(child.0.max_label);
            depth = depth.max(*edge).max(child.0.depth);
        }
        Agent(Rc::new(Node {
            label,
            children,
            size,
            max_label,
            depth,
        }))
    }

    pub fn label(&self) -> u32 {
        self.0.label
    }

    pub fn children(&self) -> &[(u32, Agent)] {
        &self.0.children
    }

    pub fn is_leaf(&self) -> bool {
        self.0.children.is_empty()
    }

    /// `a ·_d b`: appends `b` as a new child of the root with edge label `edge`.
    pub fn graft(&self, edge: u32, b: Agent) -> Agent {
        let mut children = self.0.children.clone();
        let entry = (edge, b);
        let at = children.partition_point(|c| *c < entry);
        children.insert(at, entry);
        Agent::from_sorted(self.0.label, children)
    }

    /// Same children, root label replaced.
    pub fn relabel(&self, label: u32) -> Agent {
        Agent::from_sorted(label, self.0.children.clone())
    }

    /// `(n-1)[...]` for a root labelled `n >= 1`; `None` when the root is 0.
    pub fn decrement_root(&self) -> Option<Agent> {
        self.0.label.checked_sub(1).map(|n| self.relabel(n))
    }

    /// Removes one occurrence of the child `{edge}child`, if present.
    pub fn remove_child(&self, edge: u32, child: &Agent) -> Option<Agent> {
        let pos = self
            .0
            .children
            .iter()
            .position(|(e, c)| *e == edge && c == child)?;
        let mut children = self.0.children.clone();
        children.remove(pos);
        Some(Agent::from_sorted(self.0.label, children))
    }

    /// All one-step reducts under
    /// `n[{d_1}a_1,...,{d_p}a_p] ~> a_i ·_{d_i-1} (n-1)[{d_1}a_1,...,{d_p}a_p]`,
    /// for `n >= 1` and `d_i >= 1`. Sorted, without duplicates.
    pub fn reduction_steps(&self) -> Vec<Agent> {
        let Some(rest) = self.decrement_root() else {
            return Vec::new();
        };
        let mut out: Vec<Agent> = Vec::new();
        let mut last: Option<&(u32, Agent)> = None;
        for entry in &self.0.children {
            let (edge, child) = entry;
            if *edge == 0 || last == Some(entry) {
                continue;
            }
            last = Some(entry);
            out.push(child.graft(edge - 1, rest.clone()));
        }
        out.sort();
        out.dedup();
        out
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn max_label(&self) -> u32 {
        self.0.max_label
    }

    /// Highest edge label; 0 for a single node.
    pub fn depth(&self) -> u32 {
        self.0.depth
    }

    pub fn metrics(&self) -> AgentMetrics {
        AgentMetrics {
            size: self.size(),
            max_label: self.max_label(),
            depth: self.depth(),
        }
    }
}

impl PartialEq for Agent {
    fn eq(&self, other: &Self) -> bool {
        Rc::ptr_eq(&self.0, &other.0)
            || (self.0.label == other.0.label
                && self.0.size == other.0.size
                && self.0.children == other.0.children)
    }
}

impl Eq for Agent {}

impl Hash for Agent {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.label.hash(state);
        self.0.children.hash(state);
    }
}

impl PartialOrd for Agent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Agent {
    fn cmp(&self, other: &Self) -> Ordering {
        if Rc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.0
            .label
            .cmp(&other.0.label)
            .then_with(|| self.0.children.cmp(&other.0.children))
    }
}

impl fmt::Display for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[", self.0.label)?;
        for (i, (edge, child)) in self.0.children.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{{{edge}}}{child}")?;
        }
        f.write_str("]")
    }
}

impl fmt::Debug for Agent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn node(n: u32, cs: Vec<(u32, Agent)>) -> Agent {
        Agent::new(n, cs)
    }

    #[test]
    fn graft_appends_child() {
        let a = Agent::leaf(1).graft(3, Agent::leaf(0));
        assert_eq!(a.to_string(), "1[{3}0[]]");
        let b = node(0, vec![(1, Agent::leaf(0))]).graft(0, Agent::leaf(2));
        assert_eq!(b, node(0, vec![(1, Agent::leaf(0)), (0, Agent::leaf(2))]));
        assert_eq!(b.to_string(), "0[{0}2[],{1}0[]]");
    }

    #[test]
    fn graft_size_is_additive() {
        let b = node(2, vec![(1, Agent::leaf(0)), (4, Agent::leaf(3))]);
        assert_eq!(Agent::leaf(5).graft(2, b.clone()).size(), 1 + b.size());
    }

    #[test]
    fn sibling_order_is_irrelevant() {
        let x = node(3, vec![(2, Agent::leaf(1)), (1, Agent::leaf(0))]);
        let y = node(3, vec![(1, Agent::leaf(0)), (2, Agent::leaf(1))]);
        assert_eq!(x, y);
        assert_eq!(x.to_string(), y.to_string());
    }

    #[test]
    fn stuck_agents() {
        assert!(node(0, vec![(5, Agent::leaf(3))]).reduction_steps().is_empty());
        assert!(Agent::leaf(4).reduction_steps().is_empty());
        assert!(node(2, vec![(0, Agent::leaf(3))]).reduction_steps().is_empty());
    }

    #[test]
    fn one_step() {
        let a = node(1, vec![(1, Agent::leaf(0))]);
        let expect = node(0, vec![(0, node(0, vec![(1, Agent::leaf(0))]))]);
        assert_eq!(a.reduction_steps(), vec![expect]);
    }

    #[test]
    fn identical_children_give_one_successor() {
        let a = node(1, vec![(2, Agent::leaf(1)), (2, Agent::leaf(1))]);
        assert_eq!(a.reduction_steps().len(), 1);
    }

    #[test]
    fn metrics() {
        let a = node(3, vec![(2, Agent::leaf(1)), (1, Agent::leaf(0))]);
        assert_eq!(
            a.metrics(),
            AgentMetrics {
                size: 3,
                max_label: 3,
                depth: 2
            }
        );
        assert_eq!(
            Agent::leaf(0).metrics(),
            AgentMetrics {
                size: 1,
                max_label: 0,
                depth: 0
            }
        );
        let (n, d, p) = (4, 7, 9);
        let m = node(n, vec![(d, Agent::leaf(p))]).metrics();
        assert_eq!((m.size, m.max_label, m.depth), (2, 9, 7));
    }

    #[test]
    fn remove_child_inverts_graft() {
        let a = node(2, vec![(1, Agent::leaf(0))]);
        let g = a.graft(3, Agent::leaf(4));
        assert_eq!(g.remove_child(3, &Agent::leaf(4)), Some(a));
        assert_eq!(g.remove_child(2, &Agent::leaf(4)), None);
    }
}
