//! Small hand-built signed graphs that exhibit the qualitative behaviors the
//! compatibility relations are designed around. Nodes are labelled `u`, `v`
//! and `x1`, `x2`, ...

use crate::graph::{GraphBuilder, NodeId, Sign, SignedGraph};

pub struct Fixture {
    pub graph: SignedGraph,
}

impl Fixture {
    fn build(edges: &[(&str, &str, Sign)]) -> Fixture {
        let mut b = GraphBuilder::new();
        for &(u, v, s) in edges {
            b.add_edge(u, v, s).expect("fixture edges are valid");
        }
        Fixture { graph: b.build() }
    }

    /// Node by label; panics on an unknown label.
    pub fn node(&self, label: &str) -> NodeId {
        self.graph
            .node_by_label(label)
            .unwrap_or_else(|| panic!("fixture has no node {label}"))
    }

    pub fn nodes(&self, labels: &[&str]) -> Vec<NodeId> {
        labels.iter().map(|l| self.node(l)).collect()
    }
}

/// Six nodes where `u` and `v` are joined by a positive balanced path of
/// length 4 while their only shortest path `(u, x1, v)` is negative. The
/// shorter positive path `(u, x2, x1, v)` is unbalanced because of the chord
/// `(u, x1)`.
pub fn balanced_but_not_shortest() -> Fixture {
    use Sign::*;
    Fixture::build(&[
        ("u", "x1", Positive),
        ("x1", "v", Negative),
        ("u", "x2", Positive),
        ("x2", "x1", Negative),
        ("x2", "x3", Positive),
        ("x3", "x4", Positive),
        ("x4", "v", Positive),
    ])
}

/// Seven nodes where the shortest balanced `u`-`x4` path `(u, x3, x4)` cannot
/// be extended to `v`: the shortest positive balanced `u`-`v` path is
/// `(u, x1, x2, x4, x5, v)`, since the chord `(x3, x5)` makes
/// `(u, x3, x4, x5, v)` unbalanced.
pub fn prefix_failure() -> Fixture {
    use Sign::*;
    Fixture::build(&[
        ("u", "x1", Positive),
        ("x1", "x2", Positive),
        ("x2", "x4", Positive),
        ("x4", "x5", Positive),
        ("x5", "v", Positive),
        ("u", "x3", Positive),
        ("x3", "x4", Positive),
        ("x3", "x5", Negative),
    ])
}
