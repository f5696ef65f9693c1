//! Path signs and structural balance of induced subgraphs.
//!
//! A signed graph is balanced when no cycle carries an odd number of negative
//! edges. Equivalently its nodes admit a two-coloring in which positive edges
//! join equal colors and negative edges join opposite colors; the checks here
//! search for such a coloring instead of enumerating cycles.

use std::collections::{HashMap, HashSet, VecDeque};

use thiserror::Error;

use crate::graph::{NodeId, Sign, SignedGraph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PathError {
    #[error("path is empty")]
    Empty,
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("nodes {0} and {1} are consecutive on the path but not adjacent")]
    NotAnEdge(NodeId, NodeId),
    #[error("node {0} appears more than once")]
    Repeated(NodeId),
}

/// A simple path `v0, v1, ..., vk` whose consecutive nodes are adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    nodes: Vec<NodeId>,
}

impl Path {
    pub fn new(graph: &SignedGraph, nodes: Vec<NodeId>) -> Result<Path, PathError> {
        let path = Path { nodes };
        path.validate(graph)?;
        Ok(path)
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.len() <= 1
    }

    pub fn start(&self) -> NodeId {
        self.nodes[0]
    }

    pub fn end(&self) -> NodeId {
        *self.nodes.last().unwrap()
    }

    fn validate(&self, graph: &SignedGraph) -> Result<(), PathError> {
        if self.nodes.is_empty() {
            return Err(PathError::Empty);
        }
        let mut seen = HashSet::with_capacity(self.nodes.len());
        for &v in &self.nodes {
            if !graph.contains(v) {
                return Err(PathError::UnknownNode(v));
            }
            if !seen.insert(v) {
                return Err(PathError::Repeated(v));
            }
        }
        for w in self.nodes.windows(2) {
            if graph.sign(w[0], w[1]).is_none() {
                return Err(PathError::NotAnEdge(w[0], w[1]));
            }
        }
        Ok(())
    }
}

/// Product of the edge signs along `path`; a single node is positive.
pub fn path_sign(graph: &SignedGraph, path: &Path) -> Result<Sign, PathError> {
    path.nodes.windows(2).try_fold(Sign::Positive, |acc, w| {
        graph
            .sign(w[0], w[1])
            .map(|s| acc * s)
            .ok_or(PathError::NotAnEdge(w[0], w[1]))
    })
}

/// Whether the subgraph induced by `nodes` has no cycle with an odd number
/// of negative edges. Each component of the induced subgraph is two-colored
/// independently. Nodes outside the graph are ignored.
pub fn is_balanced_node_set(graph: &SignedGraph, nodes: &[NodeId]) -> bool {
    let mut color: HashMap<NodeId, Option<bool>> = nodes
        .iter()
        .filter(|v| graph.contains(**v))
        .map(|&v| (v, None))
        .collect();
    let mut queue = VecDeque::new();
    for &start in nodes {
        if color.get(&start) != Some(&None) {
            continue;
        }
        color.insert(start, Some(false));
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            let cu = color[&u].unwrap();
            for (v, s) in graph.adjacency(u) {
                let want = cu ^ s.is_negative();
                match color.get(&v) {
                    None => {}
                    Some(None) => {
                        color.insert(v, Some(want));
                        queue.push_back(v);
                    }
                    Some(Some(cv)) if *cv != want => return false,
                    Some(Some(_)) => {}
                }
            }
        }
    }
    true
}

/// Whether the subgraph induced by the path's nodes, chords included, is
/// balanced.
pub fn is_balanced_path(graph: &SignedGraph, path: &Path) -> Result<bool, PathError> {
    path.validate(graph)?;
    Ok(is_balanced_node_set(graph, &path.nodes))
}
