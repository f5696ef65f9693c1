//! Brute-force reference implementations for small graphs.
//!
//! Nothing here uses the fast algorithms in [`crate::compat`]: shortest
//! paths come from iterative-deepening enumeration of simple paths, balance
//! from parity of fundamental cycles (or, in [`is_balanced_by_cycles`], of
//! every simple cycle), and optimal teams from subset enumeration. Inputs
//! beyond the [`OracleBudget`] are refused.

use std::collections::HashSet;

use thiserror::Error;

use crate::compat::{Compat, CompatError, CompatibilityRelation, RelationKind};
use crate::graph::{NodeId, Sign, SignedGraph, SkillAssignment, Task};
use crate::team::{Team, TeamError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("oracle budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("no oracle for relation {0}")]
    Unsupported(RelationKind),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error(transparent)]
    Team(#[from] TeamError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub max_nodes: usize,
    pub max_path_len: usize,
    pub max_team_size: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_nodes: 12,
            max_path_len: 11,
            max_team_size: 4,
        }
    }
}

impl OracleBudget {
    fn check_graph(&self, graph: &SignedGraph) -> Result<(), OracleError> {
        if graph.node_count() > self.max_nodes {
            return Err(OracleError::BudgetExceeded(format!(
                "{} nodes > {}",
                graph.node_count(),
                self.max_nodes
            )));
        }
        Ok(())
    }
}

fn sign_of(graph: &SignedGraph, nodes: &[NodeId]) -> Sign {
    nodes
        .windows(2)
        .map(|w| graph.sign(w[0], w[1]).expect("path edges exist"))
        .fold(Sign::Positive, |a, b| a * b)
}

/// Simple `u`-`v` paths with exactly `len` edges.
fn paths_of_length(graph: &SignedGraph, u: NodeId, v: NodeId, len: usize) -> Vec<Vec<NodeId>> {
    fn go(g: &SignedGraph, v: NodeId, len: usize, path: &mut Vec<NodeId>, out: &mut Vec<Vec<NodeId>>) {
        let last = *path.last().unwrap();
        if path.len() - 1 == len {
            if last == v {
                out.push(path.clone());
            }
            return;
        }
        if last == v {
            return;
        }
        for &w in g.neighbors(last) {
            if !path.contains(&w) {
                path.push(w);
                go(g, v, len, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(graph, v, len, &mut vec![u], &mut out);
    out
}

/// All shortest `u`-`v` paths, found by enumerating simple paths of
/// increasing length until one reaches `v`. Empty when unreachable.
pub fn enumerate_shortest_paths(
    graph: &SignedGraph,
    u: NodeId,
    v: NodeId,
    budget: &OracleBudget,
) -> Result<Vec<Vec<NodeId>>, OracleError> {
    budget.check_graph(graph)?;
    for len in 0..graph.node_count() {
        let paths = paths_of_length(graph, u, v, len);
        if !paths.is_empty() {
            return Ok(paths);
        }
    }
    Ok(Vec::new())
}

/// `(positive, negative, length)` shortest-path counts derived from the
/// enumerated paths; length is `None` when unreachable.
pub fn shortest_path_sign_counts(
    graph: &SignedGraph,
    u: NodeId,
    v: NodeId,
    budget: &OracleBudget,
) -> Result<(u128, u128, Option<u32>), OracleError> {
    let paths = enumerate_shortest_paths(graph, u, v, budget)?;
    let pos = paths.iter().filter(|p| sign_of(graph, p).is_positive()).count() as u128;
    let neg = paths.len() as u128 - pos;
    let len = paths.first().map(|p| (p.len() - 1) as u32);
    Ok((pos, neg, len))
}

/// Balance of a path's induced subgraph via its fundamental cycles: every
/// chord `(a, b)` closes a cycle with the path segment between `a` and `b`,
/// and these cycles span the cycle space, so the subgraph is balanced iff
/// each has an even number of negative edges.
pub fn path_is_balanced(graph: &SignedGraph, nodes: &[NodeId]) -> bool {
    for i in 0..nodes.len() {
        for j in (i + 2)..nodes.len() {
            if let Some(chord) = graph.sign(nodes[i], nodes[j]) {
                if sign_of(graph, &nodes[i..=j]) * chord != Sign::Positive {
                    return false;
                }
            }
        }
    }
    true
}

/// Balance of the subgraph induced by `nodes` by checking the sign of every
/// simple cycle. Exponential; intended for at most ten nodes.
pub fn is_balanced_by_cycles(graph: &SignedGraph, nodes: &[NodeId]) -> bool {
    let set: HashSet<NodeId> = nodes.iter().copied().collect();
    let mut sorted: Vec<NodeId> = set.iter().copied().collect();
    sorted.sort_unstable();

    fn go(g: &SignedGraph, set: &HashSet<NodeId>, start: NodeId, path: &mut Vec<NodeId>) -> bool {
        let last = *path.last().unwrap();
        for (w, s) in g.adjacency(last) {
            if !set.contains(&w) || w < start {
                continue;
            }
            if w == start && path.len() >= 3 {
                if sign_of(g, path) * s != Sign::Positive {
                    return false;
                }
            } else if !path.contains(&w) {
                path.push(w);
                let ok = go(g, set, start, path);
                path.pop();
                if !ok {
                    return false;
                }
            }
        }
        true
    }
    sorted
        .iter()
        .all(|&start| go(graph, &set, start, &mut vec![start]))
}

/// Shortest positive balanced path length from `u` to every node, by
/// enumerating simple paths up to `max_len` edges.
fn balanced_positive_lengths(graph: &SignedGraph, u: NodeId, max_len: usize) -> Vec<Option<u32>> {
    fn go(g: &SignedGraph, max_len: usize, path: &mut Vec<NodeId>, best: &mut [Option<u32>]) {
        if path.len() > max_len {
            return;
        }
        let last = *path.last().unwrap();
        for &w in g.neighbors(last) {
            if path.contains(&w) {
                continue;
            }
            path.push(w);
            if path_is_balanced(g, path) {
                if sign_of(g, path).is_positive() {
                    let len = (path.len() - 1) as u32;
                    let slot = &mut best[w.index()];
                    *slot = Some(slot.map_or(len, |b| b.min(len)));
                }
                go(g, max_len, path, best);
            }
            path.pop();
        }
    }
    let mut best = vec![None; graph.node_count()];
    best[u.index()] = Some(0);
    go(graph, max_len, &mut vec![u], &mut best);
    best
}

/// Ground-truth relation straight from the definitions. `SBPH` has no
/// definition independent of its algorithm and is unsupported.
pub fn oracle_relation(
    graph: &SignedGraph,
    kind: RelationKind,
    budget: &OracleBudget,
) -> Result<CompatibilityRelation, OracleError> {
    budget.check_graph(graph)?;
    let n = graph.node_count();
    let verdict = |ok: bool, d: Option<u32>| match (ok, d) {
        (true, Some(d)) => Compat::Compatible(d),
        _ => Compat::Incompatible,
    };
    let relation = match kind {
        RelationKind::SbpH => return Err(OracleError::Unsupported(kind)),
        RelationKind::Sbp => {
            let max_len = budget.max_path_len.min(n.saturating_sub(1)).max(1);
            let rows: Vec<Vec<Option<u32>>> = graph
                .nodes()
                .map(|u| balanced_positive_lengths(graph, u, max_len))
                .collect();
            CompatibilityRelation::from_fn(kind, n, |u, v| {
                verdict(true, rows[u.index()][v.index()])
            })?
        }
        _ => CompatibilityRelation::from_fn(kind, n, |u, v| {
            let edge = graph.sign(u, v);
            let (pos, neg, len) = shortest_path_sign_counts(graph, u, v, budget).expect("budget checked");
            let ok = match kind {
                RelationKind::Dpe => edge == Some(Sign::Positive),
                RelationKind::Nne => edge != Some(Sign::Negative),
                RelationKind::Spa => pos > 0 && neg == 0,
                RelationKind::Spm => pos > 0 && pos >= neg,
                RelationKind::Spo => pos > 0,
                RelationKind::Sbp | RelationKind::SbpH => unreachable!(),
            };
            verdict(ok, len)
        })?,
    };
    Ok(relation)
}

/// Minimum-cost compatible team by exhaustive search over subsets of at
/// most `|task|` users who each hold some task skill. Ties go to the
/// lexicographically smallest member list. `None` proves that no compatible
/// covering team exists.
pub fn oracle_min_cost_team(
    graph: &SignedGraph,
    relation: &CompatibilityRelation,
    skills: &SkillAssignment,
    task: &Task,
    budget: &OracleBudget,
) -> Result<Option<Team>, OracleError> {
    budget.check_graph(graph)?;
    if task.len() > budget.max_team_size {
        return Err(OracleError::BudgetExceeded(format!(
            "task of {} skills > {}",
            task.len(),
            budget.max_team_size
        )));
    }
    let pool: Vec<NodeId> = graph
        .nodes()
        .filter(|&u| task.skills().iter().any(|&s| skills.has_skill(u, s)))
        .collect();

    struct Search<'a> {
        relation: &'a CompatibilityRelation,
        skills: &'a SkillAssignment,
        task: &'a Task,
        pool: &'a [NodeId],
        best: Option<(u32, Vec<NodeId>)>,
    }
    impl Search<'_> {
        fn visit(&mut self, next: usize, chosen: &mut Vec<NodeId>) {
            if !chosen.is_empty() && self.covers(chosen) {
                let mut cost = 0;
                for (i, &a) in chosen.iter().enumerate() {
                    for &b in &chosen[i + 1..] {
                        cost = cost.max(self.relation.distance(a, b).expect("chosen pairs are compatible"));
                    }
                }
                let better = match &self.best {
                    None => true,
                    Some((c, m)) => (cost, &chosen[..]) < (*c, &m[..]),
                };
                if better {
                    self.best = Some((cost, chosen.clone()));
                }
            }
            if chosen.len() == self.task.len() {
                return;
            }
            for i in next..self.pool.len() {
                let c = self.pool[i];
                if chosen.iter().all(|&m| self.relation.is_compatible(m, c)) {
                    chosen.push(c);
                    self.visit(i + 1, chosen);
                    chosen.pop();
                }
            }
        }

        fn covers(&self, chosen: &[NodeId]) -> bool {
            self.task
                .skills()
                .iter()
                .all(|&s| chosen.iter().any(|&u| self.skills.has_skill(u, s)))
        }
    }

    let mut search = Search {
        relation,
        skills,
        task,
        pool: &pool,
        best: None,
    };
    search.visit(0, &mut Vec::new());
    search
        .best
        .map(|(_, members)| Team::from_members(members, relation, skills, task))
        .transpose()
        .map_err(OracleError::from)
}
