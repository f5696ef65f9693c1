//! Pairwise compatibility relations over a signed graph.
//!
//! Seven relations are supported, from strictest to most permissive:
//!
//! | kind   | `(u, v)` compatible when                                   | distance                         |
//! |--------|------------------------------------------------------------|----------------------------------|
//! | `DPE`  | a positive edge joins them                                 | 1                                |
//! | `SPA`  | every shortest path is positive                            | shortest-path length             |
//! | `SPM`  | positive shortest paths are at least as many as negative   | shortest-path length             |
//! | `SPO`  | some shortest path is positive                             | shortest-path length             |
//! | `SBPH` | the prefix-restricted search finds a positive balanced path| length of the path found         |
//! | `SBP`  | some positive path induces a balanced subgraph             | shortest such path               |
//! | `NNE`  | no negative edge joins them                                | shortest-path length, any signs  |
//!
//! Every relation is reflexive and symmetric, contains all positive edges
//! and excludes all negative edges.

use std::collections::VecDeque;
use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{NodeId, SignedGraph, SkillAssignment, SkillId};

/// Shortest-path counts saturate rather than overflow.
pub type PathCount = u128;

const INCOMPATIBLE: u8 = u8::MAX;
const UNKNOWN: u8 = u8::MAX - 1;
/// Largest distance a relation can store.
pub const MAX_DISTANCE: u32 = (u8::MAX - 2) as u32;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CompatError {
    #[error("node {0} is not in the graph")]
    UnknownNode(NodeId),
    #[error("skill {0} is not in the universe")]
    UnknownSkill(u32),
    #[error("path-length budget must be at least 1")]
    ZeroBudget,
    #[error("exact balanced-path search refused: {nodes} nodes exceeds the limit of {limit}")]
    SbpTooLarge { nodes: usize, limit: usize },
    #[error("distance {0} between compatible nodes exceeds the storable maximum")]
    DistanceOverflow(u32),
    #[error("relation is over {relation} nodes but skills are over {skills}")]
    SizeMismatch { relation: usize, skills: usize },
    #[error("unknown relation kind {0:?}")]
    UnknownKind(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RelationKind {
    Dpe,
    Spa,
    Spm,
    Spo,
    SbpH,
    Sbp,
    Nne,
}

impl RelationKind {
    /// All kinds, from strictest to most permissive.
    pub const ALL: [RelationKind; 7] = [
        RelationKind::Dpe,
        RelationKind::Spa,
        RelationKind::Spm,
        RelationKind::Spo,
        RelationKind::SbpH,
        RelationKind::Sbp,
        RelationKind::Nne,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RelationKind::Dpe => "DPE",
            RelationKind::Nne => "NNE",
            RelationKind::Spa => "SPA",
            RelationKind::Spm => "SPM",
            RelationKind::Spo => "SPO",
            RelationKind::Sbp => "SBP",
            RelationKind::SbpH => "SBPH",
        }
    }

    pub fn is_shortest_path(self) -> bool {
        matches!(self, RelationKind::Spa | RelationKind::Spm | RelationKind::Spo)
    }
}

impl fmt::Display for RelationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RelationKind {
    type Err = CompatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm: String = s
            .chars()
            .filter(|c| *c != '_' && *c != '-')
            .collect::<String>()
            .to_ascii_uppercase();
        RelationKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| CompatError::UnknownKind(s.to_string()))
    }
}

/// Membership of a single pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Compat {
    Compatible(u32),
    Incompatible,
    /// The exact balanced-path search hit its length budget before deciding.
    Unknown,
}

impl Compat {
    fn encode(self) -> Result<u8, CompatError> {
        match self {
            Compat::Compatible(d) if d > MAX_DISTANCE => Err(CompatError::DistanceOverflow(d)),
            Compat::Compatible(d) => Ok(d as u8),
            Compat::Incompatible => Ok(INCOMPATIBLE),
            Compat::Unknown => Ok(UNKNOWN),
        }
    }

    fn decode(code: u8) -> Compat {
        match code {
            INCOMPATIBLE => Compat::Incompatible,
            UNKNOWN => Compat::Unknown,
            d => Compat::Compatible(d as u32),
        }
    }

    pub fn is_compatible(self) -> bool {
        matches!(self, Compat::Compatible(_))
    }

    /// Combines the verdicts of the two directions of a pair: the shorter
    /// compatible distance wins, then a definite incompatibility.
    fn merge(self, other: Compat) -> Compat {
        match (self, other) {
            (Compat::Compatible(a), Compat::Compatible(b)) => Compat::Compatible(a.min(b)),
            (Compat::Compatible(a), _) | (_, Compat::Compatible(a)) => Compat::Compatible(a),
            (Compat::Incompatible, _) | (_, Compat::Incompatible) => Compat::Incompatible,
            _ => Compat::Unknown,
        }
    }
}

/// Signed shortest-path counts from one source.
#[derive(Clone, Debug)]
pub struct PathCounts {
    pub source: NodeId,
    /// Number of positive shortest paths to each node.
    pub pos: Vec<PathCount>,
    /// Number of negative shortest paths to each node.
    pub neg: Vec<PathCount>,
    /// Hop distance to each node, `u32::MAX` if unreachable.
    pub dist: Vec<u32>,
}

impl PathCounts {
    pub fn is_reachable(&self, x: NodeId) -> bool {
        self.dist[x.index()] != u32::MAX
    }
}

/// Counts positive and negative shortest paths from `q` to every node with
/// a single BFS.
///
/// When `x` is reached from `u` along a shortest path, a positive edge
/// carries `u`'s counts over unchanged and a negative edge swaps them.
pub fn sp_sign_counts(graph: &SignedGraph, q: NodeId) -> Result<PathCounts, CompatError> {
    if !graph.contains(q) {
        return Err(CompatError::UnknownNode(q));
    }
    let n = graph.node_count();
    let mut counts = PathCounts {
        source: q,
        pos: vec![0; n],
        neg: vec![0; n],
        dist: vec![u32::MAX; n],
    };
    let mut queue = VecDeque::with_capacity(n);
    fill_sp_counts(graph, q, &mut counts, &mut queue);
    Ok(counts)
}

fn fill_sp_counts(graph: &SignedGraph, q: NodeId, c: &mut PathCounts, queue: &mut VecDeque<NodeId>) {
    c.source = q;
    c.pos.fill(0);
    c.neg.fill(0);
    c.dist.fill(u32::MAX);
    queue.clear();
    c.pos[q.index()] = 1;
    c.dist[q.index()] = 0;
    queue.push_back(q);
    while let Some(u) = queue.pop_front() {
        let ui = u.index();
        let next = c.dist[ui] + 1;
        let (pu, nu) = (c.pos[ui], c.neg[ui]);
        for (&x, &s) in graph.neighbors(u).iter().zip(graph.neighbor_signs(u)) {
            let xi = x.index();
            if next <= c.dist[xi] {
                // FIFO order means a node with a finite label is still queued
                // at layer `next`, so only first discovery enqueues.
                if c.dist[xi] == u32::MAX {
                    queue.push_back(x);
                }
                c.dist[xi] = next;
                if s.is_positive() {
                    c.pos[xi] = c.pos[xi].saturating_add(pu);
                    c.neg[xi] = c.neg[xi].saturating_add(nu);
                } else {
                    c.neg[xi] = c.neg[xi].saturating_add(pu);
                    c.pos[xi] = c.pos[xi].saturating_add(nu);
                }
            }
            debug_assert!(c.dist[xi] + 1 >= c.dist[ui], "BFS layering violated");
        }
    }
}

/// Result of the exact balanced-path search for one target.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SbpReach {
    /// Length of the shortest positive balanced path.
    Found(u32),
    /// No positive balanced path exists.
    Absent,
    /// None found within the budget, but the search was cut short.
    Unknown,
}

/// Exhaustive depth-first search over simple paths from `u` of at most
/// `budget` edges whose induced subgraph is balanced, recording the shortest
/// positive one to each node.
///
/// Balance is hereditary on induced subgraphs, so unbalanced prefixes are
/// pruned. Each path node carries its two-coloring relative to `u`; an
/// extension to `y` is balanced iff every edge from `y` back onto the path
/// agrees with `y`'s color. The path is positive iff its end has `u`'s
/// color.
pub fn sbp_exact_reachability(
    graph: &SignedGraph,
    u: NodeId,
    budget: usize,
) -> Result<Vec<SbpReach>, CompatError> {
    if !graph.contains(u) {
        return Err(CompatError::UnknownNode(u));
    }
    if budget == 0 {
        return Err(CompatError::ZeroBudget);
    }
    let n = graph.node_count();
    let mut search = ExactSearch {
        graph,
        budget,
        on_path: vec![false; n],
        color: vec![false; n],
        best: vec![u32::MAX; n],
        truncated: false,
    };
    search.on_path[u.index()] = true;
    search.best[u.index()] = 0;
    search.extend(u, 0);

    let mut out: Vec<SbpReach> = search
        .best
        .iter()
        .map(|&b| match b {
            u32::MAX if search.truncated => SbpReach::Unknown,
            u32::MAX => SbpReach::Absent,
            d => SbpReach::Found(d),
        })
        .collect();
    // A positive path closed by a negative edge is an odd cycle.
    for (v, s) in graph.adjacency(u) {
        if s.is_negative() {
            out[v.index()] = SbpReach::Absent;
        }
    }
    Ok(out)
}

struct ExactSearch<'g> {
    graph: &'g SignedGraph,
    budget: usize,
    on_path: Vec<bool>,
    color: Vec<bool>,
    best: Vec<u32>,
    truncated: bool,
}

impl ExactSearch<'_> {
    /// Color `y` would take when appended after `x`, or `None` if some chord
    /// from `y` onto the path disagrees.
    fn balanced_color(&self, x: NodeId, y: NodeId, negative: bool) -> Option<bool> {
        let cy = self.color[x.index()] ^ negative;
        let g = self.graph;
        for (&z, &t) in g.neighbors(y).iter().zip(g.neighbor_signs(y)) {
            if self.on_path[z.index()] && self.color[z.index()] ^ t.is_negative() != cy {
                return None;
            }
        }
        Some(cy)
    }

    fn extend(&mut self, x: NodeId, depth: usize) {
        let g = self.graph;
        for (&y, &s) in g.neighbors(x).iter().zip(g.neighbor_signs(x)) {
            if self.on_path[y.index()] {
                continue;
            }
            let Some(cy) = self.balanced_color(x, y, s.is_negative()) else {
                continue;
            };
            if depth == self.budget {
                self.truncated = true;
                return;
            }
            let len = depth as u32 + 1;
            if !cy && len < self.best[y.index()] {
                self.best[y.index()] = len;
            }
            self.on_path[y.index()] = true;
            self.color[y.index()] = cy;
            self.extend(y, depth + 1);
            self.on_path[y.index()] = false;
        }
    }
}

/// Prefix-restricted balanced-path search from `q`.
///
/// A layered BFS in which every node keeps at most one representative path
/// per sign, the first shortest one discovered. Only representatives are
/// extended, and an extension is kept only if the longer path is still
/// balanced. Every returned length belongs to a genuine positive balanced
/// path, but pairs whose balanced paths all leave the representatives are
/// missed.
pub fn sbp_heuristic_counts(graph: &SignedGraph, q: NodeId) -> Result<Vec<Option<u32>>, CompatError> {
    if !graph.contains(q) {
        return Err(CompatError::UnknownNode(q));
    }
    struct State {
        node: NodeId,
        parent: Option<usize>,
        len: u32,
        negative: bool,
    }
    let n = graph.node_count();
    let mut reps: Vec<[Option<usize>; 2]> = vec![[None, None]; n];
    let mut states = vec![State {
        node: q,
        parent: None,
        len: 0,
        negative: false,
    }];
    reps[q.index()][0] = Some(0);
    let mut stamp = vec![0usize; n];
    let mut color = vec![false; n];
    let mut next = 0;
    while next < states.len() {
        let id = next;
        next += 1;
        let generation = id + 1;
        let mut walk = Some(id);
        while let Some(w) = walk {
            stamp[states[w].node.index()] = generation;
            color[states[w].node.index()] = states[w].negative;
            walk = states[w].parent;
        }
        let (x, len, cx) = (states[id].node, states[id].len, states[id].negative);
        for (&y, &s) in graph.neighbors(x).iter().zip(graph.neighbor_signs(x)) {
            if stamp[y.index()] == generation {
                continue;
            }
            let cy = cx ^ s.is_negative();
            if reps[y.index()][cy as usize].is_some() {
                continue;
            }
            let balanced = graph
                .adjacency(y)
                .all(|(z, t)| stamp[z.index()] != generation || color[z.index()] ^ t.is_negative() == cy);
            if balanced {
                reps[y.index()][cy as usize] = Some(states.len());
                states.push(State {
                    node: y,
                    parent: Some(id),
                    len: len + 1,
                    negative: cy,
                });
            }
        }
    }
    Ok(reps
        .iter()
        .map(|r| r[0].map(|i| states[i].len))
        .collect())
}

/// Tuning for relation construction.
#[derive(Clone, Copy, Debug)]
pub struct RelationOptions {
    /// Path-length budget for the exact balanced-path search; defaults to
    /// the graph diameter plus two.
    pub sbp_max_path_len: Option<usize>,
    /// Exact balanced-path search is refused above this many nodes.
    pub sbp_max_nodes: usize,
}

impl Default for RelationOptions {
    fn default() -> Self {
        RelationOptions {
            sbp_max_path_len: None,
            sbp_max_nodes: 5_000,
        }
    }
}

/// Per-source membership row: one verdict for every target node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    source: NodeId,
    cells: Vec<u8>,
}

impl Row {
    pub fn source(&self) -> NodeId {
        self.source
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn get(&self, v: NodeId) -> Compat {
        Compat::decode(self.cells[v.index()])
    }

    pub fn is_compatible(&self, v: NodeId) -> bool {
        self.cells[v.index()] < UNKNOWN
    }

    fn from_fn(source: NodeId, n: usize, mut f: impl FnMut(usize) -> Compat) -> Result<Row, CompatError> {
        let cells = (0..n).map(|v| f(v).encode()).collect::<Result<_, _>>()?;
        Ok(Row { source, cells })
    }

    /// Classifies one of the shortest-path kinds from signed counts.
    pub fn from_counts(counts: &PathCounts, kind: RelationKind) -> Row {
        assert!(kind.is_shortest_path(), "{kind} is not a shortest-path relation");
        let cells = (0..counts.dist.len())
            .map(|x| {
                let (p, m, d) = (counts.pos[x], counts.neg[x], counts.dist[x]);
                let ok = match kind {
                    RelationKind::Spa => p >= 1 && m == 0,
                    RelationKind::Spm => p >= 1 && p >= m,
                    _ => p >= 1,
                };
                if ok && d <= MAX_DISTANCE {
                    d as u8
                } else {
                    INCOMPATIBLE
                }
            })
            .collect();
        Row {
            source: counts.source,
            cells,
        }
    }
}

/// Computes membership rows for one relation kind, one source at a time.
///
/// Rows of every kind except `SBPH` are already symmetric; the heuristic
/// only sees paths starting at the row's source.
pub struct RowComputer<'g> {
    graph: &'g SignedGraph,
    kind: RelationKind,
    sbp_budget: usize,
}

impl<'g> RowComputer<'g> {
    pub fn new(graph: &'g SignedGraph, kind: RelationKind, options: &RelationOptions) -> Result<Self, CompatError> {
        let n = graph.node_count();
        let mut sbp_budget = 0;
        if kind == RelationKind::Sbp {
            if n > options.sbp_max_nodes {
                return Err(CompatError::SbpTooLarge {
                    nodes: n,
                    limit: options.sbp_max_nodes,
                });
            }
            sbp_budget = match options.sbp_max_path_len {
                Some(b) => b,
                None => graph
                    .diameter()
                    .map(|d| d as usize + 2)
                    .unwrap_or(n.saturating_sub(1)),
            };
            if sbp_budget == 0 {
                return Err(CompatError::ZeroBudget);
            }
        }
        Ok(RowComputer {
            graph,
            kind,
            sbp_budget,
        })
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    /// Path-length budget used by the exact search (0 for other kinds).
    pub fn sbp_budget(&self) -> usize {
        self.sbp_budget
    }

    pub fn row(&self, u: NodeId) -> Result<Row, CompatError> {
        let g = self.graph;
        if !g.contains(u) {
            return Err(CompatError::UnknownNode(u));
        }
        let n = g.node_count();
        match self.kind {
            RelationKind::Dpe => Row::from_fn(u, n, |v| {
                if v == u.index() {
                    Compat::Compatible(0)
                } else if g.sign(u, NodeId::from(v)).is_some_and(|s| s.is_positive()) {
                    Compat::Compatible(1)
                } else {
                    Compat::Incompatible
                }
            }),
            RelationKind::Nne => {
                let dist = g.bfs_distances(u);
                let mut row = Row::from_fn(u, n, |v| match dist[v] {
                    u32::MAX => Compat::Incompatible,
                    d => Compat::Compatible(d),
                })?;
                for (v, s) in g.adjacency(u) {
                    if s.is_negative() {
                        row.cells[v.index()] = INCOMPATIBLE;
                    }
                }
                Ok(row)
            }
            RelationKind::Spa | RelationKind::Spm | RelationKind::Spo => {
                let counts = sp_sign_counts(g, u)?;
                Ok(Row::from_counts(&counts, self.kind))
            }
            RelationKind::Sbp => {
                let reach = sbp_exact_reachability(g, u, self.sbp_budget)?;
                Row::from_fn(u, n, |v| match reach[v] {
                    SbpReach::Found(d) => Compat::Compatible(d),
                    SbpReach::Absent => Compat::Incompatible,
                    SbpReach::Unknown => Compat::Unknown,
                })
            }
            RelationKind::SbpH => {
                let reach = sbp_heuristic_counts(g, u)?;
                Row::from_fn(u, n, |v| match reach[v] {
                    Some(d) => Compat::Compatible(d),
                    None => Compat::Incompatible,
                })
            }
        }
    }
}

/// Reusable buffers for computing many shortest-path rows in a row.
pub struct SpCounter<'g> {
    graph: &'g SignedGraph,
    counts: PathCounts,
    queue: VecDeque<NodeId>,
}

impl<'g> SpCounter<'g> {
    pub fn new(graph: &'g SignedGraph) -> Self {
        let n = graph.node_count();
        SpCounter {
            graph,
            counts: PathCounts {
                source: NodeId(0),
                pos: vec![0; n],
                neg: vec![0; n],
                dist: vec![u32::MAX; n],
            },
            queue: VecDeque::with_capacity(n),
        }
    }

    pub fn count(&mut self, q: NodeId) -> Result<&PathCounts, CompatError> {
        if !self.graph.contains(q) {
            return Err(CompatError::UnknownNode(q));
        }
        fill_sp_counts(self.graph, q, &mut self.counts, &mut self.queue);
        Ok(&self.counts)
    }
}

/// A reflexive, symmetric compatibility relation with per-pair distances.
///
/// Stored as a packed upper triangle of one byte per unordered pair.
#[derive(Clone, Debug)]
pub struct CompatibilityRelation {
    kind: RelationKind,
    n: usize,
    cells: Vec<u8>,
}

impl CompatibilityRelation {
    /// Builds a relation from an arbitrary verdict function evaluated once
    /// per unordered pair `u < v`.
    pub fn from_fn(
        kind: RelationKind,
        n: usize,
        mut f: impl FnMut(NodeId, NodeId) -> Compat,
    ) -> Result<Self, CompatError> {
        let mut cells = vec![INCOMPATIBLE; n * n.saturating_sub(1) / 2];
        let mut k = 0;
        for u in 0..n {
            for v in (u + 1)..n {
                cells[k] = f(NodeId::from(u), NodeId::from(v)).encode()?;
                k += 1;
            }
        }
        Ok(CompatibilityRelation { kind, n, cells })
    }

    #[inline]
    fn offset(&self, u: usize, v: usize) -> usize {
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        a * (2 * self.n - a - 1) / 2 + (b - a - 1)
    }

    pub fn kind(&self) -> RelationKind {
        self.kind
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: NodeId, v: NodeId) -> Compat {
        if u == v {
            Compat::Compatible(0)
        } else {
            Compat::decode(self.cells[self.offset(u.index(), v.index())])
        }
    }

    #[inline]
    pub fn is_compatible(&self, u: NodeId, v: NodeId) -> bool {
        u == v || self.cells[self.offset(u.index(), v.index())] < UNKNOWN
    }

    pub fn distance(&self, u: NodeId, v: NodeId) -> Option<u32> {
        match self.get(u, v) {
            Compat::Compatible(d) => Some(d),
            _ => None,
        }
    }

    /// Compatible unordered pairs `(u, v, distance)` with `u < v`.
    pub fn compatible_pairs(&self) -> impl Iterator<Item = (NodeId, NodeId, u32)> + '_ {
        (0..self.n).flat_map(move |u| {
            ((u + 1)..self.n).filter_map(move |v| {
                let c = self.cells[self.offset(u, v)];
                (c < UNKNOWN).then(|| (NodeId::from(u), NodeId::from(v), c as u32))
            })
        })
    }

    pub fn compatible_pair_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c < UNKNOWN).count()
    }

    pub fn unknown_pair_count(&self) -> usize {
        self.cells.iter().filter(|&&c| c == UNKNOWN).count()
    }

    /// Full row for `u`, as produced by [`RowComputer::row`].
    pub fn row(&self, u: NodeId) -> Row {
        let cells = (0..self.n)
            .map(|v| {
                if v == u.index() {
                    0
                } else {
                    self.cells[self.offset(u.index(), v)]
                }
            })
            .collect();
        Row { source: u, cells }
    }

    /// Whether both relations agree on membership of every pair.
    pub fn same_pairs(&self, other: &CompatibilityRelation) -> bool {
        self.n == other.n
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(&a, &b)| (a < UNKNOWN) == (b < UNKNOWN))
    }

    /// Whether every pair compatible here is also compatible in `other`.
    pub fn is_subset_of(&self, other: &CompatibilityRelation) -> bool {
        self.n == other.n
            && self
                .cells
                .iter()
                .zip(&other.cells)
                .all(|(&a, &b)| a >= UNKNOWN || b < UNKNOWN)
    }
}

/// Builds the relation of `kind` over `graph`, computing one row per source
/// in parallel. Rows are merged in source order, so the result does not
/// depend on the number of workers.
pub fn build_relation(
    graph: &SignedGraph,
    kind: RelationKind,
    options: &RelationOptions,
) -> Result<CompatibilityRelation, CompatError> {
    let computer = RowComputer::new(graph, kind, options)?;
    let n = graph.node_count();
    let mut relation = CompatibilityRelation {
        kind,
        n,
        cells: vec![INCOMPATIBLE; n * n.saturating_sub(1) / 2],
    };
    let mut first_seen = vec![false; relation.cells.len()];
    const CHUNK: usize = 256;
    let sources: Vec<NodeId> = graph.nodes().collect();
    for chunk in sources.chunks(CHUNK) {
        let rows = chunk
            .par_iter()
            .map(|&u| computer.row(u))
            .collect::<Result<Vec<_>, _>>()?;
        for row in rows {
            let u = row.source.index();
            for v in 0..n {
                if v == u {
                    continue;
                }
                let k = relation.offset(u, v);
                let incoming = Compat::decode(row.cells[v]);
                let merged = if first_seen[k] {
                    Compat::decode(relation.cells[k]).merge(incoming)
                } else {
                    first_seen[k] = true;
                    incoming
                };
                relation.cells[k] = merged.encode()?;
            }
        }
    }
    Ok(relation)
}

/// Compatibility degree of every skill, indexed by skill id.
///
/// `cd(s)` counts ordered compatible pairs `(a, b)`, including `a == b`,
/// with `s` held by `a`, once for every other skill held by `b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SkillDegrees {
    degrees: Vec<u64>,
}

impl SkillDegrees {
    pub fn compute(relation: &CompatibilityRelation, skills: &SkillAssignment) -> Result<Self, CompatError> {
        if relation.node_count() != skills.node_count() {
            return Err(CompatError::SizeMismatch {
                relation: relation.node_count(),
                skills: skills.node_count(),
            });
        }
        let mut degrees = vec![0u64; skills.universe_size()];
        let mut add = |a: NodeId, b: NodeId| {
            let held_b = skills.skills_of(b);
            for &s in skills.skills_of(a) {
                let own = held_b.binary_search(&s).is_ok() as u64;
                degrees[s.index()] += held_b.len() as u64 - own;
            }
        };
        for u in 0..relation.node_count() {
            let u = NodeId::from(u);
            add(u, u);
        }
        for (a, b, _) in relation.compatible_pairs() {
            add(a, b);
            add(b, a);
        }
        Ok(SkillDegrees { degrees })
    }

    pub fn get(&self, s: SkillId) -> Option<u64> {
        self.degrees.get(s.index()).copied()
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.degrees
    }
}

/// `cd(s)` for a single skill.
pub fn skill_compat_degree(
    relation: &CompatibilityRelation,
    skills: &SkillAssignment,
    s: SkillId,
) -> Result<u64, CompatError> {
    if !skills.contains(s) {
        return Err(CompatError::UnknownSkill(s.0));
    }
    Ok(SkillDegrees::compute(relation, skills)?.degrees[s.index()])
}

/// Skills held by at least one node compatible with the row's source
/// (the source included).
pub fn skills_reached(row: &Row, skills: &SkillAssignment) -> FixedBitSet {
    let mut reached = FixedBitSet::with_capacity(skills.universe_size());
    for s in skills.skill_ids() {
        if skills.users_with(s).iter().any(|&h| row.is_compatible(h)) {
            reached.insert(s.index());
        }
    }
    reached
}

/// Symmetric skill-pair matrix: bit `(s, t)` is set when some compatible
/// pair of users (possibly one user) holds `s` and `t` respectively.
#[derive(Clone, Debug)]
pub struct SkillPairMatrix {
    rows: Vec<FixedBitSet>,
}

impl SkillPairMatrix {
    pub fn new(universe: usize) -> Self {
        SkillPairMatrix {
            rows: vec![FixedBitSet::with_capacity(universe); universe],
        }
    }

    /// Records the row of `source`.
    pub fn add_row(&mut self, row: &Row, skills: &SkillAssignment) {
        let held = skills.skills_of(row.source());
        if held.is_empty() {
            return;
        }
        let reached = skills_reached(row, skills);
        for &s in held {
            self.rows[s.index()].union_with(&reached);
        }
    }

    pub fn merge(&mut self, other: &SkillPairMatrix) {
        for (a, b) in self.rows.iter_mut().zip(&other.rows) {
            a.union_with(b);
        }
    }

    pub fn contains(&self, s: SkillId, t: SkillId) -> bool {
        self.rows[s.index()].contains(t.index())
    }

    /// Number of compatible unordered pairs of distinct skills.
    pub fn distinct_pair_count(&self) -> usize {
        self.rows
            .iter()
            .enumerate()
            .map(|(s, r)| r.ones().filter(|&t| t > s).count())
            .sum()
    }
}

/// Writes compatible pairs as `u v KIND distance` rows using node labels.
pub fn write_relation<W: Write>(relation: &CompatibilityRelation, graph: &SignedGraph, mut out: W) -> io::Result<()> {
    for (u, v, d) in relation.compatible_pairs() {
        writeln!(out, "{} {} {} {}", graph.label(u), graph.label(v), relation.kind(), d)?;
    }
    Ok(())
}
