//! Immutable signed graphs, skill assignments and tasks, plus the text
//! formats they are read from and written to.
//!
//! Graph files hold one edge per line as `u v sign`, where `sign` is `+1`,
//! `-1` or `1`. Skills files hold `u skill...` per line. Both formats accept
//! `#` comments and blank lines. Node labels are arbitrary strings and are
//! re-indexed densely as `0..n` in first-seen order.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::ops::Mul;
use std::path::{Path, PathBuf};

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

impl NodeId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<usize> for NodeId {
    fn from(i: usize) -> Self {
        NodeId(i as u32)
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkillId(pub u32);

impl SkillId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Label of an edge: friend (`+1`) or foe (`-1`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn is_positive(self) -> bool {
        self == Sign::Positive
    }

    pub fn is_negative(self) -> bool {
        self == Sign::Negative
    }

    pub fn value(self) -> i8 {
        match self {
            Sign::Positive => 1,
            Sign::Negative => -1,
        }
    }

    fn parse(token: &str) -> Option<Sign> {
        match token {
            "+1" | "1" => Some(Sign::Positive),
            "-1" => Some(Sign::Negative),
            _ => None,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Positive => "+1",
            Sign::Negative => "-1",
        })
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{}self-loop on node {label:?}", line_prefix(*.line))]
    SelfLoop { line: Option<usize>, label: String },
    #[error("{}edge ({u}, {v}) given with conflicting signs", line_prefix(*.line))]
    ConflictingSign {
        line: Option<usize>,
        u: String,
        v: String,
    },
    #[error("graph has {components} connected components; pass the largest-component option to keep only the largest")]
    Disconnected { components: usize },
    #[error("graph has no edges")]
    Empty,
    #[error("{}unknown node {label:?}", line_prefix(*.line))]
    UnknownNode { line: Option<usize>, label: String },
    #[error("unknown skill {0:?}")]
    UnknownSkill(String),
    #[error("skill universe is empty")]
    EmptySkillUniverse,
    #[error("task has no required skills")]
    EmptyTask,
}

fn line_prefix(line: Option<usize>) -> String {
    line.map(|l| format!("line {l}: ")).unwrap_or_default()
}

/// Options for [`load_graph`] and [`parse_graph`].
#[derive(Clone, Copy, Debug, Default)]
pub struct LoadOptions {
    /// Keep only the largest connected component instead of failing on a
    /// disconnected input.
    pub largest_component: bool,
}

/// An undirected signed graph with at most one edge per node pair.
///
/// Adjacency is stored in CSR form with each neighbor list sorted by id, so
/// edge lookups are a binary search.
#[derive(Clone, Debug)]
pub struct SignedGraph {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    offsets: Vec<usize>,
    targets: Vec<NodeId>,
    signs: Vec<Sign>,
    negative_edges: usize,
    dropped: HashSet<String>,
}

impl SignedGraph {
    /// Builds a graph over nodes `0..node_count` labelled by their index.
    /// Connectivity is not enforced here; use [`SignedGraph::is_connected`].
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<SignedGraph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize, Sign)>,
    {
        let mut builder = GraphBuilder::with_nodes(node_count);
        for (u, v, sign) in edges {
            builder.add_edge_ids(NodeId::from(u), NodeId::from(v), sign)?;
        }
        Ok(builder.build())
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn negative_edge_count(&self) -> usize {
        self.negative_edges
    }

    pub fn negative_fraction(&self) -> f64 {
        if self.edge_count() == 0 {
            0.0
        } else {
            self.negative_edges as f64 / self.edge_count() as f64
        }
    }

    /// Negative-edge share as a percentage truncated to one decimal, e.g.
    /// `"29.2%"` for 89 of 304 edges.
    pub fn negative_pct_display(&self) -> String {
        if self.edge_count() == 0 {
            return "0.0%".to_string();
        }
        let tenths = self.negative_edges * 1000 / self.edge_count();
        format!("{}.{}%", tenths / 10, tenths % 10)
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.labels.len() as u32).map(NodeId)
    }

    #[inline]
    pub fn degree(&self, u: NodeId) -> usize {
        self.offsets[u.index() + 1] - self.offsets[u.index()]
    }

    /// Neighbors of `u`, sorted by id.
    #[inline]
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.targets[self.offsets[u.index()]..self.offsets[u.index() + 1]]
    }

    /// Edge signs parallel to [`SignedGraph::neighbors`].
    #[inline]
    pub fn neighbor_signs(&self, u: NodeId) -> &[Sign] {
        &self.signs[self.offsets[u.index()]..self.offsets[u.index() + 1]]
    }

    pub fn adjacency(&self, u: NodeId) -> impl Iterator<Item = (NodeId, Sign)> + '_ {
        self.neighbors(u)
            .iter()
            .copied()
            .zip(self.neighbor_signs(u).iter().copied())
    }

    /// Sign of edge `(u, v)`, or `None` if the nodes are not adjacent.
    pub fn sign(&self, u: NodeId, v: NodeId) -> Option<Sign> {
        if u.index() >= self.node_count() {
            return None;
        }
        let nbrs = self.neighbors(u);
        nbrs.binary_search(&v)
            .ok()
            .map(|i| self.neighbor_signs(u)[i])
    }

    pub fn contains(&self, u: NodeId) -> bool {
        u.index() < self.node_count()
    }

    /// Every edge once, as `(u, v, sign)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId, Sign)> + '_ {
        self.nodes().flat_map(move |u| {
            self.adjacency(u)
                .filter(move |&(v, _)| u < v)
                .map(move |(v, s)| (u, v, s))
        })
    }

    pub fn label(&self, u: NodeId) -> &str {
        &self.labels[u.index()]
    }

    pub fn node_by_label(&self, label: &str) -> Option<NodeId> {
        self.index.get(label).copied()
    }

    /// Whether `label` named a node that was discarded when keeping only the
    /// largest component.
    pub fn was_dropped(&self, label: &str) -> bool {
        self.dropped.contains(label)
    }

    /// Component id per node; ids are assigned in order of lowest member.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let n = self.node_count();
        let mut comp = vec![usize::MAX; n];
        let mut count = 0;
        let mut queue = VecDeque::new();
        for start in 0..n {
            if comp[start] != usize::MAX {
                continue;
            }
            comp[start] = count;
            queue.push_back(NodeId::from(start));
            while let Some(u) = queue.pop_front() {
                for &v in self.neighbors(u) {
                    if comp[v.index()] == usize::MAX {
                        comp[v.index()] = count;
                        queue.push_back(v);
                    }
                }
            }
            count += 1;
        }
        (count, comp)
    }

    pub fn is_connected(&self) -> bool {
        self.components().0 <= 1
    }

    /// Unsigned BFS hop distances from `source`; `u32::MAX` marks unreachable
    /// nodes.
    pub fn bfs_distances(&self, source: NodeId) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.node_count()];
        let mut queue = VecDeque::new();
        dist[source.index()] = 0;
        queue.push_back(source);
        while let Some(u) = queue.pop_front() {
            let next = dist[u.index()] + 1;
            for &v in self.neighbors(u) {
                if dist[v.index()] == u32::MAX {
                    dist[v.index()] = next;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Longest shortest-path length, or `None` for a disconnected graph.
    pub fn diameter(&self) -> Option<u32> {
        use rayon::prelude::*;
        (0..self.node_count())
            .into_par_iter()
            .map(|u| {
                self.bfs_distances(NodeId::from(u))
                    .into_iter()
                    .try_fold(0u32, |acc, d| (d != u32::MAX).then_some(acc.max(d)))
            })
            .try_reduce(|| 0, |a, b| Some(a.max(b)))
    }

    /// Subgraph induced by the largest component, re-indexed in the original
    /// relative order. Ties go to the component holding the lowest node id.
    fn into_largest_component(self) -> SignedGraph {
        let (count, comp) = self.components();
        if count <= 1 {
            return self;
        }
        let mut sizes = vec![0usize; count];
        for &c in &comp {
            sizes[c] += 1;
        }
        let keep = (0..count).max_by_key(|&c| (sizes[c], std::cmp::Reverse(c))).unwrap();
        let mut builder = GraphBuilder::new();
        for u in self.nodes() {
            if comp[u.index()] == keep {
                builder.node(self.label(u));
            } else {
                builder.dropped.insert(self.label(u).to_string());
            }
        }
        for (u, v, s) in self.edges() {
            if comp[u.index()] == keep {
                builder
                    .add_edge(self.label(u), self.label(v), s)
                    .expect("edges of a valid graph stay valid");
            }
        }
        builder.dropped.extend(self.dropped);
        builder.build()
    }
}

/// Incremental constructor for [`SignedGraph`].
#[derive(Debug, Default)]
pub struct GraphBuilder {
    labels: Vec<String>,
    index: HashMap<String, NodeId>,
    edges: HashMap<(NodeId, NodeId), Sign>,
    dropped: HashSet<String>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builder pre-populated with nodes labelled `"0"..n`.
    pub fn with_nodes(n: usize) -> Self {
        let mut b = Self::new();
        for i in 0..n {
            b.node(&i.to_string());
        }
        b
    }

    /// Id for `label`, interning it if new.
    pub fn node(&mut self, label: &str) -> NodeId {
        if let Some(&id) = self.index.get(label) {
            return id;
        }
        let id = NodeId::from(self.labels.len());
        self.labels.push(label.to_string());
        self.index.insert(label.to_string(), id);
        id
    }

    /// Adds an edge by label. Returns `false` when an identical edge was
    /// already present.
    pub fn add_edge(&mut self, u: &str, v: &str, sign: Sign) -> Result<bool, GraphError> {
        self.add_edge_at(u, v, sign, None)
    }

    pub fn add_edge_ids(&mut self, u: NodeId, v: NodeId, sign: Sign) -> Result<bool, GraphError> {
        while self.labels.len() <= u.index().max(v.index()) {
            let next = self.labels.len().to_string();
            self.node(&next);
        }
        self.insert(u, v, sign, None)
    }

    fn add_edge_at(
        &mut self,
        u: &str,
        v: &str,
        sign: Sign,
        line: Option<usize>,
    ) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop {
                line,
                label: u.to_string(),
            });
        }
        let (a, b) = (self.node(u), self.node(v));
        self.insert(a, b, sign, line)
    }

    fn insert(&mut self, u: NodeId, v: NodeId, sign: Sign, line: Option<usize>) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop {
                line,
                label: self.labels[u.index()].clone(),
            });
        }
        let key = (u.min(v), u.max(v));
        match self.edges.get(&key) {
            Some(&existing) if existing == sign => Ok(false),
            Some(_) => Err(GraphError::ConflictingSign {
                line,
                u: self.labels[u.index()].clone(),
                v: self.labels[v.index()].clone(),
            }),
            None => {
                self.edges.insert(key, sign);
                Ok(true)
            }
        }
    }

    pub fn build(self) -> SignedGraph {
        let n = self.labels.len();
        let mut lists: Vec<Vec<(NodeId, Sign)>> = vec![Vec::new(); n];
        let mut negative_edges = 0;
        for (&(u, v), &s) in &self.edges {
            lists[u.index()].push((v, s));
            lists[v.index()].push((u, s));
            if s.is_negative() {
                negative_edges += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut targets = Vec::with_capacity(2 * self.edges.len());
        let mut signs = Vec::with_capacity(2 * self.edges.len());
        offsets.push(0);
        for mut list in lists {
            list.sort_unstable_by_key(|&(v, _)| v);
            for (v, s) in list {
                targets.push(v);
                signs.push(s);
            }
            offsets.push(targets.len());
        }
        SignedGraph {
            labels: self.labels,
            index: self.index,
            offsets,
            targets,
            signs,
            negative_edges,
            dropped: self.dropped,
        }
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn open(path: &Path) -> Result<BufReader<File>, GraphError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| GraphError::Io {
            path: path.to_path_buf(),
            source,
        })
}

pub fn load_graph(path: impl AsRef<Path>, options: &LoadOptions) -> Result<SignedGraph, GraphError> {
    let path = path.as_ref();
    parse_graph(open(path)?, options).map_err(|e| match e {
        GraphError::Io { source, .. } => GraphError::Io {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

/// Reads a graph from edge-list text. Identical duplicate edges are skipped
/// with a warning; conflicting duplicates and self-loops are errors.
pub fn parse_graph<R: BufRead>(reader: R, options: &LoadOptions) -> Result<SignedGraph, GraphError> {
    let mut builder = GraphBuilder::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|source| GraphError::Io {
            path: PathBuf::new(),
            source,
        })?;
        let fields: Vec<&str> = strip_comment(&line).split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line: lineno,
                message: format!("expected `u v sign`, found {} fields", fields.len()),
            });
        }
        let sign = Sign::parse(fields[2]).ok_or_else(|| GraphError::Parse {
            line: lineno,
            message: format!("invalid sign {:?}", fields[2]),
        })?;
        if !builder.add_edge_at(fields[0], fields[1], sign, Some(lineno))? {
            log::warn!("line {lineno}: duplicate edge ({}, {}) ignored", fields[0], fields[1]);
        }
    }
    if builder.edges.is_empty() {
        return Err(GraphError::Empty);
    }
    let graph = builder.build();
    let (components, _) = graph.components();
    if components > 1 {
        if !options.largest_component {
            return Err(GraphError::Disconnected { components });
        }
        let kept = graph.into_largest_component();
        log::info!(
            "kept largest component: {} nodes, {} edges",
            kept.node_count(),
            kept.edge_count()
        );
        return Ok(kept);
    }
    Ok(graph)
}

/// Writes the graph as `u v sign` lines using the original labels.
pub fn write_graph<W: Write>(graph: &SignedGraph, mut out: W) -> io::Result<()> {
    for (u, v, s) in graph.edges() {
        writeln!(out, "{} {} {}", graph.label(u), graph.label(v), s)?;
    }
    Ok(())
}

/// Skills held by each user together with the inverted skill index.
#[derive(Clone, Debug)]
pub struct SkillAssignment {
    labels: Vec<String>,
    index: HashMap<String, SkillId>,
    skills_of: Vec<Vec<SkillId>>,
    users_with: Vec<Vec<NodeId>>,
}

impl SkillAssignment {
    /// Builds the assignment from per-user skill lists over a universe of
    /// `labels.len()` skills. Lists are sorted and deduplicated.
    pub fn new(labels: Vec<String>, mut skills_of: Vec<Vec<SkillId>>) -> Result<Self, GraphError> {
        if labels.is_empty() {
            return Err(GraphError::EmptySkillUniverse);
        }
        let mut users_with = vec![Vec::new(); labels.len()];
        for (u, list) in skills_of.iter_mut().enumerate() {
            list.sort_unstable();
            list.dedup();
            for s in list.iter() {
                let holders = users_with
                    .get_mut(s.index())
                    .ok_or_else(|| GraphError::UnknownSkill(s.0.to_string()))?;
                holders.push(NodeId::from(u));
            }
        }
        let index = labels
            .iter()
            .enumerate()
            .map(|(i, l)| (l.clone(), SkillId(i as u32)))
            .collect();
        Ok(SkillAssignment {
            labels,
            index,
            skills_of,
            users_with,
        })
    }

    pub fn node_count(&self) -> usize {
        self.skills_of.len()
    }

    pub fn universe_size(&self) -> usize {
        self.labels.len()
    }

    pub fn skill_ids(&self) -> impl ExactSizeIterator<Item = SkillId> {
        (0..self.labels.len() as u32).map(SkillId)
    }

    pub fn skills_of(&self, u: NodeId) -> &[SkillId] {
        &self.skills_of[u.index()]
    }

    pub fn users_with(&self, s: SkillId) -> &[NodeId] {
        &self.users_with[s.index()]
    }

    pub fn has_skill(&self, u: NodeId, s: SkillId) -> bool {
        self.skills_of[u.index()].binary_search(&s).is_ok()
    }

    pub fn skill_label(&self, s: SkillId) -> &str {
        &self.labels[s.index()]
    }

    pub fn skill_by_label(&self, label: &str) -> Option<SkillId> {
        self.index.get(label).copied()
    }

    pub fn contains(&self, s: SkillId) -> bool {
        s.index() < self.labels.len()
    }
}

pub fn load_skills(path: impl AsRef<Path>, graph: &SignedGraph) -> Result<SkillAssignment, GraphError> {
    let path = path.as_ref();
    parse_skills(open(path)?, graph)
}

/// Reads `u skill...` lines. Users missing from the file hold no skills.
/// Labels of nodes removed by the largest-component option are skipped.
pub fn parse_skills<R: BufRead>(reader: R, graph: &SignedGraph) -> Result<SkillAssignment, GraphError> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, SkillId> = HashMap::new();
    let mut skills_of = vec![Vec::new(); graph.node_count()];
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|source| GraphError::Io {
            path: PathBuf::new(),
            source,
        })?;
        let mut fields = strip_comment(&line).split_whitespace();
        let Some(user) = fields.next() else { continue };
        let u = match graph.node_by_label(user) {
            Some(u) => u,
            None if graph.was_dropped(user) => continue,
            None => {
                return Err(GraphError::UnknownNode {
                    line: Some(lineno),
                    label: user.to_string(),
                })
            }
        };
        for skill in fields {
            let id = *index.entry(skill.to_string()).or_insert_with(|| {
                labels.push(skill.to_string());
                SkillId(labels.len() as u32 - 1)
            });
            skills_of[u.index()].push(id);
        }
    }
    SkillAssignment::new(labels, skills_of)
}

/// Writes `u skill...` lines for every user holding at least one skill.
pub fn write_skills<W: Write>(graph: &SignedGraph, skills: &SkillAssignment, mut out: W) -> io::Result<()> {
    for u in graph.nodes() {
        let held = skills.skills_of(u);
        if held.is_empty() {
            continue;
        }
        write!(out, "{}", graph.label(u))?;
        for &s in held {
            write!(out, " {}", skills.skill_label(s))?;
        }
        writeln!(out)?;
    }
    Ok(())
}

/// A nonempty set of required skills.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Task {
    required: Vec<SkillId>,
}

impl Task {
    pub fn new<I>(required: I, skills: &SkillAssignment) -> Result<Task, GraphError>
    where
        I: IntoIterator<Item = SkillId>,
    {
        let mut required: Vec<SkillId> = required.into_iter().collect();
        required.sort_unstable();
        required.dedup();
        if required.is_empty() {
            return Err(GraphError::EmptyTask);
        }
        if let Some(s) = required.iter().find(|s| !skills.contains(**s)) {
            return Err(GraphError::UnknownSkill(s.0.to_string()));
        }
        Ok(Task { required })
    }

    pub fn from_labels<S: AsRef<str>>(labels: &[S], skills: &SkillAssignment) -> Result<Task, GraphError> {
        let ids = labels
            .iter()
            .map(|l| {
                skills
                    .skill_by_label(l.as_ref())
                    .ok_or_else(|| GraphError::UnknownSkill(l.as_ref().to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Task::new(ids, skills)
    }

    /// Required skills in ascending id order.
    pub fn skills(&self) -> &[SkillId] {
        &self.required
    }

    pub fn len(&self) -> usize {
        self.required.len()
    }

    pub fn is_empty(&self) -> bool {
        self.required.is_empty()
    }

    pub fn contains(&self, s: SkillId) -> bool {
        self.required.binary_search(&s).is_ok()
    }
}
