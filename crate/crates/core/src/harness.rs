//! Synthetic data and the experiment pipelines: relation statistics, team
//! formation over random tasks, and the comparison against unsigned team
//! formation.
//!
//! All randomness is derived from a single seed. Independent consumers draw
//! from separate ChaCha streams of that seed, so adding a task size or a
//! relation kind never perturbs the draws of another.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Geometric, Zipf};
use rayon::prelude::*;
use thiserror::Error;

use crate::compat::{
    build_relation, CompatError, CompatibilityRelation, RelationKind, RelationOptions, Row, RowComputer,
    SkillPairMatrix, SpCounter,
};
use crate::graph::{
    load_graph, load_skills, GraphBuilder, GraphError, LoadOptions, NodeId, Sign, SignedGraph, SkillAssignment,
    SkillId, Task,
};
use crate::team::{rarest_first_unsigned, unsigned_transform, PolicyConfig, TeamError, TeamFormer, UnsignedMode, UserPolicy};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Compat(#[from] CompatError),
    #[error(transparent)]
    Team(#[from] TeamError),
    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },
    #[error("invalid experiment spec: {0}")]
    Spec(String),
    #[error("invalid generator parameters: {0}")]
    Generator(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

const ZIPF_STREAM: u64 = 2;
const TASK_STREAM: u64 = 1 << 32;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Connected graph with exactly `edges` edges, `negative_edges` of them
/// negative: a random spanning tree plus uniformly random extra pairs.
/// Nodes are labelled `"0".."n"`.
pub fn random_connected_signed_graph(
    nodes: usize,
    edges: usize,
    negative_edges: usize,
    seed: u64,
) -> Result<SignedGraph, HarnessError> {
    let max_edges = nodes * nodes.saturating_sub(1) / 2;
    if nodes == 0 || edges + 1 < nodes || edges > max_edges || negative_edges > edges {
        return Err(HarnessError::Generator(format!(
            "{nodes} nodes, {edges} edges, {negative_edges} negative"
        )));
    }
    let mut rng = stream_rng(seed, 0);
    let mut order: Vec<u32> = (0..nodes as u32).collect();
    order.shuffle(&mut rng);

    let mut seen = HashSet::with_capacity(edges);
    let mut list = Vec::with_capacity(edges);
    let key = |a: u32, b: u32| if a < b { (a, b) } else { (b, a) };
    for i in 1..nodes {
        let parent = order[rng.random_range(0..i)];
        let e = key(order[i], parent);
        seen.insert(e);
        list.push(e);
    }
    while list.len() < edges {
        let a = rng.random_range(0..nodes as u32);
        let b = rng.random_range(0..nodes as u32);
        if a != b && seen.insert(key(a, b)) {
            list.push(key(a, b));
        }
    }

    let mut signs = vec![Sign::Positive; edges];
    for i in index::sample(&mut rng, edges, negative_edges) {
        signs[i] = Sign::Negative;
    }
    let mut b = GraphBuilder::with_nodes(nodes);
    for (&(u, v), s) in list.iter().zip(signs) {
        b.add_edge_ids(NodeId(u), NodeId(v), s)?;
    }
    Ok(b.build())
}

/// Erdős–Rényi graph `G(n, p)` conditioned on connectivity by rejection;
/// each edge is negative with probability `negative_fraction`.
///
/// After 1000 rejected draws the last draw is connected with positive edges
/// between its components instead.
pub fn gnp_connected<R: Rng>(n: usize, p: f64, negative_fraction: f64, rng: &mut R) -> SignedGraph {
    assert!(n >= 1, "a graph needs at least one node");
    let draw = |rng: &mut R| {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random_bool(p) {
                    let s = if rng.random_bool(negative_fraction) {
                        Sign::Negative
                    } else {
                        Sign::Positive
                    };
                    edges.push((u, v, s));
                }
            }
        }
        edges
    };
    let mut edges = Vec::new();
    for _ in 0..1000 {
        edges = draw(rng);
        let g = SignedGraph::from_edges(n, edges.iter().copied()).expect("generated edges are simple");
        if g.is_connected() {
            return g;
        }
    }
    let g = SignedGraph::from_edges(n, edges.iter().copied()).expect("generated edges are simple");
    let (_, comp) = g.components();
    let mut first_of = std::collections::BTreeMap::new();
    for (u, &c) in comp.iter().enumerate() {
        first_of.entry(c).or_insert(u);
    }
    let reps: Vec<usize> = first_of.into_values().collect();
    for w in reps.windows(2) {
        edges.push((w[0], w[1], Sign::Positive));
    }
    SignedGraph::from_edges(n, edges).expect("component links join distinct components")
}

/// How many distinct skills each synthetic user receives.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PerUserSkills {
    Fixed(usize),
    /// Geometric on `{1, 2, ...}` with the given mean (at least 1).
    Geometric { mean: f64 },
}

impl Default for PerUserSkills {
    fn default() -> Self {
        PerUserSkills::Geometric { mean: 3.0 }
    }
}

/// Synthetic skills `s0..s{n_skills}` where skill `s{r}` has Zipf rank
/// `r + 1`. Every user draws a skill count from `per_user`, then that many
/// distinct skills from the Zipf law, so each occurrence of a skill lands on
/// a uniformly random user.
pub fn generate_zipf_skills(
    n_users: usize,
    n_skills: usize,
    exponent: f64,
    per_user: PerUserSkills,
    seed: u64,
) -> Result<SkillAssignment, HarnessError> {
    if n_skills == 0 || exponent.is_nan() || exponent <= 0.0 {
        return Err(HarnessError::Generator(format!(
            "{n_skills} skills with exponent {exponent}"
        )));
    }
    let zipf = Zipf::new(n_skills as f64, exponent).map_err(|e| HarnessError::Generator(e.to_string()))?;
    let count = match per_user {
        PerUserSkills::Fixed(c) => CountDist::Fixed(c),
        PerUserSkills::Geometric { mean } if mean >= 1.0 => {
            CountDist::Geometric(Geometric::new(1.0 / mean).map_err(|e| HarnessError::Generator(e.to_string()))?)
        }
        PerUserSkills::Geometric { mean } => {
            return Err(HarnessError::Generator(format!("mean skill count {mean} is below 1")))
        }
    };

    let mut rng = stream_rng(seed, ZIPF_STREAM);
    let mut skills_of = Vec::with_capacity(n_users);
    for _ in 0..n_users {
        let want = match &count {
            CountDist::Fixed(c) => *c,
            CountDist::Geometric(g) => 1 + g.sample(&mut rng) as usize,
        }
        .min(n_skills);
        let mut held: Vec<SkillId> = Vec::with_capacity(want);
        // heavy tails can make the last distinct skill very unlikely
        let mut tries = 0;
        while held.len() < want && tries < 64 * want + 64 {
            let s = SkillId(zipf.sample(&mut rng) as u32 - 1);
            if !held.contains(&s) {
                held.push(s);
            }
            tries += 1;
        }
        skills_of.push(held);
    }
    let labels = (0..n_skills).map(|i| format!("s{i}")).collect();
    Ok(SkillAssignment::new(labels, skills_of)?)
}

enum CountDist {
    Fixed(usize),
    Geometric(Geometric),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZipfSpec {
    pub n_skills: usize,
    pub exponent: f64,
    pub per_user: PerUserSkills,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SkillSource {
    File(PathBuf),
    Zipf(ZipfSpec),
}

/// Everything an experiment run needs.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub graph_path: PathBuf,
    pub skills: SkillSource,
    pub kinds: Vec<RelationKind>,
    pub task_sizes: Vec<usize>,
    pub tasks_per_size: usize,
    pub seed: u64,
    pub policies: Vec<PolicyConfig>,
    pub relation: RelationOptions,
    pub largest_component: bool,
}

impl ExperimentSpec {
    /// Spec with the default protocol: every relation kind, task sizes
    /// 2 to 10 in steps of two, 50 tasks per size, and the LCMD, LCMC,
    /// RFMD and RFMC policies.
    pub fn new(graph_path: impl Into<PathBuf>, skills: SkillSource, seed: u64) -> Self {
        ExperimentSpec {
            graph_path: graph_path.into(),
            skills,
            kinds: RelationKind::ALL.to_vec(),
            task_sizes: vec![2, 4, 6, 8, 10],
            tasks_per_size: 50,
            seed,
            policies: ["LCMD", "LCMC", "RFMD", "RFMC"]
                .iter()
                .map(|c| c.parse().expect("built-in policy codes parse"))
                .collect(),
            relation: RelationOptions::default(),
            largest_component: false,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |m: &str| Err(HarnessError::Spec(m.to_string()));
        if self.tasks_per_size == 0 {
            return bad("tasks_per_size must be at least 1");
        }
        if self.task_sizes.is_empty() || self.task_sizes.contains(&0) {
            return bad("task sizes must be a nonempty list of positive sizes");
        }
        if self.kinds.is_empty() {
            return bad("at least one relation kind is required");
        }
        Ok(())
    }

    /// Parses a `key = value` config. Lists are comma separated; `#` starts
    /// a comment. Recognised keys: `graph`, `skills`, `zipf_skills`,
    /// `zipf_exponent`, `zipf_mean_skills`, `kinds`, `task_sizes`,
    /// `tasks_per_size`, `seed`, `policies`, `sbp_max_path_len`,
    /// `sbp_max_nodes`, `largest_component`. Relative paths resolve against
    /// `base`.
    pub fn parse_config(text: &str, base: &Path) -> Result<Self, HarnessError> {
        let mut graph = None;
        let mut skills_file = None;
        let mut zipf = ZipfSpec {
            n_skills: 0,
            exponent: 1.0,
            per_user: PerUserSkills::default(),
        };
        let mut seed = None;
        let mut spec = ExperimentSpec::new("", SkillSource::File(PathBuf::new()), 0);

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let err = |message: String| HarnessError::Config { line, message };
            let (key, value) = body
                .split_once('=')
                .ok_or_else(|| err(format!("expected key = value, got {body:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            fn num<T: FromStr>(v: &str, line: usize) -> Result<T, HarnessError> {
                v.parse().map_err(|_| HarnessError::Config {
                    line,
                    message: format!("bad number {v:?}"),
                })
            }
            match key {
                "graph" => graph = Some(base.join(value)),
                "skills" => skills_file = Some(base.join(value)),
                "zipf_skills" => zipf.n_skills = num(value, line)?,
                "zipf_exponent" => zipf.exponent = num(value, line)?,
                "zipf_mean_skills" => zipf.per_user = PerUserSkills::Geometric { mean: num(value, line)? },
                "seed" => seed = Some(num(value, line)?),
                "tasks_per_size" => spec.tasks_per_size = num(value, line)?,
                "task_sizes" => spec.task_sizes = list(value, |v| num(v, line))?,
                "kinds" => spec.kinds = list(value, |v| v.parse().map_err(|e: CompatError| err(e.to_string())))?,
                "policies" => spec.policies = list(value, |v| v.parse().map_err(|e: TeamError| err(e.to_string())))?,
                "sbp_max_path_len" => spec.relation.sbp_max_path_len = Some(num(value, line)?),
                "sbp_max_nodes" => spec.relation.sbp_max_nodes = num(value, line)?,
                "largest_component" => spec.largest_component = num(value, line)?,
                _ => return Err(err(format!("unknown key {key:?}"))),
            }
        }

        let missing = |k: &str| HarnessError::Spec(format!("config is missing {k}"));
        spec.graph_path = graph.ok_or_else(|| missing("graph"))?;
        spec.seed = seed.ok_or_else(|| missing("seed"))?;
        spec.skills = match (skills_file, zipf.n_skills) {
            (Some(path), 0) => SkillSource::File(path),
            (None, n) if n > 0 => SkillSource::Zipf(zipf),
            (Some(_), _) => return Err(HarnessError::Spec("give either skills or zipf_skills, not both".into())),
            (None, _) => return Err(missing("skills or zipf_skills")),
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn load_config(path: impl AsRef<Path>) -> Result<Self, HarnessError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::parse_config(&text, path.parent().unwrap_or(Path::new(".")))
    }

    /// Configured policies, with a random-user policy appended if none is
    /// present. Policies without a seed take the spec's seed.
    pub fn effective_policies(&self) -> Vec<PolicyConfig> {
        let mut out: Vec<PolicyConfig> = self
            .policies
            .iter()
            .map(|p| if p.seed.is_some() { *p } else { p.with_seed(self.seed) })
            .collect();
        if !out.iter().any(|p| p.user_policy == UserPolicy::Random) {
            out.push(PolicyConfig::random(self.seed));
        }
        out
    }
}

fn list<T>(value: &str, parse: impl Fn(&str) -> Result<T, HarnessError>) -> Result<Vec<T>, HarnessError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(parse)
        .collect()
}

/// A loaded graph with its skills.
#[derive(Clone, Debug)]
pub struct Dataset {
    pub graph: SignedGraph,
    pub skills: SkillAssignment,
}

impl Dataset {
    pub fn load(spec: &ExperimentSpec) -> Result<Self, HarnessError> {
        let opts = LoadOptions {
            largest_component: spec.largest_component,
        };
        let graph = load_graph(&spec.graph_path, &opts)?;
        let skills = match &spec.skills {
            SkillSource::File(p) => load_skills(p, &graph)?,
            SkillSource::Zipf(z) => generate_zipf_skills(graph.node_count(), z.n_skills, z.exponent, z.per_user, spec.seed)?,
        };
        Ok(Dataset { graph, skills })
    }
}

/// Skills held by at least one user.
pub fn held_skills(skills: &SkillAssignment) -> Vec<SkillId> {
    skills.skill_ids().filter(|&s| !skills.users_with(s).is_empty()).collect()
}

/// `count` tasks of `k` distinct skills, each drawn uniformly from the
/// skills that have a holder.
pub fn sample_tasks<R: Rng>(
    skills: &SkillAssignment,
    k: usize,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Task>, HarnessError> {
    let pool = held_skills(skills);
    if k == 0 || k > pool.len() {
        return Err(HarnessError::Spec(format!(
            "cannot draw {k} distinct skills from {} held skills",
            pool.len()
        )));
    }
    (0..count)
        .map(|_| {
            let picked = index::sample(rng, pool.len(), k).into_iter().map(|i| pool[i]);
            Ok(Task::new(picked, skills)?)
        })
        .collect()
}

/// Tasks of size `k` for `spec`, identical across relation kinds.
pub fn tasks_for(spec: &ExperimentSpec, skills: &SkillAssignment, k: usize) -> Result<Vec<Task>, HarnessError> {
    sample_tasks(skills, k, spec.tasks_per_size, &mut stream_rng(spec.seed, TASK_STREAM | k as u64))
}

/// Summary of one relation kind.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatStatsRow {
    pub kind: RelationKind,
    /// Share of unordered pairs of distinct users that are compatible.
    pub pct_users: f64,
    /// Share of unordered pairs of distinct held skills whose holders
    /// include a compatible pair of users (one user holding both counts).
    pub pct_skills: f64,
    /// Mean distance over compatible pairs of distinct users.
    pub avg_distance: f64,
    /// Pairs left undecided by a truncated exact search.
    pub unknown_pairs: u64,
}

#[derive(Clone)]
struct Tally {
    pairs: u64,
    dist_sum: u64,
    unknown: u64,
    skill_pairs: SkillPairMatrix,
}

impl Tally {
    fn new(universe: usize) -> Self {
        Tally {
            pairs: 0,
            dist_sum: 0,
            unknown: 0,
            skill_pairs: SkillPairMatrix::new(universe),
        }
    }

    fn add(&mut self, row: &Row, skills: &SkillAssignment) {
        let u = row.source().index();
        for v in (u + 1)..row.len() {
            match row.get(NodeId::from(v)) {
                crate::compat::Compat::Compatible(d) => {
                    self.pairs += 1;
                    self.dist_sum += d as u64;
                }
                crate::compat::Compat::Unknown => self.unknown += 1,
                crate::compat::Compat::Incompatible => {}
            }
        }
        self.skill_pairs.add_row(row, skills);
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.pairs += other.pairs;
        self.dist_sum += other.dist_sum;
        self.unknown += other.unknown;
        self.skill_pairs.merge(&other.skill_pairs);
        self
    }
}

/// Runs `rows_of` for every source in parallel, one tally per produced row
/// slot. Tallies are sums and unions, so the result is independent of how
/// the work is split.
fn tally_rows<F>(graph: &SignedGraph, skills: &SkillAssignment, slots: usize, rows_of: F) -> Result<Vec<Tally>, HarnessError>
where
    F: Fn(&mut SpCounter, NodeId) -> Result<Vec<Row>, CompatError> + Sync,
{
    let fresh = || vec![Tally::new(skills.universe_size()); slots];
    let nodes: Vec<NodeId> = graph.nodes().collect();
    nodes
        .par_iter()
        .try_fold(
            || (SpCounter::new(graph), fresh()),
            |(mut counter, mut tallies), &u| {
                for (t, row) in tallies.iter_mut().zip(rows_of(&mut counter, u)?) {
                    t.add(&row, skills);
                }
                Ok::<_, CompatError>((counter, tallies))
            },
        )
        .map(|r| r.map(|(_, t)| t))
        .try_reduce(fresh, |a, b| Ok(a.into_iter().zip(b).map(|(x, y)| x.merge(y)).collect()))
        .map_err(HarnessError::from)
}

fn pct(num: u64, den: u64) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

fn finish(kind: RelationKind, t: &Tally, n: usize, held: usize) -> CompatStatsRow {
    let user_pairs = (n * n.saturating_sub(1) / 2) as u64;
    let skill_pairs = (held * held.saturating_sub(1) / 2) as u64;
    CompatStatsRow {
        kind,
        pct_users: pct(t.pairs, user_pairs),
        pct_skills: pct(t.skill_pairs.distinct_pair_count() as u64, skill_pairs),
        avg_distance: if t.pairs == 0 { 0.0 } else { t.dist_sum as f64 / t.pairs as f64 },
        unknown_pairs: t.unknown,
    }
}

/// Statistics for each of `kinds`, in the given order.
///
/// The shortest-path kinds share one counting pass per source and, like
/// `DPE` and `NNE`, are never materialized; `SBP` and `SBPH` are built as
/// full relations first because their rows are merged across directions.
pub fn run_compat_stats(
    dataset: &Dataset,
    kinds: &[RelationKind],
    options: &RelationOptions,
) -> Result<Vec<CompatStatsRow>, HarnessError> {
    let (g, sk) = (&dataset.graph, &dataset.skills);
    let n = g.node_count();
    let held = held_skills(sk).len();
    let mut out: Vec<Option<CompatStatsRow>> = vec![None; kinds.len()];

    let sp: Vec<usize> = (0..kinds.len()).filter(|&i| kinds[i].is_shortest_path()).collect();
    if !sp.is_empty() {
        let sp_kinds: Vec<RelationKind> = sp.iter().map(|&i| kinds[i]).collect();
        let tallies = tally_rows(g, sk, sp.len(), |counter, u| {
            let counts = counter.count(u)?;
            Ok(sp_kinds.iter().map(|&k| Row::from_counts(counts, k)).collect())
        })?;
        for (&i, t) in sp.iter().zip(&tallies) {
            out[i] = Some(finish(kinds[i], t, n, held));
        }
    }

    for (i, &kind) in kinds.iter().enumerate() {
        if out[i].is_some() {
            continue;
        }
        let tally = match kind {
            RelationKind::Dpe | RelationKind::Nne => {
                let computer = RowComputer::new(g, kind, options)?;
                tally_rows(g, sk, 1, |_, u| Ok(vec![computer.row(u)?]))?
            }
            _ => {
                let relation = build_relation(g, kind, options)?;
                tally_rows(g, sk, 1, |_, u| Ok(vec![relation.row(u)]))?
            }
        };
        out[i] = Some(finish(kind, &tally[0], n, held));
    }
    Ok(out.into_iter().map(|r| r.expect("every kind is computed")).collect())
}

pub const STATS_CSV_HEADER: &str = "kind,pct_users,pct_skills,avg_dist";

pub fn write_stats_csv<W: Write>(mut out: W, rows: &[CompatStatsRow]) -> io::Result<()> {
    writeln!(out, "{STATS_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{:.2},{:.2},{:.2}", r.kind, r.pct_users, r.pct_skills, r.avg_distance)?;
    }
    Ok(())
}

/// Aligned plain-text rendering of the statistics.
pub fn format_stats_table(rows: &[CompatStatsRow]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<6} {:>12} {:>12} {:>10} {:>10}", "kind", "comp. users", "comp. skills", "avg dist", "unknown");
    for r in rows {
        let _ = writeln!(
            s,
            "{:<6} {:>11.2}% {:>11.2}% {:>10.2} {:>10}",
            r.kind.name(),
            r.pct_users,
            r.pct_skills,
            r.avg_distance,
            r.unknown_pairs
        );
    }
    s
}

/// Outcome of one policy on the tasks of one size under one relation.
#[derive(Clone, Debug, PartialEq)]
pub struct TeamExperimentRow {
    pub kind: RelationKind,
    pub k: usize,
    /// Policy code, or `MAX` for the pairwise-compatible-skills bound.
    pub policy: String,
    pub tasks: usize,
    pub solved: usize,
    pub solution_pct: f64,
    /// Mean cost over solved tasks; `None` when nothing was solved or for
    /// the `MAX` row.
    pub avg_cost: Option<f64>,
}

/// Pairs of skills connected by some compatible pair of holders.
pub fn skill_pair_matrix(relation: &CompatibilityRelation, skills: &SkillAssignment) -> SkillPairMatrix {
    (0..relation.node_count())
        .into_par_iter()
        .fold(
            || SkillPairMatrix::new(skills.universe_size()),
            |mut m, u| {
                m.add_row(&relation.row(NodeId::from(u)), skills);
                m
            },
        )
        .reduce(
            || SkillPairMatrix::new(skills.universe_size()),
            |mut a, b| {
                a.merge(&b);
                a
            },
        )
}

/// Whether every two distinct skills of `task` are connected in `matrix`.
pub fn task_is_pairwise_compatible(task: &Task, matrix: &SkillPairMatrix) -> bool {
    let s = task.skills();
    s.iter()
        .enumerate()
        .all(|(i, &a)| s[i + 1..].iter().all(|&b| matrix.contains(a, b)))
}

/// Forms a team for every task, size and policy under each relation kind.
/// Tasks are shared by all kinds. Each `(kind, k)` group starts with its
/// `MAX` row.
pub fn run_team_experiments(dataset: &Dataset, spec: &ExperimentSpec) -> Result<Vec<TeamExperimentRow>, HarnessError> {
    spec.validate()?;
    let (g, sk) = (&dataset.graph, &dataset.skills);
    let tasks: Vec<(usize, Vec<Task>)> = spec
        .task_sizes
        .iter()
        .map(|&k| Ok((k, tasks_for(spec, sk, k)?)))
        .collect::<Result<_, HarnessError>>()?;
    let policies = spec.effective_policies();

    let mut rows = Vec::new();
    for &kind in &spec.kinds {
        let relation = build_relation(g, kind, &spec.relation)?;
        let former = TeamFormer::new(&relation, sk)?;
        former.degrees()?;
        let matrix = skill_pair_matrix(&relation, sk);
        for (k, list) in &tasks {
            let bound = list.iter().filter(|t| task_is_pairwise_compatible(t, &matrix)).count();
            rows.push(TeamExperimentRow {
                kind,
                k: *k,
                policy: "MAX".to_string(),
                tasks: list.len(),
                solved: bound,
                solution_pct: pct(bound as u64, list.len() as u64),
                avg_cost: None,
            });
            for policy in &policies {
                let results: Vec<Option<u32>> = list
                    .par_iter()
                    .map(|t| match former.form(t, policy) {
                        Ok(team) => Ok(Some(team.cost())),
                        Err(e) if e.is_no_team() => Ok(None),
                        Err(e) => Err(e),
                    })
                    .collect::<Result<_, TeamError>>()?;
                let costs: Vec<u64> = results.iter().flatten().map(|&c| c as u64).collect();
                rows.push(TeamExperimentRow {
                    kind,
                    k: *k,
                    policy: policy.code(),
                    tasks: list.len(),
                    solved: costs.len(),
                    solution_pct: pct(costs.len() as u64, list.len() as u64),
                    avg_cost: (!costs.is_empty()).then(|| costs.iter().sum::<u64>() as f64 / costs.len() as f64),
                });
            }
        }
    }
    Ok(rows)
}

pub const TEAM_EXPERIMENT_CSV_HEADER: &str = "kind,k,policy,solution_pct,avg_cost";

/// `avg_cost` is empty when undefined.
pub fn write_team_experiments_csv<W: Write>(mut out: W, rows: &[TeamExperimentRow]) -> io::Result<()> {
    writeln!(out, "{TEAM_EXPERIMENT_CSV_HEADER}")?;
    for r in rows {
        let cost = r.avg_cost.map(|c| format!("{c:.2}")).unwrap_or_default();
        writeln!(out, "{},{},{},{:.2},{}", r.kind, r.k, r.policy, r.solution_pct, cost)?;
    }
    Ok(())
}

/// Share of unsigned teams that are compatible under one relation kind.
#[derive(Clone, Debug, PartialEq)]
pub struct BaselineRow {
    pub mode: UnsignedMode,
    pub kind: RelationKind,
    /// Tasks for which the unsigned method returned a team.
    pub teams: usize,
    pub pct_compatible: f64,
}

/// Forms teams with the unsigned rarest-first method on both sign-free
/// views of the graph, over the spec's tasks of every size, and checks each
/// team against every relation kind of the original signed graph.
pub fn run_baseline_comparison(dataset: &Dataset, spec: &ExperimentSpec) -> Result<Vec<BaselineRow>, HarnessError> {
    spec.validate()?;
    let (g, sk) = (&dataset.graph, &dataset.skills);
    let mut tasks = Vec::new();
    for &k in &spec.task_sizes {
        tasks.extend(tasks_for(spec, sk, k)?);
    }
    let relations = spec
        .kinds
        .iter()
        .map(|&k| build_relation(g, k, &spec.relation))
        .collect::<Result<Vec<_>, _>>()?;

    let mut rows = Vec::new();
    for mode in UnsignedMode::ALL {
        let view = unsigned_transform(g, mode);
        let teams: Vec<_> = tasks
            .par_iter()
            .map(|t| match rarest_first_unsigned(&view, sk, t) {
                Ok(team) => Ok(Some(team)),
                Err(e) if e.is_no_team() => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>, TeamError>>()?
            .into_iter()
            .flatten()
            .collect();
        for relation in &relations {
            let ok = teams.iter().filter(|t| t.is_compatible_under(relation)).count();
            rows.push(BaselineRow {
                mode,
                kind: relation.kind(),
                teams: teams.len(),
                pct_compatible: pct(ok as u64, teams.len() as u64),
            });
        }
    }
    Ok(rows)
}

pub const BASELINE_CSV_HEADER: &str = "mode,kind,pct_compatible,teams";

pub fn write_baseline_csv<W: Write>(mut out: W, rows: &[BaselineRow]) -> io::Result<()> {
    writeln!(out, "{BASELINE_CSV_HEADER}")?;
    for r in rows {
        writeln!(out, "{},{},{:.2},{}", r.mode, r.kind, r.pct_compatible, r.teams)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_hits_exact_counts() {
        let g = random_connected_signed_graph(50, 120, 30, 7).unwrap();
        assert_eq!((g.node_count(), g.edge_count(), g.negative_edge_count()), (50, 120, 30));
        assert!(g.is_connected());
        let h = random_connected_signed_graph(50, 120, 30, 7).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), h.edges().collect::<Vec<_>>());
        assert!(random_connected_signed_graph(5, 3, 0, 1).is_err());
        assert!(random_connected_signed_graph(3, 3, 4, 1).is_err());
    }

    #[test]
    fn gnp_is_connected() {
        let mut rng = stream_rng(3, 0);
        for n in 1..=12 {
            assert!(gnp_connected(n, 0.2, 0.5, &mut rng).is_connected());
        }
        // too sparse for rejection to succeed
        assert!(gnp_connected(12, 0.0, 0.5, &mut rng).is_connected());
    }

    #[test]
    fn single_skill_universe() {
        let sk = generate_zipf_skills(20, 1, 1.5, PerUserSkills::Fixed(3), 1).unwrap();
        for u in 0..20 {
            assert_eq!(sk.skills_of(NodeId(u)), &[SkillId(0)]);
        }
    }

    #[test]
    fn zipf_is_skewed_and_deterministic() {
        let a = generate_zipf_skills(3000, 50, 1.2, PerUserSkills::default(), 9).unwrap();
        let b = generate_zipf_skills(3000, 50, 1.2, PerUserSkills::default(), 9).unwrap();
        let freq = |sk: &SkillAssignment, s: u32| sk.users_with(SkillId(s)).len();
        assert!((0..50).all(|s| freq(&a, s) == freq(&b, s)));
        assert!(freq(&a, 0) > 3 * freq(&a, 9));
        let total: usize = (0..50).map(|s| freq(&a, s)).sum();
        let mean = total as f64 / 3000.0;
        assert!((2.5..3.2).contains(&mean), "mean {mean}");
        assert!(generate_zipf_skills(3, 0, 1.0, PerUserSkills::default(), 1).is_err());
        assert!(generate_zipf_skills(3, 4, 0.0, PerUserSkills::default(), 1).is_err());
    }

    #[test]
    fn config_round_trip() {
        let text = "# demo\ngraph = g.txt\nzipf_skills = 40\nseed = 11\nkinds = spa, nne\ntask_sizes = 1,3\ntasks_per_size = 5\npolicies = LCMD, rfrand\n";
        let spec = ExperimentSpec::parse_config(text, Path::new("/data")).unwrap();
        assert_eq!(spec.graph_path, PathBuf::from("/data/g.txt"));
        assert_eq!(spec.kinds, vec![RelationKind::Spa, RelationKind::Nne]);
        assert_eq!(spec.task_sizes, vec![1, 3]);
        assert_eq!(spec.seed, 11);
        let codes: Vec<String> = spec.effective_policies().iter().map(|p| p.code()).collect();
        assert_eq!(codes, ["LCMD", "RFRAND"]);
        assert!(matches!(spec.skills, SkillSource::Zipf(ZipfSpec { n_skills: 40, .. })));
    }

    #[test]
    fn config_errors() {
        let base = Path::new(".");
        assert!(matches!(
            ExperimentSpec::parse_config("graph = g\nzipf_skills = 3\n", base),
            Err(HarnessError::Spec(_))
        ));
        assert!(matches!(
            ExperimentSpec::parse_config("graph = g\nseed = x\n", base),
            Err(HarnessError::Config { line: 2, .. })
        ));
        assert!(matches!(
            ExperimentSpec::parse_config("graph = g\nseed = 1\nzipf_skills = 3\ntasks_per_size = 0\n", base),
            Err(HarnessError::Spec(_))
        ));
        assert!(matches!(
            ExperimentSpec::parse_config("colour = blue\n", base),
            Err(HarnessError::Config { line: 1, .. })
        ));
    }

    #[test]
    fn complete_positive_graph_is_fully_compatible() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                edges.push((u, v, Sign::Positive));
            }
        }
        let graph = SignedGraph::from_edges(6, edges).unwrap();
        let skills = generate_zipf_skills(6, 4, 1.0, PerUserSkills::Fixed(2), 5).unwrap();
        let d = Dataset { graph, skills };
        let rows = run_compat_stats(&d, &RelationKind::ALL, &RelationOptions::default()).unwrap();
        for r in rows {
            assert_eq!(r.pct_users, 100.0, "{}", r.kind);
            assert_eq!(r.pct_skills, 100.0, "{}", r.kind);
            assert_eq!(r.avg_distance, 1.0, "{}", r.kind);
        }
    }

    #[test]
    fn tasks_only_use_held_skills() {
        let sk = SkillAssignment::new(
            vec!["a".into(), "b".into(), "c".into()],
            vec![vec![SkillId(0)], vec![SkillId(2)]],
        )
        .unwrap();
        let tasks = sample_tasks(&sk, 2, 10, &mut stream_rng(1, 0)).unwrap();
        for t in tasks {
            assert_eq!(t.skills(), &[SkillId(0), SkillId(2)]);
        }
        assert!(sample_tasks(&sk, 3, 1, &mut stream_rng(1, 0)).is_err());
    }
}
