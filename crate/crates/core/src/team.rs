//! Greedy team formation over a compatibility relation, plus the unsigned
//! baseline used for comparison.
//!
//! [`form_team`] picks a first skill, then grows one candidate team from
//! every holder of that skill: it repeatedly picks an uncovered skill and
//! adds a holder compatible with every current member. Candidates that hit
//! a dead end are dropped; the cheapest completed candidate wins. Cost is
//! the largest relation distance between two members.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::compat::{CompatError, CompatibilityRelation, RelationKind, SkillDegrees};
use crate::graph::{GraphBuilder, NodeId, SignedGraph, SkillAssignment, SkillId, Task};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TeamError {
    #[error("no user holds skill {0:?}")]
    MissingSkill(SkillId),
    #[error("no mutually compatible team covering the task was found")]
    NoCompatibleCompletion,
    #[error("members {0} and {1} are not compatible")]
    IncompatiblePair(NodeId, NodeId),
    #[error("team does not cover skill {0:?}")]
    Uncovered(SkillId),
    #[error("team cost {found} does not match the recomputed cost {expected}")]
    CostMismatch { found: u32, expected: u32 },
    #[error("the random user policy needs a seed")]
    MissingSeed,
    #[error("graph, relation and skills disagree on the number of nodes")]
    SizeMismatch,
    #[error("invalid policy {0:?}")]
    UnknownPolicy(String),
    #[error(transparent)]
    Compat(#[from] CompatError),
}

impl TeamError {
    /// Whether the error means "no team" rather than a misuse.
    pub fn is_no_team(&self) -> bool {
        matches!(self, TeamError::MissingSkill(_) | TeamError::NoCompatibleCompletion)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SkillPolicy {
    /// Fewest holders first.
    RarestFirst,
    /// Smallest compatibility degree first.
    LeastCompatibleFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UserPolicy {
    /// Candidate that keeps the team's distance aggregate smallest.
    MinDistance,
    /// Candidate compatible with the most holders of still-uncovered skills.
    MostCompatible,
    /// Uniformly random compatible candidate.
    Random,
}

/// How [`UserPolicy::MinDistance`] scores a candidate against the team.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum DistanceAggregate {
    /// Largest distance to a member, i.e. the resulting team cost.
    #[default]
    Max,
    /// Sum of distances to all members.
    Sum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PolicyConfig {
    pub skill_policy: SkillPolicy,
    pub user_policy: UserPolicy,
    pub seed: Option<u64>,
    pub distance: DistanceAggregate,
}

impl PolicyConfig {
    pub fn new(skill_policy: SkillPolicy, user_policy: UserPolicy) -> Self {
        PolicyConfig {
            skill_policy,
            user_policy,
            seed: None,
            distance: DistanceAggregate::Max,
        }
    }

    /// Least-compatible skill, minimum-distance user.
    pub fn lcmd() -> Self {
        Self::new(SkillPolicy::LeastCompatibleFirst, UserPolicy::MinDistance)
    }

    /// Least-compatible skill, most-compatible user.
    pub fn lcmc() -> Self {
        Self::new(SkillPolicy::LeastCompatibleFirst, UserPolicy::MostCompatible)
    }

    /// Least-compatible skill, random compatible user.
    pub fn random(seed: u64) -> Self {
        Self::new(SkillPolicy::LeastCompatibleFirst, UserPolicy::Random).with_seed(seed)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Short name such as `LCMD` or `RFRAND`.
    pub fn code(&self) -> String {
        let skill = match self.skill_policy {
            SkillPolicy::RarestFirst => "RF",
            SkillPolicy::LeastCompatibleFirst => "LC",
        };
        let user = match (self.user_policy, self.distance) {
            (UserPolicy::MinDistance, DistanceAggregate::Max) => "MD",
            (UserPolicy::MinDistance, DistanceAggregate::Sum) => "MDSUM",
            (UserPolicy::MostCompatible, _) => "MC",
            (UserPolicy::Random, _) => "RAND",
        };
        format!("{skill}{user}")
    }
}

impl FromStr for PolicyConfig {
    type Err = TeamError;

    /// Parses the codes produced by [`PolicyConfig::code`]; `RANDOM` is an
    /// alias for `LCRAND`. The seed is left unset.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let up = s.to_ascii_uppercase();
        let up = if up == "RANDOM" { "LCRAND".to_string() } else { up };
        let bad = || TeamError::UnknownPolicy(s.to_string());
        let (skill, rest) = if let Some(r) = up.strip_prefix("LC") {
            (SkillPolicy::LeastCompatibleFirst, r)
        } else if let Some(r) = up.strip_prefix("RF") {
            (SkillPolicy::RarestFirst, r)
        } else {
            return Err(bad());
        };
        let mut cfg = match rest {
            "MD" | "MDSUM" => PolicyConfig::new(skill, UserPolicy::MinDistance),
            "MC" => PolicyConfig::new(skill, UserPolicy::MostCompatible),
            "RAND" => PolicyConfig::new(skill, UserPolicy::Random),
            _ => return Err(bad()),
        };
        if rest == "MDSUM" {
            cfg.distance = DistanceAggregate::Sum;
        }
        Ok(cfg)
    }
}

impl fmt::Display for PolicyConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// A set of users, the task skills they cover, and their cost.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Team {
    members: Vec<NodeId>,
    covered: Vec<SkillId>,
    cost: u32,
}

impl Team {
    pub fn members(&self) -> &[NodeId] {
        &self.members
    }

    pub fn covered(&self) -> &[SkillId] {
        &self.covered
    }

    pub fn cost(&self) -> u32 {
        self.cost
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Builds a team from members, recomputing coverage and cost.
    pub fn from_members(
        mut members: Vec<NodeId>,
        relation: &CompatibilityRelation,
        skills: &SkillAssignment,
        task: &Task,
    ) -> Result<Team, TeamError> {
        members.sort_unstable();
        members.dedup();
        let cost = team_cost(relation, &members)?;
        let covered = covered_skills(&members, skills, task);
        Ok(Team {
            members,
            covered,
            cost,
        })
    }

    /// Checks coverage, pairwise compatibility and the cost formula.
    pub fn verify(&self, relation: &CompatibilityRelation, skills: &SkillAssignment, task: &Task) -> Result<(), TeamError> {
        let covered = covered_skills(&self.members, skills, task);
        if let Some(&s) = task.skills().iter().find(|s| covered.binary_search(s).is_err()) {
            return Err(TeamError::Uncovered(s));
        }
        let expected = team_cost(relation, &self.members)?;
        if expected != self.cost {
            return Err(TeamError::CostMismatch {
                found: self.cost,
                expected,
            });
        }
        Ok(())
    }

    /// Whether every member pair is in `relation`.
    pub fn is_compatible_under(&self, relation: &CompatibilityRelation) -> bool {
        self.members.iter().enumerate().all(|(i, &a)| {
            self.members[i + 1..]
                .iter()
                .all(|&b| relation.is_compatible(a, b))
        })
    }
}

fn covered_skills(members: &[NodeId], skills: &SkillAssignment, task: &Task) -> Vec<SkillId> {
    task.skills()
        .iter()
        .copied()
        .filter(|&s| members.iter().any(|&u| skills.has_skill(u, s)))
        .collect()
}

/// Largest pairwise relation distance among `members`; 0 for one member.
pub fn team_cost(relation: &CompatibilityRelation, members: &[NodeId]) -> Result<u32, TeamError> {
    let mut cost = 0;
    for (i, &a) in members.iter().enumerate() {
        for &b in &members[i + 1..] {
            let d = relation
                .distance(a, b)
                .ok_or(TeamError::IncompatiblePair(a.min(b), a.max(b)))?;
            cost = cost.max(d);
        }
    }
    Ok(cost)
}

/// Reusable team former over one relation and skill assignment. Skill
/// compatibility degrees are computed on first use and cached.
pub struct TeamFormer<'a> {
    relation: &'a CompatibilityRelation,
    skills: &'a SkillAssignment,
    degrees: OnceLock<Result<SkillDegrees, CompatError>>,
}

impl<'a> TeamFormer<'a> {
    pub fn new(relation: &'a CompatibilityRelation, skills: &'a SkillAssignment) -> Result<Self, TeamError> {
        if relation.node_count() != skills.node_count() {
            return Err(TeamError::SizeMismatch);
        }
        Ok(TeamFormer {
            relation,
            skills,
            degrees: OnceLock::new(),
        })
    }

    pub fn degrees(&self) -> Result<&SkillDegrees, TeamError> {
        self.degrees
            .get_or_init(|| SkillDegrees::compute(self.relation, self.skills))
            .as_ref()
            .map_err(|e| TeamError::Compat(e.clone()))
    }

    /// Next skill to cover. Ties go to the lowest skill id.
    pub fn select_skill(&self, uncovered: &[SkillId], policy: SkillPolicy) -> Result<Option<SkillId>, TeamError> {
        Ok(match policy {
            SkillPolicy::RarestFirst => uncovered
                .iter()
                .copied()
                .min_by_key(|&s| (self.skills.users_with(s).len(), s)),
            SkillPolicy::LeastCompatibleFirst => {
                let degrees = self.degrees()?;
                uncovered
                    .iter()
                    .copied()
                    .min_by_key(|&s| (degrees.get(s).unwrap_or(0), s))
            }
        })
    }

    /// Picks a holder of the target skill compatible with every member.
    /// `uncovered` lists task skills not yet covered, the target included.
    pub fn select_user<R: Rng>(
        &self,
        candidates: &[NodeId],
        members: &[NodeId],
        uncovered: &[SkillId],
        config: &PolicyConfig,
        rng: &mut R,
    ) -> Option<NodeId> {
        let rel = self.relation;
        let mut feasible: Vec<NodeId> = candidates
            .iter()
            .copied()
            .filter(|&c| members.iter().all(|&m| rel.is_compatible(c, m)))
            .collect();
        feasible.sort_unstable();
        feasible.dedup();
        if feasible.is_empty() {
            return None;
        }
        match config.user_policy {
            UserPolicy::MinDistance => feasible.into_iter().min_by_key(|&c| {
                let dists = members.iter().map(|&m| rel.distance(c, m).unwrap_or(u32::MAX) as u64);
                let score = match config.distance {
                    DistanceAggregate::Max => dists.max().unwrap_or(0),
                    DistanceAggregate::Sum => dists.sum(),
                };
                (score, c)
            }),
            UserPolicy::MostCompatible => {
                let mut holders: Vec<NodeId> = uncovered
                    .iter()
                    .flat_map(|&s| self.skills.users_with(s).iter().copied())
                    .collect();
                holders.sort_unstable();
                holders.dedup();
                feasible.into_iter().min_by_key(|&c| {
                    let compatible = holders
                        .iter()
                        .filter(|&&h| h != c && rel.is_compatible(c, h))
                        .count();
                    (std::cmp::Reverse(compatible), c)
                })
            }
            UserPolicy::Random => {
                let i = rng.random_range(0..feasible.len());
                Some(feasible[i])
            }
        }
    }

    pub fn form(&self, task: &Task, config: &PolicyConfig) -> Result<Team, TeamError> {
        if config.user_policy == UserPolicy::Random && config.seed.is_none() {
            return Err(TeamError::MissingSeed);
        }
        if let Some(&s) = task
            .skills()
            .iter()
            .find(|&&s| self.skills.users_with(s).is_empty())
        {
            return Err(TeamError::MissingSkill(s));
        }
        let first = self
            .select_skill(task.skills(), config.skill_policy)?
            .expect("tasks are nonempty");

        let mut best: Option<Team> = None;
        for &start in self.skills.users_with(first) {
            let mut rng = ChaCha8Rng::seed_from_u64(config.seed.unwrap_or(0));
            rng.set_stream(start.0 as u64);
            let Some(team) = self.grow(start, task, config, &mut rng)? else {
                continue;
            };
            let better = match &best {
                None => true,
                Some(b) => (team.cost, &team.members) < (b.cost, &b.members),
            };
            if better {
                best = Some(team);
            }
        }
        let team = best.ok_or(TeamError::NoCompatibleCompletion)?;
        debug_assert_eq!(team.verify(self.relation, self.skills, task), Ok(()));
        Ok(team)
    }

    fn grow<R: Rng>(
        &self,
        start: NodeId,
        task: &Task,
        config: &PolicyConfig,
        rng: &mut R,
    ) -> Result<Option<Team>, TeamError> {
        let mut members = vec![start];
        let mut uncovered: Vec<SkillId> = task
            .skills()
            .iter()
            .copied()
            .filter(|&s| !self.skills.has_skill(start, s))
            .collect();
        while !uncovered.is_empty() {
            let s = self
                .select_skill(&uncovered, config.skill_policy)?
                .expect("uncovered is nonempty");
            let Some(v) = self.select_user(self.skills.users_with(s), &members, &uncovered, config, rng) else {
                return Ok(None);
            };
            members.push(v);
            uncovered.retain(|&t| !self.skills.has_skill(v, t));
        }
        Team::from_members(members, self.relation, self.skills, task).map(Some)
    }
}

/// One-shot team formation. Use [`TeamFormer`] to reuse the cached skill
/// degrees across tasks.
pub fn form_team(
    graph: &SignedGraph,
    relation: &CompatibilityRelation,
    skills: &SkillAssignment,
    task: &Task,
    config: &PolicyConfig,
) -> Result<Team, TeamError> {
    if graph.node_count() != relation.node_count() {
        return Err(TeamError::SizeMismatch);
    }
    TeamFormer::new(relation, skills)?.form(task, config)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UnsignedMode {
    /// Every edge becomes positive.
    IgnoreSign,
    /// Negative edges are removed; the result may be disconnected.
    DeleteNegative,
}

impl UnsignedMode {
    pub const ALL: [UnsignedMode; 2] = [UnsignedMode::IgnoreSign, UnsignedMode::DeleteNegative];

    pub fn name(self) -> &'static str {
        match self {
            UnsignedMode::IgnoreSign => "ignore-sign",
            UnsignedMode::DeleteNegative => "delete-negative",
        }
    }
}

impl fmt::Display for UnsignedMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Drops sign information, keeping every node and its label.
pub fn unsigned_transform(graph: &SignedGraph, mode: UnsignedMode) -> SignedGraph {
    let mut b = GraphBuilder::new();
    for u in graph.nodes() {
        b.node(graph.label(u));
    }
    for (u, v, s) in graph.edges() {
        let keep = match mode {
            UnsignedMode::IgnoreSign => Some(crate::graph::Sign::Positive),
            UnsignedMode::DeleteNegative => s.is_positive().then_some(s),
        };
        if let Some(sign) = keep {
            b.add_edge_ids(u, v, sign).expect("edges of a valid graph stay valid");
        }
    }
    b.build()
}

/// Rarest-skill greedy on an unsigned graph.
///
/// For every holder `u` of the task's rarest skill, each remaining skill is
/// covered by its holder nearest to `u`; the holder whose farthest pick is
/// nearest wins (ties to the lowest id). The returned cost is the hop
/// diameter of the team. Signs are ignored.
pub fn rarest_first_unsigned(graph: &SignedGraph, skills: &SkillAssignment, task: &Task) -> Result<Team, TeamError> {
    if graph.node_count() != skills.node_count() {
        return Err(TeamError::SizeMismatch);
    }
    if let Some(&s) = task.skills().iter().find(|&&s| skills.users_with(s).is_empty()) {
        return Err(TeamError::MissingSkill(s));
    }
    let rarest = task
        .skills()
        .iter()
        .copied()
        .min_by_key(|&s| (skills.users_with(s).len(), s))
        .expect("tasks are nonempty");

    let mut best: Option<(u32, Vec<NodeId>)> = None;
    'holders: for &u in skills.users_with(rarest) {
        let dist = graph.bfs_distances(u);
        let mut members = vec![u];
        let mut radius = 0;
        for &s in task.skills() {
            if skills.has_skill(u, s) {
                continue;
            }
            let Some(&v) = skills
                .users_with(s)
                .iter()
                .filter(|v| dist[v.index()] != u32::MAX)
                .min_by_key(|v| (dist[v.index()], **v))
            else {
                continue 'holders;
            };
            radius = radius.max(dist[v.index()]);
            members.push(v);
        }
        if best.as_ref().is_none_or(|(r, _)| radius < *r) {
            best = Some((radius, members));
        }
    }
    let (_, mut members) = best.ok_or(TeamError::NoCompatibleCompletion)?;
    members.sort_unstable();
    members.dedup();
    let mut cost = 0;
    for (i, &a) in members.iter().enumerate() {
        let dist = graph.bfs_distances(a);
        for &b in &members[i + 1..] {
            cost = cost.max(dist[b.index()]);
        }
    }
    let covered = covered_skills(&members, skills, task);
    Ok(Team {
        members,
        covered,
        cost,
    })
}

pub const TEAM_CSV_HEADER: &str = "members,covered_skills,cost,kind,policy,seed";

/// One team as a CSV row: members and skills are `;`-separated labels.
pub fn write_team_row<W: Write>(
    mut out: W,
    team: &Team,
    graph: &SignedGraph,
    skills: &SkillAssignment,
    kind: RelationKind,
    config: &PolicyConfig,
) -> io::Result<()> {
    let members: Vec<&str> = team.members.iter().map(|&u| graph.label(u)).collect();
    let covered: Vec<&str> = team.covered.iter().map(|&s| skills.skill_label(s)).collect();
    let seed = config.seed.map(|s| s.to_string()).unwrap_or_default();
    writeln!(
        out,
        "{},{},{},{},{},{}",
        members.join(";"),
        covered.join(";"),
        team.cost,
        kind,
        config.code(),
        seed
    )
}
