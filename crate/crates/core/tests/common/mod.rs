#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use signed_teams::graph::{SignedGraph, SkillAssignment, SkillId, Task};
use signed_teams::harness::{gnp_connected, stream_rng};

/// One member of the seeded small-graph ensemble.
pub struct Case {
    pub seed: u64,
    pub p: f64,
    pub negative_fraction: f64,
    pub graph: SignedGraph,
}

/// `count` connected graphs with 2 to 12 nodes, cycling through edge
/// probabilities {0.2, 0.4} and negative fractions {0.2, 0.5}.
pub fn ensemble(count: usize) -> Vec<Case> {
    (0..count as u64)
        .map(|seed| {
            let p = [0.2, 0.4][(seed % 2) as usize];
            let negative_fraction = [0.2, 0.5][((seed / 2) % 2) as usize];
            let mut rng = stream_rng(seed, 7);
            let n = rng.random_range(2..=12);
            let graph = gnp_connected(n, p, negative_fraction, &mut rng);
            Case {
                seed,
                p,
                negative_fraction,
                graph,
            }
        })
        .collect()
}

/// Random skills over a universe of 3 to 6 skills; each user holds 0 to 2.
pub fn random_skills(n: usize, rng: &mut ChaCha8Rng) -> SkillAssignment {
    let universe = rng.random_range(3..=6usize);
    let skills_of = (0..n)
        .map(|_| {
            let c = rng.random_range(0..=2);
            (0..c).map(|_| SkillId(rng.random_range(0..universe as u32))).collect()
        })
        .collect();
    let labels = (0..universe).map(|i| format!("s{i}")).collect();
    SkillAssignment::new(labels, skills_of).unwrap()
}

/// A task of 1 to 4 held skills, or `None` when fewer than one is held.
pub fn random_task(skills: &SkillAssignment, rng: &mut ChaCha8Rng) -> Option<Task> {
    let held: Vec<SkillId> = skills.skill_ids().filter(|&s| !skills.users_with(s).is_empty()).collect();
    if held.is_empty() {
        return None;
    }
    let k = rng.random_range(1..=held.len().min(4));
    let picked = rand::seq::index::sample(rng, held.len(), k).into_iter().map(|i| held[i]);
    Some(Task::new(picked, skills).unwrap())
}
