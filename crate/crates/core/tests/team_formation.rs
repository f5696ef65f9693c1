mod common;

use signed_teams::compat::{build_relation, RelationKind, RelationOptions};
use signed_teams::graph::{Sign, SignedGraph};
use signed_teams::harness::{
    generate_zipf_skills, random_connected_signed_graph, run_baseline_comparison, stream_rng, Dataset,
    ExperimentSpec, PerUserSkills, SkillSource,
};
use signed_teams::oracle::{oracle_min_cost_team, OracleBudget};
use signed_teams::team::{form_team, unsigned_transform, PolicyConfig, TeamError, TeamFormer, UnsignedMode};

fn policies() -> Vec<PolicyConfig> {
    ["LCMD", "LCMC", "LCRAND", "RFMD", "RFMC", "RFRAND", "LCMDSUM"]
        .iter()
        .map(|c| c.parse::<PolicyConfig>().unwrap().with_seed(5))
        .collect()
}

#[test]
fn greedy_is_sound_and_never_beats_the_oracle() {
    let budget = OracleBudget::default();
    let mut checked = 0;
    for case in common::ensemble(150) {
        let g = &case.graph;
        let mut rng = stream_rng(case.seed, 11);
        let skills = common::random_skills(g.node_count(), &mut rng);
        let Some(task) = common::random_task(&skills, &mut rng) else { continue };
        let opts = RelationOptions {
            sbp_max_path_len: Some(g.node_count().saturating_sub(1).max(1)),
            ..RelationOptions::default()
        };
        for kind in RelationKind::ALL {
            let rel = build_relation(g, kind, &opts).unwrap();
            let best = oracle_min_cost_team(g, &rel, &skills, &task, &budget).unwrap();
            for p in policies() {
                match form_team(g, &rel, &skills, &task, &p) {
                    Ok(team) => {
                        team.verify(&rel, &skills, &task).unwrap();
                        assert!(team.is_compatible_under(&rel));
                        let opt = best.as_ref().expect("greedy succeeded where no team exists");
                        assert!(team.cost() >= opt.cost(), "seed {} {kind} {p}", case.seed);
                    }
                    Err(e) => assert!(e.is_no_team(), "{e}"),
                }
            }
        }
        checked += 1;
    }
    assert!(checked >= 100, "only {checked} fixtures had a task");
}

#[test]
fn formation_is_deterministic_for_every_policy() {
    let g = random_connected_signed_graph(200, 700, 150, 21).unwrap();
    let skills = generate_zipf_skills(200, 30, 1.0, PerUserSkills::default(), 21).unwrap();
    let data = Dataset { graph: g, skills };
    let mut rng = stream_rng(4, 0);
    let tasks = signed_teams::harness::sample_tasks(&data.skills, 4, 10, &mut rng).unwrap();
    let rel = build_relation(&data.graph, RelationKind::Spo, &RelationOptions::default()).unwrap();
    for p in policies() {
        let f = TeamFormer::new(&rel, &data.skills).unwrap();
        for t in &tasks {
            let a = f.form(t, &p);
            let b = TeamFormer::new(&rel, &data.skills).unwrap().form(t, &p);
            assert_eq!(a, b);
        }
    }
}

#[test]
fn random_policy_needs_seed() {
    let g = SignedGraph::from_edges(2, [(0, 1, Sign::Positive)]).unwrap();
    let skills = generate_zipf_skills(2, 1, 1.0, PerUserSkills::Fixed(1), 1).unwrap();
    let rel = build_relation(&g, RelationKind::Spa, &RelationOptions::default()).unwrap();
    let task = signed_teams::graph::Task::from_labels(&["s0"], &skills).unwrap();
    let mut p = PolicyConfig::random(1);
    p.seed = None;
    assert_eq!(form_team(&g, &rel, &skills, &task, &p), Err(TeamError::MissingSeed));
}

#[test]
fn unsigned_transforms() {
    let g = random_connected_signed_graph(100, 400, 90, 2).unwrap();
    let ignore = unsigned_transform(&g, UnsignedMode::IgnoreSign);
    let delete = unsigned_transform(&g, UnsignedMode::DeleteNegative);
    assert_eq!((ignore.edge_count(), ignore.negative_edge_count()), (400, 0));
    assert_eq!((delete.edge_count(), delete.negative_edge_count()), (310, 0));
    assert_eq!(delete.node_count(), 100);
}

#[test]
fn all_positive_graph_baseline_is_compatible_under_nne() {
    let mut edges = Vec::new();
    for u in 1..40 {
        edges.push((u / 3, u, Sign::Positive));
    }
    let graph = SignedGraph::from_edges(40, edges).unwrap();
    let skills = generate_zipf_skills(40, 12, 1.0, PerUserSkills::default(), 8).unwrap();
    let data = Dataset { graph, skills };
    let mut spec = ExperimentSpec::new("unused", SkillSource::File("unused".into()), 8);
    spec.kinds = vec![RelationKind::Nne, RelationKind::Spa];
    spec.task_sizes = vec![2, 3];
    spec.tasks_per_size = 10;
    for row in run_baseline_comparison(&data, &spec).unwrap() {
        // on a tree of friends every relation is connectivity
        assert_eq!(row.pct_compatible, 100.0, "{:?}", row);
        assert_eq!(row.teams, 20);
    }
}
