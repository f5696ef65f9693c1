//! Acceptance suite. Prints one line per criterion and exits non-zero if any
//! criterion fails. Criteria that need external data are reported as
//! WAIVED when the data is absent.
//!
//! The data-dependent criterion reads `graph.txt` and `skills.txt` from
//! `$SIGNED_TEAMS_SLASHDOT_DIR`, falling back to `data/slashdot/` at the
//! workspace root.

mod common;

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use signed_teams::balance::{is_balanced_path, path_sign, Path};
use signed_teams::compat::{
    build_relation, sbp_exact_reachability, sbp_heuristic_counts, sp_sign_counts, Compat, CompatibilityRelation, RelationKind,
    RelationOptions, SbpReach,
};
use signed_teams::fixtures;
use signed_teams::graph::{load_graph, load_skills, LoadOptions, Sign, SignedGraph};
use signed_teams::harness::{
    generate_zipf_skills, random_connected_signed_graph, run_compat_stats, run_team_experiments, stream_rng,
    write_team_experiments_csv, Dataset, ExperimentSpec, PerUserSkills, SkillSource,
};
use signed_teams::oracle::{oracle_min_cost_team, shortest_path_sign_counts, OracleBudget};
use signed_teams::team::{form_team, PolicyConfig};

enum Verdict {
    Pass(String),
    Fail(String),
    Waived(String),
}

const ENSEMBLE: usize = 240;

fn criterion_1() -> Verdict {
    let start = Instant::now();
    let budget = OracleBudget::default();
    let (mut sources, mut mismatches) = (0, 0);
    let cases = common::ensemble(ENSEMBLE);
    for case in &cases {
        let g = &case.graph;
        for u in g.nodes() {
            sources += 1;
            let c = sp_sign_counts(g, u).unwrap();
            for v in g.nodes() {
                let want = shortest_path_sign_counts(g, u, v, &budget).unwrap();
                let got = (c.pos[v.index()], c.neg[v.index()], c.is_reachable(v).then(|| c.dist[v.index()]));
                if got != want {
                    mismatches += 1;
                }
            }
        }
    }
    let mixes: std::collections::BTreeSet<(u64, u64)> = cases
        .iter()
        .map(|c| ((c.p * 10.0) as u64, (c.negative_fraction * 10.0) as u64))
        .collect();
    let elapsed = start.elapsed();
    let msg = format!(
        "{} graphs ({} parameter mixes), {sources} sources, {mismatches} mismatches, {elapsed:.2?}",
        cases.len(),
        mixes.len()
    );
    if mismatches == 0 && elapsed < Duration::from_secs(30) && cases.len() >= 200 && mixes.len() == 4 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn relations(g: &SignedGraph, options: &RelationOptions) -> Vec<CompatibilityRelation> {
    RelationKind::ALL
        .iter()
        .map(|&k| build_relation(g, k, options).unwrap())
        .collect()
}

/// Exact balanced-path search with a budget long enough for every simple path.
fn exhaustive(g: &SignedGraph) -> RelationOptions {
    RelationOptions {
        sbp_max_path_len: Some(g.node_count().saturating_sub(1).max(1)),
        ..RelationOptions::default()
    }
}

fn criterion_2() -> Verdict {
    let chain = [
        RelationKind::Dpe,
        RelationKind::Spa,
        RelationKind::Spm,
        RelationKind::Spo,
        RelationKind::Sbp,
        RelationKind::Nne,
    ];
    let mut inclusions: Vec<(RelationKind, RelationKind)> = chain.windows(2).map(|w| (w[0], w[1])).collect();
    inclusions.push((RelationKind::SbpH, RelationKind::Sbp));
    let (mut violations, mut contradictions, mut undecided) = (0, 0, 0);
    for case in common::ensemble(ENSEMBLE) {
        let g = &case.graph;
        let exact = relations(g, &exhaustive(g));
        let truncated = relations(g, &RelationOptions::default());
        for (rels, is_exact) in [(&exact, true), (&truncated, false)] {
            let get = |k: RelationKind| rels.iter().find(|r| r.kind() == k).unwrap();
            for &(small, big) in &inclusions {
                for u in g.nodes() {
                    for v in g.nodes() {
                        if !get(small).is_compatible(u, v) {
                            continue;
                        }
                        match get(big).get(u, v) {
                            Compat::Compatible(_) => {}
                            Compat::Unknown if is_exact => violations += 1,
                            Compat::Unknown => undecided += 1,
                            Compat::Incompatible if is_exact => violations += 1,
                            Compat::Incompatible => contradictions += 1,
                        }
                    }
                }
            }
        }
    }
    let msg = format!(
        "{ENSEMBLE} graphs, 7 inclusions checked pair by pair with exhaustive SBP: {violations} violations; \
         at the default SBP budget {undecided} inclusions are undecided and {contradictions} contradict the chain"
    );
    if violations == 0 && contradictions == 0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_3() -> Verdict {
    let f = fixtures::balanced_but_not_shortest();
    let g = &f.graph;
    let (u, v) = (f.node("u"), f.node("v"));
    let opts = RelationOptions::default();
    let spo = build_relation(g, RelationKind::Spo, &opts).unwrap();
    let sbp = build_relation(g, RelationKind::Sbp, &opts).unwrap();
    let detour = Path::new(g, f.nodes(&["u", "x2", "x1", "v"])).unwrap();
    let detour_balanced = is_balanced_path(g, &detour).unwrap();
    let detour_sign = path_sign(g, &detour).unwrap();
    let checks = [
        (g.node_count() == 6, "6 nodes"),
        (!spo.is_compatible(u, v), "(u,v) not in SPO"),
        (sbp.distance(u, v) == Some(4), "SBP distance 4"),
        (detour_sign == Sign::Positive && !detour_balanced, "(u,x2,x1,v) positive but unbalanced"),
    ];
    summarize(&checks)
}

fn criterion_4() -> Verdict {
    let f = fixtures::prefix_failure();
    let g = &f.graph;
    let (u, v, x4) = (f.node("u"), f.node("v"), f.node("x4"));
    let exact = sbp_exact_reachability(g, u, g.node_count()).unwrap();
    let heuristic = sbp_heuristic_counts(g, u).unwrap();
    let best = Path::new(g, f.nodes(&["u", "x1", "x2", "x4", "x5", "v"])).unwrap();
    let via_optimum = Path::new(g, f.nodes(&["u", "x3", "x4", "x5", "v"])).unwrap();
    let optimum = Path::new(g, f.nodes(&["u", "x3", "x4"])).unwrap();
    let checks = [
        (exact[v.index()] == SbpReach::Found(5), "shortest balanced u-v length 5"),
        (exact[x4.index()] == SbpReach::Found(2), "shortest balanced u-x4 length 2"),
        (is_balanced_path(g, &optimum) == Ok(true), "(u,x3,x4) balanced"),
        (
            is_balanced_path(g, &best) == Ok(true) && path_sign(g, &best) == Ok(Sign::Positive),
            "(u,x1,x2,x4,x5,v) positive balanced",
        ),
        (is_balanced_path(g, &via_optimum) == Ok(false), "extension of the u-x4 optimum unbalanced"),
        (heuristic[v.index()].is_none(), "single-path heuristic misses v"),
    ];
    summarize(&checks)
}

fn summarize(checks: &[(bool, &str)]) -> Verdict {
    let failed: Vec<&str> = checks.iter().filter(|c| !c.0).map(|c| c.1).collect();
    if failed.is_empty() {
        Verdict::Pass(checks.iter().map(|c| c.1).collect::<Vec<_>>().join("; "))
    } else {
        Verdict::Fail(format!("failed: {}", failed.join("; ")))
    }
}

fn criterion_5() -> Verdict {
    let (mut built, mut violations) = (0, 0);
    let mut graphs: Vec<SignedGraph> = common::ensemble(ENSEMBLE).into_iter().map(|c| c.graph).collect();
    graphs.push(fixtures::balanced_but_not_shortest().graph);
    graphs.push(fixtures::prefix_failure().graph);
    for g in &graphs {
        for rel in relations(g, &RelationOptions::default()) {
            built += 1;
            for u in g.nodes() {
                violations += usize::from(rel.distance(u, u) != Some(0));
                for v in g.nodes() {
                    violations += usize::from(rel.get(u, v) != rel.get(v, u));
                    match g.sign(u, v) {
                        Some(Sign::Positive) => violations += usize::from(!rel.is_compatible(u, v)),
                        Some(Sign::Negative) => violations += usize::from(rel.is_compatible(u, v)),
                        None => {}
                    }
                }
            }
        }
    }
    let msg = format!("{built} relations over {} graphs, {violations} violations", graphs.len());
    if violations == 0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_6() -> Verdict {
    let budget = OracleBudget::default();
    let policies: Vec<PolicyConfig> = ["LCMD", "LCMC", "LCRAND", "RFMD", "RFMC", "RFRAND"]
        .iter()
        .map(|c| c.parse::<PolicyConfig>().unwrap().with_seed(17))
        .collect();
    let (mut fixtures_run, mut runs, mut solved, mut optimal, mut violations) = (0, 0, 0, 0, 0);
    for case in common::ensemble(ENSEMBLE) {
        let g = &case.graph;
        let mut rng = stream_rng(case.seed, 11);
        let skills = common::random_skills(g.node_count(), &mut rng);
        let Some(task) = common::random_task(&skills, &mut rng) else { continue };
        fixtures_run += 1;
        for kind in RelationKind::ALL {
            let rel = build_relation(g, kind, &RelationOptions::default()).unwrap();
            let best = oracle_min_cost_team(g, &rel, &skills, &task, &budget).unwrap();
            for p in &policies {
                runs += 1;
                match (form_team(g, &rel, &skills, &task, p), &best) {
                    (Ok(team), Some(opt)) => {
                        solved += 1;
                        optimal += usize::from(team.cost() == opt.cost());
                        if team.verify(&rel, &skills, &task).is_err() || team.cost() < opt.cost() {
                            violations += 1;
                        }
                    }
                    (Ok(_), None) => violations += 1,
                    (Err(e), _) if !e.is_no_team() => violations += 1,
                    (Err(_), _) => {}
                }
            }
        }
    }
    let msg = format!(
        "{fixtures_run} fixtures, {runs} runs, {solved} solved ({optimal} at the optimum), {violations} violations"
    );
    if fixtures_run >= 100 && violations == 0 {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_7() -> Verdict {
    let dir = std::env::var_os("SIGNED_TEAMS_SLASHDOT_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/slashdot"));
    let (gp, sp) = (dir.join("graph.txt"), dir.join("skills.txt"));
    if !gp.exists() || !sp.exists() {
        return Verdict::Waived(format!("no prepared data at {}", dir.display()));
    }
    let graph = match load_graph(&gp, &LoadOptions::default()) {
        Ok(g) => g,
        Err(e) => return Verdict::Fail(format!("cannot load graph: {e}")),
    };
    let skills = match load_skills(&sp, &graph) {
        Ok(s) => s,
        Err(e) => return Verdict::Fail(format!("cannot load skills: {e}")),
    };
    let shape = (graph.node_count(), graph.edge_count(), graph.negative_edge_count());
    let data = Dataset { graph, skills };
    let kinds = [RelationKind::Spa, RelationKind::Nne, RelationKind::SbpH];
    let rows = run_compat_stats(&data, &kinds, &RelationOptions::default()).unwrap();
    let near = |a: f64, b: f64, tol: f64| (a - b).abs() <= tol + 1e-9;
    let (spa, nne, sbph) = (&rows[0], &rows[1], &rows[2]);
    let checks = [
        (shape == (214, 304, 89), "214 users / 304 edges / 89 negative"),
        (near(spa.pct_users, 44.72, 0.05), "SPA users 44.72"),
        (near(spa.pct_skills, 80.57, 0.05), "SPA skills 80.57"),
        (near(spa.avg_distance, 4.13, 0.02), "SPA distance 4.13"),
        (near(nne.pct_users, 99.64, 0.05), "NNE users 99.64"),
        (near(nne.pct_skills, 99.50, 0.05), "NNE skills 99.50"),
        (near(nne.avg_distance, 4.53, 0.02), "NNE distance 4.53"),
        (near(sbph.pct_users, 97.85, 1.0), "SBPH users 97.85 +-1"),
    ];
    match summarize(&checks) {
        Verdict::Fail(m) => Verdict::Fail(format!(
            "{m} (measured SPA {:.2}/{:.2}/{:.2}, NNE {:.2}/{:.2}/{:.2}, SBPH users {:.2})",
            spa.pct_users, spa.pct_skills, spa.avg_distance, nne.pct_users, nne.pct_skills, nne.avg_distance, sbph.pct_users
        )),
        v => v,
    }
}

fn criterion_8() -> Verdict {
    let dir = tempfile::tempdir().unwrap();
    let graph = random_connected_signed_graph(250, 800, 200, 5).unwrap();
    let gpath = dir.path().join("g.txt");
    signed_teams::graph::write_graph(&graph, std::fs::File::create(&gpath).unwrap()).unwrap();
    let mut spec = ExperimentSpec::new(
        &gpath,
        SkillSource::Zipf(signed_teams::harness::ZipfSpec {
            n_skills: 40,
            exponent: 1.0,
            per_user: PerUserSkills::default(),
        }),
        2024,
    );
    spec.kinds = vec![RelationKind::Spa, RelationKind::Spo, RelationKind::SbpH, RelationKind::Nne];
    spec.task_sizes = vec![2, 4, 6];
    spec.tasks_per_size = 30;

    let in_pool = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                let data = Dataset::load(&spec).unwrap();
                let rows = run_team_experiments(&data, &spec).unwrap();
                let mut csv = Vec::new();
                write_team_experiments_csv(&mut csv, &rows).unwrap();
                csv
            })
    };
    let library: Vec<Vec<u8>> = [1, 1, 4].map(in_pool).into();

    let cli = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_signed-teams"))
            .env("RAYON_NUM_THREADS", threads)
            .args(["experiment", "--graph"])
            .arg(&gpath)
            .args([
                "--zipf-skills", "40", "--seed", "2024", "--relation", "SPA,SPO,SBPH,NNE", "--task-sizes", "2,4,6",
                "--tasks-per-size", "30",
            ])
            .output()
            .map(|o| o.stdout)
            .unwrap_or_default()
    };
    let binary = [cli("1"), cli("3")];
    let same = library.iter().all(|c| *c == library[0]) && binary.iter().all(|c| *c == library[0]);
    let msg = format!(
        "{} CSV bytes; library runs with 1, 1 and 4 workers and CLI runs with 1 and 3 workers {}",
        library[0].len(),
        if same { "identical" } else { "differ" }
    );
    if same && !library[0].is_empty() {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn criterion_9() -> Verdict {
    let graph = random_connected_signed_graph(30_000, 200_000, 40_000, 9).unwrap();
    let mut times: Vec<Duration> = (0..31)
        .map(|i| {
            let q = signed_teams::NodeId(i * 967);
            let t = Instant::now();
            std::hint::black_box(sp_sign_counts(&graph, q).unwrap());
            t.elapsed()
        })
        .collect();
    times.sort();
    let median = times[times.len() / 2];

    let skills = generate_zipf_skills(30_000, 500, 1.0, PerUserSkills::default(), 9).unwrap();
    let data = Dataset { graph, skills };
    let t = Instant::now();
    let rows = run_compat_stats(
        &data,
        &[RelationKind::Spa, RelationKind::Spm, RelationKind::Spo],
        &RelationOptions::default(),
    )
    .unwrap();
    let all_pairs = t.elapsed();
    let msg = format!(
        "single source median {median:.2?}; all-pairs SPA/SPM/SPO statistics {all_pairs:.1?} on {} worker(s) (SPA users {:.2}%)",
        rayon::current_num_threads(),
        rows[0].pct_users
    );
    if median < Duration::from_millis(50) && all_pairs < Duration::from_secs(300) {
        Verdict::Pass(msg)
    } else {
        Verdict::Fail(msg)
    }
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 9] = [
        ("shortest-path counts match enumeration", criterion_1),
        ("containment chain", criterion_2),
        ("balanced path beyond every shortest path", criterion_3),
        ("prefix property fails for balanced paths", criterion_4),
        ("reflexive, symmetric, edge-sign consistent", criterion_5),
        ("team soundness and optimality gap", criterion_6),
        ("published Slashdot statistics", criterion_7),
        ("deterministic experiment CSV", criterion_8),
        ("performance on 30k nodes / 200k edges", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Verdict::Pass(d) => ("PASS", d),
            Verdict::Waived(d) => ("WAIVED", d),
            Verdict::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {} [{tag}] {name}: {detail}", i + 1);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
