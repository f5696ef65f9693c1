use std::fs;
use std::process::Command;

use signed_teams::graph::{parse_graph, parse_skills, write_graph, write_skills, GraphError, LoadOptions};
use signed_teams::harness::{generate_zipf_skills, random_connected_signed_graph, PerUserSkills};

const BIN: &str = env!("CARGO_BIN_EXE_signed-teams");

#[test]
fn graph_and_skills_round_trip() {
    let g = random_connected_signed_graph(80, 200, 60, 12).unwrap();
    let mut buf = Vec::new();
    write_graph(&g, &mut buf).unwrap();
    let h = parse_graph(buf.as_slice(), &LoadOptions::default()).unwrap();
    assert_eq!((h.node_count(), h.edge_count(), h.negative_edge_count()), (80, 200, 60));
    for (u, v, s) in g.edges() {
        let (hu, hv) = (h.node_by_label(g.label(u)).unwrap(), h.node_by_label(g.label(v)).unwrap());
        assert_eq!(h.sign(hu, hv), Some(s));
    }

    let sk = generate_zipf_skills(80, 25, 1.1, PerUserSkills::default(), 12).unwrap();
    let mut buf = Vec::new();
    write_skills(&g, &sk, &mut buf).unwrap();
    let back = parse_skills(buf.as_slice(), &g).unwrap();
    for u in g.nodes() {
        let a: Vec<&str> = sk.skills_of(u).iter().map(|&s| sk.skill_label(s)).collect();
        let mut b: Vec<&str> = back.skills_of(u).iter().map(|&s| back.skill_label(s)).collect();
        let mut a = a;
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn loader_rejections() {
    let opts = LoadOptions::default();
    assert!(matches!(parse_graph("a b +1\nc d -1\n".as_bytes(), &opts), Err(GraphError::Disconnected { .. })));
    let kept = parse_graph("a b +1\nb e +1\nc d -1\n".as_bytes(), &LoadOptions { largest_component: true }).unwrap();
    assert_eq!(kept.node_count(), 3);
    assert!(kept.was_dropped("c"));
    assert!(matches!(parse_graph("a a +1\n".as_bytes(), &opts), Err(GraphError::SelfLoop { .. })));
    assert!(matches!(
        parse_graph("a b +1\nb a -1\n".as_bytes(), &opts),
        Err(GraphError::ConflictingSign { .. })
    ));
    assert!(matches!(parse_graph("# nothing\n".as_bytes(), &opts), Err(GraphError::Empty)));
    assert!(matches!(parse_graph("a b 2\n".as_bytes(), &opts), Err(GraphError::Parse { .. })));
}

fn write_fixture(dir: &std::path::Path) {
    fs::write(dir.join("g.txt"), "a b +1\nb c +1\nc d -1\nd e +1\na e +1\n").unwrap();
    fs::write(dir.join("s.txt"), "a x\nb y\nc z\nd w\ne y\n").unwrap();
}

#[test]
fn cli_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path());
    let run = |args: &[&str]| Command::new(BIN).current_dir(dir.path()).args(args).output().unwrap();

    let ok = run(&["team", "--graph", "g.txt", "--skills", "s.txt", "--seed", "1", "--relation", "spa", "--task", "x,y"]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let out = String::from_utf8(ok.stdout).unwrap();
    assert!(out.starts_with("members,covered_skills,cost,kind,policy,seed\n"));
    assert!(out.contains(",SPA,LCMD,1"));

    // c and d are enemies and the only holders of z and w
    let none = run(&["team", "--graph", "g.txt", "--skills", "s.txt", "--seed", "1", "--relation", "nne", "--task", "z,w"]);
    assert_eq!(none.status.code(), Some(2));

    let bad = run(&["stats", "--graph", "missing.txt", "--skills", "s.txt", "--seed", "1"]);
    assert_eq!(bad.status.code(), Some(1));
    let bad_kind = run(&["stats", "--graph", "g.txt", "--skills", "s.txt", "--seed", "1", "--relation", "xyz"]);
    assert_ne!(bad_kind.status.code(), Some(0));
}

#[test]
fn cli_stats_and_generate() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path());
    let run = |args: &[&str]| Command::new(BIN).current_dir(dir.path()).args(args).output().unwrap();

    let st = run(&["stats", "--graph", "g.txt", "--skills", "s.txt", "--seed", "1", "--relation", "dpe,nne", "--out", "stats.csv"]);
    assert!(st.status.success());
    let csv = fs::read_to_string(dir.path().join("stats.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("kind,pct_users,pct_skills,avg_dist"));
    assert_eq!(csv.lines().count(), 3);
    assert!(String::from_utf8_lossy(&st.stdout).contains("comp. users"));

    let gen = run(&[
        "generate", "--nodes", "50", "--edges", "120", "--negative", "30", "--seed", "3", "--out", "gen.txt",
        "--skills", "gen_skills.txt", "--zipf-skills", "10",
    ]);
    assert!(gen.status.success());
    let g = fs::read_to_string(dir.path().join("gen.txt")).unwrap();
    assert_eq!(g.lines().count(), 120);
    assert_eq!(g.lines().filter(|l| l.ends_with("-1")).count(), 30);
    assert!(dir.path().join("gen_skills.txt").exists());
}

#[test]
fn cli_config_file() {
    let dir = tempfile::tempdir().unwrap();
    write_fixture(dir.path());
    fs::write(
        dir.path().join("exp.cfg"),
        "graph = g.txt\nskills = s.txt\nseed = 9\nkinds = SPA, NNE\ntask_sizes = 1, 2\ntasks_per_size = 4\n",
    )
    .unwrap();
    let out = Command::new(BIN)
        .current_dir(dir.path())
        .args(["experiment", "--config", "exp.cfg"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = String::from_utf8(out.stdout).unwrap();
    assert_eq!(csv.lines().next(), Some("kind,k,policy,solution_pct,avg_cost"));
    // k = 1 is always solvable at cost 0
    assert!(csv.lines().any(|l| l == "SPA,1,LCMD,100.00,0.00"));
    // 2 kinds x 2 sizes x (MAX + 4 policies + random)
    assert_eq!(csv.lines().count(), 1 + 2 * 2 * 6);
}
