//! Why balanced paths differ from shortest paths.
//!
//! The first graph has a pair whose only shortest path is negative but which
//! is joined by a longer positive path whose induced subgraph is balanced.
//! In the second, the shortest balanced path to `v` does not pass through
//! the shortest balanced path to `x4`, so a search that keeps one path per
//! node can miss `v` entirely.

use signed_teams::balance::{is_balanced_path, path_sign, Path};
use signed_teams::compat::{build_relation, sbp_exact_reachability, sbp_heuristic_counts, RelationKind, RelationOptions};
use signed_teams::fixtures::{balanced_but_not_shortest, prefix_failure, Fixture};

fn show(f: &Fixture, labels: &[&str]) {
    let p = Path::new(&f.graph, f.nodes(labels)).unwrap();
    println!(
        "  ({}) sign {} balanced {}",
        labels.join(","),
        path_sign(&f.graph, &p).unwrap(),
        is_balanced_path(&f.graph, &p).unwrap()
    );
}

fn main() {
    let f = balanced_but_not_shortest();
    let (u, v) = (f.node("u"), f.node("v"));
    println!("balanced but not shortest:");
    show(&f, &["u", "x1", "v"]);
    show(&f, &["u", "x2", "x1", "v"]);
    show(&f, &["u", "x2", "x3", "x4", "v"]);
    for kind in RelationKind::ALL {
        let rel = build_relation(&f.graph, kind, &RelationOptions::default()).unwrap();
        println!("  {:<4} (u, v): {:?}", kind.name(), rel.get(u, v));
    }

    let f = prefix_failure();
    let (u, v, x4) = (f.node("u"), f.node("v"), f.node("x4"));
    println!("prefix failure:");
    show(&f, &["u", "x3", "x4"]);
    show(&f, &["u", "x3", "x4", "x5", "v"]);
    show(&f, &["u", "x1", "x2", "x4", "x5", "v"]);
    let exact = sbp_exact_reachability(&f.graph, u, f.graph.node_count()).unwrap();
    let heur = sbp_heuristic_counts(&f.graph, u).unwrap();
    println!("  exact:     x4 {:?}, v {:?}", exact[x4.index()], exact[v.index()]);
    println!("  heuristic: x4 {:?}, v {:?}", heur[x4.index()], heur[v.index()]);
}
