//! Signed shortest-path counting on a large synthetic graph.
//!
//! ```bash
//! cargo run --release --example path_counting -- 30000 200000
//! ```

use std::time::Instant;

use signed_teams::compat::{sp_sign_counts, RelationKind, RelationOptions};
use signed_teams::harness::{generate_zipf_skills, random_connected_signed_graph, run_compat_stats, Dataset, PerUserSkills};
use signed_teams::NodeId;

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let nodes = args.first().copied().unwrap_or(30_000);
    let edges = args.get(1).copied().unwrap_or(200_000);
    let graph = random_connected_signed_graph(nodes, edges, edges / 5, 1).unwrap();
    println!("{} nodes, {} edges, {} negative", graph.node_count(), graph.edge_count(), graph.negative_pct_display());

    let mut times = Vec::new();
    for q in (0..nodes).step_by(nodes / 25).take(25) {
        let t = Instant::now();
        let counts = sp_sign_counts(&graph, NodeId::from(q)).unwrap();
        times.push(t.elapsed());
        std::hint::black_box(counts);
    }
    times.sort();
    println!("single source: median {:?}, max {:?}", times[times.len() / 2], times[times.len() - 1]);

    let skills = generate_zipf_skills(nodes, 500, 1.0, PerUserSkills::default(), 1).unwrap();
    let data = Dataset { graph, skills };
    let kinds = [RelationKind::Spa, RelationKind::Spm, RelationKind::Spo];
    let t = Instant::now();
    let rows = run_compat_stats(&data, &kinds, &RelationOptions::default()).unwrap();
    println!("all-pairs statistics in {:?}", t.elapsed());
    print!("{}", signed_teams::harness::format_stats_table(&rows));
}
