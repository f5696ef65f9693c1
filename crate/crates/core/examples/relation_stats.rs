//! Compatibility statistics of every relation on a synthetic network.
//!
//! ```bash
//! cargo run --release --example relation_stats -- 400 1200 350
//! ```

use signed_teams::compat::{RelationKind, RelationOptions};
use signed_teams::harness::{
    format_stats_table, generate_zipf_skills, random_connected_signed_graph, run_compat_stats, write_stats_csv,
    Dataset, PerUserSkills,
};

fn main() {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let (nodes, edges, negative) = match args[..] {
        [n, e, m] => (n, e, m),
        _ => (214, 304, 89),
    };
    let graph = random_connected_signed_graph(nodes, edges, negative, 1).unwrap();
    let skills = generate_zipf_skills(nodes, 40, 1.0, PerUserSkills::default(), 1).unwrap();
    println!("{} users, {} edges, {} negative", nodes, edges, graph.negative_pct_display());
    let data = Dataset { graph, skills };

    let rows = run_compat_stats(&data, &RelationKind::ALL, &RelationOptions::default()).unwrap();
    print!("{}", format_stats_table(&rows));
    println!();
    write_stats_csv(std::io::stdout().lock(), &rows).unwrap();
}
