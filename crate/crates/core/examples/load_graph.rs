//! Loading a signed edge list and a skill file.
//!
//! Edge lines are `u v sign` with sign `+1`, `1` or `-1`; `#` starts a
//! comment. Duplicate edges are ignored with a warning, while self-loops and
//! conflicting signs are errors. A disconnected graph is rejected unless the
//! largest component is requested.

use signed_teams::graph::{parse_graph, parse_skills, LoadOptions};

const EDGES: &str = "\
# two camps and a stray pair
alice bob +1
bob carol +1
carol dave -1
dave erin +1
alice erin -1
alice bob +1
x y +1
";

const SKILLS: &str = "\
alice rust sql
bob sql
dave ml
x rust
";

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();

    match parse_graph(EDGES.as_bytes(), &LoadOptions::default()) {
        Ok(_) => unreachable!(),
        Err(e) => println!("strict load: {e}"),
    }

    let graph = parse_graph(EDGES.as_bytes(), &LoadOptions { largest_component: true }).unwrap();
    println!(
        "kept {} nodes and {} edges ({} negative); dropped x: {}",
        graph.node_count(),
        graph.edge_count(),
        graph.negative_pct_display(),
        graph.was_dropped("x")
    );
    for (u, v, s) in graph.edges() {
        println!("  {} {} {}", graph.label(u), graph.label(v), s);
    }

    // skills of dropped users are skipped
    let skills = parse_skills(SKILLS.as_bytes(), &graph).unwrap();
    for s in skills.skill_ids() {
        let holders: Vec<&str> = skills.users_with(s).iter().map(|&u| graph.label(u)).collect();
        println!("{:>5}: {}", skills.skill_label(s), holders.join(", "));
    }
}
