//! Forming a team for one task under every relation and policy.

use signed_teams::compat::{build_relation, RelationKind, RelationOptions};
use signed_teams::graph::{parse_graph, parse_skills, LoadOptions, Task};
use signed_teams::team::{rarest_first_unsigned, PolicyConfig, TeamFormer};

const EDGES: &str = "\
ana ben +1
ben cho +1
cho dia +1
dia eva +1
eva ana -1
ben dia -1
cho fay +1
fay eva +1
";

const SKILLS: &str = "\
ana design
ben backend
cho frontend backend
dia design
eva ops
fay ops frontend
";

fn main() {
    let graph = parse_graph(EDGES.as_bytes(), &LoadOptions::default()).unwrap();
    let skills = parse_skills(SKILLS.as_bytes(), &graph).unwrap();
    let task = Task::from_labels(&["design", "backend", "ops"], &skills).unwrap();
    let names = |m: &[signed_teams::NodeId]| m.iter().map(|&u| graph.label(u)).collect::<Vec<_>>().join(" ");

    let policies: Vec<PolicyConfig> = ["LCMD", "LCMC", "RFMD", "LCRAND"]
        .iter()
        .map(|c| c.parse::<PolicyConfig>().unwrap().with_seed(7))
        .collect();
    for kind in RelationKind::ALL {
        let rel = build_relation(&graph, kind, &RelationOptions::default()).unwrap();
        let former = TeamFormer::new(&rel, &skills).unwrap();
        for p in &policies {
            match former.form(&task, p) {
                Ok(team) => println!("{:<4} {:<6} cost {}  {}", kind.name(), p.code(), team.cost(), names(team.members())),
                Err(e) => println!("{:<4} {:<6} {e}", kind.name(), p.code()),
            }
        }
    }

    let team = rarest_first_unsigned(&graph, &skills, &task).unwrap();
    println!("signs ignored:   cost {}  {}", team.cost(), names(team.members()));
    for kind in [RelationKind::Spa, RelationKind::Nne] {
        let rel = build_relation(&graph, kind, &RelationOptions::default()).unwrap();
        println!("  compatible under {kind}: {}", team.is_compatible_under(&rel));
    }
}
