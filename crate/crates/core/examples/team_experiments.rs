//! The random-task protocol: success rate and cost of each policy per
//! relation and task size, with the pairwise-compatible-skills bound.

use signed_teams::compat::RelationKind;
use signed_teams::harness::{
    generate_zipf_skills, random_connected_signed_graph, run_team_experiments, write_team_experiments_csv, Dataset,
    ExperimentSpec, PerUserSkills, SkillSource,
};

fn main() {
    let graph = random_connected_signed_graph(1000, 4000, 900, 3).unwrap();
    let skills = generate_zipf_skills(1000, 100, 1.0, PerUserSkills::default(), 3).unwrap();
    let data = Dataset { graph, skills };

    // the graph path is only read by Dataset::load
    let mut spec = ExperimentSpec::new("in-memory", SkillSource::File("in-memory".into()), 3);
    spec.kinds = vec![RelationKind::Spa, RelationKind::Spo, RelationKind::SbpH, RelationKind::Nne];
    spec.task_sizes = vec![2, 5, 10];
    spec.tasks_per_size = 50;

    let rows = run_team_experiments(&data, &spec).unwrap();
    write_team_experiments_csv(std::io::stdout().lock(), &rows).unwrap();
}
