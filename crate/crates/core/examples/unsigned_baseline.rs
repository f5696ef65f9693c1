//! How often teams formed without looking at signs turn out compatible.

use signed_teams::harness::{
    generate_zipf_skills, random_connected_signed_graph, run_baseline_comparison, write_baseline_csv, Dataset,
    ExperimentSpec, PerUserSkills, SkillSource,
};

fn main() {
    let graph = random_connected_signed_graph(800, 3000, 600, 11).unwrap();
    let skills = generate_zipf_skills(800, 80, 1.0, PerUserSkills::default(), 11).unwrap();
    let data = Dataset { graph, skills };

    let mut spec = ExperimentSpec::new("in-memory", SkillSource::File("in-memory".into()), 11);
    spec.kinds.retain(|k| *k != signed_teams::RelationKind::Sbp);
    spec.task_sizes = vec![5];
    spec.tasks_per_size = 50;

    let rows = run_baseline_comparison(&data, &spec).unwrap();
    write_baseline_csv(std::io::stdout().lock(), &rows).unwrap();
}
