use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;

use signed_teams::compat::{build_relation, RelationKind};
use signed_teams::graph::{write_graph, write_skills, Task};
use signed_teams::harness::{
    format_stats_table, generate_zipf_skills, random_connected_signed_graph, run_baseline_comparison,
    run_compat_stats, run_team_experiments, write_baseline_csv, write_stats_csv, write_team_experiments_csv, Dataset,
    ExperimentSpec, HarnessError, PerUserSkills, SkillSource, ZipfSpec,
};
use signed_teams::team::{write_team_row, PolicyConfig, TeamError, TeamFormer, TEAM_CSV_HEADER};

#[derive(Parser)]
#[command(version, about = "Compatibility relations and team formation on signed networks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compatibility statistics per relation kind.
    Stats(Common),
    /// Form one team for a task.
    Team {
        #[command(flatten)]
        common: Common,
        /// Comma-separated skill labels.
        #[arg(long, value_delimiter = ',', required = true)]
        task: Vec<String>,
        /// LCMD, LCMC, LCRAND, RFMD, RFMC, RFRAND or LCMDSUM.
        #[arg(long, default_value = "LCMD")]
        policy: String,
    },
    /// Team formation over random tasks.
    Experiment(Common),
    /// Compatibility of teams formed while ignoring signs.
    Baseline(Common),
    /// Write a random connected signed graph and/or Zipf skills.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct Common {
    /// key = value experiment config; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Edge list `u v sign`.
    #[arg(long)]
    graph: Option<PathBuf>,
    /// Skill file `u skill...`.
    #[arg(long)]
    skills: Option<PathBuf>,
    /// Generate this many Zipf-distributed skills instead of reading a file.
    #[arg(long)]
    zipf_skills: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    zipf_exponent: f64,
    /// Comma-separated relation kinds.
    #[arg(long, value_delimiter = ',')]
    relation: Vec<RelationKind>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Keep the largest connected component of a disconnected graph.
    #[arg(long)]
    largest_component: bool,
    #[arg(long, value_delimiter = ',')]
    task_sizes: Vec<usize>,
    #[arg(long)]
    tasks_per_size: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    policies: Vec<String>,
    /// Path-length budget of the exact balanced-path search.
    #[arg(long)]
    sbp_max_path_len: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Existing graph to attach skills to; a new graph is generated when absent.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    nodes: usize,
    #[arg(long, default_value_t = 5000)]
    edges: usize,
    #[arg(long, default_value_t = 1000)]
    negative: usize,
    #[arg(long)]
    seed: u64,
    /// Where to write the generated graph.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Where to write generated skills.
    #[arg(long)]
    skills: Option<PathBuf>,
    #[arg(long, default_value_t = 500)]
    zipf_skills: usize,
    #[arg(long, default_value_t = 1.0)]
    zipf_exponent: f64,
    /// Mean number of skills per user.
    #[arg(long, default_value_t = 3.0)]
    mean_skills: f64,
}

impl Common {
    fn spec(&self) -> Result<ExperimentSpec, HarnessError> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::load_config(path)?,
            None => {
                let graph = self.graph.clone().ok_or_else(|| HarnessError::Spec("--graph is required".into()))?;
                let seed = self.seed.ok_or_else(|| HarnessError::Spec("--seed is required".into()))?;
                ExperimentSpec::new(graph, SkillSource::File(PathBuf::new()), seed)
            }
        };
        if let Some(g) = &self.graph {
            spec.graph_path = g.clone();
        }
        if let Some(s) = self.seed {
            spec.seed = s;
        }
        match (&self.skills, self.zipf_skills) {
            (Some(p), _) => spec.skills = SkillSource::File(p.clone()),
            (None, Some(n)) => {
                spec.skills = SkillSource::Zipf(ZipfSpec {
                    n_skills: n,
                    exponent: self.zipf_exponent,
                    per_user: PerUserSkills::default(),
                })
            }
            (None, None) if self.config.is_none() => {
                return Err(HarnessError::Spec("--skills or --zipf-skills is required".into()))
            }
            _ => {}
        }
        if !self.relation.is_empty() {
            spec.kinds = self.relation.clone();
        }
        if !self.task_sizes.is_empty() {
            spec.task_sizes = self.task_sizes.clone();
        }
        if let Some(t) = self.tasks_per_size {
            spec.tasks_per_size = t;
        }
        if !self.policies.is_empty() {
            spec.policies = self
                .policies
                .iter()
                .map(|p| p.parse())
                .collect::<Result<_, TeamError>>()?;
        }
        if self.sbp_max_path_len.is_some() {
            spec.relation.sbp_max_path_len = self.sbp_max_path_len;
        }
        spec.largest_component |= self.largest_component;
        spec.validate()?;
        Ok(spec)
    }

    fn output(&self) -> io::Result<Box<dyn Write>> {
        output(self.out.as_ref())
    }
}

fn output(path: Option<&PathBuf>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

enum Outcome {
    Done,
    NoTeam,
}

fn run(cli: Cli) -> Result<Outcome, HarnessError> {
    match cli.command {
        Command::Stats(c) => {
            let spec = c.spec()?;
            let data = Dataset::load(&spec)?;
            info!(
                "{} nodes, {} edges, {} negative",
                data.graph.node_count(),
                data.graph.edge_count(),
                data.graph.negative_pct_display()
            );
            let rows = run_compat_stats(&data, &spec.kinds, &spec.relation)?;
            let table = format_stats_table(&rows);
            if c.out.is_some() {
                print!("{table}");
            } else {
                eprint!("{table}");
            }
            let mut out = c.output()?;
            write_stats_csv(&mut out, &rows)?;
            out.flush()?;
        }
        Command::Team { common, task, policy } => {
            let spec = common.spec()?;
            let data = Dataset::load(&spec)?;
            let task = Task::from_labels(&task, &data.skills)?;
            let mut config: PolicyConfig = policy.parse()?;
            if config.seed.is_none() {
                config = config.with_seed(spec.seed);
            }
            let mut out = common.output()?;
            writeln!(out, "{TEAM_CSV_HEADER}")?;
            let mut failure = None;
            for &kind in &spec.kinds {
                let relation = build_relation(&data.graph, kind, &spec.relation)?;
                match TeamFormer::new(&relation, &data.skills)?.form(&task, &config) {
                    Ok(team) => write_team_row(&mut out, &team, &data.graph, &data.skills, kind, &config)?,
                    Err(e) if e.is_no_team() => {
                        eprintln!("{kind}: {e}");
                        failure = Some(e);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
            out.flush()?;
            if failure.is_some() {
                return Ok(Outcome::NoTeam);
            }
        }
        Command::Experiment(c) => {
            let spec = c.spec()?;
            let data = Dataset::load(&spec)?;
            let rows = run_team_experiments(&data, &spec)?;
            let mut out = c.output()?;
            write_team_experiments_csv(&mut out, &rows)?;
            out.flush()?;
        }
        Command::Baseline(c) => {
            let spec = c.spec()?;
            let data = Dataset::load(&spec)?;
            let rows = run_baseline_comparison(&data, &spec)?;
            let mut out = c.output()?;
            write_baseline_csv(&mut out, &rows)?;
            out.flush()?;
        }
        Command::Generate(g) => {
            let graph = match &g.graph {
                Some(p) => signed_teams::graph::load_graph(p, &Default::default())?,
                None => {
                    let graph = random_connected_signed_graph(g.nodes, g.edges, g.negative, g.seed)?;
                    let mut out = output(g.out.as_ref())?;
                    write_graph(&graph, &mut out)?;
                    out.flush()?;
                    graph
                }
            };
            if let Some(path) = &g.skills {
                let per_user = PerUserSkills::Geometric { mean: g.mean_skills };
                let skills = generate_zipf_skills(graph.node_count(), g.zipf_skills, g.zipf_exponent, per_user, g.seed)?;
                let mut out = output(Some(path))?;
                write_skills(&graph, &skills, &mut out)?;
                out.flush()?;
            }
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::NoTeam) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
