use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use seqsub::bench::{
    gen_dag, gen_infogain, gen_recommender, gen_searchtrack, gen_tasks, run_experiment, Algo, Cell,
    ExperimentSpec, Family, Instance, OptMode,
};
use seqsub::dagmodel::{load_movielens_path, EvalMode, HKind, MovielensFilter};
use seqsub::opt::{
    opt_full, opt_subset_reorder, opt_subset_timesort, validate_timesort, DEFAULT_GUARD,
};
use seqsub::seqcore::{
    check_monotonicity, check_submodularity, CheckBounds, MonotonicityKind, SubmodularityKind,
};
use seqsub::{Error, Oracle, SequenceFunction};

#[derive(Parser)]
#[command(
    name = "seqsub",
    version,
    about = "Submodular maximization over sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run algorithms over a grid of generated instances and write CSV results.
    Run(RunArgs),
    /// Run the monotonicity/submodularity checkers on one instance.
    Check(CheckArgs),
    /// Compute the exact optimum of one instance.
    Opt(OptArgs),
    /// Build the preference DAG from a Movielens ratings file.
    MovielensPrep(PrepArgs),
}

#[derive(Args)]
struct InstanceArgs {
    /// tasks, infogain, searchtrack, recommender, dag-mod, dag-sub
    #[arg(long)]
    family: Option<String>,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    k: usize,
    /// Out-degree for synthetic DAGs.
    #[arg(long, default_value_t = 5)]
    d: usize,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    m_slope: f64,
    #[arg(long, default_value_t = 50)]
    topics: usize,
    /// Task count for the tasks family.
    #[arg(long, default_value_t = 50)]
    tasks: usize,
    #[arg(long, default_value_t = 40)]
    paths: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Load the instance from a file instead of generating it.
    #[arg(long, conflicts_with = "family")]
    instance: Option<PathBuf>,
    /// Override the repeat policy of search-and-tracking and recommender instances.
    #[arg(long)]
    repeats: Option<bool>,
    /// Write the instance to a file.
    #[arg(long)]
    save: Option<PathBuf>,
}

impl InstanceArgs {
    fn build(&self) -> seqsub::Result<Instance> {
        if let Some(path) = &self.instance {
            return Instance::load(path);
        }
        let family: Family = self
            .family
            .as_deref()
            .ok_or_else(|| Error::InvalidArgument("pass --family or --instance".into()))?
            .parse()?;
        let inst = match family {
            Family::Tasks => Instance::Tasks(gen_tasks(self.n, self.k, self.tasks, self.seed)?),
            Family::InfoGain => Instance::InfoGain(gen_infogain(self.n, self.k, self.seed)?),
            Family::SearchTrack => {
                let inst = gen_searchtrack(self.n, self.paths, self.m_slope, self.seed)?;
                Instance::SearchTrack(match self.repeats {
                    Some(r) => inst.with_repeats(r),
                    None => inst,
                })
            }
            Family::Recommender => {
                let inst = gen_recommender(self.n, self.topics, self.seed)?;
                Instance::Recommender(match self.repeats {
                    Some(r) => inst.with_repeats(r),
                    None => inst,
                })
            }
            Family::DagMod => Instance::Dag(gen_dag(self.n, self.d, HKind::Modular, self.seed)?),
            Family::DagSub => Instance::Dag(gen_dag(self.n, self.d, HKind::Coverage, self.seed)?),
            other => {
                return Err(Error::InvalidArgument(format!(
                    "{other} instances come from movielens-prep"
                )))
            }
        };
        if let Some(path) = &self.save {
            inst.save(path)?;
        }
        Ok(inst)
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    family: String,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', default_value = "30")]
    n: Vec<usize>,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',', default_value = "5")]
    k: Vec<usize>,
    /// Comma-separated out-degrees for synthetic DAGs.
    #[arg(long, value_delimiter = ',')]
    d: Vec<usize>,
    /// Comma-separated detection slopes for search-and-tracking.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    m_slope: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    topics: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    tasks: usize,
    #[arg(long, default_value_t = 40)]
    paths: usize,
    #[arg(long, default_value_t = 50)]
    instances: usize,
    #[arg(long, value_delimiter = ',', default_value = "gsemo,greedy")]
    algos: Vec<String>,
    /// Algorithm the win/tie/loss counts compare against.
    #[arg(long)]
    baseline: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// full, subset, timesort or off.
    #[arg(long, default_value = "off")]
    opt: String,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: u128,
    /// Fixed GSEMO iteration count instead of the theoretical budget.
    #[arg(long)]
    iterations: Option<u64>,
    /// Ratings file for the Movielens families.
    #[arg(long)]
    ratings: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    trace: bool,
    /// Check the GSEMO archive invariants after every iteration.
    #[arg(long)]
    check_invariants: bool,
    /// `algo=value[:tol]`; exit with status 4 if the first cell's mean differs by more than tol
    /// (default 0.01).
    #[arg(long = "assert-mean")]
    assert_mean: Vec<String>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    #[arg(long, default_value_t = 3)]
    max_len: usize,
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
}

#[derive(Args)]
struct OptArgs {
    #[command(flatten)]
    instance: InstanceArgs,
    /// full, subset or timesort.
    #[arg(long, default_value = "full")]
    method: String,
    #[arg(long, default_value_t = DEFAULT_GUARD)]
    guard: u128,
}

#[derive(Args)]
struct PrepArgs {
    #[arg(long)]
    ratings: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 20)]
    min_user_ratings: usize,
    #[arg(long, default_value_t = 50)]
    max_user_ratings: usize,
    #[arg(long, default_value_t = 1000)]
    min_movie_ratings: usize,
}

enum Failure {
    Lib(Error),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::TooLarge { .. } | Error::BudgetExceeded { .. } => 3,
        Error::Io { .. } | Error::IoPlain(_) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => run(a),
        Command::Check(a) => check(a).map_err(Failure::from),
        Command::Opt(a) => opt(a).map_err(Failure::from),
        Command::MovielensPrep(a) => prep(a).map_err(Failure::from),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
        Err(Failure::Mismatch(msg)) => {
            eprintln!("assertion failed: {msg}");
            ExitCode::from(4)
        }
    }
}

fn run(a: RunArgs) -> Result<(), Failure> {
    let family: Family = a.family.parse()?;
    let params: Vec<f64> = match family {
        Family::DagMod | Family::DagSub => a.d.iter().map(|&d| d as f64).collect(),
        Family::SearchTrack => a.m_slope.clone(),
        Family::Recommender => a.topics.iter().map(|&t| t as f64).collect(),
        _ => Vec::new(),
    };
    let params = match (params.is_empty(), family) {
        (false, _) => params,
        (true, Family::DagMod | Family::DagSub) => vec![5.0],
        (true, Family::Recommender) => vec![50.0],
        (true, _) => vec![0.0],
    };
    let mut spec = ExperimentSpec::new(family);
    for &n in &a.n {
        for &k in &a.k {
            for &param in &params {
                spec.cells.push(Cell { n, k, param });
            }
        }
    }
    spec.instances = a.instances;
    spec.algos = a
        .algos
        .iter()
        .map(|s| s.parse())
        .collect::<seqsub::Result<_>>()?;
    spec.baseline = a.baseline.as_deref().map(str::parse).transpose()?;
    spec.seed = a.seed;
    spec.opt = a.opt.parse::<OptMode>()?;
    spec.opt_guard = a.guard;
    spec.iterations = a.iterations;
    spec.num_tasks = a.tasks;
    spec.num_paths = a.paths;
    spec.movielens = a.ratings;
    spec.check_invariants = a.check_invariants;
    spec.trace = a.trace;
    spec.out_dir = Some(a.out.clone());
    let out = run_experiment(&spec)?;
    for s in &out.summary {
        let ratio = s
            .mean_ratio
            .map(|r| format!(" ratio={r:.4}"))
            .unwrap_or_default();
        let sign = match (s.p_value, s.significant) {
            (Some(p), Some(sig)) => format!(
                " w/t/l={}/{}/{} p={p:.4}{}",
                s.wins,
                s.ties,
                s.losses,
                if sig { " *" } else { "" }
            ),
            _ => String::new(),
        };
        println!(
            "{} n={} k={} param={} {:<8} mean={:.4}{ratio}{sign}",
            s.family, s.n, s.k, s.param, s.algorithm, s.mean_value
        );
    }
    println!("results written to {}", a.out.display());
    for claim in &a.assert_mean {
        let (algo, rest) = claim
            .split_once('=')
            .ok_or_else(|| Error::InvalidArgument(format!("bad --assert-mean `{claim}`")))?;
        let (target, tol) = match rest.split_once(':') {
            Some((t, tol)) => (t, tol),
            None => (rest, "0.01"),
        };
        let parse = |x: &str| {
            x.parse::<f64>()
                .map_err(|_| Error::InvalidArgument(format!("bad number in `{claim}`")))
        };
        let (target, tol) = (parse(target)?, parse(tol)?);
        let algo: Algo = algo.parse()?;
        let row = out
            .summary
            .iter()
            .find(|s| s.algorithm == algo)
            .ok_or_else(|| Error::InvalidArgument(format!("{algo} was not run")))?;
        if (row.mean_value - target).abs() > tol {
            return Err(Failure::Mismatch(format!(
                "{algo} mean {:.6} is not within {tol} of {target}",
                row.mean_value
            )));
        }
    }
    Ok(())
}

fn report_checks<F: SequenceFunction>(
    oracle: &Oracle<F>,
    bounds: &CheckBounds,
) -> seqsub::Result<()> {
    use MonotonicityKind as M;
    use SubmodularityKind as S;
    let show = |name: String, r: seqsub::Result<seqsub::seqcore::PropertyReport>| match r {
        Ok(report) => {
            println!("{report}");
            Ok(())
        }
        Err(e @ Error::StageOutOfRange { .. }) => {
            println!("{name}: skipped ({e})");
            Ok(())
        }
        Err(e) => Err(e),
    };
    for kind in [M::Subsequence, M::Prefix, M::Suffix, M::Weak] {
        show(kind.to_string(), check_monotonicity(oracle, kind, *bounds))?;
    }
    for kind in [S::Strong, S::Subsequence, S::Prefix] {
        show(kind.to_string(), check_submodularity(oracle, kind, *bounds))?;
    }
    Ok(())
}

fn check(a: CheckArgs) -> seqsub::Result<()> {
    let bounds = CheckBounds {
        max_len: a.max_len,
        eval_budget: a.budget,
    };
    match a.instance.build()? {
        Instance::Tasks(t) => report_checks(&Oracle::new(t), &bounds),
        Instance::InfoGain(t) => report_checks(&Oracle::new(t), &bounds),
        Instance::SearchTrack(t) => report_checks(&Oracle::new(t), &bounds),
        Instance::Recommender(t) => report_checks(&Oracle::new(t), &bounds),
        Instance::Dag(d) => report_checks(&Oracle::new(d.with_mode(EvalMode::Raw)), &bounds),
    }
}

fn opt(a: OptArgs) -> seqsub::Result<()> {
    let k = a.instance.k;
    let inst = a.instance.build()?;
    let result = match (a.method.as_str(), inst) {
        ("full", Instance::Tasks(t)) => opt_full(&Oracle::new(t), k, a.guard)?,
        ("full", Instance::InfoGain(t)) => opt_full(&Oracle::new(t), k, a.guard)?,
        ("full", Instance::SearchTrack(t)) => opt_full(&Oracle::new(t), k, a.guard)?,
        ("full", Instance::Recommender(t)) => opt_full(&Oracle::new(t), k, a.guard)?,
        ("full", Instance::Dag(d)) => {
            opt_full(&Oracle::new(d.with_mode(EvalMode::Reordered)), k, a.guard)?
        }
        ("subset", Instance::Dag(d)) => {
            opt_subset_reorder(&Oracle::new(d.with_mode(EvalMode::Reordered)), k, a.guard)?
        }
        ("timesort", Instance::SearchTrack(t)) => {
            let cert = validate_timesort(200, 0x7135)?;
            opt_subset_timesort(&Oracle::new(t), k, a.guard, Some(&cert))?
        }
        (m, inst) => {
            return Err(Error::InvalidArgument(format!(
                "method `{m}` does not apply to {} instances",
                inst.family()
            )))
        }
    };
    println!("value {}", result.value);
    println!("witness {}", result.witness);
    println!("enumerated {}", result.enumerated);
    println!("method {}", result.method);
    Ok(())
}

fn prep(a: PrepArgs) -> seqsub::Result<()> {
    let filter = MovielensFilter {
        min_user_ratings: a.min_user_ratings,
        max_user_ratings: a.max_user_ratings,
        min_movie_ratings: a.min_movie_ratings,
        ..MovielensFilter::default()
    };
    let data = load_movielens_path(&a.ratings, &filter)?;
    data.dag.save(&a.out)?;
    println!("users {}", data.users);
    println!("movies {}", data.movie_ids.len());
    println!("graph written to {}", a.out.display());
    Ok(())
}
