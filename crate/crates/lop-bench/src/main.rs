use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use lop::{Algorithm, Budget, Dispatch, ExecutorSpec, IlsConfig, LopInstance};
use lop_bench::{
    brute_force_optimum, gap_to_bks, generate_instance, read_records_non_empty, render_gap_table,
    render_table, run_experiment, summarize, to_lolib_string, BksRegistry, ExperimentSpec,
    RecordFormat,
};

/// Worker count fallback when `--workers` is not given.
const WORKERS_ENV: &str = "LOP_WORKERS";

#[derive(Parser)]
#[command(name = "lop-bench", version, about = "Benchmark harness for the lop solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run seeded repetitions of a solver and write one record per run.
    Run(RunArgs),
    /// Aggregate a record file into per-instance mean/best/worst fitness.
    Summarize(SummarizeArgs),
    /// Compare a record file against the best-known-solutions registry.
    Gap(GapArgs),
    /// Generate a random instance file.
    Generate(GenerateArgs),
    /// Exhaustively compute the optimum of a small instance (n <= 10).
    BruteForce(BruteForceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    MaEdm,
    MaEdmEi,
    Ils,
    LsMultistart,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(arg: AlgorithmArg) -> Self {
        match arg {
            AlgorithmArg::MaEdm => Algorithm::MaEdm,
            AlgorithmArg::MaEdmEi => Algorithm::MaEdmEi,
            AlgorithmArg::Ils => Algorithm::IlsOnly,
            AlgorithmArg::LsMultistart => Algorithm::LsMultistart,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DispatchArg {
    Dynamic,
    Static,
}

impl From<DispatchArg> for Dispatch {
    fn from(arg: DispatchArg) -> Self {
        match arg {
            DispatchArg::Dynamic => Dispatch::Dynamic,
            DispatchArg::Static => Dispatch::StaticBlock,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for RecordFormat {
    fn from(arg: FormatArg) -> Self {
        match arg {
            FormatArg::Csv => RecordFormat::Csv,
            FormatArg::Json => RecordFormat::Json,
        }
    }
}

#[derive(Args)]
struct RunArgs {
    /// Instance files in LOLIB text format (repeatable).
    #[arg(long = "instance", required = true, num_args = 1..)]
    instances: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "ma-edm")]
    algorithm: AlgorithmArg,
    /// Population size for the memetic algorithms; even. Multiples of the
    /// worker count waste the least time at the intensification barrier.
    #[arg(long = "pop-size", default_value_t = lop::DEFAULT_POPULATION_SIZE)]
    pop_size: usize,
    /// Wall-clock run budget in seconds.
    #[arg(long, conflicts_with = "budget_generations")]
    budget_seconds: Option<f64>,
    /// Deterministic run budget in generations (restarts for ls-multistart).
    #[arg(long)]
    budget_generations: Option<u64>,
    /// Wall-clock budget per inner ILS run (ma-edm-ei).
    #[arg(long, conflicts_with = "ils_iterations")]
    ils_seconds: Option<f64>,
    /// Deterministic budget per inner ILS run; for --algorithm ils this is
    /// the run budget itself.
    #[arg(long)]
    ils_iterations: Option<u64>,
    /// Swaps per ILS perturbation.
    #[arg(long, default_value_t = lop::DEFAULT_SWAP_COUNT)]
    swaps: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Repetitions per instance; run r uses seed + r.
    #[arg(long, default_value_t = 1)]
    runs: u64,
    /// Worker threads for the intensification pool; 1 runs sequentially.
    /// Falls back to the LOP_WORKERS environment variable.
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, value_enum, default_value = "dynamic")]
    dispatch: DispatchArg,
    /// Record file; per-run trajectory sidecars are written next to it.
    #[arg(long)]
    out: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
}

#[derive(Args)]
struct SummarizeArgs {
    /// Record file produced by `run`.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Also write the summary as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GapArgs {
    /// Record file produced by `run`.
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    /// Registry file; defaults to the bundled xLOLIB2 registry.
    #[arg(long)]
    registry: Option<PathBuf>,
    /// Exit nonzero when any instance is missing from the registry.
    #[arg(long = "strict-bks", default_value_t = false)]
    strict_bks: bool,
    /// Also write the report as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 0)]
    low: i64,
    #[arg(long, default_value_t = 100)]
    high: i64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Instance name; defaults to rand-n<n>-s<seed>.
    #[arg(long)]
    name: Option<String>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BruteForceArgs {
    #[arg(long)]
    instance: PathBuf,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Run(args) => report(cmd_run(args)),
        Command::Summarize(args) => report(cmd_summarize(args)),
        Command::Gap(args) => report(cmd_gap(args)),
        Command::Generate(args) => report(cmd_generate(args)),
        Command::BruteForce(args) => report(cmd_brute_force(args)),
    }
}

fn report(result: Result<ExitCode>) -> ExitCode {
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn resolve_budgets(args: &RunArgs, algorithm: Algorithm) -> Result<(Budget, IlsConfig)> {
    let ils_budget = match (args.ils_seconds, args.ils_iterations) {
        (Some(s), None) => Budget::WallClockSeconds(s),
        (None, Some(k)) => Budget::IlsIterations(k),
        (None, None) => Budget::WallClockSeconds(lop::DEFAULT_ILS_SECONDS),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    let ils = IlsConfig { budget: ils_budget, swap_count: args.swaps };

    let run_budget = match (args.budget_seconds, args.budget_generations) {
        (Some(s), None) => Some(Budget::WallClockSeconds(s)),
        (None, Some(g)) => Some(Budget::Generations(g)),
        (None, None) => None,
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };

    let run_budget = match (run_budget, algorithm) {
        (Some(b), _) => b,
        // A single ILS is budgeted by its own stopping criterion.
        (None, Algorithm::IlsOnly) => match ils_budget {
            Budget::IlsIterations(k) => Budget::IlsIterations(k),
            _ => bail!("--algorithm ils needs --budget-seconds or --ils-iterations"),
        },
        (None, _) => bail!("one of --budget-seconds or --budget-generations is required"),
    };
    Ok((run_budget, ils))
}

fn resolve_executor(args: &RunArgs) -> Result<ExecutorSpec> {
    let workers = match args.workers {
        Some(w) => Some(w),
        None => match std::env::var(WORKERS_ENV) {
            Ok(value) => Some(
                value
                    .parse::<usize>()
                    .with_context(|| format!("{WORKERS_ENV}={value} is not a worker count"))?,
            ),
            Err(_) => None,
        },
    };
    Ok(match workers {
        None | Some(1) => ExecutorSpec::Sequential,
        Some(w) => ExecutorSpec::Pool { workers: w, dispatch: args.dispatch.into() },
    })
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let algorithm: Algorithm = args.algorithm.into();
    let (run_budget, ils) = resolve_budgets(&args, algorithm)?;
    let executor = resolve_executor(&args)?;
    let spec = ExperimentSpec {
        instances: args.instances.clone(),
        algorithm,
        population_size: args.pop_size,
        run_budget,
        ils,
        executor,
        repetitions: args.runs,
        base_seed: args.seed,
        out: args.out.clone(),
        format: args.format.into(),
    };
    let outcome = run_experiment(&spec)?;
    println!(
        "wrote {} records to {} ({} trajectory sidecars)",
        outcome.records.len(),
        spec.out.display(),
        outcome.sidecars.len()
    );
    if outcome.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for failure in &outcome.failures {
            eprintln!("error: {}: {}", failure.path.display(), failure.error);
        }
        Ok(ExitCode::FAILURE)
    }
}

fn cmd_summarize(args: SummarizeArgs) -> Result<ExitCode> {
    let records = read_records_non_empty(&args.input, args.format.into())?;
    let rows = summarize(&records)?;
    print!("{}", render_table(&rows));
    if let Some(path) = args.json {
        std::fs::write(&path, serde_json::to_string_pretty(&rows)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gap(args: GapArgs) -> Result<ExitCode> {
    let records = read_records_non_empty(&args.input, args.format.into())?;
    let registry = match &args.registry {
        Some(path) => BksRegistry::from_path(path)?,
        None => BksRegistry::bundled(),
    };
    let report = gap_to_bks(&records, &registry);
    print!("{}", render_gap_table(&report));
    if let Some(path) = args.json {
        std::fs::write(&path, serde_json::to_string_pretty(&report)? + "\n")
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    if args.strict_bks && !report.unmatched.is_empty() {
        eprintln!("error: {} instances missing from the registry", report.unmatched.len());
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_generate(args: GenerateArgs) -> Result<ExitCode> {
    let inst = generate_instance(args.n, args.low, args.high, args.seed, args.name)?;
    std::fs::write(&args.out, to_lolib_string(&inst))
        .with_context(|| format!("cannot write {}", args.out.display()))?;
    println!("wrote {} (n = {}) to {}", inst.name(), inst.n(), args.out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_brute_force(args: BruteForceArgs) -> Result<ExitCode> {
    let inst = LopInstance::from_path(&args.instance)?;
    let (fitness, perm) = brute_force_optimum(&inst)?;
    println!("instance {} optimum {}", inst.name(), fitness);
    println!(
        "order {}",
        perm.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(" ")
    );
    Ok(ExitCode::SUCCESS)
}
