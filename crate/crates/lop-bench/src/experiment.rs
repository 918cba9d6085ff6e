//! Seeded repeated runs over a set of instances, with record files and
//! per-run trajectory sidecars.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use lop::{run, Algorithm, Budget, EngineConfig, ExecutorSpec, IlsConfig, LopInstance, RunResult};
use serde::Serialize;

use crate::records::{write_records, RecordFormat, RunRecord};

/// A batch of runs: every instance is solved `repetitions` times, run `r`
/// seeded with `base_seed + r`.
#[derive(Clone, Debug)]
pub struct ExperimentSpec {
    pub instances: Vec<PathBuf>,
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub run_budget: Budget,
    pub ils: IlsConfig,
    pub executor: ExecutorSpec,
    pub repetitions: u64,
    pub base_seed: u64,
    pub out: PathBuf,
    pub format: RecordFormat,
}

#[derive(Clone, Debug)]
pub struct InstanceFailure {
    pub path: PathBuf,
    pub error: String,
}

#[derive(Debug)]
pub struct ExperimentOutcome {
    pub records: Vec<RunRecord>,
    pub failures: Vec<InstanceFailure>,
    pub sidecars: Vec<PathBuf>,
}

/// Everything needed to reproduce one run, stored next to the record file.
#[derive(Serialize)]
struct Sidecar<'a> {
    instance: &'a str,
    config: &'a EngineConfig,
    best_fitness: i64,
    best_order: &'a [usize],
    generations: u64,
    sweeps: u64,
    wall_seconds: f64,
    trajectory: &'a [lop::TrajectorySample],
}

/// Runs the experiment. Unreadable instances are reported as failures while
/// the remaining instances still run; whatever records exist are flushed to
/// the output file either way.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentOutcome> {
    if spec.repetitions == 0 {
        bail!("an experiment needs at least one repetition");
    }
    if spec.instances.is_empty() {
        bail!("an experiment needs at least one instance");
    }

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut sidecars = Vec::new();

    for path in &spec.instances {
        let inst = match LopInstance::from_path(path) {
            Ok(inst) => inst,
            Err(err) => {
                failures.push(InstanceFailure { path: path.clone(), error: err.to_string() });
                continue;
            }
        };
        for rep in 0..spec.repetitions {
            let cfg = EngineConfig {
                algorithm: spec.algorithm,
                population_size: spec.population_size,
                run_budget: spec.run_budget,
                ils: spec.ils,
                seed: spec.base_seed + rep,
                executor: spec.executor,
            };
            // Configuration errors abort the experiment: every later run
            // would fail the same way.
            let result = run(&inst, &cfg)
                .with_context(|| format!("run failed on {} (seed {})", inst.name(), cfg.seed))?;
            let sidecar = write_sidecar(&spec.out, inst.name(), &cfg, &result)?;
            sidecars.push(sidecar);
            records.push(RunRecord {
                instance: inst.name().to_string(),
                algorithm: spec.algorithm.name().to_string(),
                seed: cfg.seed,
                fitness: result.best.fitness,
                generations: result.generations,
                wall_seconds: result.wall_seconds,
            });
        }
    }

    write_records(&spec.out, spec.format, &records)?;
    Ok(ExperimentOutcome { records, failures, sidecars })
}

fn write_sidecar(
    out: &Path,
    instance: &str,
    cfg: &EngineConfig,
    result: &RunResult,
) -> Result<PathBuf> {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "results".to_string());
    let name = format!("{stem}-{instance}-{}-s{}.trajectory.json", cfg.algorithm.name(), cfg.seed);
    let path = out.with_file_name(name);
    let sidecar = Sidecar {
        instance,
        config: cfg,
        best_fitness: result.best.fitness,
        best_order: result.best.perm.as_slice(),
        generations: result.generations,
        sweeps: result.sweeps,
        wall_seconds: result.wall_seconds,
        trajectory: &result.trajectory,
    };
    let json = serde_json::to_string_pretty(&sidecar)?;
    std::fs::write(&path, json + "\n")
        .with_context(|| format!("cannot write sidecar {}", path.display()))?;
    Ok(path)
}
