//! End-to-end solver runs: population initialization, tournament selection,
//! cycle crossover, batched intensification, and BNP replacement under the
//! decaying diversity threshold, plus the ILS-only and multistart baselines.

use std::fmt;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::evolution::{binary_tournament, bnp_replacement, cycle_crossover, init_d0, DiversitySchedule};
use crate::ils::{ils_run_traced, IlsConfig};
use crate::instance::LopInstance;
use crate::local_search::local_search_traced;
use crate::parallel::{ExecutorSpec, IntensifierKind, IntensifyTask};
use crate::perm::Individual;

/// Population size used by the published benchmark configuration.
pub const DEFAULT_POPULATION_SIZE: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    /// Memetic algorithm with explicit diversity management; the intensifier
    /// is the shift-based local search.
    MaEdm,
    /// Same loop with the intensifier replaced by a budgeted ILS.
    MaEdmEi,
    /// A single ILS run from a random start.
    #[serde(rename = "ils")]
    IlsOnly,
    /// Repeated local search from fresh random starts.
    LsMultistart,
}

impl Algorithm {
    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::MaEdm => "ma-edm",
            Algorithm::MaEdmEi => "ma-edm-ei",
            Algorithm::IlsOnly => "ils",
            Algorithm::LsMultistart => "ls-multistart",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineConfig {
    pub algorithm: Algorithm,
    /// Population size; must be even for the population algorithms so that
    /// consecutive tournament winners pair up for crossover.
    pub population_size: usize,
    pub run_budget: Budget,
    /// Inner ILS settings, used by `MaEdmEi` (budget and swap count) and
    /// `IlsOnly` (swap count; the run budget is the outer one).
    pub ils: IlsConfig,
    pub seed: u64,
    pub executor: ExecutorSpec,
}

impl EngineConfig {
    pub fn new(algorithm: Algorithm, run_budget: Budget) -> Self {
        Self {
            algorithm,
            population_size: DEFAULT_POPULATION_SIZE,
            run_budget,
            ils: IlsConfig::default(),
            seed: 0,
            executor: ExecutorSpec::Sequential,
        }
    }

    pub fn with_population_size(mut self, n: usize) -> Self {
        self.population_size = n;
        self
    }

    pub fn with_ils(mut self, ils: IlsConfig) -> Self {
        self.ils = ils;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_executor(mut self, executor: ExecutorSpec) -> Self {
        self.executor = executor;
        self
    }

    pub fn validate(&self) -> Result<()> {
        self.executor.validate()?;
        self.run_budget.validate()?;
        match self.algorithm {
            Algorithm::MaEdm | Algorithm::MaEdmEi => {
                if self.population_size < 2 || !self.population_size.is_multiple_of(2) {
                    return Err(Error::config(format!(
                        "population size must be even and >= 2, got {}",
                        self.population_size
                    )));
                }
                if matches!(self.run_budget, Budget::IlsIterations(_)) {
                    return Err(Error::config(format!(
                        "budget kind {:?} is not supported by {}",
                        self.run_budget, self.algorithm
                    )));
                }
                if self.algorithm == Algorithm::MaEdmEi {
                    self.ils.validate()?;
                    if let (Budget::WallClockSeconds(inner), Budget::WallClockSeconds(outer)) =
                        (self.ils.budget, self.run_budget)
                    {
                        if inner >= outer {
                            return Err(Error::config(format!(
                                "ILS budget ({inner} s) must be strictly below the run budget ({outer} s)"
                            )));
                        }
                    }
                }
            }
            Algorithm::IlsOnly => {
                if !matches!(
                    self.run_budget,
                    Budget::WallClockSeconds(_) | Budget::IlsIterations(_)
                ) {
                    return Err(Error::config(format!(
                        "budget kind {:?} is not supported by {}",
                        self.run_budget, self.algorithm
                    )));
                }
                if self.ils.swap_count == 0 {
                    return Err(Error::config("ILS swap count must be >= 1"));
                }
            }
            Algorithm::LsMultistart => {
                if matches!(self.run_budget, Budget::IlsIterations(_)) {
                    return Err(Error::config(format!(
                        "budget kind {:?} is not supported by {}",
                        self.run_budget, self.algorithm
                    )));
                }
            }
        }
        Ok(())
    }
}

/// One point on the best-so-far curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    pub progress: f64,
    pub best_fitness: i64,
}

/// Outcome of one run. With count-based budgets every field except
/// `wall_seconds` is a pure function of the configuration.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunResult {
    pub best: Individual,
    /// Generations for the population algorithms, perturbation rounds for
    /// `IlsOnly`, restarts for `LsMultistart`.
    pub generations: u64,
    pub trajectory: Vec<TrajectorySample>,
    pub seed: u64,
    pub wall_seconds: f64,
    /// Total local-search passes spent across all intensifications.
    pub sweeps: u64,
}

// --- deterministic seed derivation -----------------------------------------
//
// All randomness in a run is derived from the configured seed. The master
// stream drives population initialization and parent selection; every
// intensification task gets its own stream indexed by (generation, slot), so
// results cannot depend on which worker ran the task or in what order.

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

const MASTER_TAG: u64 = 0x6D61_7374_6572_0001;

/// Seed of the master decision stream.
pub fn master_seed(seed: u64) -> u64 {
    splitmix64(seed ^ MASTER_TAG)
}

/// Seed of the intensification stream for a logical (generation, slot) task.
/// Generation 0 is the initial population; generation `g + 1` is the
/// offspring batch of loop iteration `g`.
pub fn task_seed(seed: u64, generation: u64, slot: u64) -> u64 {
    let mut h = splitmix64(seed ^ 0xA076_1D64_78BD_642F);
    h = splitmix64(h ^ generation);
    splitmix64(h ^ slot)
}

/// Tracks exhaustion and normalized progress for one run.
struct BudgetClock {
    budget: Budget,
    started: Instant,
}

impl BudgetClock {
    fn start(budget: Budget) -> Self {
        Self { budget, started: Instant::now() }
    }

    fn exhausted(&self, rounds: u64, sweeps: u64) -> bool {
        match self.budget {
            Budget::WallClockSeconds(s) => self.started.elapsed() >= Duration::from_secs_f64(s),
            Budget::Generations(max) => rounds >= max,
            Budget::EvaluationSweeps(max) => sweeps >= max,
            Budget::IlsIterations(max) => rounds >= max,
        }
    }

    fn progress(&self, rounds: u64, sweeps: u64) -> f64 {
        let p = match self.budget {
            Budget::WallClockSeconds(s) => self.started.elapsed().as_secs_f64() / s,
            Budget::Generations(max) => rounds as f64 / max as f64,
            Budget::EvaluationSweeps(max) => sweeps as f64 / max as f64,
            Budget::IlsIterations(max) => rounds as f64 / max as f64,
        };
        p.clamp(0.0, 1.0)
    }
}

/// Runs the configured algorithm on `inst` and returns the best individual
/// ever evaluated, which replacement may well have discarded from the final
/// population.
pub fn run(inst: &LopInstance, cfg: &EngineConfig) -> Result<RunResult> {
    cfg.validate()?;
    match cfg.algorithm {
        Algorithm::MaEdm => run_memetic(inst, cfg, IntensifierKind::LocalSearch),
        Algorithm::MaEdmEi => run_memetic(inst, cfg, IntensifierKind::Ils(cfg.ils)),
        Algorithm::IlsOnly => run_ils_only(inst, cfg),
        Algorithm::LsMultistart => ls_multistart(inst, cfg),
    }
}

fn run_memetic(inst: &LopInstance, cfg: &EngineConfig, kind: IntensifierKind) -> Result<RunResult> {
    let n_pop = cfg.population_size;
    let executor = cfg.executor.build()?;
    let mut master = ChaCha8Rng::seed_from_u64(master_seed(cfg.seed));
    let clock = BudgetClock::start(cfg.run_budget);
    let mut sweeps = 0u64;

    // Generation 0: random population, intensified through the executor.
    let initial: Vec<Individual> =
        (0..n_pop).map(|_| Individual::random(inst, &mut master)).collect();
    let seeds: Vec<u64> = (0..n_pop as u64).map(|slot| task_seed(cfg.seed, 0, slot)).collect();
    let outcomes = executor.intensify_all(inst, initial, &IntensifyTask { kind: kind.clone(), seeds })?;
    let mut population: Vec<Individual> = Vec::with_capacity(n_pop);
    for out in outcomes {
        sweeps += out.sweeps;
        population.push(out.individual);
    }

    let schedule = DiversitySchedule::new(init_d0(&population));
    let mut best = population
        .iter()
        .max_by_key(|ind| ind.fitness)
        .expect("population is non-empty")
        .clone();

    let mut trajectory = Vec::new();
    let mut generation = 0u64;
    trajectory.push(TrajectorySample {
        progress: clock.progress(generation, sweeps),
        best_fitness: best.fitness,
    });

    while !clock.exhausted(generation, sweeps) {
        // One progress sample per generation drives the threshold decay.
        let progress = clock.progress(generation, sweeps);

        let parents: Vec<Individual> =
            (0..n_pop).map(|_| binary_tournament(&population, &mut master).clone()).collect();

        let mut offspring = Vec::with_capacity(n_pop);
        for pair in parents.chunks_exact(2) {
            let (a, b) = cycle_crossover(&pair[0].perm, &pair[1].perm)?;
            offspring.push(Individual::evaluated(inst, a));
            offspring.push(Individual::evaluated(inst, b));
        }

        let seeds: Vec<u64> =
            (0..n_pop as u64).map(|slot| task_seed(cfg.seed, generation + 1, slot)).collect();
        let outcomes =
            executor.intensify_all(inst, offspring, &IntensifyTask { kind: kind.clone(), seeds })?;
        let mut intensified = Vec::with_capacity(n_pop);
        for out in outcomes {
            sweeps += out.sweeps;
            if out.individual.fitness > best.fitness {
                best = out.individual.clone();
            }
            intensified.push(out.individual);
        }

        let threshold = schedule.threshold(progress);
        population = bnp_replacement(&population, &intensified, threshold, n_pop)?;
        debug_assert_eq!(population.len(), n_pop);

        generation += 1;
        trajectory.push(TrajectorySample {
            progress: clock.progress(generation, sweeps),
            best_fitness: best.fitness,
        });
    }

    Ok(RunResult {
        best,
        generations: generation,
        trajectory,
        seed: cfg.seed,
        wall_seconds: clock.started.elapsed().as_secs_f64(),
        sweeps,
    })
}

fn run_ils_only(inst: &LopInstance, cfg: &EngineConfig) -> Result<RunResult> {
    let started = Instant::now();
    let mut master = ChaCha8Rng::seed_from_u64(master_seed(cfg.seed));
    let start = Individual::random(inst, &mut master);

    let ils_cfg = IlsConfig {
        budget: cfg.run_budget,
        swap_count: cfg.ils.swap_count,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(task_seed(cfg.seed, 0, 0));
    let out = ils_run_traced(inst, start, &ils_cfg, &mut rng);

    let trajectory = vec![
        TrajectorySample { progress: 0.0, best_fitness: out.start_fitness },
        TrajectorySample { progress: 1.0, best_fitness: out.individual.fitness },
    ];
    Ok(RunResult {
        best: out.individual,
        generations: out.iterations,
        trajectory,
        seed: cfg.seed,
        wall_seconds: started.elapsed().as_secs_f64(),
        sweeps: out.sweeps,
    })
}

/// Repeated local search from fresh random permutations until the budget is
/// spent: the evaluation-matched baseline the memetic algorithms are judged
/// against.
pub fn ls_multistart(inst: &LopInstance, cfg: &EngineConfig) -> Result<RunResult> {
    cfg.validate()?;
    if cfg.algorithm != Algorithm::LsMultistart {
        return Err(Error::config(format!(
            "ls_multistart called with algorithm {}",
            cfg.algorithm
        )));
    }
    let clock = BudgetClock::start(cfg.run_budget);
    let mut master = ChaCha8Rng::seed_from_u64(master_seed(cfg.seed));
    let mut sweeps = 0u64;
    let mut restarts = 0u64;
    let mut best: Option<Individual> = None;
    let mut trajectory = Vec::new();

    while !clock.exhausted(restarts, sweeps) {
        let start = Individual::random(inst, &mut master);
        let mut rng = ChaCha8Rng::seed_from_u64(task_seed(cfg.seed, restarts, 0));
        let out = local_search_traced(inst, start, &mut rng);
        sweeps += out.sweeps;
        if best.as_ref().is_none_or(|b| out.individual.fitness > b.fitness) {
            best = Some(out.individual);
        }
        restarts += 1;
        trajectory.push(TrajectorySample {
            progress: clock.progress(restarts, sweeps),
            best_fitness: best.as_ref().expect("set above").fitness,
        });
    }

    let best = best.ok_or_else(|| Error::config("multistart budget allowed no restart"))?;
    Ok(RunResult {
        best,
        generations: restarts,
        trajectory,
        seed: cfg.seed,
        wall_seconds: clock.started.elapsed().as_secs_f64(),
        sweeps,
    })
}
