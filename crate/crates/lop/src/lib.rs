//! Solvers for the Linear Ordering Problem: given a square integer matrix,
//! find the simultaneous row/column permutation that maximizes the sum of the
//! entries above the main diagonal.
//!
//! The crate provides the building blocks — instance parsing, insertion-move
//! local search with exact incremental deltas, iterated local search, and the
//! evolutionary operators with explicit diversity management — plus complete
//! engines that assemble them:
//!
//! * `ma-edm`: memetic algorithm, local search as intensifier, BNP
//!   replacement under a linearly decaying Kendall-tau threshold;
//! * `ma-edm-ei`: the same loop with a budgeted ILS as intensifier;
//! * `ils` and `ls-multistart` baselines.
//!
//! Intensification batches go through an executor: either sequential or a
//! synchronous master-worker pool. Per-task rng streams are derived from the
//! run seed by logical position, so count-based runs produce identical
//! results for any worker count.
//!
//! ```
//! use lop::{run, Algorithm, Budget, EngineConfig, LopInstance};
//!
//! let inst = LopInstance::parse_str("3\n0 3 1\n2 0 4\n5 6 0\n", "demo").unwrap();
//! let cfg = EngineConfig::new(Algorithm::MaEdm, Budget::Generations(5))
//!     .with_population_size(4)
//!     .with_seed(7);
//! let result = run(&inst, &cfg).unwrap();
//! assert_eq!(result.best.fitness, 14);
//! ```

pub mod budget;
pub mod engine;
pub mod error;
pub mod evolution;
pub mod ils;
pub mod instance;
pub mod local_search;
pub mod parallel;
pub mod perm;

pub use budget::Budget;
pub use engine::{
    ls_multistart, master_seed, run, task_seed, Algorithm, EngineConfig, RunResult,
    TrajectorySample, DEFAULT_POPULATION_SIZE,
};
pub use error::{Error, Result};
pub use evolution::{
    binary_tournament, bnp_replacement, cycle_crossover, init_d0, kendall_tau, DiversitySchedule,
};
pub use ils::{
    ils_run, ils_run_traced, ils_run_with, perturb, IlsConfig, IlsOutcome, MultiSwap,
    Perturbation, RandomInsertion, SegmentInversion, SegmentScramble, DEFAULT_ILS_SECONDS,
    DEFAULT_SWAP_COUNT,
};
pub use instance::LopInstance;
pub use local_search::{
    apply_insert, insert_delta, local_search, local_search_traced, InsertMove, LsOutcome,
};
pub use parallel::{
    intensify_one, Dispatch, ExecutorSpec, Intensified, IntensifierKind, IntensifyExecutor,
    IntensifyTask, PoolExecutor, SequentialExecutor, TaskEvent,
};
pub use perm::{Individual, Permutation};
