//! Benchmark harness around the `lop` solvers: seeded repeated experiments,
//! per-run records in CSV or JSON, mean/best/worst summaries, gap reports
//! against the bundled best-known-solutions registry, random instance
//! generation, and an exhaustive oracle for small instances.

pub mod experiment;
pub mod generate;
pub mod oracle;
pub mod records;
pub mod registry;
pub mod summary;

pub use experiment::{run_experiment, ExperimentOutcome, ExperimentSpec, InstanceFailure};
pub use generate::{generate_instance, to_lolib_string};
pub use oracle::{brute_force_optimum, BRUTE_FORCE_MAX_N};
pub use records::{read_records, read_records_non_empty, write_records, RecordFormat, RunRecord};
pub use registry::{gap_to_bks, render_gap_table, BksEntry, BksRegistry, GapReport, GapRow};
pub use summary::{render_table, summarize, SummaryRow};
