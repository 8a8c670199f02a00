//! Instance files, synthetic generators and the experiment runner.

mod experiment;
mod generate;
mod instance;
mod report;

pub use experiment::{
    eval_budget, evaluate_reported, run_bench, run_experiment, Algorithm, BenchEntry, FEvalMode,
    FMode, GeneratorSpec, RunConfig, TrialRecord,
};
pub use generate::{generate_instance, GeneratorKind};
pub use instance::{parse_instance, Instance};
pub use report::{format_sig, write_csv, Timing, CSV_HEADER};
