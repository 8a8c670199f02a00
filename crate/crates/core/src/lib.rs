//! Ground set reduction for two-stage submodular maximization.
//!
//! Given `m` non-negative submodular functions over `n` items, pick a reduced
//! set `S` of at most `l` items so that `F(S) = Σᵢ max_{A ⊆ S, |A| ≤ k} fᵢ(A)`
//! stays close to its optimum. The main entry point is
//! [`solver::sampling_greedy`]; [`reference`] holds exhaustive oracles and
//! baselines, [`harness`] the instance format, generators and experiment runner.

pub mod error;
pub mod harness;
pub mod item;
pub mod kernel;
pub mod oracle;
pub mod problem;
pub mod reference;
pub mod solver;

pub use error::{Error, Result};
pub use harness::{
    generate_instance, parse_instance, run_experiment, Algorithm, FEvalMode, GeneratorKind,
    Instance, RunConfig, TrialRecord,
};
pub use item::{set, ItemId, ItemSet};
pub use kernel::{
    local_gain, score_items, select_top_l, swap_gain, Action, GainAction, ScoredItem,
};
pub use oracle::{FunctionDescriptor, ValueOracle};
pub use problem::Problem;
pub use reference::{
    brute_force_optimum, evaluate_f_exact, evaluate_f_greedy, random_baseline, replacement_greedy,
    ExactResult,
};
pub use solver::{apply_candidate, expected_f_estimate, sampling_greedy, trim, TwoStageSolution};
