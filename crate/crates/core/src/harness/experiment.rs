use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::{generate_instance, parse_instance, GeneratorKind};
use crate::item::ItemSet;
use crate::problem::Problem;
use crate::reference::{
    brute_force_optimum, evaluate_f_exact, evaluate_f_greedy, random_baseline, replacement_greedy,
};
use crate::solver::{sampling_greedy, TwoStageSolution};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    SamplingGreedy,
    ReplacementGreedy,
    #[serde(alias = "random")]
    RandomBaseline,
    BruteForce,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::SamplingGreedy => "sampling_greedy",
            Algorithm::ReplacementGreedy => "replacement_greedy",
            Algorithm::RandomBaseline => "random_baseline",
            Algorithm::BruteForce => "brute_force",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "sampling-greedy" | "sampling_greedy" => Algorithm::SamplingGreedy,
            "replacement-greedy" | "replacement_greedy" => Algorithm::ReplacementGreedy,
            "random" | "random_baseline" => Algorithm::RandomBaseline,
            "brute-force" | "brute_force" => Algorithm::BruteForce,
            other => return Err(Error::Validation(format!("unknown algorithm `{other}`"))),
        })
    }
}

/// How `F` of a reported reduced set is computed.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FEvalMode {
    Exact,
    Greedy,
    /// Exact when within the enumeration guard, greedy otherwise.
    #[default]
    Auto,
}

impl FromStr for FEvalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "exact" => FEvalMode::Exact,
            "greedy" => FEvalMode::Greedy,
            "auto" => FEvalMode::Auto,
            other => return Err(Error::Validation(format!("unknown f-eval mode `{other}`"))),
        })
    }
}

/// Which evaluation actually produced a reported `F`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FMode {
    Exact,
    Greedy,
}

impl FMode {
    pub fn name(self) -> &'static str {
        match self {
            FMode::Exact => "exact",
            FMode::Greedy => "greedy",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub algorithm: Algorithm,
    /// Ignored by `brute_force`.
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub f_eval_mode: FEvalMode,
}

fn default_trials() -> usize {
    1
}

/// One solver run, as written to the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub instance_id: String,
    pub algorithm: Algorithm,
    pub seed: u64,
    pub f_reported: f64,
    pub f_mode: FMode,
    /// Σᵢ fᵢ(Tᵢ) of the solver's own feasible sets.
    pub sum_ft: f64,
    pub f_opt: Option<f64>,
    /// `f_reported / f_opt`; defined as 1 when the optimum is 0.
    pub ratio: Option<f64>,
    pub evals: u64,
    pub wall_ms: f64,
}

/// The oracle-call ceiling `3·l·m·(n+l)·(k+1)` checked for the sampling solver.
pub fn eval_budget(problem: &Problem) -> u64 {
    let (n, k, l, m) = (
        problem.n as u64,
        problem.k as u64,
        problem.l as u64,
        problem.m() as u64,
    );
    3 * l * m * (n + l) * (k + 1)
}

/// `F(set)` under the requested mode, on fresh counters.
pub fn evaluate_reported(
    problem: &Problem,
    set: &ItemSet,
    mode: FEvalMode,
) -> Result<(f64, FMode)> {
    let p = problem.fork();
    match mode {
        FEvalMode::Exact => Ok((evaluate_f_exact(&p, set)?.value, FMode::Exact)),
        FEvalMode::Greedy => Ok((evaluate_f_greedy(&p, set)?, FMode::Greedy)),
        FEvalMode::Auto => match evaluate_f_exact(&p, set) {
            Ok(r) => Ok((r.value, FMode::Exact)),
            Err(Error::GuardExceeded { .. }) => Ok((evaluate_f_greedy(&p, set)?, FMode::Greedy)),
            Err(e) => Err(e),
        },
    }
}

fn ratio(reported: f64, opt: Option<f64>) -> Option<f64> {
    opt.map(|o| if o > 0.0 { reported / o } else { 1.0 })
}

/// Runs `config.trials` solves (trial `t` uses seed `base_seed + t`) and
/// returns one record per trial sorted by seed.
///
/// The optimum is computed when the exhaustive search fits its guard; with
/// `FEvalMode::Exact` a guard failure on either side is an error.
pub fn run_experiment(
    instance_id: &str,
    problem: &Problem,
    config: &RunConfig,
) -> Result<Vec<TrialRecord>> {
    if config.trials == 0 {
        return Err(Error::Validation("trials must be ≥ 1".into()));
    }
    let optimum = match brute_force_optimum(&problem.fork()) {
        Ok(r) => Some(r.value),
        Err(Error::GuardExceeded { .. })
            if config.f_eval_mode != FEvalMode::Exact
                && config.algorithm != Algorithm::BruteForce =>
        {
            None
        }
        Err(e) => return Err(e),
    };

    if config.algorithm == Algorithm::BruteForce {
        let p = problem.fork();
        let start = Instant::now();
        let best = brute_force_optimum(&p)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let sum_ft = problem.sum_values(&best.witnesses)?;
        return Ok(vec![TrialRecord {
            instance_id: instance_id.to_string(),
            algorithm: Algorithm::BruteForce,
            seed: config.base_seed,
            f_reported: best.value,
            f_mode: FMode::Exact,
            sum_ft,
            f_opt: Some(best.value),
            ratio: Some(1.0),
            evals: p.total_evals(),
            wall_ms,
        }]);
    }

    let mut records = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| {
            let seed = config.base_seed.wrapping_add(t);
            let start = Instant::now();
            let sol: TwoStageSolution = match config.algorithm {
                Algorithm::SamplingGreedy => sampling_greedy(problem, seed)?,
                Algorithm::RandomBaseline => random_baseline(problem, seed)?,
                Algorithm::ReplacementGreedy => {
                    let mut s = replacement_greedy(problem)?;
                    s.seed = seed;
                    s
                }
                Algorithm::BruteForce => unreachable!(),
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let (f_reported, f_mode) =
                evaluate_reported(problem, &sol.selected, config.f_eval_mode)?;
            Ok(TrialRecord {
                instance_id: instance_id.to_string(),
                algorithm: config.algorithm,
                seed,
                f_reported,
                f_mode,
                sum_ft: sol.feasible_value(problem)?,
                f_opt: optimum,
                ratio: ratio(f_reported, optimum),
                evals: sol.evals,
                wall_ms,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    records.sort_by_key(|r| r.seed);
    Ok(records)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub l: usize,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn instance_id(&self) -> String {
        format!(
            "{}-n{}-m{}-k{}-l{}-s{}",
            self.kind, self.n, self.m, self.k, self.l, self.seed
        )
    }
}

/// One line of a bench config: an instance file or a generator spec, plus
/// how to run it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchEntry {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub instance: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorSpec>,
    #[serde(flatten)]
    pub config: RunConfig,
}

/// Runs every entry; relative instance paths resolve against `base_dir`.
/// Records come back sorted by `(instance_id, algorithm, seed)`.
pub fn run_bench(entries: &[BenchEntry], base_dir: &Path) -> Result<Vec<TrialRecord>> {
    let mut all = Vec::new();
    for (idx, entry) in entries.iter().enumerate() {
        let (id, instance) = match (&entry.instance, &entry.generator) {
            (Some(path), None) => {
                let full = base_dir.join(path);
                let bytes = std::fs::read(&full)?;
                let id = path
                    .file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("entry{idx}"));
                (id, parse_instance(&bytes)?)
            }
            (None, Some(g)) => (
                g.instance_id(),
                generate_instance(g.kind, g.n, g.m, g.k, g.l, g.seed)?,
            ),
            _ => {
                return Err(Error::Validation(format!(
                    "bench entry {idx}: exactly one of `instance` or `generator` is required"
                )))
            }
        };
        let problem = Problem::new(&instance)?;
        all.extend(run_experiment(&id, &problem, &entry.config)?);
    }
    all.sort_by(|a, b| {
        (a.instance_id.as_str(), a.algorithm.name(), a.seed).cmp(&(
            b.instance_id.as_str(),
            b.algorithm.name(),
            b.seed,
        ))
    });
    Ok(all)
}
