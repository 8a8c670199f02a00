//! Randomized local-search reduction of the ground set, with the trim pass
//! that keeps every per-function feasible set free of harmful items.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{ItemId, ItemSet};
use crate::kernel::{self, local_gain};
use crate::oracle::ValueOracle;
use crate::problem::Problem;

/// Output of a two-stage solve: the reduced set (dummies stripped) and the
/// per-function feasible sets built along the way.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoStageSolution {
    pub selected: ItemSet,
    pub feasible: Vec<ItemSet>,
    pub evals: u64,
    pub seed: u64,
}

impl TwoStageSolution {
    /// Σᵢ fᵢ(Tᵢ), a lower bound on `F(selected)`.
    pub fn feasible_value(&self, problem: &Problem) -> Result<f64> {
        problem.sum_values(&self.feasible)
    }
}

/// Removes, in ascending id order, every item whose removal from the current
/// set strictly increases `f`. One pass suffices for submodular `f`.
pub fn trim(f: &ValueOracle, set: &ItemSet) -> Result<ItemSet> {
    let mut kept = set.clone();
    if set.is_empty() {
        return Ok(kept);
    }
    let mut current = f.eval(&kept)?;
    for x in set {
        let without = kept.without(x);
        let reduced = f.eval(&without)?;
        if current - reduced < 0.0 {
            kept = without;
            current = reduced;
        }
    }
    Ok(kept)
}

/// Performs the local-search move for `x` on `set` when it strictly gains,
/// then trims. Otherwise returns `set` unchanged.
pub fn apply_candidate(f: &ValueOracle, set: &ItemSet, x: ItemId, k: usize) -> Result<ItemSet> {
    let step = local_gain(f, x, set, k)?;
    if step.gain > 0.0 {
        trim(f, &step.apply(set, x))
    } else {
        Ok(set.clone())
    }
}

/// How a round chooses its item from the ranked candidates.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Pick {
    /// Uniformly at random among the top `l`.
    Sample,
    /// The single best-scoring candidate.
    Best,
}

/// Mutable state of one solve. Owns forked oracles so the evaluation count
/// belongs to this run alone.
#[derive(Debug)]
pub struct SolverState {
    problem: Problem,
    selected: ItemSet,
    feasible: Vec<ItemSet>,
    round: usize,
    rng: ChaCha8Rng,
    seed: u64,
}

impl SolverState {
    pub fn new(problem: &Problem, seed: u64) -> Self {
        SolverState {
            problem: problem.fork(),
            selected: ItemSet::new(),
            feasible: vec![ItemSet::new(); problem.m()],
            round: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
            seed,
        }
    }

    pub fn round(&self) -> usize {
        self.round
    }

    pub fn is_done(&self) -> bool {
        self.round >= self.problem.l
    }

    /// Reduced set so far, dummies included.
    pub fn selected(&self) -> &ItemSet {
        &self.selected
    }

    pub fn feasible(&self) -> &[ItemSet] {
        &self.feasible
    }

    pub fn evals(&self) -> u64 {
        self.problem.total_evals()
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    /// Runs one round and returns the item added to the reduced set.
    ///
    /// Candidates are the extended ground set minus items already selected;
    /// with `l` dummies there are always at least `l` of them.
    pub fn step(&mut self, pick: Pick) -> Result<ItemId> {
        if self.is_done() {
            return Err(Error::Precondition(format!(
                "all {} rounds already ran",
                self.problem.l
            )));
        }
        let p = &self.problem;
        let candidates: ItemSet = p
            .extended_ground_set()
            .iter()
            .filter(|&x| !self.selected.contains(x))
            .collect();
        let scores = kernel::score_items(p.oracles(), &self.feasible, &candidates, p.k)?;
        let chosen = match pick {
            Pick::Sample => {
                let top = kernel::select_top_l(&scores, p.l)?;
                top.as_slice()[self.rng.random_range(0..top.len())]
            }
            Pick::Best => kernel::rank(&scores, 1)?[0].item,
        };

        self.selected.insert(chosen);
        for (f, t) in p.oracles().iter().zip(self.feasible.iter_mut()) {
            *t = apply_candidate(f, t, chosen, p.k)?;
        }
        self.round += 1;
        Ok(chosen)
    }

    pub fn into_solution(self) -> TwoStageSolution {
        TwoStageSolution {
            selected: self.selected.real_items(self.problem.n),
            evals: self.problem.total_evals(),
            feasible: self.feasible,
            seed: self.seed,
        }
    }
}

pub(crate) fn run(problem: &Problem, seed: u64, pick: Pick) -> Result<TwoStageSolution> {
    if problem.l == 0 {
        return Err(Error::Validation("l must be ≥ 1".into()));
    }
    let mut state = SolverState::new(problem, seed);
    while !state.is_done() {
        state.step(pick)?;
    }
    Ok(state.into_solution())
}

/// Sampling-greedy reduction: `l` rounds, each adding one item drawn uniformly
/// from the `l` best-scoring candidates, then updating and trimming every
/// feasible set. Deterministic for a given `(problem, seed)`.
pub fn sampling_greedy(problem: &Problem, seed: u64) -> Result<TwoStageSolution> {
    run(problem, seed, Pick::Sample)
}

#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    /// Sample standard deviation; zero for a single trial.
    pub stddev: f64,
    pub trials: usize,
}

impl Estimate {
    pub fn from_samples(samples: &[f64]) -> Estimate {
        let n = samples.len();
        let mean = samples.iter().sum::<f64>() / n as f64;
        let stddev = if n > 1 {
            let ss: f64 = samples.iter().map(|v| (v - mean).powi(2)).sum();
            (ss / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Estimate {
            mean,
            stddev,
            trials: n,
        }
    }
}

/// Monte-Carlo mean and spread of Σᵢ fᵢ(Tᵢ) over seeds
/// `base_seed..base_seed + trials`.
pub fn expected_f_estimate(problem: &Problem, trials: usize, base_seed: u64) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::Precondition("trials must be ≥ 1".into()));
    }
    let samples = (0..trials as u64)
        .into_par_iter()
        .map(|t| sampling_greedy(problem, base_seed.wrapping_add(t))?.feasible_value(problem))
        .collect::<Result<Vec<_>>>()?;
    Ok(Estimate::from_samples(&samples))
}
