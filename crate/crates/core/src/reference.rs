//! Exhaustive evaluation of the two-stage objective and its optimum for
//! small instances, plus baseline reductions to compare against.

use itertools::Itertools;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{ItemId, ItemSet};
use crate::oracle::ValueOracle;
use crate::problem::Problem;
use crate::solver::{self, Pick, TwoStageSolution};

/// Ceiling on subsets enumerated per function when evaluating `F(S)` exactly.
pub const EXACT_F_LIMIT: u128 = 1_000_000;
/// Ceiling on oracle calls for the exhaustive optimum search.
pub const OPTIMUM_LIMIT: u128 = 10_000_000;

/// An exactly evaluated reduced set with one best feasible subset per function.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExactResult {
    pub value: f64,
    pub reduced_set: ItemSet,
    pub witnesses: Vec<ItemSet>,
}

/// `C(n, r)`, saturating at `u128::MAX` when an intermediate product overflows.
pub fn binomial(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i as u128 + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Number of subsets of an `n`-set with at most `r` items, saturating.
pub fn binomial_up_to(n: usize, r: usize) -> u128 {
    (0..=r.min(n)).fold(0u128, |acc, j| acc.saturating_add(binomial(n, j)))
}

fn real_subset(problem: &Problem, set: &ItemSet) -> Result<ItemSet> {
    let limit = problem.n + problem.l;
    if let Some(x) = set.iter().find(|x| x.0 >= limit) {
        return Err(Error::ItemOutOfRange { item: x.0, limit });
    }
    Ok(set.real_items(problem.n))
}

/// Best subset of `pool` with at most `k` items; ties go to the
/// lexicographically smallest subset.
fn best_subset(f: &ValueOracle, pool: &ItemSet, k: usize) -> Result<(f64, ItemSet)> {
    let mut best = (f.eval(&ItemSet::new())?, ItemSet::new());
    for size in 1..=k.min(pool.len()) {
        for combo in pool.iter().combinations(size) {
            let cand: ItemSet = combo.into_iter().collect();
            let v = f.eval(&cand)?;
            if v > best.0 || (v == best.0 && cand < best.1) {
                best = (v, cand);
            }
        }
    }
    Ok(best)
}

/// `F(S)` by enumerating every subset of `S` with at most `k` items.
/// Dummy ids in `S` are ignored.
pub fn evaluate_f_exact(problem: &Problem, set: &ItemSet) -> Result<ExactResult> {
    let pool = real_subset(problem, set)?;
    let cost = binomial_up_to(pool.len(), problem.k);
    if cost > EXACT_F_LIMIT {
        return Err(Error::GuardExceeded {
            what: "reduced set",
            cost,
            limit: EXACT_F_LIMIT,
        });
    }
    let mut value = 0.0;
    let mut witnesses = Vec::with_capacity(problem.m());
    for f in problem.oracles() {
        let (v, w) = best_subset(f, &pool, problem.k)?;
        value += v;
        witnesses.push(w);
    }
    Ok(ExactResult {
        value,
        reduced_set: pool,
        witnesses,
    })
}

/// Up to `k` greedy steps over `pool`, each adding the item with the largest
/// strictly positive marginal (smallest id on ties); stops early when no item
/// improves the value.
pub fn greedy_subset(f: &ValueOracle, pool: &ItemSet, k: usize) -> Result<ItemSet> {
    let mut chosen = ItemSet::new();
    let mut current = f.eval(&chosen)?;
    for _ in 0..k {
        let mut best: Option<(f64, ItemId, f64)> = None;
        for x in pool.iter().filter(|&x| !chosen.contains(x)) {
            let v = f.eval(&chosen.with(x))?;
            let gain = v - current;
            if gain > 0.0 && best.is_none_or(|(bg, _, _)| gain > bg) {
                best = Some((gain, x, v));
            }
        }
        match best {
            Some((_, x, v)) => {
                chosen.insert(x);
                current = v;
            }
            None => break,
        }
    }
    Ok(chosen)
}

/// Greedy surrogate for `F(S)`; never exceeds the exact value.
pub fn evaluate_f_greedy(problem: &Problem, set: &ItemSet) -> Result<f64> {
    let pool = real_subset(problem, set)?;
    let mut total = 0.0;
    for f in problem.oracles() {
        let chosen = greedy_subset(f, &pool, problem.k)?;
        total += f.eval(&chosen)?;
    }
    Ok(total)
}

/// Oracle calls the exhaustive optimum search would make, saturating.
pub fn optimum_cost(problem: &Problem) -> u128 {
    (0..=problem.l.min(problem.n))
        .map(|s| {
            binomial(problem.n, s)
                .saturating_mul(binomial_up_to(s, problem.k))
                .saturating_mul(problem.m() as u128)
        })
        .fold(0u128, u128::saturating_add)
}

/// The optimum `F(O)` over all reduced sets of at most `l` real items, with
/// the lexicographically smallest optimal set as witness.
pub fn brute_force_optimum(problem: &Problem) -> Result<ExactResult> {
    let cost = optimum_cost(problem);
    if cost > OPTIMUM_LIMIT {
        return Err(Error::GuardExceeded {
            what: "instance",
            cost,
            limit: OPTIMUM_LIMIT,
        });
    }
    let mut best = evaluate_f_exact(problem, &ItemSet::new())?;
    for size in 1..=problem.l.min(problem.n) {
        for combo in (0..problem.n).combinations(size) {
            let cand: ItemSet = combo.into_iter().collect();
            let res = evaluate_f_exact(problem, &cand)?;
            if res.value > best.value
                || (res.value == best.value && res.reduced_set < best.reduced_set)
            {
                best = res;
            }
        }
    }
    Ok(best)
}

/// Deterministic variant of the sampling solver: every round takes the single
/// best-scoring candidate. Trimming is kept.
pub fn replacement_greedy(problem: &Problem) -> Result<TwoStageSolution> {
    solver::run(problem, 0, Pick::Best)
}

/// Control: `l` real items drawn uniformly without replacement, each feasible
/// set built greedily inside them.
pub fn random_baseline(problem: &Problem, seed: u64) -> Result<TwoStageSolution> {
    let p = problem.fork();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let selected: ItemSet = rand::seq::index::sample(&mut rng, p.n, p.l.min(p.n))
        .into_iter()
        .collect();
    let feasible = p
        .oracles()
        .iter()
        .map(|f| greedy_subset(f, &selected, p.k))
        .collect::<Result<Vec<_>>>()?;
    Ok(TwoStageSolution {
        selected,
        feasible,
        evals: p.total_evals(),
        seed,
    })
}
