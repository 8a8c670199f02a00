//! Local-search gains, replacement choice, and top-`l` candidate selection.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{ItemId, ItemSet};
use crate::oracle::ValueOracle;

/// What local search would do with a candidate item.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Action {
    NoOp,
    Add,
    Swap { victim: ItemId },
}

/// Best local-search move for one candidate against one feasible set.
///
/// `gain` is zero exactly when `action` is [`Action::NoOp`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct GainAction {
    pub gain: f64,
    pub action: Action,
}

impl GainAction {
    pub const NOOP: GainAction = GainAction {
        gain: 0.0,
        action: Action::NoOp,
    };

    /// The set obtained by performing this move on `set` with candidate `x`.
    pub fn apply(&self, set: &ItemSet, x: ItemId) -> ItemSet {
        match self.action {
            Action::NoOp => set.clone(),
            Action::Add => set.with(x),
            Action::Swap { victim } => set.swapped(x, victim),
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ScoredItem {
    pub item: ItemId,
    pub total_score: f64,
}

/// `f(A ∪ {x} ∖ {y}) − f(A)`.
pub fn swap_gain(f: &ValueOracle, x: ItemId, y: ItemId, set: &ItemSet) -> Result<f64> {
    if !set.contains(y) {
        return Err(Error::Precondition(format!(
            "swap victim {y} is not in {set}"
        )));
    }
    if set.contains(x) {
        return Err(Error::Precondition(format!(
            "candidate {x} is already in {set}"
        )));
    }
    let base = f.eval(set)?;
    Ok(f.eval(&set.swapped(x, y))? - base)
}

/// Largest gain reachable by adding `x` to `set` (if there is room under `k`)
/// or by swapping it for one member, together with the move that attains it.
///
/// Swap victims tie-break to the smallest id. When a swap and a direct add
/// achieve the same positive gain and there is room, the swap is chosen.
pub fn local_gain(f: &ValueOracle, x: ItemId, set: &ItemSet, k: usize) -> Result<GainAction> {
    check_capacity(set, k)?;
    if set.contains(x) {
        return Ok(GainAction::NOOP);
    }
    let base = f.eval(set)?;
    local_gain_from_base(f, x, set, k, base)
}

fn check_capacity(set: &ItemSet, k: usize) -> Result<()> {
    if set.len() > k {
        return Err(Error::Precondition(format!(
            "feasible set {set} has {} items, budget k = {k}",
            set.len()
        )));
    }
    Ok(())
}

/// [`local_gain`] with `f(set)` already known. Costs `|set| + 1` evaluations
/// when there is room and `|set|` when the set is full.
pub(crate) fn local_gain_from_base(
    f: &ValueOracle,
    x: ItemId,
    set: &ItemSet,
    k: usize,
    base: f64,
) -> Result<GainAction> {
    if set.contains(x) {
        return Ok(GainAction::NOOP);
    }

    let mut best_swap: Option<(f64, ItemId)> = None;
    for y in set {
        let g = f.eval(&set.swapped(x, y))? - base;
        // strict comparison keeps the smallest victim on ties
        if best_swap.is_none_or(|(bg, _)| g > bg) {
            best_swap = Some((g, y));
        }
    }
    let add = if set.len() < k {
        Some(f.eval(&set.with(x))? - base)
    } else {
        None
    };

    let swap_value = best_swap.map_or(f64::NEG_INFINITY, |(g, _)| g);
    let add_value = add.unwrap_or(f64::NEG_INFINITY);
    let gain = 0f64.max(swap_value).max(add_value);
    if gain <= 0.0 {
        return Ok(GainAction::NOOP);
    }

    let action = match (best_swap, add) {
        (Some((g, victim)), Some(delta)) if g >= delta => Action::Swap { victim },
        (_, Some(_)) => Action::Add,
        (Some((_, victim)), None) => Action::Swap { victim },
        (None, None) => unreachable!("positive gain without a candidate move"),
    };
    Ok(GainAction { gain, action })
}

/// Work items below this count are scored on the calling thread.
const PARALLEL_THRESHOLD: usize = 512;

/// Scores every item of `universe` by `Σᵢ ∇ᵢ(item, Tᵢ)`.
///
/// `f(Tᵢ)` is evaluated once per function. Output order follows `universe`;
/// each item's sum runs over the functions in order, so results do not
/// depend on whether scoring fans out across threads.
pub fn score_items(
    fs: &[ValueOracle],
    ts: &[ItemSet],
    universe: &ItemSet,
    k: usize,
) -> Result<Vec<ScoredItem>> {
    if fs.len() != ts.len() {
        return Err(Error::Precondition(format!(
            "{} functions but {} feasible sets",
            fs.len(),
            ts.len()
        )));
    }
    for t in ts {
        check_capacity(t, k)?;
    }
    let bases = fs
        .iter()
        .zip(ts)
        .map(|(f, t)| f.eval(t))
        .collect::<Result<Vec<_>>>()?;

    let score = |x: ItemId| -> Result<ScoredItem> {
        let mut total = 0.0;
        for ((f, t), &base) in fs.iter().zip(ts).zip(&bases) {
            total += local_gain_from_base(f, x, t, k, base)?.gain;
        }
        Ok(ScoredItem {
            item: x,
            total_score: total,
        })
    };

    let work = universe.len() * fs.len() * (k + 1);
    if work >= PARALLEL_THRESHOLD {
        universe.as_slice().par_iter().map(|&x| score(x)).collect()
    } else {
        universe.iter().map(score).collect()
    }
}

/// The `l` highest-scoring items, ties to the smallest id.
///
/// Because the selection objective is a sum of per-item scores, the best
/// size-`l` subset is exactly the top `l` items.
pub fn select_top_l(scores: &[ScoredItem], l: usize) -> Result<ItemSet> {
    Ok(rank(scores, l)?.into_iter().map(|s| s.item).collect())
}

/// The top `l` scored items in rank order (best first).
pub(crate) fn rank(scores: &[ScoredItem], l: usize) -> Result<Vec<ScoredItem>> {
    if l > scores.len() {
        return Err(Error::Precondition(format!(
            "cannot select {l} items from {} candidates",
            scores.len()
        )));
    }
    let mut sorted = scores.to_vec();
    sorted.sort_by(|a, b| {
        b.total_score
            .total_cmp(&a.total_score)
            .then(a.item.cmp(&b.item))
    });
    sorted.truncate(l);
    Ok(sorted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item::set;
    use crate::oracle::FunctionDescriptor;

    fn cut(l: usize) -> ValueOracle {
        ValueOracle::instantiate(
            FunctionDescriptor::GraphCut {
                edges: vec![(0, 1, 1.0), (1, 2, 1.0)],
            },
            3,
            l,
        )
        .unwrap()
    }

    fn coverage(l: usize) -> ValueOracle {
        ValueOracle::instantiate(
            FunctionDescriptor::Coverage {
                universe_weights: vec![1.0; 4],
                covers: vec![vec![0, 1], vec![1, 2], vec![3]],
            },
            3,
            l,
        )
        .unwrap()
    }

    fn scored(values: &[f64]) -> Vec<ScoredItem> {
        values
            .iter()
            .enumerate()
            .map(|(i, &s)| ScoredItem {
                item: ItemId(i),
                total_score: s,
            })
            .collect()
    }

    #[test]
    fn swap_gain_examples() {
        let f = cut(1);
        assert_eq!(swap_gain(&f, ItemId(1), ItemId(0), &set([0])).unwrap(), 1.0);
        assert_eq!(
            swap_gain(&f, ItemId(0), ItemId(1), &set([1])).unwrap(),
            -1.0
        );
    }

    #[test]
    fn swap_gain_preconditions() {
        let f = cut(1);
        assert!(matches!(
            swap_gain(&f, ItemId(1), ItemId(2), &set([0])),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            swap_gain(&f, ItemId(0), ItemId(0), &set([0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn dummy_swap_never_gains_on_trimmed_set() {
        let f = cut(2);
        // {1} has removal marginal 2 ≥ 0
        assert!(swap_gain(&f, ItemId(3), ItemId(1), &set([1])).unwrap() <= 0.0);
    }

    #[test]
    fn local_gain_examples() {
        let f = cut(1);
        assert_eq!(
            local_gain(&f, ItemId(0), &set([0]), 1).unwrap(),
            GainAction::NOOP
        );
        assert_eq!(
            local_gain(&f, ItemId(1), &set([0]), 1).unwrap(),
            GainAction {
                gain: 1.0,
                action: Action::Swap { victim: ItemId(0) }
            }
        );
        assert_eq!(
            local_gain(&f, ItemId(1), &ItemSet::new(), 1).unwrap(),
            GainAction {
                gain: 2.0,
                action: Action::Add
            }
        );
        let c = coverage(1);
        assert_eq!(
            local_gain(&c, ItemId(1), &set([0]), 2).unwrap(),
            GainAction {
                gain: 1.0,
                action: Action::Add
            }
        );
    }

    #[test]
    fn swap_wins_equal_gain_when_room() {
        // modular values: swapping 0 for 2 gains 4 - 0 = 4, adding 2 gains 4
        let f = ValueOracle::instantiate(
            FunctionDescriptor::Modular {
                values: vec![0.0, 1.0, 4.0],
            },
            3,
            1,
        )
        .unwrap();
        assert_eq!(
            local_gain(&f, ItemId(2), &set([0]), 3).unwrap(),
            GainAction {
                gain: 4.0,
                action: Action::Swap { victim: ItemId(0) }
            }
        );
    }

    #[test]
    fn local_gain_rejects_overfull_set() {
        let f = cut(1);
        assert!(matches!(
            local_gain(&f, ItemId(2), &set([0, 1]), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn local_gain_eval_cost() {
        let f = cut(1);
        local_gain(&f, ItemId(2), &set([0]), 2).unwrap();
        // base + one swap + one add
        assert_eq!(f.eval_count(), 3);
    }

    #[test]
    fn score_items_coverage_example() {
        let fs = [coverage(1)];
        let scores = score_items(&fs, &[ItemSet::new()], &set([0, 1, 2, 3]), 1).unwrap();
        let totals: Vec<f64> = scores.iter().map(|s| s.total_score).collect();
        assert_eq!(totals, vec![2.0, 2.0, 1.0, 0.0]);
    }

    #[test]
    fn score_items_zero_for_members_everywhere() {
        let fs = [coverage(2), cut(2)];
        let ts = [set([1]), set([1, 2])];
        let scores = score_items(&fs, &ts, &set([1]), 2).unwrap();
        assert_eq!(scores[0].total_score, 0.0);
    }

    #[test]
    fn score_items_dummy_universe_after_trim() {
        let fs = [coverage(2), cut(2)];
        let ts = [set([0, 2]), set([1])];
        let scores = score_items(&fs, &ts, &set([3, 4]), 2).unwrap();
        assert!(scores.iter().all(|s| s.total_score == 0.0));
    }

    #[test]
    fn score_items_length_mismatch() {
        let fs = [coverage(1)];
        assert!(matches!(
            score_items(&fs, &[], &set([0]), 1),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn score_items_parallel_matches_sequential() {
        let n = 60;
        let edges = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|(u, v)| (u * 7 + v * 3) % 5 == 0)
            .map(|(u, v)| (u, v, ((u * v) % 11) as f64 / 10.0))
            .collect();
        let f = ValueOracle::instantiate(FunctionDescriptor::GraphCut { edges }, n, 4).unwrap();
        let fs = [f.fork(), f.fork()];
        let ts = [set([1, 5]), set([7])];
        let universe: ItemSet = (0..n + 4).collect();
        let par = score_items(&fs, &ts, &universe, 3).unwrap();
        let seq: Vec<ScoredItem> = universe
            .iter()
            .map(|x| ScoredItem {
                item: x,
                total_score: local_gain(&fs[0], x, &ts[0], 3).unwrap().gain
                    + local_gain(&fs[1], x, &ts[1], 3).unwrap().gain,
            })
            .collect();
        assert_eq!(par, seq);
    }

    #[test]
    fn select_top_l_examples() {
        let scores = scored(&[2.0, 2.0, 1.0, 0.0]);
        assert_eq!(select_top_l(&scores, 1).unwrap(), set([0]));
        assert_eq!(select_top_l(&scores, 3).unwrap(), set([0, 1, 2]));
        assert_eq!(select_top_l(&scored(&[0.0; 5]), 2).unwrap(), set([0, 1]));
        assert!(matches!(
            select_top_l(&scores, 5),
            Err(Error::Precondition(_))
        ));
    }
}
