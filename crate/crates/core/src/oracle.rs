//! Set-function oracles: the submodular functions summed by the two-stage
//! objective, evaluated only through value queries.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::item::{ItemId, ItemSet};

/// Serializable description of one non-negative submodular function over
/// `n` real items.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDescriptor {
    /// Weighted coverage: the value of a set is the total weight of the
    /// universe elements covered by at least one of its items.
    Coverage {
        universe_weights: Vec<f64>,
        covers: Vec<Vec<usize>>,
    },
    /// `similarity[c][j]` is how well item `j` serves client `c`; each client
    /// is credited with its best selected item.
    FacilityLocation {
        similarity: Vec<Vec<f64>>,
    },
    /// Total weight of undirected edges with exactly one endpoint selected.
    GraphCut {
        edges: Vec<(usize, usize, f64)>,
    },
    Modular {
        values: Vec<f64>,
    },
}

impl FunctionDescriptor {
    pub fn kind(&self) -> &'static str {
        match self {
            FunctionDescriptor::Coverage { .. } => "coverage",
            FunctionDescriptor::FacilityLocation { .. } => "facility_location",
            FunctionDescriptor::GraphCut { .. } => "graph_cut",
            FunctionDescriptor::Modular { .. } => "modular",
        }
    }

    /// Whether every function of this kind is monotone non-decreasing.
    pub fn is_monotone(&self) -> bool {
        !matches!(self, FunctionDescriptor::GraphCut { .. })
    }

    /// Checks indices and weights against `n` real items.
    pub fn validate(&self, n: usize) -> Result<()> {
        fn weight(field: &str, idx: usize, w: f64) -> Result<()> {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::descriptor(
                    format!("{field}[{idx}]"),
                    format!("weight {w} is not a finite non-negative number"),
                ));
            }
            Ok(())
        }

        match self {
            FunctionDescriptor::Coverage {
                universe_weights,
                covers,
            } => {
                for (u, &w) in universe_weights.iter().enumerate() {
                    weight("universe_weights", u, w)?;
                }
                if covers.len() != n {
                    return Err(Error::descriptor(
                        "covers",
                        format!(
                            "expected one cover list per item ({n}), got {}",
                            covers.len()
                        ),
                    ));
                }
                for (item, cover) in covers.iter().enumerate() {
                    if let Some(&u) = cover.iter().find(|&&u| u >= universe_weights.len()) {
                        return Err(Error::descriptor(
                            format!("covers[{item}]"),
                            format!(
                                "universe index {u} out of range ({} elements)",
                                universe_weights.len()
                            ),
                        ));
                    }
                }
            }
            FunctionDescriptor::FacilityLocation { similarity } => {
                for (c, row) in similarity.iter().enumerate() {
                    if row.len() != n {
                        return Err(Error::descriptor(
                            format!("similarity[{c}]"),
                            format!("expected {n} columns, got {}", row.len()),
                        ));
                    }
                    for (j, &w) in row.iter().enumerate() {
                        weight(&format!("similarity[{c}]"), j, w)?;
                    }
                }
            }
            FunctionDescriptor::GraphCut { edges } => {
                for (e, &(u, v, w)) in edges.iter().enumerate() {
                    if u >= n || v >= n {
                        return Err(Error::descriptor(
                            format!("edges[{e}]"),
                            format!("endpoint out of range: ({u}, {v}) with n = {n}"),
                        ));
                    }
                    if u == v {
                        return Err(Error::descriptor(
                            format!("edges[{e}]"),
                            format!("self-loop on vertex {u}"),
                        ));
                    }
                    weight("edges", e, w)?;
                }
            }
            FunctionDescriptor::Modular { values } => {
                if values.len() != n {
                    return Err(Error::descriptor(
                        "values",
                        format!("expected {n} values, got {}", values.len()),
                    ));
                }
                for (j, &w) in values.iter().enumerate() {
                    weight("values", j, w)?;
                }
            }
        }
        Ok(())
    }

    fn value(&self, members: &[bool]) -> f64 {
        match self {
            FunctionDescriptor::Coverage {
                universe_weights,
                covers,
            } => {
                let mut covered = vec![false; universe_weights.len()];
                for (item, cover) in covers.iter().enumerate() {
                    if members[item] {
                        for &u in cover {
                            covered[u] = true;
                        }
                    }
                }
                universe_weights
                    .iter()
                    .zip(&covered)
                    .filter(|(_, &c)| c)
                    .map(|(w, _)| w)
                    .sum()
            }
            FunctionDescriptor::FacilityLocation { similarity } => similarity
                .iter()
                .map(|row| {
                    row.iter()
                        .zip(members)
                        .filter(|(_, &m)| m)
                        .map(|(&s, _)| s)
                        .fold(0.0, f64::max)
                })
                .sum(),
            FunctionDescriptor::GraphCut { edges } => edges
                .iter()
                .filter(|&&(u, v, _)| members[u] != members[v])
                .map(|&(_, _, w)| w)
                .sum(),
            FunctionDescriptor::Modular { values } => values
                .iter()
                .zip(members)
                .filter(|(_, &m)| m)
                .map(|(&v, _)| v)
                .sum(),
        }
    }
}

/// A validated function over the extended ground set `0..n + l` with an
/// evaluation counter. Dummy ids `n..n + l` never change the value.
///
/// The counter is atomic so one oracle can be queried from many workers.
#[derive(Debug)]
pub struct ValueOracle {
    descriptor: Arc<FunctionDescriptor>,
    n: usize,
    l: usize,
    evals: AtomicU64,
}

impl Clone for ValueOracle {
    fn clone(&self) -> Self {
        ValueOracle {
            descriptor: Arc::clone(&self.descriptor),
            n: self.n,
            l: self.l,
            evals: AtomicU64::new(self.eval_count()),
        }
    }
}

impl ValueOracle {
    /// Builds an oracle for `n` real items and `l` dummy items.
    pub fn instantiate(descriptor: FunctionDescriptor, n: usize, l: usize) -> Result<Self> {
        descriptor.validate(n)?;
        Ok(ValueOracle {
            descriptor: Arc::new(descriptor),
            n,
            l,
            evals: AtomicU64::new(0),
        })
    }

    /// Same function, fresh counter.
    pub fn fork(&self) -> Self {
        ValueOracle {
            descriptor: Arc::clone(&self.descriptor),
            n: self.n,
            l: self.l,
            evals: AtomicU64::new(0),
        }
    }

    pub fn descriptor(&self) -> &FunctionDescriptor {
        &self.descriptor
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn is_dummy(&self, x: ItemId) -> bool {
        x.is_dummy(self.n)
    }

    pub fn is_monotone(&self) -> bool {
        self.descriptor.is_monotone()
    }

    pub fn eval_count(&self) -> u64 {
        self.evals.load(Ordering::Relaxed)
    }

    /// `f(A ∖ Φ)`. Counts as one evaluation.
    pub fn eval(&self, set: &ItemSet) -> Result<f64> {
        self.eval_items(set.as_slice())
    }

    /// Like [`eval`](Self::eval) over an arbitrary slice; duplicates are harmless.
    pub fn eval_items(&self, items: &[ItemId]) -> Result<f64> {
        let limit = self.n + self.l;
        let mut members = vec![false; self.n];
        for &x in items {
            if x.0 >= limit {
                return Err(Error::ItemOutOfRange { item: x.0, limit });
            }
            if x.0 < self.n {
                members[x.0] = true;
            }
        }
        self.evals.fetch_add(1, Ordering::Relaxed);
        Ok(self.descriptor.value(&members))
    }

    /// `f(A ∪ {x}) − f(A)`, two evaluations.
    pub fn marginal(&self, x: ItemId, set: &ItemSet) -> Result<f64> {
        let base = self.eval(set)?;
        Ok(self.eval(&set.with(x))? - base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::item::set;

    pub(crate) fn coverage_example() -> FunctionDescriptor {
        FunctionDescriptor::Coverage {
            universe_weights: vec![1.0; 4],
            covers: vec![vec![0, 1], vec![1, 2], vec![3]],
        }
    }

    fn path_cut() -> FunctionDescriptor {
        FunctionDescriptor::GraphCut {
            edges: vec![(0, 1, 1.0), (1, 2, 1.0)],
        }
    }

    #[test]
    fn instantiate_examples() {
        let cov = ValueOracle::instantiate(coverage_example(), 3, 2).unwrap();
        assert_eq!(cov.eval_count(), 0);
        assert_eq!(cov.eval(&set([0, 1])).unwrap(), 3.0);

        let modular = ValueOracle::instantiate(
            FunctionDescriptor::Modular {
                values: vec![2.0, 5.0],
            },
            2,
            1,
        )
        .unwrap();
        assert_eq!(modular.eval(&ItemSet::new()).unwrap(), 0.0);

        let cut = ValueOracle::instantiate(path_cut(), 3, 0).unwrap();
        assert_eq!(cut.eval(&set([0, 1, 2])).unwrap(), 0.0);
    }

    #[test]
    fn eval_examples() {
        let cut = ValueOracle::instantiate(path_cut(), 3, 2).unwrap();
        assert_eq!(cut.eval(&set([1])).unwrap(), 2.0);
        assert_eq!(cut.eval(&ItemSet::new()).unwrap(), 0.0);
        let cov = ValueOracle::instantiate(coverage_example(), 3, 2).unwrap();
        assert_eq!(cov.eval(&set([0, 1, 2])).unwrap(), 4.0);
        assert_eq!(cut.eval_count(), 2);
    }

    #[test]
    fn marginal_examples() {
        let cut = ValueOracle::instantiate(path_cut(), 3, 2).unwrap();
        assert_eq!(cut.marginal(ItemId(0), &set([1])).unwrap(), -1.0);
        // dummy ids are 3 and 4
        assert_eq!(cut.marginal(ItemId(4), &set([1])).unwrap(), 0.0);
        assert_eq!(cut.marginal(ItemId(3), &ItemSet::new()).unwrap(), 0.0);
        let cov = ValueOracle::instantiate(coverage_example(), 3, 2).unwrap();
        assert_eq!(cov.marginal(ItemId(2), &set([0, 1])).unwrap(), 1.0);
        assert_eq!(cov.eval_count(), 2);
    }

    #[test]
    fn out_of_range_item() {
        let cut = ValueOracle::instantiate(path_cut(), 3, 2).unwrap();
        let err = cut.eval(&set([5])).unwrap_err();
        assert!(matches!(err, Error::ItemOutOfRange { item: 5, limit: 5 }));
        assert_eq!(cut.eval_count(), 0);
    }

    #[test]
    fn construction_errors_name_the_field() {
        let neg = FunctionDescriptor::Modular {
            values: vec![1.0, -2.0],
        };
        let err = ValueOracle::instantiate(neg, 2, 1).unwrap_err();
        assert!(err.to_string().contains("values"), "{err}");

        let bad_cover = FunctionDescriptor::Coverage {
            universe_weights: vec![1.0],
            covers: vec![vec![0], vec![3]],
        };
        let err = ValueOracle::instantiate(bad_cover, 2, 1).unwrap_err();
        assert!(err.to_string().contains("covers[1]"), "{err}");

        let self_loop = FunctionDescriptor::GraphCut {
            edges: vec![(1, 1, 1.0)],
        };
        assert!(ValueOracle::instantiate(self_loop, 2, 1).is_err());

        let edge_range = FunctionDescriptor::GraphCut {
            edges: vec![(0, 5, 1.0)],
        };
        let err = ValueOracle::instantiate(edge_range, 3, 1).unwrap_err();
        assert!(err.to_string().contains("edges[0]"), "{err}");

        let ragged = FunctionDescriptor::FacilityLocation {
            similarity: vec![vec![0.5, 0.5], vec![0.1]],
        };
        let err = ValueOracle::instantiate(ragged, 2, 1).unwrap_err();
        assert!(err.to_string().contains("similarity[1]"), "{err}");
    }

    #[test]
    fn facility_location_credits_best_item() {
        let fl = ValueOracle::instantiate(
            FunctionDescriptor::FacilityLocation {
                similarity: vec![vec![0.2, 0.9], vec![0.7, 0.1]],
            },
            2,
            1,
        )
        .unwrap();
        assert_eq!(fl.eval(&set([0])).unwrap(), 0.2 + 0.7);
        assert_eq!(fl.eval(&set([0, 1])).unwrap(), 0.9 + 0.7);
        assert_eq!(fl.eval(&set([2])).unwrap(), 0.0);
    }

    #[test]
    fn fork_resets_counter_and_shares_function() {
        let cut = ValueOracle::instantiate(path_cut(), 3, 1).unwrap();
        cut.eval(&set([1])).unwrap();
        let forked = cut.fork();
        assert_eq!(forked.eval_count(), 0);
        assert_eq!(forked.eval(&set([1])).unwrap(), 2.0);
        assert_eq!(cut.eval_count(), 1);
    }

    #[test]
    fn descriptor_json_form() {
        let json = serde_json::to_string(&path_cut()).unwrap();
        assert_eq!(
            json,
            r#"{"type":"graph_cut","edges":[[0,1,1.0],[1,2,1.0]]}"#
        );
        let err = serde_json::from_str::<FunctionDescriptor>(
            r#"{"type":"modular","values":[1.0],"bogus":1}"#,
        )
        .unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
    }
}
