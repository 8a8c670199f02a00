use crate::error::{Error, Result};
use crate::harness::Instance;
use crate::item::ItemSet;
use crate::oracle::ValueOracle;

/// A validated instance with its oracles built over the extended ground set
/// (`n` real items followed by `l` dummies).
#[derive(Debug, Clone)]
pub struct Problem {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    oracles: Vec<ValueOracle>,
}

impl Problem {
    pub fn new(instance: &Instance) -> Result<Self> {
        instance.check_budgets()?;
        let oracles = instance
            .functions
            .iter()
            .enumerate()
            .map(|(i, d)| {
                ValueOracle::instantiate(d.clone(), instance.n, instance.l).map_err(|e| match e {
                    Error::InvalidDescriptor { field, reason } => Error::InvalidDescriptor {
                        field: format!("functions[{i}].{field}"),
                        reason,
                    },
                    other => other,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Problem {
            n: instance.n,
            k: instance.k,
            l: instance.l,
            oracles,
        })
    }

    pub fn m(&self) -> usize {
        self.oracles.len()
    }

    pub fn oracles(&self) -> &[ValueOracle] {
        &self.oracles
    }

    /// Shares the functions, with all evaluation counters at zero.
    pub fn fork(&self) -> Problem {
        Problem {
            n: self.n,
            k: self.k,
            l: self.l,
            oracles: self.oracles.iter().map(ValueOracle::fork).collect(),
        }
    }

    pub fn total_evals(&self) -> u64 {
        self.oracles.iter().map(ValueOracle::eval_count).sum()
    }

    pub fn ground_set(&self) -> ItemSet {
        (0..self.n).collect()
    }

    /// Real items plus the `l` dummy items.
    pub fn extended_ground_set(&self) -> ItemSet {
        (0..self.n + self.l).collect()
    }

    pub fn is_monotone(&self) -> bool {
        self.oracles.iter().all(ValueOracle::is_monotone)
    }

    /// Σᵢ fᵢ(Tᵢ), evaluated on fresh counters.
    pub fn sum_values(&self, sets: &[ItemSet]) -> Result<f64> {
        if sets.len() != self.m() {
            return Err(Error::Precondition(format!(
                "{} sets for {} functions",
                sets.len(),
                self.m()
            )));
        }
        self.oracles
            .iter()
            .zip(sets)
            .map(|(f, t)| f.fork().eval(t))
            .sum()
    }
}
