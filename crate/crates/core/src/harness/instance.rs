use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::FunctionDescriptor;

/// On-disk problem description: `n` real items, inner budget `k`, reduced
/// set size `l`, and the functions to be summed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub n: usize,
    pub k: usize,
    pub l: usize,
    pub functions: Vec<FunctionDescriptor>,
}

impl Instance {
    pub fn m(&self) -> usize {
        self.functions.len()
    }

    pub(crate) fn check_budgets(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Validation("n must be ≥ 1".into()));
        }
        if self.k == 0 {
            return Err(Error::Validation("k must be ≥ 1".into()));
        }
        if self.l == 0 {
            return Err(Error::Validation("l must be ≥ 1".into()));
        }
        if self.l > self.n {
            return Err(Error::Validation(format!(
                "l must be ≤ n (l = {}, n = {})",
                self.l, self.n
            )));
        }
        if self.functions.is_empty() {
            return Err(Error::Validation("functions must not be empty".into()));
        }
        Ok(())
    }

    /// Checks budgets and every descriptor against `n`.
    pub fn validate(&self) -> Result<()> {
        self.check_budgets()?;
        for (i, d) in self.functions.iter().enumerate() {
            d.validate(self.n).map_err(|e| match e {
                Error::InvalidDescriptor { field, reason } => Error::InvalidDescriptor {
                    field: format!("functions[{i}].{field}"),
                    reason,
                },
                other => other,
            })?;
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }
}

/// Parses and validates a JSON instance.
pub fn parse_instance(text: &[u8]) -> Result<Instance> {
    let instance: Instance = serde_json::from_slice(text)?;
    instance.validate()?;
    Ok(instance)
}
