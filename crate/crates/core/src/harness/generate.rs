use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::Instance;
use crate::oracle::FunctionDescriptor;

const COVER_PROBABILITY: f64 = 0.3;
const EDGE_PROBABILITY: f64 = 0.4;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    Coverage,
    FacilityLocation,
    GraphCut,
    /// Round-robin over coverage, facility location and graph cut.
    Mixed,
}

impl GeneratorKind {
    pub fn name(self) -> &'static str {
        match self {
            GeneratorKind::Coverage => "coverage",
            GeneratorKind::FacilityLocation => "facility_location",
            GeneratorKind::GraphCut => "graph_cut",
            GeneratorKind::Mixed => "mixed",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "coverage" => GeneratorKind::Coverage,
            "facility_location" => GeneratorKind::FacilityLocation,
            "graph_cut" => GeneratorKind::GraphCut,
            "mixed" => GeneratorKind::Mixed,
            other => {
                return Err(Error::Validation(format!(
                    "unknown generator kind `{other}`"
                )))
            }
        })
    }
}

/// Coverage over a universe of `2n` unit-weight elements; each item covers
/// each element independently with probability 0.3.
fn coverage(rng: &mut ChaCha8Rng, n: usize) -> FunctionDescriptor {
    let universe = 2 * n;
    let covers = (0..n)
        .map(|_| {
            (0..universe)
                .filter(|_| rng.random_bool(COVER_PROBABILITY))
                .collect()
        })
        .collect();
    FunctionDescriptor::Coverage {
        universe_weights: vec![1.0; universe],
        covers,
    }
}

/// `n` clients by `n` items, similarities uniform in `[0, 1)`.
fn facility_location(rng: &mut ChaCha8Rng, n: usize) -> FunctionDescriptor {
    let similarity = (0..n)
        .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
        .collect();
    FunctionDescriptor::FacilityLocation { similarity }
}

/// G(n, 0.4) with weights uniform in `[0, 1)`.
fn graph_cut(rng: &mut ChaCha8Rng, n: usize) -> FunctionDescriptor {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(EDGE_PROBABILITY) {
                edges.push((u, v, rng.random::<f64>()));
            }
        }
    }
    FunctionDescriptor::GraphCut { edges }
}

/// Deterministic synthetic instance for a given seed.
pub fn generate_instance(
    kind: GeneratorKind,
    n: usize,
    m: usize,
    k: usize,
    l: usize,
    seed: u64,
) -> Result<Instance> {
    if n == 0 || m == 0 || k == 0 || l == 0 {
        return Err(Error::Validation(
            "generator parameters n, m, k, l must be ≥ 1".into(),
        ));
    }
    if l > n {
        return Err(Error::Validation(format!(
            "l must be ≤ n (l = {l}, n = {n})"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let functions = (0..m)
        .map(|j| {
            let kind = match kind {
                GeneratorKind::Mixed => [
                    GeneratorKind::Coverage,
                    GeneratorKind::FacilityLocation,
                    GeneratorKind::GraphCut,
                ][j % 3],
                other => other,
            };
            match kind {
                GeneratorKind::Coverage => coverage(&mut rng, n),
                GeneratorKind::FacilityLocation => facility_location(&mut rng, n),
                GeneratorKind::GraphCut => graph_cut(&mut rng, n),
                GeneratorKind::Mixed => unreachable!(),
            }
        })
        .collect();
    let instance = Instance { n, k, l, functions };
    instance.validate()?;
    Ok(instance)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_bytes() {
        for kind in [
            GeneratorKind::Coverage,
            GeneratorKind::FacilityLocation,
            GeneratorKind::GraphCut,
            GeneratorKind::Mixed,
        ] {
            let a = generate_instance(kind, 6, 4, 2, 3, 11).unwrap().to_json();
            let b = generate_instance(kind, 6, 4, 2, 3, 11).unwrap().to_json();
            assert_eq!(a, b);
            let c = generate_instance(kind, 6, 4, 2, 3, 12).unwrap().to_json();
            assert_ne!(a, c);
        }
    }

    #[test]
    fn mixed_is_round_robin() {
        let inst = generate_instance(GeneratorKind::Mixed, 5, 3, 1, 2, 0).unwrap();
        let kinds: Vec<_> = inst.functions.iter().map(|f| f.kind()).collect();
        assert_eq!(kinds, ["coverage", "facility_location", "graph_cut"]);
    }

    #[test]
    fn graph_cut_edge_density() {
        let seeds = 4000;
        let total: usize = (0..seeds)
            .map(|s| {
                match &generate_instance(GeneratorKind::GraphCut, 4, 1, 1, 1, s)
                    .unwrap()
                    .functions[0]
                {
                    FunctionDescriptor::GraphCut { edges } => edges.len(),
                    _ => unreachable!(),
                }
            })
            .sum();
        let mean = total as f64 / seeds as f64;
        // Binomial(6, 0.4): mean 2.4, sd of the mean 1.2 / sqrt(4000) ≈ 0.019
        assert!((mean - 2.4).abs() < 0.1, "mean edges {mean}");
    }

    #[test]
    fn coverage_shape() {
        let inst = generate_instance(GeneratorKind::Coverage, 7, 1, 2, 3, 5).unwrap();
        match &inst.functions[0] {
            FunctionDescriptor::Coverage {
                universe_weights,
                covers,
            } => {
                assert_eq!(universe_weights.len(), 14);
                assert_eq!(covers.len(), 7);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate_instance(GeneratorKind::Coverage, 3, 1, 1, 4, 0).is_err());
        assert!(generate_instance(GeneratorKind::Coverage, 3, 0, 1, 1, 0).is_err());
        assert_eq!(
            "mixed".parse::<GeneratorKind>().unwrap(),
            GeneratorKind::Mixed
        );
        assert!("bogus".parse::<GeneratorKind>().is_err());
    }
}
