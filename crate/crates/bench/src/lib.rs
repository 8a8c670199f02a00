//! Fixed workloads shared by the criterion benches.

use twostage::{generate_instance, GeneratorKind, Problem};

/// `(label, problem)` pairs covering the monotone and non-monotone regimes at
/// a few sizes.
pub fn workloads() -> Vec<(String, Problem)> {
    let specs = [
        (GeneratorKind::GraphCut, 20, 3, 3, 5),
        (GeneratorKind::Mixed, 40, 6, 4, 8),
        (GeneratorKind::FacilityLocation, 80, 4, 5, 10),
    ];
    specs
        .iter()
        .map(|&(kind, n, m, k, l)| {
            let instance = generate_instance(kind, n, m, k, l, 7).expect("valid generator spec");
            (
                format!("{kind}-n{n}-m{m}-k{k}-l{l}"),
                Problem::new(&instance).expect("generated instances validate"),
            )
        })
        .collect()
}
