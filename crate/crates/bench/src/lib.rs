//! Shared fixtures for the benchmarks.

use l1adm::harness::{InstanceSpec, NoiseSpec, OperatorFamily, ProblemInstance};

/// Race-style instance: `m = 0.3 n`, `k = 0.1 m`, white noise `sigma = 1e-3`.
pub fn race_instance(operator: OperatorFamily, n: usize, seed: u64) -> ProblemInstance {
    let m = (0.3 * n as f64).round() as usize;
    let k = (0.1 * m as f64).round() as usize;
    InstanceSpec {
        operator,
        n,
        m,
        k,
        noise: NoiseSpec::white(1e-3),
    }
    .generate(seed)
    .expect("valid fixture")
}

/// The `mu` used by the quadratic-model benches.
pub const MU: f64 = 1e-4;
