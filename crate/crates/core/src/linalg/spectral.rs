use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::{CVector, SensingOperator};

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 200;

// Fixed so repeated estimates of the same operator agree.
const START_SEED: u64 = 0x5eed_1a4d;

/// Estimate of the largest eigenvalue of `A^* A`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralEstimate {
    pub lambda_max: f64,
    pub tolerance: f64,
    pub iterations_used: usize,
    pub converged: bool,
}

/// Power iteration on `A^* A` from a random start. Stops when the relative
/// change of the Rayleigh quotient drops below `tol` or after `max_iter`
/// iterations; a non-converged run reports `iterations_used == max_iter`.
pub fn estimate_lambda_max(op: &SensingOperator, tol: f64, max_iter: usize) -> SpectralEstimate {
    assert!(tol > 0.0, "tolerance must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(START_SEED);
    let mut v: CVector = (0..op.cols())
        .map(|_| {
            Complex64::new(
                StandardNormal.sample(&mut rng),
                StandardNormal.sample(&mut rng),
            )
        })
        .collect();
    v.scale_in_place(1.0 / v.norm());

    let mut lambda = 0.0;
    for it in 1..=max_iter {
        // v has unit norm, so ||A v||^2 is the Rayleigh quotient.
        let av = op.apply(&v).expect("dimension fixed by construction");
        let next = av.norm_sqr();
        let w = op.apply_adjoint(&av).expect("dimension fixed by construction");
        let w_norm = w.norm();
        let done = (next - lambda).abs() <= tol * next.abs() || w_norm == 0.0;
        lambda = next;
        if done {
            return SpectralEstimate {
                lambda_max: lambda,
                tolerance: tol,
                iterations_used: it,
                converged: true,
            };
        }
        v = w.scaled(1.0 / w_norm);
    }
    SpectralEstimate {
        lambda_max: lambda,
        tolerance: tol,
        iterations_used: max_iter,
        converged: false,
    }
}

/// [`estimate_lambda_max`] with the default tolerance and iteration cap.
pub fn default_lambda_max(op: &SensingOperator) -> SpectralEstimate {
    estimate_lambda_max(op, DEFAULT_TOL, DEFAULT_MAX_ITER)
}
