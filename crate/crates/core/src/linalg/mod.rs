//! Complex vectors, matrix-free sensing operators and spectral estimates.
//!
//! Walsh-Hadamard operators use natural (Hadamard) ordering: entry `(i, j)`
//! of the full matrix is `(-1)^popcount(i & j) / sqrt(n)`.

mod operator;
mod spectral;
pub mod transform;
mod vector;

pub use operator::{
    random_rows, random_signs, OperatorKind, SensingOperator, TransformSpec, ORTHONORMAL_TOL,
};
pub use spectral::{
    default_lambda_max, estimate_lambda_max, SpectralEstimate, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
pub use vector::CVector;
