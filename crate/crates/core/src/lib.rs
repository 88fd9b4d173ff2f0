//! Matrix-free alternating direction solvers for l1 problems in
//! compressive sensing.
//!
//! Models: basis pursuit, its denoising variant, the unconstrained
//! quadratic model and the l1/l1 model, each optionally weighted and
//! restricted to nonnegative signals. Solvers: a primal ([`padm_solve`]) and
//! a dual ([`dadm_solve`]) alternating direction method, with plain and
//! accelerated iterative shrinkage as baselines.
//!
//! ```
//! use l1adm::{dadm_solve, CVector, ModelSpec, SensingOperator, SolverOptions};
//!
//! let a = SensingOperator::random_partial_wht(64, 24, 7).unwrap();
//! let mut x = CVector::zeros(64);
//! x[5] = 1.0.into();
//! x[40] = (-0.5).into();
//! let b = a.apply(&x).unwrap();
//! let opts = SolverOptions::default().with_eps(1e-8).with_max_iter(5000);
//! let rec = dadm_solve(&ModelSpec::bp(), &a, &b, &opts, Some(&x)).unwrap();
//! assert!(rec.relerr.unwrap() < 1e-3);
//! ```

pub mod baselines;
pub mod dual;
pub mod error;
pub mod harness;
pub mod io;
pub mod linalg;
pub mod models;
pub mod primal;
pub mod prox;
pub mod solver;

pub use baselines::{baseline_solve, fista_step, ist_step, Baseline, BaselineParams, FistaState};
pub use dual::{
    dadm_bp_step, dadm_bpdn_step, dadm_nonorth_step, dadm_qp_step, dadm_solve, DadmParams,
    DadmState,
};
pub use error::{Error, Result};
pub use linalg::{
    default_lambda_max, estimate_lambda_max, CVector, OperatorKind, SensingOperator,
    SpectralEstimate, TransformSpec,
};
pub use models::{
    compute_res, extract_l1l1, embed_l1l1, reformulate_l1l1, relchg, relerr, snr_db, Diagnostics,
    Family, ModelSpec,
};
pub use num_complex::Complex64;
pub use primal::{padm_bp_step, padm_bpdn_step, padm_qp_step, padm_solve, PadmParams, PadmState};
pub use solver::{
    solve, IterationRecord, RunRecord, SolverKind, SolverOptions, Status, StopRule, ThresholdRule,
};
