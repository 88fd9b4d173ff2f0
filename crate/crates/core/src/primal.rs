//! Inexact primal alternating direction iterations for `Qp`, `Bpdn` and `Bp`.
//!
//! The primal problem is split as `min ||x||_1 + phi(r)  s.t.  Ax + r = b`;
//! one iteration minimises the augmented Lagrangian over `r` exactly, takes
//! one linearised proximal step in `x` and updates the multiplier `y`:
//!
//! ```text
//! r <- argmin_r phi(r) + beta/2 ||r - (y/beta - (Ax - b))||^2
//! g <- A^*(Ax + r - b - y/beta)
//! x <- shrink(x - tau g, tau/beta)
//! y <- y - gamma beta (Ax + r - b)
//! ```
//!
//! Convergence holds whenever `tau * lambda_max(A^*A) + gamma < 2`; the
//! parameter constructor enforces it.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};
use crate::linalg::{default_lambda_max, CVector, SensingOperator};
use crate::models::{residues, Family, ModelSpec, ResidueParts};
use crate::prox::{project_l2_ball, shrink_in_place, DualSet};
use crate::solver::{default_beta, relative_residual, RunRecord, SolverOptions, Tracker};

pub const DEFAULT_TAU: f64 = 0.8;
pub const DEFAULT_GAMMA: f64 = 1.199;

/// Iterate `(x, r, y)` plus the cached product `A x`.
#[derive(Debug, Clone, PartialEq)]
pub struct PadmState {
    pub x: CVector,
    pub r: CVector,
    pub y: CVector,
    ax: CVector,
    pub k: usize,
}

impl PadmState {
    pub fn zeros(op: &SensingOperator) -> Self {
        Self {
            x: CVector::zeros(op.cols()),
            r: CVector::zeros(op.rows()),
            y: CVector::zeros(op.rows()),
            ax: CVector::zeros(op.rows()),
            k: 0,
        }
    }

    /// State at `(x, r, y)`; computes `A x`.
    pub fn new(op: &SensingOperator, x: CVector, r: CVector, y: CVector) -> Result<Self> {
        ensure_len(op.rows(), r.len())?;
        ensure_len(op.rows(), y.len())?;
        let ax = op.apply(&x)?;
        Ok(Self { x, r, y, ax, k: 0 })
    }

    /// The cached `A x`.
    pub fn ax(&self) -> &CVector {
        &self.ax
    }
}

/// Step parameters. `param` is `mu` for `Qp`, `delta` for `Bpdn` and is
/// ignored by the basis pursuit step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadmParams {
    pub beta: f64,
    pub gamma: f64,
    pub tau: f64,
    pub param: f64,
    pub weights: Option<Vec<f64>>,
}

impl PadmParams {
    /// Checked constructor: rejects `tau * lambda_max + gamma >= 2`.
    pub fn new(beta: f64, gamma: f64, tau: f64, param: f64, lambda_max: f64) -> Result<Self> {
        let p = Self::unchecked(beta, gamma, tau, param)?;
        let value = tau * lambda_max + gamma;
        if value >= 2.0 {
            return Err(Error::StepSizeCondition { value });
        }
        Ok(p)
    }

    /// Positivity checks only; the step-size condition is not enforced.
    pub fn unchecked(beta: f64, gamma: f64, tau: f64, param: f64) -> Result<Self> {
        for (name, v) in [("beta", beta), ("gamma", gamma), ("tau", tau)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if !(param >= 0.0 && param.is_finite()) {
            return Err(Error::InvalidParameter(format!("model parameter must be >= 0, got {param}")));
        }
        Ok(Self {
            beta,
            gamma,
            tau,
            param,
            weights: None,
        })
    }

    pub fn with_weights(mut self, weights: Option<Vec<f64>>) -> Self {
        self.weights = weights;
        self
    }
}

#[derive(Debug, Clone, Copy)]
enum RUpdate {
    Quadratic(f64),
    Ball(f64),
    Zero,
}

fn step(
    state: &mut PadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &PadmParams,
    rule: RUpdate,
) -> Result<()> {
    ensure_len(op.rows(), b.len())?;
    ensure_len(op.cols(), state.x.len())?;
    let beta = p.beta;

    // v = y/beta - (Ax - b)
    let mut v = b.sub(&state.ax);
    v.axpy(1.0 / beta, &state.y);
    state.r = match rule {
        RUpdate::Quadratic(mu) => v.scaled(mu * beta / (1.0 + mu * beta)),
        RUpdate::Ball(delta) => project_l2_ball(&v, delta),
        RUpdate::Zero => CVector::zeros(b.len()),
    };

    // g = A^*(Ax + r - b - y/beta) = A^*(r - v)
    let g = op.apply_adjoint(&state.r.sub(&v))?;
    state.x.axpy(-p.tau, &g);
    shrink_in_place(state.x.as_mut_slice(), p.tau / beta, p.weights.as_deref());

    state.ax = op.apply(&state.x)?;
    // y <- y - gamma beta (Ax + r - b)
    let mut feas = state.ax.add(&state.r);
    feas.axpy(-1.0, b);
    state.y.axpy(-p.gamma * beta, &feas);
    state.k += 1;

    if !(state.x.is_finite() && state.y.is_finite()) {
        return Err(Error::NonFinite("primal ADM iterate"));
    }
    Ok(())
}

/// One iteration for `min ||x||_1 + ||Ax - b||^2 / (2 mu)`, `mu = p.param > 0`.
pub fn padm_qp_step(
    state: &mut PadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &PadmParams,
) -> Result<()> {
    if !(p.param > 0.0) {
        return Err(Error::InvalidParameter("the quadratic-penalty step needs mu > 0".into()));
    }
    step(state, op, b, p, RUpdate::Quadratic(p.param))
}

/// One iteration for `min ||x||_1 s.t. ||Ax - b|| <= delta`, `delta = p.param`.
pub fn padm_bpdn_step(
    state: &mut PadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &PadmParams,
) -> Result<()> {
    step(state, op, b, p, RUpdate::Ball(p.param))
}

/// One iteration for basis pursuit; `r` stays zero.
pub fn padm_bp_step(
    state: &mut PadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &PadmParams,
) -> Result<()> {
    step(state, op, b, p, RUpdate::Zero)
}

/// Runs the primal solver on `Bp`, `Bpdn` or `Qp`.
///
/// Defaults: `tau = 0.8`, `gamma = 1.199`, `beta = 2m / ||b||_1`.
pub fn padm_solve(
    model: &ModelSpec,
    op: &SensingOperator,
    b: &CVector,
    opts: &SolverOptions,
    truth: Option<&CVector>,
) -> Result<RunRecord> {
    ensure_len(op.rows(), b.len())?;
    model.validate(op.cols())?;
    if model.nonneg {
        return Err(Error::UnsupportedModel(
            "nonnegative models are solved by the dual solver".into(),
        ));
    }
    let family = model.family.reduced();
    let rule = match family {
        Family::Qp { mu } => RUpdate::Quadratic(mu),
        Family::Bpdn { delta } => RUpdate::Ball(delta),
        Family::Bp => RUpdate::Zero,
        Family::L1l1 { .. } => {
            return Err(Error::UnsupportedModel(
                "l1/l1 is solved by the dual solver after reformulation".into(),
            ))
        }
    };

    let beta = opts
        .beta
        .unwrap_or_else(|| default_beta(b, |m, l1| 2.0 * m / l1));
    let gamma = opts.gamma.unwrap_or(DEFAULT_GAMMA);
    let tau = opts.tau.unwrap_or(DEFAULT_TAU);
    let param = match rule {
        RUpdate::Quadratic(v) | RUpdate::Ball(v) => v,
        RUpdate::Zero => 0.0,
    };
    let params = if opts.allow_unsafe_steps {
        PadmParams::unchecked(beta, gamma, tau, param)?
    } else {
        PadmParams::new(beta, gamma, tau, param, default_lambda_max(op).lambda_max)?
    }
    .with_weights(model.weights.clone());

    let mut state = match &opts.x0 {
        Some(x0) => PadmState::new(op, x0.clone(), CVector::zeros(op.rows()), CVector::zeros(op.rows()))?,
        None => PadmState::zeros(op),
    };
    let dual_set = DualSet::ball(model.weights.clone());
    let mut tracker = Tracker::new(opts, truth);
    let mut aat = 0;
    let mut converged = false;
    for k in 1..=opts.max_iter {
        let x_prev = state.x.clone();
        step(&mut state, op, b, &params, rule)?;
        aat += 2;
        let diag = if tracker.needs_residues() {
            let aty = op.apply_adjoint(&state.y)?;
            let z = dual_set.project(&aty);
            Some(residues(
                family,
                ResidueParts {
                    x: &state.x,
                    y: &state.y,
                    z: &z,
                    ax: &state.ax,
                    aty: &aty,
                    b,
                    weights: model.weights.as_deref(),
                },
            ))
        } else {
            None
        };
        if tracker.observe(k, &state.x, &x_prev, diag, aat) {
            converged = true;
            break;
        }
    }
    let relres = relative_residual(&state.ax, b);
    Ok(tracker.finish("padm", model, converged, state.k, aat, state.x, relres))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prox::shrink;

    fn op() -> SensingOperator {
        SensingOperator::random_partial_wht(32, 12, 11).unwrap()
    }

    #[test]
    fn guard_rejects_large_steps() {
        assert!(matches!(
            PadmParams::new(1.0, 1.5, 1.0, 0.1, 1.0),
            Err(Error::StepSizeCondition { .. })
        ));
        assert!(PadmParams::new(1.0, 1.199, 0.8, 0.1, 1.0).is_ok());
        assert!(PadmParams::unchecked(1.0, 1.5, 1.0, 0.1).is_ok());
        assert!(PadmParams::unchecked(0.0, 1.0, 1.0, 0.1).is_err());
    }

    #[test]
    fn zero_data_keeps_zero_state() {
        let a = op();
        let b = CVector::zeros(12);
        let p = PadmParams::new(1.0, 1.199, 0.8, 1e-2, 1.0).unwrap();
        let mut s = PadmState::zeros(&a);
        for _ in 0..5 {
            padm_qp_step(&mut s, &a, &b, &p).unwrap();
        }
        assert_eq!(s.x, CVector::zeros(32));
        assert_eq!(s.y, CVector::zeros(12));
        assert_eq!(s.r, CVector::zeros(12));
    }

    #[test]
    fn bpdn_with_feasible_origin_keeps_x_zero() {
        let a = op();
        let b = a.apply(&CVector::basis(32, 3)).unwrap();
        let p = PadmParams::new(1.0, 1.199, 0.8, b.norm(), 1.0).unwrap();
        let mut s = PadmState::zeros(&a);
        padm_bpdn_step(&mut s, &a, &b, &p).unwrap();
        assert!(s.r.distance(&b) < 1e-15);
        assert_eq!(s.x, CVector::zeros(32));
    }

    #[test]
    fn bpdn_with_zero_radius_is_the_bp_step() {
        let a = op();
        let b = a.apply(&CVector::basis(32, 5).scaled(2.0)).unwrap();
        let p = PadmParams::new(0.7, 1.1, 0.8, 0.0, 1.0).unwrap();
        let mut s1 = PadmState::zeros(&a);
        let mut s2 = PadmState::zeros(&a);
        for _ in 0..4 {
            padm_bpdn_step(&mut s1, &a, &b, &p).unwrap();
            padm_bp_step(&mut s2, &a, &b, &p).unwrap();
        }
        assert_eq!(s1.x, s2.x);
        assert_eq!(s1.y, s2.y);
    }

    #[test]
    fn qp_step_requires_positive_mu() {
        let a = op();
        let p = PadmParams::new(1.0, 1.0, 0.8, 0.0, 1.0).unwrap();
        let mut s = PadmState::zeros(&a);
        assert!(padm_qp_step(&mut s, &a, &CVector::zeros(12), &p).is_err());
    }

    #[test]
    fn bp_step_matches_the_closed_form() {
        let a = op();
        let b = a.apply(&CVector::basis(32, 1)).unwrap();
        let p = PadmParams::new(1.3, 1.0, 0.8, 0.0, 1.0).unwrap();
        let mut s = PadmState::zeros(&a);
        padm_bp_step(&mut s, &a, &b, &p).unwrap();
        padm_bp_step(&mut s, &a, &b, &p).unwrap();
        // recompute the second step by hand from the first
        let mut s1 = PadmState::zeros(&a);
        padm_bp_step(&mut s1, &a, &b, &p).unwrap();
        let ax = a.apply(&s1.x).unwrap();
        let mut inner = ax.sub(&b);
        inner.axpy(-1.0 / p.beta, &s1.y);
        let mut v = s1.x.clone();
        v.axpy(-p.tau, &a.apply_adjoint(&inner).unwrap());
        let x2 = shrink(&v, p.tau / p.beta).unwrap();
        let mut y2 = s1.y.clone();
        y2.axpy(-p.gamma * p.beta, &a.apply(&x2).unwrap().sub(&b));
        assert!(s.x.distance(&x2) < 1e-14);
        assert!(s.y.distance(&y2) < 1e-14);
    }

    #[test]
    fn huge_tolerance_stops_after_one_iteration() {
        let a = op();
        let b = a.apply(&CVector::basis(32, 1)).unwrap();
        let opts = SolverOptions::default().with_eps(1e300);
        let rec = padm_solve(&ModelSpec::bp(), &a, &b, &opts, None).unwrap();
        assert_eq!(rec.iterations, 1);
        assert_eq!(rec.history.len(), 1);
        assert_eq!(rec.aat, 2);
    }

    #[test]
    fn rejects_models_routed_elsewhere() {
        let a = op();
        let b = CVector::zeros(12);
        let opts = SolverOptions::default();
        assert!(matches!(
            padm_solve(&ModelSpec::l1l1(0.1), &a, &b, &opts, None),
            Err(Error::UnsupportedModel(_))
        ));
        assert!(padm_solve(&ModelSpec::bp().nonneg(), &a, &b, &opts, None).is_err());
    }

    #[test]
    fn solve_guard_rejects_violating_parameters() {
        let a = op();
        let b = a.apply(&CVector::basis(32, 1)).unwrap();
        let mut opts = SolverOptions::default();
        opts.tau = Some(1.0);
        opts.gamma = Some(1.5);
        assert!(matches!(
            padm_solve(&ModelSpec::bp(), &a, &b, &opts, None),
            Err(Error::StepSizeCondition { .. })
        ));
        opts.allow_unsafe_steps = true;
        opts.max_iter = 3;
        assert!(padm_solve(&ModelSpec::bp(), &a, &b, &opts, None).is_ok());
    }
}
