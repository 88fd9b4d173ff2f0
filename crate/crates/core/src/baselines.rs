//! Iterative shrinkage (IST) and its accelerated form (FISTA) for
//! `min ||x||_1 + ||Ax - b||^2 / (2 mu)`.
//!
//! ```text
//! y_k     = x_k + ((t_{k-1} - 1) / t_k)(x_k - x_{k-1})     (y_0 = x_0)
//! x_{k+1} = shrink(y_k - tau A^*(A y_k - b), threshold)
//! t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2                   (t_0 = 1)
//! ```
//!
//! IST is the same map with zero momentum. The threshold is `tau * mu` by
//! default; [`ThresholdRule::Literal`] uses `tau / mu`.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};
use crate::linalg::{CVector, SensingOperator};
use crate::models::{residues, Family, ModelSpec, ResidueParts};
use crate::prox::{shrink_in_place, DualSet};
use crate::solver::{relative_residual, RunRecord, SolverOptions, ThresholdRule, Tracker};

pub const DEFAULT_TAU: f64 = 1.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    Ist,
    Fista,
}

impl Baseline {
    pub fn name(self) -> &'static str {
        match self {
            Baseline::Ist => "ist",
            Baseline::Fista => "fista",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FistaState {
    pub x: CVector,
    pub x_prev: CVector,
    /// `t_k`, the weight of the current step.
    pub t: f64,
    /// `t_{k-1}`
    pub t_prev: f64,
    pub k: usize,
}

impl FistaState {
    pub fn new(x0: CVector) -> Self {
        Self {
            x_prev: x0.clone(),
            x: x0,
            t: 1.0,
            t_prev: 1.0,
            k: 0,
        }
    }

    /// Momentum coefficient `(t_{k-1} - 1) / t_k`; zero at `k = 0`.
    pub fn momentum(&self) -> f64 {
        if self.k == 0 {
            0.0
        } else {
            (self.t_prev - 1.0) / self.t
        }
    }
}

/// `(1 + sqrt(1 + 4 t^2)) / 2`
pub fn next_t(t: f64) -> f64 {
    0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineParams {
    pub mu: f64,
    pub tau: f64,
    pub threshold: ThresholdRule,
}

impl BaselineParams {
    pub fn new(mu: f64, tau: f64) -> Result<Self> {
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
        }
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::InvalidParameter(format!("tau must be positive, got {tau}")));
        }
        Ok(Self {
            mu,
            tau,
            threshold: ThresholdRule::Consistent,
        })
    }

    pub fn with_threshold(mut self, threshold: ThresholdRule) -> Self {
        self.threshold = threshold;
        self
    }

    pub fn shrink_threshold(&self) -> f64 {
        match self.threshold {
            ThresholdRule::Consistent => self.tau * self.mu,
            ThresholdRule::Literal => self.tau / self.mu,
        }
    }
}

fn prox_gradient_step(
    state: &mut FistaState,
    op: &SensingOperator,
    b: &CVector,
    p: &BaselineParams,
    momentum: f64,
    weights: Option<&[f64]>,
) -> Result<()> {
    ensure_len(op.rows(), b.len())?;
    ensure_len(op.cols(), state.x.len())?;
    let mut y = state.x.clone();
    if momentum != 0.0 {
        y.axpy(momentum, &state.x.sub(&state.x_prev));
    }
    let grad = op.apply_adjoint(&op.apply(&y)?.sub(b))?;
    y.axpy(-p.tau, &grad);
    shrink_in_place(y.as_mut_slice(), p.shrink_threshold(), weights);
    if !y.is_finite() {
        return Err(Error::NonFinite("shrinkage iterate"));
    }
    state.x_prev = std::mem::replace(&mut state.x, y);
    state.k += 1;
    Ok(())
}

/// One accelerated step.
pub fn fista_step(
    state: &mut FistaState,
    op: &SensingOperator,
    b: &CVector,
    p: &BaselineParams,
) -> Result<()> {
    fista_step_weighted(state, op, b, p, None)
}

fn fista_step_weighted(
    state: &mut FistaState,
    op: &SensingOperator,
    b: &CVector,
    p: &BaselineParams,
    weights: Option<&[f64]>,
) -> Result<()> {
    let momentum = state.momentum();
    prox_gradient_step(state, op, b, p, momentum, weights)?;
    state.t_prev = state.t;
    state.t = next_t(state.t);
    Ok(())
}

/// One plain shrinkage step (`t_k = 1` throughout).
pub fn ist_step(
    state: &mut FistaState,
    op: &SensingOperator,
    b: &CVector,
    p: &BaselineParams,
) -> Result<()> {
    prox_gradient_step(state, op, b, p, 0.0, None)
}

/// Runs IST or FISTA on a `Qp` model (optionally weighted). Starts at
/// `opts.x0` or zero; `tau` defaults to 1.
///
/// The recorded residues use the dual estimate `y = (b - Ax) / mu` and
/// `z = P(A^* y)`.
pub fn baseline_solve(
    kind: Baseline,
    model: &ModelSpec,
    op: &SensingOperator,
    b: &CVector,
    opts: &SolverOptions,
    truth: Option<&CVector>,
) -> Result<RunRecord> {
    ensure_len(op.rows(), b.len())?;
    model.validate(op.cols())?;
    let mu = match model.family.reduced() {
        Family::Qp { mu } if !model.nonneg => mu,
        _ => {
            return Err(Error::UnsupportedModel(format!(
                "{} handles only the unconstrained quadratic model",
                kind.name()
            )))
        }
    };
    let params = BaselineParams::new(mu, opts.tau.unwrap_or(DEFAULT_TAU))?
        .with_threshold(opts.threshold);
    let weights = model.weights.as_deref();
    let x0 = match &opts.x0 {
        Some(x0) => {
            ensure_len(op.cols(), x0.len())?;
            x0.clone()
        }
        None => CVector::zeros(op.cols()),
    };
    let mut state = FistaState::new(x0);
    let dual_set = DualSet::ball(model.weights.clone());
    let mut tracker = Tracker::new(opts, truth);
    let mut aat = 0;
    let mut converged = false;
    for k in 1..=opts.max_iter {
        match kind {
            Baseline::Ist => prox_gradient_step(&mut state, op, b, &params, 0.0, weights)?,
            Baseline::Fista => fista_step_weighted(&mut state, op, b, &params, weights)?,
        }
        aat += 2;
        let diag = if tracker.needs_residues() {
            let ax = op.apply(&state.x)?;
            let y = b.sub(&ax).scaled(1.0 / mu);
            let aty = op.apply_adjoint(&y)?;
            let z = dual_set.project(&aty);
            Some(residues(
                Family::Qp { mu },
                ResidueParts {
                    x: &state.x,
                    y: &y,
                    z: &z,
                    ax: &ax,
                    aty: &aty,
                    b,
                    weights,
                },
            ))
        } else {
            None
        };
        if tracker.observe(k, &state.x, &state.x_prev, diag, aat) {
            converged = true;
            break;
        }
    }
    let relres = relative_residual(&op.apply(&state.x)?, b);
    Ok(tracker.finish(kind.name(), model, converged, state.k, aat, state.x, relres))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn instance() -> (SensingOperator, CVector) {
        let a = SensingOperator::random_partial_wht(32, 12, 9).unwrap();
        let mut x = CVector::zeros(32);
        x[4] = 1.0.into();
        x[20] = (-2.0).into();
        let b = a.apply(&x).unwrap();
        (a, b)
    }

    #[test]
    fn t_sequence() {
        let t1 = next_t(1.0);
        assert!((t1 - 1.618_034).abs() < 1e-6);
        assert!((next_t(t1) - 2.193_527).abs() < 1e-6);
    }

    #[test]
    fn first_steps_coincide() {
        let (a, b) = instance();
        let p = BaselineParams::new(1e-2, 1.0).unwrap();
        let x0 = a.apply_adjoint(&b).unwrap();
        let mut f = FistaState::new(x0.clone());
        let mut i = FistaState::new(x0);
        assert_eq!(f.momentum(), 0.0);
        fista_step(&mut f, &a, &b, &p).unwrap();
        ist_step(&mut i, &a, &b, &p).unwrap();
        assert_eq!(f.x, i.x);
    }

    #[test]
    fn zero_data_zero_trajectory() {
        let (a, _) = instance();
        let b = CVector::zeros(12);
        let p = BaselineParams::new(1e-2, 1.0).unwrap();
        let mut s = FistaState::new(CVector::zeros(32));
        for _ in 0..10 {
            fista_step(&mut s, &a, &b, &p).unwrap();
        }
        assert_eq!(s.x, CVector::zeros(32));
    }

    #[test]
    fn threshold_rules() {
        let p = BaselineParams::new(0.5, 0.8).unwrap();
        assert_eq!(p.shrink_threshold(), 0.4);
        assert_eq!(p.with_threshold(ThresholdRule::Literal).shrink_threshold(), 1.6);
        assert!(BaselineParams::new(0.0, 1.0).is_err());
    }

    #[test]
    fn ist_objective_is_monotone() {
        let (a, b) = instance();
        let model = ModelSpec::qp(1e-2);
        let p = BaselineParams::new(1e-2, 1.0).unwrap();
        let mut s = FistaState::new(CVector::zeros(32));
        let mut prev = f64::INFINITY;
        for _ in 0..500 {
            ist_step(&mut s, &a, &b, &p).unwrap();
            let f = model.objective(&s.x, &a.apply(&s.x).unwrap(), &b);
            assert!(f <= prev * (1.0 + 1e-14));
            prev = f;
        }
    }

    #[test]
    fn rejects_other_models() {
        let (a, b) = instance();
        let opts = SolverOptions::default();
        for m in [ModelSpec::bp(), ModelSpec::bpdn(0.1), ModelSpec::qp(0.1).nonneg()] {
            assert!(baseline_solve(Baseline::Fista, &m, &a, &b, &opts, None).is_err());
        }
    }

    #[test]
    fn converges_on_a_small_instance() {
        let (a, b) = instance();
        let opts = SolverOptions::default().with_eps(1e-12).with_max_iter(20_000);
        let rec = baseline_solve(Baseline::Fista, &ModelSpec::qp(1e-4), &a, &b, &opts, None).unwrap();
        assert!(rec.last.res < 1e-6, "{:?}", rec.last);
        assert_eq!(rec.aat, 2 * rec.iterations);
    }
}
