//! Dual alternating direction iterations.
//!
//! The dual of each model is written with a splitting variable
//! `z = A^* y`, `z` confined to a simple set (the infinity-norm ball, its
//! weighted version, or the half-space `Re(z) <= 1` for nonnegative
//! signals). The primal signal `x` is the multiplier of that splitting.
//! With orthonormal rows (`A A^* = I`) every subproblem is solved exactly:
//!
//! ```text
//! z <- P(A^* y + x / beta)
//! y <- Y(A z - (A x - b) / beta)       model-specific, see below
//! x <- x - gamma beta (z - A^* y)
//! ```
//!
//! where `Y(v) = beta/(mu + beta) v` for `Qp`, `v - P_{B(delta/beta)}(v)` for
//! `Bpdn` and `v` for `Bp`. Without orthonormal rows the `y` update is
//! replaced by one exact steepest-descent step; that variant has no
//! convergence proof and is run with a hard iteration cap.


use crate::error::{ensure_len, Error, Result};
use crate::linalg::{CVector, SensingOperator};
use crate::models::{extract_l1l1, reformulate_l1l1, residues, Family, ModelSpec, ResidueParts};
use crate::prox::{shrink_l2, DualSet};
use crate::solver::{default_beta, relative_residual, RunRecord, SolverOptions, Tracker};

/// `(sqrt(5) + 1) / 2`, the supremum of admissible `gamma`.
pub const GOLDEN: f64 = 1.618_033_988_749_895;
pub const DEFAULT_GAMMA: f64 = 1.618;

/// Iterate `(x, y, z)` plus the cached products `A x` and `A^* y`.
#[derive(Debug, Clone, PartialEq)]
pub struct DadmState {
    pub x: CVector,
    pub y: CVector,
    pub z: CVector,
    ax: CVector,
    aty: CVector,
    pub k: usize,
}

impl DadmState {
    pub fn zeros(op: &SensingOperator) -> Self {
        Self {
            x: CVector::zeros(op.cols()),
            y: CVector::zeros(op.rows()),
            z: CVector::zeros(op.cols()),
            ax: CVector::zeros(op.rows()),
            aty: CVector::zeros(op.cols()),
            k: 0,
        }
    }

    /// State at `(x, y, z)`; computes `A x` and `A^* y`.
    pub fn new(op: &SensingOperator, x: CVector, y: CVector, z: CVector) -> Result<Self> {
        ensure_len(op.cols(), z.len())?;
        let ax = op.apply(&x)?;
        let aty = op.apply_adjoint(&y)?;
        Ok(Self {
            x,
            y,
            z,
            ax,
            aty,
            k: 0,
        })
    }

    /// Cached `A x`. The orthonormal steps update it by recurrence.
    pub fn ax(&self) -> &CVector {
        &self.ax
    }

    /// Cached `A^* y`.
    pub fn aty(&self) -> &CVector {
        &self.aty
    }
}

/// Step parameters. `param` is `mu` (`Qp`, steepest-descent step) or
/// `delta` (`Bpdn`); the basis pursuit step ignores it.
#[derive(Debug, Clone, PartialEq)]
pub struct DadmParams {
    pub beta: f64,
    pub gamma: f64,
    pub param: f64,
    pub dual_set: DualSet,
}

impl DadmParams {
    /// Requires `beta > 0`, `0 < gamma < (sqrt(5)+1)/2` and `param >= 0`.
    pub fn new(beta: f64, gamma: f64, param: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        if !(gamma > 0.0 && gamma < GOLDEN) {
            return Err(Error::InvalidParameter(format!(
                "gamma must lie in (0, {GOLDEN}), got {gamma}"
            )));
        }
        if !(param >= 0.0 && param.is_finite()) {
            return Err(Error::InvalidParameter(format!("model parameter must be >= 0, got {param}")));
        }
        Ok(Self {
            beta,
            gamma,
            param,
            dual_set: DualSet::default(),
        })
    }

    pub fn with_dual_set(mut self, dual_set: DualSet) -> Self {
        self.dual_set = dual_set;
        self
    }
}

#[derive(Debug, Clone, Copy)]
enum YUpdate {
    Quadratic(f64),
    Ball(f64),
    Plain,
}

fn check(state: &DadmState, op: &SensingOperator, b: &CVector) -> Result<()> {
    ensure_len(op.rows(), b.len())?;
    ensure_len(op.cols(), state.x.len())?;
    ensure_len(op.rows(), state.y.len())
}

fn finish_step(state: &mut DadmState) -> Result<()> {
    state.k += 1;
    if !(state.x.is_finite() && state.y.is_finite()) {
        return Err(Error::NonFinite("dual ADM iterate"));
    }
    Ok(())
}

// z <- P(A^* y + x / beta)
fn z_update(state: &mut DadmState, p: &DadmParams) {
    let mut z = state.aty.clone();
    z.axpy(1.0 / p.beta, &state.x);
    p.dual_set.project_in_place(z.as_mut_slice());
    state.z = z;
}

fn orthonormal_step(
    state: &mut DadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &DadmParams,
    rule: YUpdate,
) -> Result<()> {
    check(state, op, b)?;
    if !op.orthonormal_rows() {
        return Err(Error::NotOrthonormal);
    }
    let beta = p.beta;
    z_update(state, p);

    let az = op.apply(&state.z)?;
    // v = A z - (A x - b) / beta
    let mut v = az.clone();
    v.axpy(-1.0 / beta, &state.ax.sub(b));
    state.y = match rule {
        YUpdate::Quadratic(mu) => v.scaled(beta / (mu + beta)),
        YUpdate::Ball(delta) => shrink_l2(&v, delta / beta),
        YUpdate::Plain => v,
    };
    state.aty = op.apply_adjoint(&state.y)?;

    // x <- x - gamma beta (z - A^* y); with A A^* = I this moves A x by
    // -gamma beta (A z - y).
    let step = p.gamma * beta;
    state.x.axpy(-step, &state.z.sub(&state.aty));
    state.ax.axpy(-step, &az.sub(&state.y));
    finish_step(state)
}

/// One iteration for `Qp` with `mu = p.param`. Requires orthonormal rows.
pub fn dadm_qp_step(
    state: &mut DadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &DadmParams,
) -> Result<()> {
    orthonormal_step(state, op, b, p, YUpdate::Quadratic(p.param))
}

/// One iteration for `Bpdn` with `delta = p.param`. Requires orthonormal rows.
pub fn dadm_bpdn_step(
    state: &mut DadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &DadmParams,
) -> Result<()> {
    orthonormal_step(state, op, b, p, YUpdate::Ball(p.param))
}

/// One iteration for basis pursuit. Requires orthonormal rows. The
/// residual obeys `A x_{k+1} - b = (1 - gamma)(A x_k - b)`.
pub fn dadm_bp_step(
    state: &mut DadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &DadmParams,
) -> Result<()> {
    orthonormal_step(state, op, b, p, YUpdate::Plain)
}

/// One iteration for `Qp` (`mu = p.param > 0`) or basis pursuit
/// (`mu = 0`) when `A A^* != I`: the `y` minimisation is replaced by an
/// exact line search along the negative gradient
/// `g = mu y + A x - b + beta A (A^* y - z)`.
///
/// Experimental: convergence is not established.
pub fn dadm_nonorth_step(
    state: &mut DadmState,
    op: &SensingOperator,
    b: &CVector,
    p: &DadmParams,
) -> Result<()> {
    check(state, op, b)?;
    let (beta, mu) = (p.beta, p.param);
    z_update(state, p);

    let mut g = op.apply(&state.aty.sub(&state.z))?;
    g.scale_in_place(beta);
    g.axpy(1.0, &state.ax.sub(b));
    g.axpy(mu, &state.y);
    let g2 = g.norm_sqr();
    if g2 > 0.0 {
        let atg = op.apply_adjoint(&g)?;
        // g^*(mu I + beta A A^*) g without forming A A^*
        let alpha = g2 / (mu * g2 + beta * atg.norm_sqr());
        state.y.axpy(-alpha, &g);
        state.aty.axpy(-alpha, &atg);
    }

    state.x.axpy(-p.gamma * beta, &state.z.sub(&state.aty));
    state.ax = op.apply(&state.x)?;
    finish_step(state)
}

/// Runs the dual solver on any of the eight models.
///
/// `L1l1` is reformulated as basis pursuit on `(A, nu I)/sqrt(1+nu^2)`;
/// nonnegative models project `z` onto the half-space `Re(z) <= w`.
/// Operators without orthonormal rows use [`dadm_nonorth_step`] (`Qp`, `Bp`
/// and `L1l1` only). Defaults: `gamma = 1.618`, `beta = ||b||_1 / m`.
pub fn dadm_solve(
    model: &ModelSpec,
    op: &SensingOperator,
    b: &CVector,
    opts: &SolverOptions,
    truth: Option<&CVector>,
) -> Result<RunRecord> {
    ensure_len(op.rows(), b.len())?;
    let n = op.cols();
    model.validate(n)?;
    let family = model.family.reduced();

    // The problem actually iterated on.
    let (work_op, work_b, inner_family, dual_set, nu) = match family {
        Family::L1l1 { nu } => {
            let (a_hat, b_hat) = reformulate_l1l1(op, b, nu)?;
            let weights = model.weights.as_ref().map(|w| {
                let mut v = w.clone();
                v.extend(std::iter::repeat_n(1.0, op.rows()));
                v
            });
            let half = if model.nonneg { n } else { 0 };
            (Some(a_hat), b_hat, Family::Bp, DualSet::new(weights, half), Some(nu))
        }
        f => {
            let half = if model.nonneg { n } else { 0 };
            (None, b.clone(), f, DualSet::new(model.weights.clone(), half), None)
        }
    };
    let work_op = work_op.as_ref().unwrap_or(op);

    let (rule, param) = match inner_family {
        Family::Qp { mu } => (YUpdate::Quadratic(mu), mu),
        Family::Bpdn { delta } => (YUpdate::Ball(delta), delta),
        _ => (YUpdate::Plain, 0.0),
    };
    let orthonormal = work_op.orthonormal_rows();
    if !orthonormal && matches!(rule, YUpdate::Ball(_)) {
        return Err(Error::NotOrthonormal);
    }

    let beta = opts
        .beta
        .unwrap_or_else(|| default_beta(&work_b, |m, l1| l1 / m));
    let gamma = opts.gamma.unwrap_or(DEFAULT_GAMMA);
    let params = DadmParams::new(beta, gamma, param)?.with_dual_set(dual_set.clone());

    // Maps the iterated variable back to the model's signal.
    let to_signal = |x: &CVector| -> CVector {
        let x = match nu {
            Some(nu) => extract_l1l1(x, n, nu),
            None => x.clone(),
        };
        if model.nonneg {
            x.nonneg_real_part()
        } else {
            x
        }
    };

    let mut state = match &opts.x0 {
        Some(x0) => {
            let x_init = match nu {
                Some(nu) => {
                    ensure_len(n, x0.len())?;
                    x0.scaled(nu).concat(&CVector::zeros(op.rows()))
                }
                None => x0.clone(),
            };
            let z = CVector::zeros(work_op.cols());
            DadmState::new(work_op, x_init, CVector::zeros(op.rows()), z)?
        }
        None => DadmState::zeros(work_op),
    };

    let mut tracker = Tracker::new(opts, truth);
    let weights = dual_set.weights().map(<[f64]>::to_vec);
    let mut aat = 0;
    let mut converged = false;
    let mut signal_prev = to_signal(&state.x);
    for k in 1..=opts.max_iter {
        if orthonormal {
            orthonormal_step(&mut state, work_op, &work_b, &params, rule)?;
            aat += 2;
        } else {
            dadm_nonorth_step(&mut state, work_op, &work_b, &params)?;
            aat += 3;
        }
        let diag = tracker.needs_residues().then(|| {
            let mut d = residues(
                inner_family,
                ResidueParts {
                    x: &state.x,
                    y: &state.y,
                    z: &state.z,
                    ax: &state.ax,
                    aty: &state.aty,
                    b: &work_b,
                    weights: weights.as_deref(),
                },
            );
            if let Some(nu) = nu {
                // ||x_hat||_1 / nu is the l1/l1 objective on the constraint set.
                d.objective /= nu;
            }
            d
        });
        let signal = to_signal(&state.x);
        let stop = tracker.observe(k, &signal, &signal_prev, diag, aat);
        signal_prev = signal;
        if stop {
            converged = true;
            break;
        }
    }
    let relres = relative_residual(&op.apply(&signal_prev)?, b);
    Ok(tracker.finish("dadm", model, converged, state.k, aat, signal_prev, relres))
}
