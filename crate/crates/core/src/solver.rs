//! Options, run records and the stopping logic shared by every solver.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::baselines::{baseline_solve, Baseline};
use crate::dual::dadm_solve;
use crate::error::Result;
use crate::linalg::{CVector, SensingOperator};
use crate::models::{relchg, relerr, Diagnostics, ModelSpec};
use crate::primal::padm_solve;

/// The four solvers behind one name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Padm,
    Dadm,
    Ist,
    Fista,
}

impl SolverKind {
    pub const ALL: [SolverKind; 4] = [
        SolverKind::Padm,
        SolverKind::Dadm,
        SolverKind::Ist,
        SolverKind::Fista,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Padm => "padm",
            SolverKind::Dadm => "dadm",
            SolverKind::Ist => "ist",
            SolverKind::Fista => "fista",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|s| s.name() == name)
    }
}

/// Runs `solver` on `model`. `truth` enables the relative-error columns.
pub fn solve(
    solver: SolverKind,
    model: &ModelSpec,
    op: &SensingOperator,
    b: &CVector,
    opts: &SolverOptions,
    truth: Option<&CVector>,
) -> Result<RunRecord> {
    match solver {
        SolverKind::Padm => padm_solve(model, op, b, opts, truth),
        SolverKind::Dadm => dadm_solve(model, op, b, opts, truth),
        SolverKind::Ist => baseline_solve(Baseline::Ist, model, op, b, opts, truth),
        SolverKind::Fista => baseline_solve(Baseline::Fista, model, op, b, opts, truth),
    }
}

/// Quantity compared against `eps` to stop a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopRule {
    /// Relative change of consecutive `x` iterates.
    #[default]
    Relchg,
    /// Largest of the primal residue, dual residue and duality gap.
    Res,
}

/// Soft-threshold used by the IST/FISTA baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdRule {
    /// `tau * mu`: the proximal step for `||x||_1 + ||Ax - b||^2 / (2 mu)`.
    #[default]
    Consistent,
    /// `tau / mu`, as the recurrence is sometimes printed.
    Literal,
}

/// Solver parameters. `None` selects the solver's own default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverOptions {
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub eps: f64,
    pub max_iter: usize,
    pub stop: StopRule,
    /// Skip the `tau * lambda_max + gamma < 2` guard of the primal solver.
    pub allow_unsafe_steps: bool,
    /// Keep one [`IterationRecord`] per iteration.
    pub record_history: bool,
    pub threshold: ThresholdRule,
    /// Warm start for `x`; zero when absent.
    #[serde(skip)]
    pub x0: Option<CVector>,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            beta: None,
            gamma: None,
            tau: None,
            eps: 5e-4,
            max_iter: 1000,
            stop: StopRule::Relchg,
            allow_unsafe_steps: false,
            record_history: true,
            threshold: ThresholdRule::Consistent,
            x0: None,
        }
    }
}

impl SolverOptions {
    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_stop(mut self, stop: StopRule) -> Self {
        self.stop = stop;
        self
    }

    pub fn with_x0(mut self, x0: CVector) -> Self {
        self.x0 = Some(x0);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Converged,
    MaxIter,
}

/// One row of a run's history.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub k: usize,
    pub relchg: f64,
    pub r_p: f64,
    pub r_d: f64,
    pub gap: f64,
    pub res: f64,
    pub objective: f64,
    /// Percent.
    pub relerr: Option<f64>,
    /// Operator applications (forward plus adjoint) so far.
    pub aat: usize,
}

/// Outcome of a solve: final iterate, accounting and per-iteration history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub solver: String,
    pub model: ModelSpec,
    pub status: Status,
    pub iterations: usize,
    /// Operator applications spent by the algorithm itself; diagnostics
    /// that need extra products are not counted.
    pub aat: usize,
    /// `||Ax - b|| / ||b||` at the returned `x`.
    pub relres: f64,
    /// Percent, when a ground truth was supplied.
    pub relerr: Option<f64>,
    pub last: Diagnostics,
    pub seconds: f64,
    pub history: Vec<IterationRecord>,
    pub x: CVector,
}

/// Collects history and decides when to stop.
pub(crate) struct Tracker<'a> {
    opts: &'a SolverOptions,
    truth: Option<&'a CVector>,
    history: Vec<IterationRecord>,
    last: Diagnostics,
    started: Instant,
}

impl<'a> Tracker<'a> {
    pub(crate) fn new(opts: &'a SolverOptions, truth: Option<&'a CVector>) -> Self {
        Self {
            opts,
            truth,
            history: Vec::new(),
            last: Diagnostics::default(),
            started: Instant::now(),
        }
    }

    /// Whether the caller has to supply residues every iteration.
    pub(crate) fn needs_residues(&self) -> bool {
        self.opts.record_history || self.opts.stop == StopRule::Res
    }

    /// Records iteration `k` and reports whether the stopping rule fired.
    pub(crate) fn observe(
        &mut self,
        k: usize,
        x: &CVector,
        x_prev: &CVector,
        diag: Option<Diagnostics>,
        aat: usize,
    ) -> bool {
        let mut d = diag.unwrap_or_default();
        d.relchg = relchg(x, x_prev);
        d.relerr = self.truth.and_then(|t| relerr(x, t).ok());
        if self.opts.record_history {
            self.history.push(IterationRecord {
                k,
                relchg: d.relchg,
                r_p: d.r_p,
                r_d: d.r_d,
                gap: d.gap,
                res: d.res,
                objective: d.objective,
                relerr: d.relerr,
                aat,
            });
        }
        self.last = d;
        match self.opts.stop {
            StopRule::Relchg => d.relchg < self.opts.eps,
            StopRule::Res => d.res < self.opts.eps,
        }
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn finish(
        self,
        solver: &str,
        model: &ModelSpec,
        converged: bool,
        iterations: usize,
        aat: usize,
        x: CVector,
        relres: f64,
    ) -> RunRecord {
        let relerr = self.truth.and_then(|t| relerr(&x, t).ok());
        RunRecord {
            solver: solver.to_string(),
            model: model.clone(),
            status: if converged {
                Status::Converged
            } else {
                Status::MaxIter
            },
            iterations,
            aat,
            relres,
            relerr,
            last: self.last,
            seconds: self.started.elapsed().as_secs_f64(),
            history: self.history,
            x,
        }
    }
}

/// `||ax - b|| / ||b||`, absolute when `b = 0`.
pub(crate) fn relative_residual(ax: &CVector, b: &CVector) -> f64 {
    let r = ax.sub(b).norm();
    let nb = b.norm();
    if nb > 0.0 {
        r / nb
    } else {
        r
    }
}

/// Default penalty `scale(m, ||b||_1)`, falling back to 1 when `b = 0`.
pub(crate) fn default_beta(b: &CVector, f: impl FnOnce(f64, f64) -> f64) -> f64 {
    let l1 = b.norm1();
    if l1 > 0.0 {
        f(b.len() as f64, l1)
    } else {
        1.0
    }
}
