//! The l1 model catalogue, the l1/l1 reformulation and run diagnostics.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};
use crate::linalg::{CVector, SensingOperator};

/// Model family together with its parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// `min ||x||_1  s.t.  Ax = b`
    Bp,
    /// `min ||x||_1  s.t.  ||Ax - b|| <= delta`
    Bpdn { delta: f64 },
    /// `min ||x||_1 + ||Ax - b||^2 / (2 mu)`
    Qp { mu: f64 },
    /// `min ||x||_1 + ||Ax - b||_1 / nu`
    L1l1 { nu: f64 },
}

impl Family {
    /// A zero parameter collapses every family onto basis pursuit.
    pub fn reduced(self) -> Family {
        match self {
            Family::Bpdn { delta } if delta == 0.0 => Family::Bp,
            Family::Qp { mu } if mu == 0.0 => Family::Bp,
            Family::L1l1 { nu } if nu == 0.0 => Family::Bp,
            f => f,
        }
    }

    /// The `mu` entering the dual residues (`0` for the constrained models).
    pub fn mu(self) -> f64 {
        match self {
            Family::Qp { mu } => mu,
            _ => 0.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Bp => "bp",
            Family::Bpdn { .. } => "bpdn",
            Family::Qp { .. } => "qp",
            Family::L1l1 { .. } => "l1l1",
        }
    }

    fn param(self) -> Option<(&'static str, f64)> {
        match self {
            Family::Bp => None,
            Family::Bpdn { delta } => Some(("delta", delta)),
            Family::Qp { mu } => Some(("mu", mu)),
            Family::L1l1 { nu } => Some(("nu", nu)),
        }
    }
}

/// One of the eight l1 models: four families, each optionally restricted
/// to nonnegative real signals, with optional positive l1 weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default)]
    pub nonneg: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
}

impl ModelSpec {
    pub fn new(family: Family) -> Self {
        Self {
            family,
            nonneg: false,
            weights: None,
        }
    }

    pub fn bp() -> Self {
        Self::new(Family::Bp)
    }

    pub fn bpdn(delta: f64) -> Self {
        Self::new(Family::Bpdn { delta })
    }

    pub fn qp(mu: f64) -> Self {
        Self::new(Family::Qp { mu })
    }

    pub fn l1l1(nu: f64) -> Self {
        Self::new(Family::L1l1 { nu })
    }

    pub fn nonneg(mut self) -> Self {
        self.nonneg = true;
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    /// Checks parameters against a signal length `n`.
    pub fn validate(&self, n: usize) -> Result<()> {
        if let Some((name, v)) = self.family.param() {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be a nonnegative finite number, got {v}"
                )));
            }
        }
        if let Some(w) = &self.weights {
            ensure_len(n, w.len())?;
            if w.iter().any(|&w| !(w > 0.0 && w.is_finite())) {
                return Err(Error::InvalidParameter("weights must be positive".into()));
            }
        }
        Ok(())
    }

    /// Model objective at `x`, given `ax = A x`.
    pub fn objective(&self, x: &CVector, ax: &CVector, b: &CVector) -> f64 {
        let l1 = x.weighted_norm1(self.weights.as_deref());
        match self.family.reduced() {
            Family::Bp | Family::Bpdn { .. } => l1,
            Family::Qp { mu } => l1 + ax.sub(b).norm_sqr() / (2.0 * mu),
            Family::L1l1 { nu } => l1 + ax.sub(b).norm1() / nu,
        }
    }
}

/// Optimality measures for one iterate.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    /// Relative primal residue.
    pub r_p: f64,
    /// Dual residue `||A^* y - z|| / sqrt(m)`.
    pub r_d: f64,
    /// Relative duality gap.
    pub gap: f64,
    /// Largest of the components above.
    pub res: f64,
    pub relchg: f64,
    pub objective: f64,
    pub relerr: Option<f64>,
    /// Set when a vanishing denominator forced an absolute measure.
    pub absolute_fallback: bool,
}

/// Inputs for [`residues`], with the operator products precomputed.
#[derive(Debug, Clone, Copy)]
pub struct ResidueParts<'a> {
    pub x: &'a CVector,
    pub y: &'a CVector,
    pub z: &'a CVector,
    /// `A x`
    pub ax: &'a CVector,
    /// `A^* y`
    pub aty: &'a CVector,
    pub b: &'a CVector,
    pub weights: Option<&'a [f64]>,
}

fn relative(num: f64, den: f64, fallback: &mut bool) -> f64 {
    if den > 0.0 {
        num / den
    } else {
        *fallback = true;
        num
    }
}

/// Primal residue, dual residue and duality gap of a primal-dual iterate.
///
/// For `Qp` the primal residual is `Ax + mu y - b` (the optimal split
/// `r = mu y`) and the gap is `Re(b^* y) - mu ||y||^2 - ||x||_1` relative to
/// `f_p = ||x||_1 + mu ||y||^2 / 2`. For `Bpdn` the primal residue is the
/// constraint violation `max(||Ax - b|| - delta, 0)` and the gap uses the
/// dual objective `Re(b^* y) - delta ||y||`. Basis pursuit uses `mu = 0`.
pub fn residues(family: Family, parts: ResidueParts<'_>) -> Diagnostics {
    let ResidueParts {
        x,
        y,
        z,
        ax,
        aty,
        b,
        weights,
    } = parts;
    let mut fallback = false;
    let b_norm = b.norm();
    let m = b.len().max(1) as f64;
    let l1 = x.weighted_norm1(weights);
    let r_d = aty.sub(z).norm() / m.sqrt();
    let by = b.dot(y).re;

    let (r_p, gap, objective) = match family.reduced() {
        Family::Qp { mu } => {
            let mut rp = ax.sub(b);
            rp.axpy(mu, y);
            let y2 = y.norm_sqr();
            let fp = l1 + 0.5 * mu * y2;
            let delta_gap = by - mu * y2 - l1;
            let obj = l1 + ax.sub(b).norm_sqr() / (2.0 * mu);
            (
                relative(rp.norm(), b_norm, &mut fallback),
                relative(delta_gap.abs(), fp, &mut fallback),
                obj,
            )
        }
        Family::Bpdn { delta } => {
            let viol = (ax.sub(b).norm() - delta).max(0.0);
            let delta_gap = by - delta * y.norm() - l1;
            (
                relative(viol, b_norm, &mut fallback),
                relative(delta_gap.abs(), l1, &mut fallback),
                l1,
            )
        }
        // l1/l1 is solved as basis pursuit after reformulation.
        Family::Bp | Family::L1l1 { .. } => (
            relative(ax.sub(b).norm(), b_norm, &mut fallback),
            relative((by - l1).abs(), l1, &mut fallback),
            l1,
        ),
    };
    let res = r_p.max(r_d).max(gap);
    Diagnostics {
        r_p,
        r_d,
        gap,
        res,
        relchg: 0.0,
        objective,
        relerr: None,
        absolute_fallback: fallback,
    }
}

/// Residues of `(x, y, z)` for `min ||x||_1 + ||Ax - b||^2 / (2 mu)`;
/// `mu = 0` gives the basis pursuit residues.
pub fn compute_res(
    x: &CVector,
    y: &CVector,
    z: &CVector,
    op: &SensingOperator,
    b: &CVector,
    mu: f64,
) -> Result<Diagnostics> {
    ensure_len(op.rows(), b.len())?;
    ensure_len(op.cols(), z.len())?;
    let ax = op.apply(x)?;
    let aty = op.apply_adjoint(y)?;
    let family = if mu > 0.0 { Family::Qp { mu } } else { Family::Bp };
    Ok(residues(
        family,
        ResidueParts {
            x,
            y,
            z,
            ax: &ax,
            aty: &aty,
            b,
            weights: None,
        },
    ))
}

/// `||x_new - x_old|| / ||x_old||`, or `||x_new||` when `x_old = 0`.
pub fn relchg(x_new: &CVector, x_old: &CVector) -> f64 {
    let diff = x_new.distance(x_old);
    let den = x_old.norm();
    if den > 0.0 {
        diff / den
    } else {
        diff
    }
}

/// Relative error in percent: `100 ||x - truth|| / ||truth||`.
pub fn relerr(x: &CVector, truth: &CVector) -> Result<f64> {
    ensure_len(truth.len(), x.len())?;
    let den = truth.norm();
    if den == 0.0 {
        return Err(Error::InvalidParameter("relative error against a zero signal".into()));
    }
    Ok(100.0 * x.distance(truth) / den)
}

/// `20 log10(||b - mean(b)|| / ||p||)` in decibels; `+inf` for zero noise.
pub fn snr_db(b: &CVector, p: &CVector) -> f64 {
    let p_norm = p.norm();
    if p_norm == 0.0 {
        return f64::INFINITY;
    }
    let mean = b.mean();
    let centred: f64 = b.iter().map(|v| (v - mean).norm_sqr()).sum::<f64>().sqrt();
    if centred == 0.0 {
        return f64::NEG_INFINITY;
    }
    20.0 * (centred / p_norm).log10()
}

/// Rewrites `min ||x||_1 + ||Ax - b||_1 / nu` as basis pursuit in
/// `x_hat = (nu x; r)`: returns `(A_hat, b_hat)` with
/// `A_hat = (A, nu I) / sqrt(1 + nu^2)` and `b_hat = nu b / sqrt(1 + nu^2)`.
pub fn reformulate_l1l1(
    op: &SensingOperator,
    b: &CVector,
    nu: f64,
) -> Result<(SensingOperator, CVector)> {
    ensure_len(op.rows(), b.len())?;
    let a_hat = op.build_augmented(nu)?;
    let b_hat = b.scaled(nu / (1.0 + nu * nu).sqrt());
    Ok((a_hat, b_hat))
}

/// `x_hat = (nu x; r)`
pub fn embed_l1l1(x: &CVector, r: &CVector, nu: f64) -> CVector {
    x.scaled(nu).concat(r)
}

/// Recovers `x = x_hat[..n] / nu`.
pub fn extract_l1l1(x_hat: &CVector, n: usize, nu: f64) -> CVector {
    x_hat.slice(0..n).scaled(1.0 / nu)
}
