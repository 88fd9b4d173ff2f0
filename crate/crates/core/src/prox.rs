//! Closed-form proximal maps and projections used by the solver steps.
//!
//! All maps act componentwise on complex entries and preserve phase;
//! `sign(0)` is taken to be `0`.

use num_complex::Complex64;

use crate::error::{ensure_len, Error, Result};
use crate::linalg::CVector;

#[inline]
fn shrink_scalar(v: Complex64, t: f64) -> Complex64 {
    let mag = v.norm();
    if mag <= t {
        Complex64::new(0.0, 0.0)
    } else {
        v * ((mag - t) / mag)
    }
}

#[inline]
fn clip_scalar(v: Complex64, radius: f64) -> Complex64 {
    let mag = v.norm();
    if mag <= radius {
        return v;
    }
    // Rounding can leave |v r / |v|| one ulp above r; membership is exact.
    let mut out = v * (radius / mag);
    while out.norm() > radius {
        out *= 1.0 - f64::EPSILON;
    }
    out
}

/// Soft thresholding `max(|v_i| - t, 0) * sign(v_i)`.
pub fn shrink(v: &CVector, t: f64) -> Result<CVector> {
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!("negative shrink threshold {t}")));
    }
    Ok(v.iter().map(|&z| shrink_scalar(z, t)).collect())
}

/// Soft thresholding with per-component thresholds (weighted l1).
pub fn shrink_weighted(v: &CVector, t: &[f64]) -> Result<CVector> {
    ensure_len(v.len(), t.len())?;
    if t.iter().any(|&t| !(t >= 0.0)) {
        return Err(Error::InvalidParameter("negative shrink threshold".into()));
    }
    Ok(v.iter().zip(t).map(|(&z, &t)| shrink_scalar(z, t)).collect())
}

/// In-place shrink with thresholds `scale * w_i` (unit weights when `None`).
pub(crate) fn shrink_in_place(v: &mut [Complex64], scale: f64, weights: Option<&[f64]>) {
    match weights {
        None => v.iter_mut().for_each(|z| *z = shrink_scalar(*z, scale)),
        Some(w) => v
            .iter_mut()
            .zip(w)
            .for_each(|(z, w)| *z = shrink_scalar(*z, scale * w)),
    }
}

/// Projection onto `{xi : |xi_i| <= w_i}`; unit radii when `radii` is `None`.
pub fn project_linf_ball(v: &CVector, radii: Option<&[f64]>) -> Result<CVector> {
    match radii {
        None => Ok(v.iter().map(|&z| clip_scalar(z, 1.0)).collect()),
        Some(w) => {
            ensure_len(v.len(), w.len())?;
            if w.iter().any(|&w| !(w > 0.0)) {
                return Err(Error::InvalidParameter("ball radii must be positive".into()));
            }
            Ok(v.iter().zip(w).map(|(&z, &w)| clip_scalar(z, w)).collect())
        }
    }
}

/// Projection onto the Euclidean ball of radius `delta`.
pub fn project_l2_ball(v: &CVector, delta: f64) -> CVector {
    debug_assert!(delta >= 0.0);
    let norm = v.norm();
    if norm <= delta {
        v.clone()
    } else {
        v.scaled(delta / norm)
    }
}

/// `v - P_{B_t}(v)`: shrinks the whole vector's norm by `t`.
pub fn shrink_l2(v: &CVector, t: f64) -> CVector {
    debug_assert!(t >= 0.0);
    let norm = v.norm();
    if norm <= t {
        CVector::zeros(v.len())
    } else {
        v.scaled(1.0 - t / norm)
    }
}

/// Projection onto `F = {z : Re(z_i) <= 1}`.
pub fn project_unit_halfspace(v: &CVector) -> CVector {
    v.iter()
        .map(|z| Complex64::new(z.re.min(1.0), z.im))
        .collect()
}

/// Projection onto `{z : Re(z_i) <= w_i}`.
pub fn project_halfspace(v: &CVector, bounds: &[f64]) -> Result<CVector> {
    ensure_len(v.len(), bounds.len())?;
    Ok(v.iter()
        .zip(bounds)
        .map(|(z, &w)| Complex64::new(z.re.min(w), z.im))
        .collect())
}

/// Constraint set for the auxiliary dual variable `z`.
///
/// The first `halfspace_len` components are confined to the half-space
/// `Re(z_i) <= w_i` (nonnegative signals), the remainder to the disc
/// `|z_i| <= w_i`. Unit weights when `weights` is `None`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DualSet {
    weights: Option<Vec<f64>>,
    halfspace_len: usize,
}

impl DualSet {
    /// Plain (weighted) infinity-norm ball.
    pub fn ball(weights: Option<Vec<f64>>) -> Self {
        Self {
            weights,
            halfspace_len: 0,
        }
    }

    pub fn new(weights: Option<Vec<f64>>, halfspace_len: usize) -> Self {
        Self {
            weights,
            halfspace_len,
        }
    }

    pub fn weights(&self) -> Option<&[f64]> {
        self.weights.as_deref()
    }

    pub fn halfspace_len(&self) -> usize {
        self.halfspace_len
    }

    fn bound(&self, i: usize) -> f64 {
        self.weights.as_ref().map_or(1.0, |w| w[i])
    }

    pub(crate) fn project_in_place(&self, v: &mut [Complex64]) {
        for (i, z) in v.iter_mut().enumerate() {
            let w = self.bound(i);
            if i < self.halfspace_len {
                z.re = z.re.min(w);
            } else {
                *z = clip_scalar(*z, w);
            }
        }
    }

    pub fn project(&self, v: &CVector) -> CVector {
        let mut out = v.clone();
        self.project_in_place(out.as_mut_slice());
        out
    }

    /// Exact membership test.
    pub fn contains(&self, v: &CVector) -> bool {
        v.iter().enumerate().all(|(i, z)| {
            let w = self.bound(i);
            if i < self.halfspace_len {
                z.re <= w
            } else {
                z.norm() <= w
            }
        })
    }
}
