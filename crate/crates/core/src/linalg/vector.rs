use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{ensure_len, Error, Result};

/// Dense complex vector. Every value that flows through the solvers
/// (signals, measurements, multipliers) is one of these; real problems
/// carry zero imaginary parts.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct CVector(Vec<Complex64>);

impl CVector {
    /// Checked constructor: rejects NaN and infinite entries.
    pub fn new(entries: Vec<Complex64>) -> Result<Self> {
        if entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(Self(entries))
        } else {
            Err(Error::NonFinite("vector construction"))
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_real(values: &[f64]) -> Self {
        Self(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Canonical basis vector `e_index` of length `len`.
    pub fn basis(len: usize, index: usize) -> Self {
        let mut v = Self::zeros(len);
        v.0[index] = Complex64::new(1.0, 0.0);
        v
    }

    pub(crate) fn from_raw(entries: Vec<Complex64>) -> Self {
        Self(entries)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex64> {
        self.0.iter()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Sum of component magnitudes.
    pub fn norm1(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).sum()
    }

    /// Weighted l1 norm `sum_i w_i |v_i|`; `None` means unit weights.
    pub fn weighted_norm1(&self, weights: Option<&[f64]>) -> f64 {
        match weights {
            None => self.norm1(),
            Some(w) => self.0.iter().zip(w).map(|(z, w)| w * z.norm()).sum(),
        }
    }

    pub fn norm_inf(&self) -> f64 {
        self.0.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Inner product `<self, other> = sum conj(self_i) * other_i`.
    pub fn dot(&self, other: &CVector) -> Complex64 {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn mean(&self) -> Complex64 {
        if self.0.is_empty() {
            return Complex64::new(0.0, 0.0);
        }
        self.0.iter().sum::<Complex64>() / self.0.len() as f64
    }

    pub fn scaled(&self, factor: f64) -> CVector {
        Self(self.0.iter().map(|z| z * factor).collect())
    }

    pub fn scale_in_place(&mut self, factor: f64) {
        self.0.iter_mut().for_each(|z| *z *= factor);
    }

    /// `self - other`
    pub fn sub(&self, other: &CVector) -> CVector {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// `self + other`
    pub fn add(&self, other: &CVector) -> CVector {
        debug_assert_eq!(self.len(), other.len());
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// `self += alpha * x`
    pub fn axpy(&mut self, alpha: f64, x: &CVector) {
        debug_assert_eq!(self.len(), x.len());
        self.0.iter_mut().zip(&x.0).for_each(|(s, v)| *s += v * alpha);
    }

    /// `self - other`, checked.
    pub fn try_sub(&self, other: &CVector) -> Result<CVector> {
        ensure_len(self.len(), other.len())?;
        Ok(self.sub(other))
    }

    /// Euclidean distance to `other`.
    pub fn distance(&self, other: &CVector) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Componentwise real parts clamped at zero; used to report
    /// nonnegative solutions.
    pub fn nonneg_real_part(&self) -> CVector {
        Self(
            self.0
                .iter()
                .map(|z| Complex64::new(z.re.max(0.0), 0.0))
                .collect(),
        )
    }

    pub fn concat(&self, other: &CVector) -> CVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Self(v)
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> CVector {
        Self(self.0[range].to_vec())
    }

    /// Number of entries with magnitude above `threshold`.
    pub fn count_nonzeros(&self, threshold: f64) -> usize {
        self.0.iter().filter(|z| z.norm() > threshold).count()
    }
}

impl TryFrom<Vec<Complex64>> for CVector {
    type Error = Error;

    fn try_from(v: Vec<Complex64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CVector> for Vec<Complex64> {
    fn from(v: CVector) -> Self {
        v.0
    }
}

impl Index<usize> for CVector {
    type Output = Complex64;

    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

impl IndexMut<usize> for CVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.0[i]
    }
}

impl FromIterator<Complex64> for CVector {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a CVector {
    type Item = &'a Complex64;
    type IntoIter = std::slice::Iter<'a, Complex64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}
