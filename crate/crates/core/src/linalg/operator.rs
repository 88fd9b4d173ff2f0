use num_complex::Complex64;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::transform::{fwht_in_place, DctPlan};
use super::vector::CVector;
use crate::error::{ensure_len, Error, Result};

/// Tolerance used when certifying `A A^* = I` for dense operators.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Public tag describing how an operator is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorKind {
    Dense,
    PartialWalshHadamard,
    PartialDct,
    Augmented,
}

#[derive(Debug, Clone)]
enum Repr {
    /// Row-major `rows x cols` entries.
    Dense(Vec<Complex64>),
    PartialWht {
        row_index: Vec<usize>,
        signs: Vec<f64>,
    },
    PartialDct {
        row_index: Vec<usize>,
        signs: Vec<f64>,
        plan: DctPlan,
    },
    /// `(A, nu I) / sqrt(1 + nu^2)`
    Augmented { inner: Box<SensingOperator>, nu: f64 },
}

/// Matrix-free linear map `A : C^n -> C^m`.
///
/// Operators are immutable once built and can be shared across threads.
#[derive(Debug, Clone)]
pub struct SensingOperator {
    rows: usize,
    cols: usize,
    orthonormal_rows: bool,
    repr: Repr,
}

/// Serialisable description of a partial transform operator: which rows of
/// the `n x n` transform are kept and the seed of the random column signs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum TransformSpec {
    PartialWalshHadamard {
        n: usize,
        rows: Vec<usize>,
        #[serde(default)]
        sign_seed: Option<u64>,
    },
    PartialDct {
        n: usize,
        rows: Vec<usize>,
        #[serde(default)]
        sign_seed: Option<u64>,
    },
}

impl TransformSpec {
    pub fn build(&self) -> Result<SensingOperator> {
        match self {
            TransformSpec::PartialWalshHadamard { n, rows, sign_seed } => {
                SensingOperator::partial_wht(*n, rows.clone(), sign_seed.map(|s| random_signs(*n, s)))
            }
            TransformSpec::PartialDct { n, rows, sign_seed } => {
                SensingOperator::partial_dct(*n, rows.clone(), sign_seed.map(|s| random_signs(*n, s)))
            }
        }
    }
}

/// Column signs in `{-1, +1}` drawn from `seed`.
pub fn random_signs(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// `m` distinct row indices out of `0..n`, sorted.
pub fn random_rows<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Vec<usize> {
    let mut rows = sample(rng, n, m).into_vec();
    rows.sort_unstable();
    rows
}

fn check_rows(n: usize, rows: &[usize]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("row selection is empty".into()));
    }
    let mut seen = vec![false; n];
    for &r in rows {
        if r >= n {
            return Err(Error::InvalidParameter(format!("row index {r} out of range 0..{n}")));
        }
        if std::mem::replace(&mut seen[r], true) {
            return Err(Error::InvalidParameter(format!("row index {r} selected twice")));
        }
    }
    Ok(())
}

fn check_signs(n: usize, signs: &Option<Vec<f64>>) -> Result<Vec<f64>> {
    match signs {
        None => Ok(vec![1.0; n]),
        Some(s) => {
            ensure_len(n, s.len())?;
            if s.iter().any(|&v| v != 1.0 && v != -1.0) {
                return Err(Error::InvalidParameter("column signs must be +1 or -1".into()));
            }
            Ok(s.clone())
        }
    }
}

impl SensingOperator {
    /// Dense operator from row-major entries. The orthonormal-rows flag is
    /// certified by checking `A A^*` against the identity.
    pub fn dense(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidParameter("operator dimensions must be positive".into()));
        }
        ensure_len(rows * cols, entries.len())?;
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite("dense operator entries"));
        }
        let orthonormal_rows = rows <= cols && gram_is_identity(rows, cols, &entries);
        Ok(Self {
            rows,
            cols,
            orthonormal_rows,
            repr: Repr::Dense(entries),
        })
    }

    /// Dense operator from real row-major entries.
    pub fn dense_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::dense(rows, cols, entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Rows of the `n x n` orthonormal Walsh-Hadamard matrix (natural
    /// ordering, scaled by `1/sqrt(n)`) applied after an optional `+-1`
    /// column diagonal.
    pub fn partial_wht(n: usize, row_index: Vec<usize>, signs: Option<Vec<f64>>) -> Result<Self> {
        if !n.is_power_of_two() {
            return Err(Error::NotPowerOfTwo(n));
        }
        check_rows(n, &row_index)?;
        let signs = check_signs(n, &signs)?;
        Ok(Self {
            rows: row_index.len(),
            cols: n,
            orthonormal_rows: true,
            repr: Repr::PartialWht { row_index, signs },
        })
    }

    /// Rows of the orthonormal DCT-II matrix after an optional `+-1` column
    /// diagonal. Any `n` is accepted.
    pub fn partial_dct(n: usize, row_index: Vec<usize>, signs: Option<Vec<f64>>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("transform length must be positive".into()));
        }
        check_rows(n, &row_index)?;
        let signs = check_signs(n, &signs)?;
        Ok(Self {
            rows: row_index.len(),
            cols: n,
            orthonormal_rows: true,
            repr: Repr::PartialDct {
                row_index,
                signs,
                plan: DctPlan::new(n),
            },
        })
    }

    /// Randomised partial Walsh-Hadamard operator: `m` rows uniformly without
    /// replacement and random column signs, all drawn from `seed`.
    pub fn random_partial_wht(n: usize, m: usize, seed: u64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!("need 0 < m <= n, got m={m}, n={n}")));
        }
        Self::from_spec_seed(n, m, seed, |n, rows, sign_seed| TransformSpec::PartialWalshHadamard {
            n,
            rows,
            sign_seed: Some(sign_seed),
        })
    }

    /// Randomised partial DCT operator, drawn like [`Self::random_partial_wht`].
    pub fn random_partial_dct(n: usize, m: usize, seed: u64) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!("need 0 < m <= n, got m={m}, n={n}")));
        }
        Self::from_spec_seed(n, m, seed, |n, rows, sign_seed| TransformSpec::PartialDct {
            n,
            rows,
            sign_seed: Some(sign_seed),
        })
    }

    fn from_spec_seed(
        n: usize,
        m: usize,
        seed: u64,
        make: impl FnOnce(usize, Vec<usize>, u64) -> TransformSpec,
    ) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows = random_rows(n, m, &mut rng);
        let sign_seed = rng.random::<u64>();
        make(n, rows, sign_seed).build()
    }

    /// Standard Gaussian `m x n` matrix scaled by `1/sqrt(n)`. Rows are not
    /// orthonormal.
    pub fn gaussian<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        let scale = 1.0 / (n as f64).sqrt();
        let entries = (0..m * n)
            .map(|_| Complex64::new(rng.sample::<f64, _>(StandardNormal) * scale, 0.0))
            .collect();
        Self::dense(m, n, entries)
    }

    /// Standard Gaussian `m x n` matrix whose rows are then orthogonalised
    /// and normalised (modified Gram-Schmidt with one re-orthogonalisation
    /// pass), so `A A^* = I`.
    pub fn orthonormal_gaussian<R: Rng + ?Sized>(m: usize, n: usize, rng: &mut R) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!("need 0 < m <= n, got m={m}, n={n}")));
        }
        let mut a: Vec<Complex64> = (0..m * n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
            .collect();
        for i in 0..m {
            for _pass in 0..2 {
                for j in 0..i {
                    let (done, rest) = a.split_at_mut(i * n);
                    let qj = &done[j * n..(j + 1) * n];
                    let ri = &mut rest[..n];
                    let proj: Complex64 = qj.iter().zip(ri.iter()).map(|(q, r)| q.conj() * r).sum();
                    ri.iter_mut().zip(qj).for_each(|(r, q)| *r -= proj * q);
                }
            }
            let row = &mut a[i * n..(i + 1) * n];
            let norm = row.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-12 {
                return Err(Error::InvalidParameter("rank-deficient Gaussian draw".into()));
            }
            row.iter_mut().for_each(|z| *z /= norm);
        }
        let op = Self::dense(m, n, a)?;
        debug_assert!(op.orthonormal_rows);
        Ok(op)
    }

    /// `(A, nu I) / sqrt(1 + nu^2)`, the operator of the l1/l1 to basis
    /// pursuit reformulation. Shape `m x (n + m)`.
    pub fn build_augmented(&self, nu: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter(format!("nu must be positive, got {nu}")));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols + self.rows,
            orthonormal_rows: self.orthonormal_rows,
            repr: Repr::Augmented {
                inner: Box::new(self.clone()),
                nu,
            },
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn orthonormal_rows(&self) -> bool {
        self.orthonormal_rows
    }

    pub fn kind(&self) -> OperatorKind {
        match self.repr {
            Repr::Dense(_) => OperatorKind::Dense,
            Repr::PartialWht { .. } => OperatorKind::PartialWalshHadamard,
            Repr::PartialDct { .. } => OperatorKind::PartialDct,
            Repr::Augmented { .. } => OperatorKind::Augmented,
        }
    }

    /// Row-major dense entries, when the operator is stored densely.
    pub fn dense_entries(&self) -> Option<&[Complex64]> {
        match &self.repr {
            Repr::Dense(e) => Some(e),
            _ => None,
        }
    }

    /// `A x`
    pub fn apply(&self, x: &CVector) -> Result<CVector> {
        ensure_len(self.cols, x.len())?;
        Ok(self.forward(x.as_slice()))
    }

    /// `A^* y`
    pub fn apply_adjoint(&self, y: &CVector) -> Result<CVector> {
        ensure_len(self.rows, y.len())?;
        Ok(self.adjoint(y.as_slice()))
    }

    fn forward(&self, x: &[Complex64]) -> CVector {
        match &self.repr {
            Repr::Dense(a) => a
                .chunks_exact(self.cols)
                .map(|row| row.iter().zip(x).map(|(a, x)| a * x).sum())
                .collect(),
            Repr::PartialWht { row_index, signs } => {
                let mut buf: Vec<Complex64> = x.iter().zip(signs).map(|(x, s)| x * s).collect();
                fwht_in_place(&mut buf);
                let scale = 1.0 / (self.cols as f64).sqrt();
                row_index.iter().map(|&r| buf[r] * scale).collect()
            }
            Repr::PartialDct {
                row_index,
                signs,
                plan,
            } => {
                let buf: Vec<Complex64> = x.iter().zip(signs).map(|(x, s)| x * s).collect();
                let full = plan.dct2(&buf);
                row_index.iter().map(|&r| full[r]).collect()
            }
            Repr::Augmented { inner, nu } => {
                let n = inner.cols;
                let s = 1.0 / (1.0 + nu * nu).sqrt();
                let mut out = inner.forward(&x[..n]);
                out.as_mut_slice()
                    .iter_mut()
                    .zip(&x[n..])
                    .for_each(|(o, r)| *o = (*o + r * nu) * s);
                out
            }
        }
    }

    fn adjoint(&self, y: &[Complex64]) -> CVector {
        let zero = Complex64::new(0.0, 0.0);
        match &self.repr {
            Repr::Dense(a) => {
                let mut out = vec![zero; self.cols];
                for (row, yi) in a.chunks_exact(self.cols).zip(y) {
                    out.iter_mut().zip(row).for_each(|(o, a)| *o += a.conj() * yi);
                }
                CVector::from_raw(out)
            }
            Repr::PartialWht { row_index, signs } => {
                let mut buf = vec![zero; self.cols];
                for (&r, v) in row_index.iter().zip(y) {
                    buf[r] = *v;
                }
                fwht_in_place(&mut buf);
                let scale = 1.0 / (self.cols as f64).sqrt();
                buf.iter_mut().zip(signs).for_each(|(b, s)| *b *= s * scale);
                CVector::from_raw(buf)
            }
            Repr::PartialDct {
                row_index,
                signs,
                plan,
            } => {
                let mut buf = vec![zero; self.cols];
                for (&r, v) in row_index.iter().zip(y) {
                    buf[r] = *v;
                }
                let mut full = plan.dct3(&buf);
                full.iter_mut().zip(signs).for_each(|(b, s)| *b *= s);
                CVector::from_raw(full)
            }
            Repr::Augmented { inner, nu } => {
                let s = 1.0 / (1.0 + nu * nu).sqrt();
                let mut out = inner.adjoint(y).into_inner();
                out.iter_mut().for_each(|v| *v *= s);
                out.extend(y.iter().map(|v| v * (nu * s)));
                CVector::from_raw(out)
            }
        }
    }

    /// Explicit row-major matrix obtained by applying the operator to every
    /// canonical basis vector. Intended for small operators.
    pub fn materialize(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows * self.cols];
        for j in 0..self.cols {
            let col = self.forward(CVector::basis(self.cols, j).as_slice());
            for (i, v) in col.iter().enumerate() {
                out[i * self.cols + j] = *v;
            }
        }
        out
    }
}

fn gram_is_identity(rows: usize, cols: usize, a: &[Complex64]) -> bool {
    for i in 0..rows {
        let ri = &a[i * cols..(i + 1) * cols];
        for j in i..rows {
            let rj = &a[j * cols..(j + 1) * cols];
            let g: Complex64 = ri.iter().zip(rj).map(|(x, y)| x * y.conj()).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            if (g - target).norm() > ORTHONORMAL_TOL {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn full_wht_of_first_basis_vector_is_flat() {
        let n = 16;
        let op = SensingOperator::partial_wht(n, (0..n).collect(), None).unwrap();
        let y = op.apply(&CVector::basis(n, 0)).unwrap();
        for v in y.iter() {
            assert!((v - c(1.0 / 4.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn dense_one_by_two() {
        let s = 1.0 / 2f64.sqrt();
        let op = SensingOperator::dense_real(1, 2, &[s, s]).unwrap();
        let y = op.apply(&CVector::from_real(&[1.0, 1.0])).unwrap();
        assert!((y[0].re - 2f64.sqrt()).abs() < 1e-15);
        assert!(op.orthonormal_rows());
    }

    #[test]
    fn identity_adjoint() {
        let op = SensingOperator::dense_real(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let y = CVector::new(vec![c(1.0, 2.0), c(-3.0, 0.5)]).unwrap();
        assert_eq!(op.apply_adjoint(&y).unwrap(), y);
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let op = SensingOperator::dense_real(2, 3, &[1.0; 6]).unwrap();
        assert!(matches!(
            op.apply(&CVector::zeros(2)),
            Err(Error::DimensionMismatch { expected: 3, found: 2 })
        ));
        assert!(op.apply_adjoint(&CVector::zeros(3)).is_err());
        assert!(!op.orthonormal_rows());
    }

    #[test]
    fn wht_rejects_non_power_of_two() {
        assert!(matches!(
            SensingOperator::partial_wht(12, vec![0, 1], None),
            Err(Error::NotPowerOfTwo(12))
        ));
    }

    #[test]
    fn bad_row_selections_are_rejected() {
        assert!(SensingOperator::partial_wht(8, vec![0, 8], None).is_err());
        assert!(SensingOperator::partial_dct(8, vec![1, 1], None).is_err());
        assert!(SensingOperator::partial_dct(8, vec![], None).is_err());
        assert!(SensingOperator::partial_wht(8, vec![0], Some(vec![0.5; 8])).is_err());
    }

    #[test]
    fn augmented_rejects_nonpositive_nu() {
        let op = SensingOperator::random_partial_wht(8, 3, 1).unwrap();
        assert!(op.build_augmented(0.0).is_err());
        assert!(op.build_augmented(-1.0).is_err());
    }

    #[test]
    fn augmented_residual_block() {
        let op = SensingOperator::random_partial_wht(8, 3, 1).unwrap();
        let nu = 0.7;
        let aug = op.build_augmented(nu).unwrap();
        assert_eq!((aug.rows(), aug.cols()), (3, 11));
        let r = CVector::new(vec![c(1.0, 0.0), c(0.0, -2.0), c(0.5, 0.5)]).unwrap();
        let x_hat = CVector::zeros(8).concat(&r);
        let out = aug.apply(&x_hat).unwrap();
        let want = r.scaled(nu / (1.0 + nu * nu).sqrt());
        assert!(out.distance(&want) < 1e-15);
    }

    #[test]
    fn transform_spec_json() {
        let spec: TransformSpec = serde_json::from_str(
            r#"{"kind":"partial-walsh-hadamard","n":8,"rows":[0,3,5],"sign_seed":9}"#,
        )
        .unwrap();
        let op = spec.build().unwrap();
        assert_eq!(op.kind(), OperatorKind::PartialWalshHadamard);
        assert_eq!((op.rows(), op.cols()), (3, 8));
    }
}
