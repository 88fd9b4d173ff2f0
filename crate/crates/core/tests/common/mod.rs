//! Oracles and instance helpers shared by the integration tests.
#![allow(dead_code)]

use l1adm::{CVector, Complex64, SensingOperator};
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normal(r: &mut ChaCha8Rng) -> f64 {
    r.sample(StandardNormal)
}

pub fn random_cvector(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CVector {
    (0..n)
        .map(|_| Complex64::new(scale * normal(r), scale * normal(r)))
        .collect()
}

pub fn random_real(r: &mut ChaCha8Rng, n: usize, scale: f64) -> CVector {
    let v: Vec<f64> = (0..n).map(|_| scale * normal(r)).collect();
    CVector::from_real(&v)
}

/// Real part of a real operator as an nalgebra matrix.
pub fn real_matrix(op: &SensingOperator) -> DMatrix<f64> {
    let dense = op.materialize();
    DMatrix::from_fn(op.rows(), op.cols(), |i, j| dense[i * op.cols() + j].re)
}

pub fn real_vector(v: &CVector) -> DVector<f64> {
    DVector::from_iterator(v.len(), v.iter().map(|z| z.re))
}

/// `min c^T u  s.t.  M u = b, u >= 0` by enumerating every basic feasible
/// solution. Exponential; meant for a handful of columns.
pub fn lp_vertex_enumeration(m: &DMatrix<f64>, cost: &[f64], b: &DVector<f64>) -> DVector<f64> {
    let (rows, cols) = m.shape();
    assert!(rows <= cols);
    let mut best: Option<(f64, DVector<f64>)> = None;
    let mut idx: Vec<usize> = (0..rows).collect();
    loop {
        let basis = m.select_columns(idx.iter());
        if basis.determinant().abs() > 1e-10 {
            if let Some(sol) = basis.lu().solve(b) {
                if sol.iter().all(|&v| v >= -1e-12) {
                    let obj: f64 = idx.iter().zip(sol.iter()).map(|(&j, v)| cost[j] * v).sum();
                    if best.as_ref().is_none_or(|(o, _)| obj < *o) {
                        let mut u = DVector::zeros(cols);
                        for (&j, &v) in idx.iter().zip(sol.iter()) {
                            u[j] = v.max(0.0);
                        }
                        best = Some((obj, u));
                    }
                }
            }
        }
        // next `rows`-subset of 0..cols in lexicographic order
        let mut i = rows;
        loop {
            if i == 0 {
                return best.expect("the LP is feasible").1;
            }
            i -= 1;
            if idx[i] < cols - rows + i {
                idx[i] += 1;
                for j in i + 1..rows {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Basis pursuit `min ||x||_1  s.t.  Ax = b` through `x = u - v`.
pub fn bp_oracle(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    let n = a.ncols();
    let m = DMatrix::from_fn(a.nrows(), 2 * n, |i, j| if j < n { a[(i, j)] } else { -a[(i, j - n)] });
    let u = lp_vertex_enumeration(&m, &vec![1.0; 2 * n], b);
    DVector::from_fn(n, |j, _| u[j] - u[j + n])
}

/// Nonnegative basis pursuit `min 1^T x  s.t.  Ax = b, x >= 0`.
pub fn nonneg_bp_oracle(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    lp_vertex_enumeration(a, &vec![1.0; a.ncols()], b)
}

/// `min ||x||_1 + ||Ax - b||_1 / nu` through `Ax + r = b`, both split into
/// positive and negative parts.
pub fn l1l1_oracle(a: &DMatrix<f64>, b: &DVector<f64>, nu: f64) -> DVector<f64> {
    let (rows, n) = a.shape();
    let m = DMatrix::from_fn(rows, 2 * n + 2 * rows, |i, j| match j {
        j if j < n => a[(i, j)],
        j if j < 2 * n => -a[(i, j - n)],
        j if j < 2 * n + rows => f64::from(u8::from(j - 2 * n == i)),
        j => -f64::from(u8::from(j - 2 * n - rows == i)),
    });
    let cost: Vec<f64> = (0..2 * n + 2 * rows)
        .map(|j| if j < 2 * n { 1.0 } else { 1.0 / nu })
        .collect();
    let u = lp_vertex_enumeration(&m, &cost, b);
    DVector::from_fn(n, |j, _| u[j] - u[j + n])
}

pub fn to_cvector(v: &DVector<f64>) -> CVector {
    CVector::from_real(v.as_slice())
}

/// Tiny real instance: orthonormal Gaussian rows, `k`-sparse signal and a
/// small generic perturbation of the data (keeps LP solutions unique).
pub struct Tiny {
    pub op: SensingOperator,
    pub x: CVector,
    pub b: CVector,
}

pub fn tiny_instance(r: &mut ChaCha8Rng, m: usize, n: usize, k: usize, perturb: f64) -> Tiny {
    let op = SensingOperator::orthonormal_gaussian(m, n, r).unwrap();
    let mut x = vec![0.0; n];
    for i in rand::seq::index::sample(r, n, k) {
        x[i] = normal(r);
    }
    let x = CVector::from_real(&x);
    let mut b = op.apply(&x).unwrap();
    for v in b.as_mut_slice() {
        v.re += perturb * normal(r);
    }
    Tiny { op, x, b }
}
