//! Fast orthonormal transforms backing the partial-transform operators.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// In-place unnormalised Walsh-Hadamard transform in natural (Hadamard)
/// ordering. `data.len()` must be a power of two.
///
/// The matrix is symmetric with entries `(-1)^popcount(i & j)`, so the
/// transform is its own adjoint up to the `1/n` factor.
pub fn fwht_in_place(data: &mut [Complex64]) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    let mut half = 1;
    while half < n {
        for block in data.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (u, v) = (*a, *b);
                *a = u + v;
                *b = u - v;
            }
        }
        half *= 2;
    }
}

/// Orthonormal DCT-II / DCT-III pair of length `n`, evaluated on complex
/// input through one FFT of length `2n` each way.
#[derive(Clone)]
pub struct DctPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    // e^{-i pi k / 2n} for k in 0..n
    twiddle: Vec<Complex64>,
}

impl fmt::Debug for DctPlan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DctPlan").field("n", &self.n).finish()
    }
}

impl DctPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(2 * n);
        let inverse = planner.plan_fft_inverse(2 * n);
        let twiddle = (0..n)
            .map(|k| Complex64::from_polar(1.0, -PI * k as f64 / (2 * n) as f64))
            .collect();
        Self {
            n,
            forward,
            inverse,
            twiddle,
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn scale(&self, k: usize) -> f64 {
        let n = self.n as f64;
        if k == 0 {
            (1.0 / n).sqrt()
        } else {
            (2.0 / n).sqrt()
        }
    }

    /// Orthonormal DCT-II:
    /// `X_k = s_k sum_j x_j cos(pi (2j+1) k / 2n)`.
    pub fn dct2(&self, input: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        debug_assert_eq!(input.len(), n);
        // Symmetric extension [x, reverse(x)] turns the cosine sum into a DFT.
        let mut buf = Vec::with_capacity(2 * n);
        buf.extend_from_slice(input);
        buf.extend(input.iter().rev());
        self.forward.process(&mut buf);
        (0..n)
            .map(|k| 0.5 * self.scale(k) * self.twiddle[k] * buf[k])
            .collect()
    }

    /// Orthonormal DCT-III, the adjoint (and inverse) of [`DctPlan::dct2`].
    pub fn dct3(&self, input: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        debug_assert_eq!(input.len(), n);
        let zero = Complex64::new(0.0, 0.0);
        let mut buf = vec![zero; 2 * n];
        // d_k = c_k, d_{2n-k} = -c_k; pre-twiddled by e^{i pi k / 2n}.
        for k in 0..n {
            let c = self.scale(k) * input[k];
            buf[k] = c * self.twiddle[k].conj();
            if k > 0 {
                // e^{i pi (2n-k) / 2n} = -e^{-i pi k / 2n}
                buf[2 * n - k] = c * self.twiddle[k];
            }
        }
        self.inverse.process(&mut buf);
        let c0 = self.scale(0) * input[0];
        buf.truncate(n);
        buf.iter().map(|v| 0.5 * (v + c0)).collect()
    }
}
