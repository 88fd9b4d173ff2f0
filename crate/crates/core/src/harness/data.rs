//! Seeded synthetic problems: sparse spikes, sensing operators and noise.

use rand::seq::index::sample;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVector, SensingOperator};
use crate::models::snr_db;

/// Independent sub-seed number `stream` of `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `k` standard Gaussian values at positions drawn uniformly without
/// replacement.
pub fn gen_spikes(n: usize, k: usize, seed: u64) -> Result<CVector> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "sparsity must satisfy 0 < k <= n, got k = {k}, n = {n}"
        )));
    }
    let mut rng = rng(seed);
    let mut x = vec![0.0; n];
    let mut positions = sample(&mut rng, n, k).into_vec();
    positions.sort_unstable();
    for i in positions {
        x[i] = rng.sample(StandardNormal);
    }
    Ok(CVector::from_real(&x))
}

/// White plus impulsive noise. `target_snr_db`, when set, overrides
/// `sigma` so that the white noise alone attains that SNR.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct NoiseSpec {
    pub sigma: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_snr_db: Option<f64>,
    pub impulse_fraction: f64,
}

impl NoiseSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn white(sigma: f64) -> Self {
        Self {
            sigma,
            ..Self::default()
        }
    }

    pub fn snr(db: f64) -> Self {
        Self {
            target_snr_db: Some(db),
            ..Self::default()
        }
    }

    pub fn impulsive(fraction: f64) -> Self {
        Self {
            impulse_fraction: fraction,
            ..Self::default()
        }
    }

    pub fn with_impulses(mut self, fraction: f64) -> Self {
        self.impulse_fraction = fraction;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be >= 0, got {}", self.sigma)));
        }
        if !(0.0..=1.0).contains(&self.impulse_fraction) {
            return Err(Error::InvalidParameter(format!(
                "impulse fraction must lie in [0, 1], got {}",
                self.impulse_fraction
            )));
        }
        Ok(())
    }
}

/// `b = scale * b_clean + p_white + p_impulse`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyData {
    pub b: CVector,
    pub p_white: CVector,
    pub p_impulse: CVector,
    /// Factor applied to the clean data (`1 / ||b_clean||_inf` when
    /// impulses are requested, else 1). The signal must be rescaled too.
    pub scale: f64,
    /// Positions overwritten by `+-1`, ascending.
    pub impulse_positions: Vec<usize>,
}

/// Corrupts real data: with impulses requested the data is first scaled to
/// unit infinity norm; real Gaussian white noise is added; finally
/// `round(fraction * m)` entries are overwritten by random signs.
pub fn add_noise(b_clean: &CVector, spec: &NoiseSpec, seed: u64) -> Result<NoisyData> {
    spec.validate()?;
    let m = b_clean.len();
    let mut rng = rng(seed);
    let scale = match b_clean.norm_inf() {
        inf if spec.impulse_fraction > 0.0 && inf > 0.0 => 1.0 / inf,
        _ => 1.0,
    };
    let mut b = b_clean.scaled(scale);

    let p_white = match spec.target_snr_db {
        Some(db) => {
            let w: Vec<f64> = (0..m).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
            let w = CVector::from_real(&w);
            w.scaled(snr_scale(&b, &w, db))
        }
        None if spec.sigma > 0.0 => {
            let w: Vec<f64> = (0..m).map(|_| spec.sigma * rng.sample::<f64, _>(StandardNormal)).collect();
            CVector::from_real(&w)
        }
        None => CVector::zeros(m),
    };
    b.axpy(1.0, &p_white);

    let count = (spec.impulse_fraction * m as f64).round() as usize;
    let mut positions = sample(&mut rng, m, count).into_vec();
    positions.sort_unstable();
    let mut p_impulse = CVector::zeros(m);
    for &i in &positions {
        let v = if rng.random::<bool>() { 1.0 } else { -1.0 };
        p_impulse[i] = v - b[i];
        b[i] = v.into();
    }
    Ok(NoisyData {
        b,
        p_white,
        p_impulse,
        scale,
        impulse_positions: positions,
    })
}

/// Scale `s` with `snr_db(b + s w, s w) = db`. Solves
/// `||c + s w_c||^2 = R^2 s^2 ||w||^2` for the centred `c`, `w_c`; falls back
/// to the expected scale when the quadratic has no positive root.
fn snr_scale(b: &CVector, w: &CVector, db: f64) -> f64 {
    let centre = |v: &CVector| {
        let mean = v.mean();
        v.iter().map(|z| z - mean).collect::<CVector>()
    };
    let (c, wc) = (centre(b), centre(w));
    let r2 = 10f64.powf(db / 10.0);
    let a = r2 * w.norm().powi(2) - wc.norm().powi(2);
    let half_b = c.dot(&wc).re;
    let cc = c.norm().powi(2);
    if a > 0.0 && w.norm() > 0.0 {
        (half_b + (half_b * half_b + a * cc).sqrt()) / a
    } else if w.norm() > 0.0 {
        c.norm() / (r2.sqrt() * w.norm())
    } else {
        0.0
    }
}

/// How the sensing operator of an instance is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OperatorFamily {
    /// Random rows and column signs of the Walsh-Hadamard transform.
    PartialWalshHadamard,
    /// Random rows and column signs of the orthonormal DCT.
    PartialDct,
    /// Gaussian matrix with orthonormalised rows.
    OrthonormalGaussian,
    /// Gaussian matrix with `N(0, 1/n)` entries.
    Gaussian,
}

/// Recipe for one synthetic problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub operator: OperatorFamily,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub noise: NoiseSpec,
}

#[derive(Debug, Clone)]
pub struct ProblemInstance {
    pub op: SensingOperator,
    pub b: CVector,
    /// Ground truth, rescaled together with `b`.
    pub x_true: CVector,
    pub noise: NoiseSpec,
    pub p_white: CVector,
    pub p_impulse: CVector,
    pub seed: u64,
}

impl ProblemInstance {
    /// Total noise `b - A x_true`.
    pub fn noise_vector(&self) -> CVector {
        self.p_white.add(&self.p_impulse)
    }

    pub fn snr_db(&self) -> f64 {
        snr_db(&self.b, &self.noise_vector())
    }
}

const OPERATOR_STREAM: u64 = 1;
const SIGNAL_STREAM: u64 = 2;
const NOISE_STREAM: u64 = 3;

impl InstanceSpec {
    /// Builds the instance; bit-identical for equal `(self, seed)`.
    pub fn generate(&self, seed: u64) -> Result<ProblemInstance> {
        let (n, m) = (self.n, self.m);
        if m == 0 || m > n {
            return Err(Error::InvalidParameter(format!("need 0 < m <= n, got m = {m}, n = {n}")));
        }
        let op_seed = derive_seed(seed, OPERATOR_STREAM);
        let op = match self.operator {
            OperatorFamily::PartialWalshHadamard => SensingOperator::random_partial_wht(n, m, op_seed)?,
            OperatorFamily::PartialDct => SensingOperator::random_partial_dct(n, m, op_seed)?,
            OperatorFamily::OrthonormalGaussian => {
                SensingOperator::orthonormal_gaussian(m, n, &mut rng(op_seed))?
            }
            OperatorFamily::Gaussian => SensingOperator::gaussian(m, n, &mut rng(op_seed))?,
        };
        let x = gen_spikes(n, self.k, derive_seed(seed, SIGNAL_STREAM))?;
        let clean = op.apply(&x)?;
        let noisy = add_noise(&clean, &self.noise, derive_seed(seed, NOISE_STREAM))?;
        Ok(ProblemInstance {
            op,
            b: noisy.b,
            x_true: x.scaled(noisy.scale),
            noise: self.noise,
            p_white: noisy.p_white,
            p_impulse: noisy.p_impulse,
            seed,
        })
    }
}
