//! Solve configuration files and the command-line overrides applied to them.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use l1adm::harness::{add_noise, derive_seed, gen_spikes, sha256_hex, NoiseSpec, OperatorFamily};
use l1adm::io::{read_matrix, read_vector, read_weights};
use l1adm::{CVector, Family, ModelSpec, SensingOperator, SolverKind, SolverOptions, StopRule, TransformSpec};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

const OPERATOR_STREAM: u64 = 1;
const SIGNAL_STREAM: u64 = 2;
const NOISE_STREAM: u64 = 3;

/// Where the sensing operator comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OperatorConfig {
    /// Explicit rows of a fast transform.
    Transform { transform: TransformSpec },
    /// Dense matrix file (binary or CSV).
    Dense { path: PathBuf },
    /// Drawn from `family` with the run seed.
    Random {
        family: OperatorFamily,
        n: usize,
        m: usize,
    },
}

/// Where `b` comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case")]
pub enum DataConfig {
    File {
        b: PathBuf,
        /// Optional ground truth; enables RelErr.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        truth: Option<PathBuf>,
    },
    /// `k` Gaussian spikes pushed through the operator, then corrupted.
    Synthetic {
        k: usize,
        #[serde(default)]
        noise: NoiseSpec,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolveConfig {
    pub operator: OperatorConfig,
    pub data: DataConfig,
    pub model: ModelSpec,
    #[serde(default = "default_solver")]
    pub solver: SolverKind,
    #[serde(default)]
    pub options: SolverOptions,
    #[serde(default)]
    pub seed: u64,
}

fn default_solver() -> SolverKind {
    SolverKind::Dadm
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub solver: Option<SolverKind>,
    pub model: Option<String>,
    pub mu: Option<f64>,
    pub delta: Option<f64>,
    pub nu: Option<f64>,
    pub nonneg: bool,
    pub weights: Option<PathBuf>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub tau: Option<f64>,
    pub eps: Option<f64>,
    pub max_iter: Option<usize>,
    pub stop: Option<StopRule>,
    pub seed: Option<u64>,
}

pub const MODEL_NAMES: [&str; 4] = ["bp", "bpdn", "qp", "l1l1"];

impl SolveConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut cfg: SolveConfig =
            serde_json::from_str(&text).with_context(|| format!("malformed config {}", path.display()))?;
        let base = std::path::absolute(path.parent().unwrap_or(Path::new("")))
            .with_context(|| format!("cannot resolve {}", path.display()))?;
        cfg.resolve_paths(&base);
        Ok(cfg)
    }

    /// Makes relative file references relative to `base`, so the canonical
    /// form can be loaded from anywhere.
    fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let OperatorConfig::Dense { path } = &mut self.operator {
            fix(path);
        }
        if let DataConfig::File { b, truth } = &mut self.data {
            fix(b);
            if let Some(t) = truth {
                fix(t);
            }
        }
    }

    pub fn apply(&mut self, o: &Overrides) -> Result<()> {
        if let Some(s) = o.solver {
            self.solver = s;
        }
        let current = self.model.family;
        let param = |flag: Option<f64>, existing: Option<f64>, name: &str, model: &str| {
            flag.or(existing)
                .with_context(|| format!("model {model} needs --{name}"))
        };
        let name = o.model.as_deref().unwrap_or(current.name());
        self.model.family = match name {
            "bp" => Family::Bp,
            "bpdn" => {
                let old = match current { Family::Bpdn { delta } => Some(delta), _ => None };
                Family::Bpdn { delta: param(o.delta, old, "delta", name)? }
            }
            "qp" => {
                let old = match current { Family::Qp { mu } => Some(mu), _ => None };
                Family::Qp { mu: param(o.mu, old, "mu", name)? }
            }
            "l1l1" => {
                let old = match current { Family::L1l1 { nu } => Some(nu), _ => None };
                Family::L1l1 { nu: param(o.nu, old, "nu", name)? }
            }
            other => bail!("unknown model {other:?}; expected one of {}", MODEL_NAMES.join(", ")),
        };
        if o.nonneg {
            self.model.nonneg = true;
        }
        if let Some(path) = &o.weights {
            self.model.weights = Some(read_weights(path)?);
        }
        let opts = &mut self.options;
        opts.beta = o.beta.or(opts.beta);
        opts.gamma = o.gamma.or(opts.gamma);
        opts.tau = o.tau.or(opts.tau);
        opts.eps = o.eps.unwrap_or(opts.eps);
        opts.max_iter = o.max_iter.unwrap_or(opts.max_iter);
        opts.stop = o.stop.unwrap_or(opts.stop);
        self.seed = o.seed.unwrap_or(self.seed);
        Ok(())
    }

    /// Canonical text: pretty JSON with every default spelled out and
    /// absolute paths.
    pub fn canonical(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn hash(&self) -> Result<String> {
        Ok(sha256_hex(serde_json::to_string(self)?.as_bytes()))
    }

    pub fn build(&self) -> Result<Problem> {
        let op = match &self.operator {
            OperatorConfig::Transform { transform } => transform.build()?,
            OperatorConfig::Dense { path } => read_matrix(path)?,
            OperatorConfig::Random { family, n, m } => {
                let op_seed = derive_seed(self.seed, OPERATOR_STREAM);
                let mut rng = ChaCha8Rng::seed_from_u64(op_seed);
                match family {
                    OperatorFamily::PartialWalshHadamard => SensingOperator::random_partial_wht(*n, *m, op_seed)?,
                    OperatorFamily::PartialDct => SensingOperator::random_partial_dct(*n, *m, op_seed)?,
                    OperatorFamily::OrthonormalGaussian => SensingOperator::orthonormal_gaussian(*m, *n, &mut rng)?,
                    OperatorFamily::Gaussian => SensingOperator::gaussian(*m, *n, &mut rng)?,
                }
            }
        };
        let (b, truth) = match &self.data {
            DataConfig::File { b, truth } => {
                let b = read_vector(b)?;
                let truth = truth.as_ref().map(read_vector).transpose()?;
                (b, truth)
            }
            DataConfig::Synthetic { k, noise } => {
                let x = gen_spikes(op.cols(), *k, derive_seed(self.seed, SIGNAL_STREAM))?;
                let noisy = add_noise(&op.apply(&x)?, noise, derive_seed(self.seed, NOISE_STREAM))?;
                (noisy.b, Some(x.scaled(noisy.scale)))
            }
        };
        if b.len() != op.rows() {
            bail!("dimension mismatch: operator has {} rows but b has length {}", op.rows(), b.len());
        }
        if let Some(t) = &truth {
            if t.len() != op.cols() {
                bail!("dimension mismatch: operator has {} columns but the truth has length {}", op.cols(), t.len());
            }
        }
        self.model.validate(op.cols())?;
        Ok(Problem { op, b, truth })
    }
}

pub struct Problem {
    pub op: SensingOperator,
    pub b: CVector,
    pub truth: Option<CVector>,
}
