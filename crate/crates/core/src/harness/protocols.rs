//! Experiment protocols: model-choice sweeps, error versus optimality and
//! solver races, each averaged over seeded trials.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::data::{derive_seed, InstanceSpec, NoiseSpec, OperatorFamily, ProblemInstance};
use crate::error::{Error, Result};
use crate::models::ModelSpec;
use crate::solver::{solve, RunRecord, SolverKind, SolverOptions, StopRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    #[default]
    Desk,
    Full,
}

/// Named protocols understood by [`ExperimentConfig::preset`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    ModelChoice,
    ErrVsOpt,
    RaceQp,
    RaceBpdn,
    RaceBp,
}

impl Protocol {
    pub const ALL: [Protocol; 5] = [
        Protocol::ModelChoice,
        Protocol::ErrVsOpt,
        Protocol::RaceQp,
        Protocol::RaceBpdn,
        Protocol::RaceBp,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Protocol::ModelChoice => "model-choice",
            Protocol::ErrVsOpt => "err-vs-opt",
            Protocol::RaceQp => "race-qp",
            Protocol::RaceBpdn => "race-bpdn",
            Protocol::RaceBp => "race-bp",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

/// Data corruption of one sweep scenario.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    pub noise: NoiseSpec,
}

impl Scenario {
    pub fn new(name: &str, noise: NoiseSpec) -> Self {
        Self {
            name: name.to_string(),
            noise,
        }
    }
}

/// Model swept by the model-choice protocol; the sweep value is its
/// parameter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepModel {
    /// Basis pursuit denoising with `delta` set to the sweep value.
    Bpdn,
    Qp,
    L1l1,
}

impl SweepModel {
    pub fn name(self) -> &'static str {
        match self {
            SweepModel::Bpdn => "bpdn",
            SweepModel::Qp => "qp",
            SweepModel::L1l1 => "l1l1",
        }
    }

    pub fn model(self, value: f64) -> ModelSpec {
        match self {
            SweepModel::Bpdn => ModelSpec::bpdn(value),
            SweepModel::Qp => ModelSpec::qp(value),
            SweepModel::L1l1 => ModelSpec::l1l1(value),
        }
    }
}

/// `count` evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelChoiceConfig {
    pub operator: OperatorFamily,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    pub scenarios: Vec<Scenario>,
    pub models: Vec<SweepModel>,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub options: SolverOptions,
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrVsOptConfig {
    pub operator: OperatorFamily,
    pub n: usize,
    pub m: usize,
    pub k: usize,
    /// A scenario without noise is solved as basis pursuit, a noisy one as
    /// the quadratic model with `mu = mu_factor * sigma_hat`, where
    /// `sigma_hat = ||p_white|| / sqrt(m)`.
    pub scenarios: Vec<Scenario>,
    pub mu_factor: f64,
    pub iterations: usize,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub timing: bool,
}

/// Model raced in a solver race.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum RaceModel {
    Qp { mu: f64 },
    /// `delta` is the norm of the realised noise.
    Bpdn,
    Bp,
}

/// Per-iteration curves of a fixed number of iterations from `x0 = A^* b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceConfig {
    pub cell: (f64, f64),
    pub mus: Vec<f64>,
    pub solvers: Vec<SolverKind>,
    pub iterations: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RaceConfig {
    pub model: RaceModel,
    pub operator: OperatorFamily,
    pub n: usize,
    /// `(m/n, k/m)` cells.
    pub cells: Vec<(f64, f64)>,
    pub sigma: f64,
    pub solvers: Vec<SolverKind>,
    pub trials: usize,
    pub seed: u64,
    pub options: SolverOptions,
    #[serde(default)]
    pub trace: Option<TraceConfig>,
    #[serde(default)]
    pub timing: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "protocol", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    ModelChoice(ModelChoiceConfig),
    ErrVsOpt(ErrVsOptConfig),
    Race(RaceConfig),
}

const TABLE_CELLS: [(f64, f64); 6] = [(0.3, 0.1), (0.3, 0.2), (0.2, 0.1), (0.2, 0.2), (0.1, 0.1), (0.1, 0.2)];

fn race_options(eps: f64, max_iter: usize) -> SolverOptions {
    SolverOptions::default().with_eps(eps).with_max_iter(max_iter)
}

impl ExperimentConfig {
    /// The configuration behind `experiment <protocol> --desk|--full`.
    pub fn preset(protocol: Protocol, scale: Scale) -> Self {
        let full = scale == Scale::Full;
        let race_n = if full { 8192 } else { 1024 };
        let race_trials = if full { 50 } else { 10 };
        match protocol {
            Protocol::ModelChoice => {
                let mut scenarios = vec![
                    Scenario::new("imp1", NoiseSpec::impulsive(0.01)),
                    Scenario::new("imp5", NoiseSpec::impulsive(0.05)),
                    Scenario::new("imp10", NoiseSpec::impulsive(0.10)),
                ];
                if full {
                    for db in [40.0, 20.0] {
                        for f in [0.01, 0.05, 0.10] {
                            let name = format!("snr{db}-imp{}", (f * 100.0f64).round());
                            scenarios.push(Scenario::new(&name, NoiseSpec::snr(db).with_impulses(f)));
                        }
                    }
                }
                for db in [30.0, 20.0, 10.0] {
                    scenarios.push(Scenario::new(&format!("snr{db}"), NoiseSpec::snr(db)));
                }
                ExperimentConfig::ModelChoice(ModelChoiceConfig {
                    operator: OperatorFamily::PartialDct,
                    n: 1000,
                    m: 300,
                    k: 60,
                    scenarios,
                    models: vec![SweepModel::Bpdn, SweepModel::Qp, SweepModel::L1l1],
                    grid: linspace(0.0, 1.0, 21),
                    trials: if full { 10 } else { 2 },
                    seed: 2009,
                    options: SolverOptions {
                        record_history: false,
                        ..race_options(1e-5, 2000)
                    },
                    timing: false,
                })
            }
            Protocol::ErrVsOpt => ExperimentConfig::ErrVsOpt(ErrVsOptConfig {
                operator: OperatorFamily::OrthonormalGaussian,
                n: 1000,
                m: 330,
                k: 60,
                scenarios: vec![
                    Scenario::new("noiseless", NoiseSpec::none()),
                    Scenario::new("snr40", NoiseSpec::snr(40.0)),
                    Scenario::new("snr20", NoiseSpec::snr(20.0)),
                ],
                mu_factor: 1.0,
                iterations: if full { 1000 } else { 500 },
                trials: if full { 10 } else { 3 },
                seed: 2009,
                timing: false,
            }),
            Protocol::RaceQp => ExperimentConfig::Race(RaceConfig {
                model: RaceModel::Qp { mu: 1e-4 },
                operator: OperatorFamily::PartialWalshHadamard,
                n: race_n,
                cells: TABLE_CELLS.to_vec(),
                sigma: 1e-3,
                solvers: vec![SolverKind::Padm, SolverKind::Dadm],
                trials: race_trials,
                seed: 2009,
                options: race_options(5e-4, 1000),
                trace: Some(TraceConfig {
                    cell: (0.3, 0.1),
                    mus: vec![1e-3, 1e-4],
                    solvers: SolverKind::ALL.to_vec(),
                    iterations: if full { 1000 } else { 300 },
                }),
                timing: false,
            }),
            Protocol::RaceBpdn => ExperimentConfig::Race(RaceConfig {
                model: RaceModel::Bpdn,
                operator: OperatorFamily::PartialWalshHadamard,
                n: race_n,
                cells: TABLE_CELLS.to_vec(),
                sigma: 1e-3,
                solvers: vec![SolverKind::Padm, SolverKind::Dadm],
                trials: race_trials,
                seed: 2009,
                options: race_options(5e-4, 1000),
                trace: None,
                timing: false,
            }),
            Protocol::RaceBp => ExperimentConfig::Race(RaceConfig {
                model: RaceModel::Bp,
                operator: OperatorFamily::PartialWalshHadamard,
                n: race_n,
                cells: TABLE_CELLS[..5].to_vec(),
                sigma: 0.0,
                solvers: vec![SolverKind::Dadm],
                trials: race_trials,
                seed: 2009,
                options: race_options(1e-6, 10_000),
                trace: None,
                timing: false,
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentConfig::ModelChoice(_) => Protocol::ModelChoice.name(),
            ExperimentConfig::ErrVsOpt(_) => Protocol::ErrVsOpt.name(),
            ExperimentConfig::Race(c) => match c.model {
                RaceModel::Qp { .. } => Protocol::RaceQp.name(),
                RaceModel::Bpdn => Protocol::RaceBpdn.name(),
                RaceModel::Bp => Protocol::RaceBp.name(),
            },
        }
    }

    pub fn seed(&self) -> u64 {
        match self {
            ExperimentConfig::ModelChoice(c) => c.seed,
            ExperimentConfig::ErrVsOpt(c) => c.seed,
            ExperimentConfig::Race(c) => c.seed,
        }
    }

    pub fn set_seed(&mut self, seed: u64) {
        match self {
            ExperimentConfig::ModelChoice(c) => c.seed = seed,
            ExperimentConfig::ErrVsOpt(c) => c.seed = seed,
            ExperimentConfig::Race(c) => c.seed = seed,
        }
    }

    pub fn set_timing(&mut self, timing: bool) {
        match self {
            ExperimentConfig::ModelChoice(c) => c.timing = timing,
            ExperimentConfig::ErrVsOpt(c) => c.timing = timing,
            ExperimentConfig::Race(c) => c.timing = timing,
        }
    }

    pub fn run(&self) -> Result<ExperimentOutput> {
        match self {
            ExperimentConfig::ModelChoice(c) => run_model_choice_sweep(c),
            ExperimentConfig::ErrVsOpt(c) => run_error_vs_optimality(c),
            ExperimentConfig::Race(c) => run_solver_race(c),
        }
    }
}

/// One solve of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub cell_id: String,
    pub trial: usize,
    pub seed: u64,
    pub solver: String,
    pub iter: usize,
    pub aat: usize,
    pub relerr_pct: f64,
    pub res: f64,
    pub relres: f64,
    pub objective: f64,
    pub converged: bool,
    pub seconds: Option<f64>,
}

/// One line of an output table; numeric columns are trial means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub cell_id: String,
    pub solver: String,
    pub iter: f64,
    pub aat: f64,
    pub relerr_pct: f64,
    pub res: f64,
    pub seconds: Option<f64>,
    /// Only present in per-iteration trace tables.
    pub objective: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    /// File stem of the CSV.
    pub name: String,
    pub rows: Vec<Row>,
}

impl Table {
    pub fn has_objective(&self) -> bool {
        self.rows.iter().any(|r| r.objective.is_some())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentOutput {
    pub tables: Vec<Table>,
    pub trials: Vec<TrialRecord>,
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
    if count == 0 {
        f64::NAN
    } else {
        sum / count as f64
    }
}

/// Averages trial records per `(cell_id, solver)`, in order of first
/// appearance.
pub fn summarize(trials: &[TrialRecord], timing: bool) -> Vec<Row> {
    let mut order: Vec<(&str, &str)> = Vec::new();
    let mut groups: HashMap<(&str, &str), Vec<&TrialRecord>> = HashMap::new();
    for t in trials {
        let key = (t.cell_id.as_str(), t.solver.as_str());
        groups
            .entry(key)
            .or_insert_with(|| {
                order.push(key);
                Vec::new()
            })
            .push(t);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            Row {
                cell_id: key.0.to_string(),
                solver: key.1.to_string(),
                iter: mean(g.iter().map(|t| t.iter as f64)),
                aat: mean(g.iter().map(|t| t.aat as f64)),
                relerr_pct: mean(g.iter().map(|t| t.relerr_pct)),
                res: mean(g.iter().map(|t| t.res)),
                seconds: timing.then(|| mean(g.iter().map(|t| t.seconds.unwrap_or(0.0)))),
                objective: None,
            }
        })
        .collect()
}

fn record(
    cell_id: &str,
    trial: usize,
    inst: &ProblemInstance,
    rec: &RunRecord,
    timing: bool,
) -> TrialRecord {
    TrialRecord {
        cell_id: cell_id.to_string(),
        trial,
        seed: inst.seed,
        solver: rec.solver.clone(),
        iter: rec.iterations,
        aat: rec.aat,
        relerr_pct: rec.relerr.unwrap_or(f64::NAN),
        res: rec.last.res,
        relres: rec.relres,
        objective: rec.last.objective,
        converged: rec.status == crate::solver::Status::Converged,
        seconds: timing.then_some(rec.seconds),
    }
}

fn check_trials(trials: usize) -> Result<()> {
    if trials == 0 {
        return Err(Error::InvalidParameter("trials must be >= 1".into()));
    }
    Ok(())
}

/// Runs `job` for every `(cell, trial)` pair (in parallel) and returns the
/// results ordered by cell, then trial.
fn for_each_trial<T: Send>(
    cells: usize,
    trials: usize,
    job: impl Fn(usize, usize) -> Result<T> + Sync,
) -> Result<Vec<T>> {
    let jobs: Vec<(usize, usize)> = (0..cells)
        .flat_map(|c| (0..trials).map(move |t| (c, t)))
        .collect();
    jobs.into_par_iter().map(|(c, t)| job(c, t)).collect()
}

fn trial_seed(seed: u64, cell: usize, trial: usize) -> u64 {
    derive_seed(derive_seed(seed, cell as u64), trial as u64)
}

/// Mean relative error of each model over a parameter grid, per scenario.
/// All models and parameter values of a trial share one instance.
pub fn run_model_choice_sweep(cfg: &ModelChoiceConfig) -> Result<ExperimentOutput> {
    check_trials(cfg.trials)?;
    if cfg.grid.is_empty() || cfg.models.is_empty() {
        return Err(Error::InvalidParameter("empty sweep".into()));
    }
    let per_trial = for_each_trial(cfg.scenarios.len(), cfg.trials, |s, t| {
        let scenario = &cfg.scenarios[s];
        let spec = InstanceSpec {
            operator: cfg.operator,
            n: cfg.n,
            m: cfg.m,
            k: cfg.k,
            noise: scenario.noise,
        };
        let inst = spec.generate(trial_seed(cfg.seed, s, t))?;
        let mut out = Vec::with_capacity(cfg.models.len() * cfg.grid.len());
        for &model in &cfg.models {
            for &value in &cfg.grid {
                let rec = solve(
                    SolverKind::Dadm,
                    &model.model(value),
                    &inst.op,
                    &inst.b,
                    &cfg.options,
                    Some(&inst.x_true),
                )?;
                let cell = format!("{}:{}:{value:.4}", scenario.name, model.name());
                out.push((cell, record("", t, &inst, &rec, cfg.timing)));
            }
        }
        Ok(out)
    })?;
    // Reorder to cell-major so each cell's trials are contiguous.
    let mut trials: Vec<TrialRecord> = Vec::new();
    for s in 0..cfg.scenarios.len() {
        let block = &per_trial[s * cfg.trials..(s + 1) * cfg.trials];
        for j in 0..block[0].len() {
            for trial in block {
                let (cell, r) = &trial[j];
                trials.push(TrialRecord {
                    cell_id: cell.clone(),
                    ..r.clone()
                });
            }
        }
    }
    let rows = summarize(&trials, cfg.timing);
    Ok(ExperimentOutput {
        tables: vec![Table {
            name: "model_choice".into(),
            rows,
        }],
        trials,
    })
}

/// Relative error and residue per iteration of long dual solves.
pub fn run_error_vs_optimality(cfg: &ErrVsOptConfig) -> Result<ExperimentOutput> {
    check_trials(cfg.trials)?;
    let runs = for_each_trial(cfg.scenarios.len(), cfg.trials, |s, t| {
        let scenario = &cfg.scenarios[s];
        let spec = InstanceSpec {
            operator: cfg.operator,
            n: cfg.n,
            m: cfg.m,
            k: cfg.k,
            noise: scenario.noise,
        };
        let inst = spec.generate(trial_seed(cfg.seed, s, t))?;
        let sigma_hat = inst.p_white.norm() / (cfg.m as f64).sqrt();
        let model = if sigma_hat > 0.0 {
            ModelSpec::qp(cfg.mu_factor * sigma_hat)
        } else {
            ModelSpec::bp()
        };
        let opts = SolverOptions {
            eps: 0.0,
            max_iter: cfg.iterations,
            stop: StopRule::Res,
            record_history: true,
            ..SolverOptions::default()
        };
        let rec = solve(SolverKind::Dadm, &model, &inst.op, &inst.b, &opts, Some(&inst.x_true))?;
        Ok((record(&scenario.name, t, &inst, &rec, cfg.timing), rec))
    })?;

    let mut rows = Vec::new();
    for (s, scenario) in cfg.scenarios.iter().enumerate() {
        let block = &runs[s * cfg.trials..(s + 1) * cfg.trials];
        let len = block.iter().map(|(_, r)| r.history.len()).min().unwrap_or(0);
        for i in 0..len {
            let h = |f: &dyn Fn(&crate::solver::IterationRecord) -> f64| {
                mean(block.iter().map(|(_, r)| f(&r.history[i])))
            };
            rows.push(Row {
                cell_id: scenario.name.clone(),
                solver: "dadm".into(),
                iter: h(&|r| r.k as f64),
                aat: h(&|r| r.aat as f64),
                relerr_pct: h(&|r| r.relerr.unwrap_or(f64::NAN)),
                res: h(&|r| r.res),
                seconds: None,
                objective: None,
            });
        }
    }
    Ok(ExperimentOutput {
        tables: vec![Table {
            name: "err_vs_opt".into(),
            rows,
        }],
        trials: runs.into_iter().map(|(t, _)| t).collect(),
    })
}

fn cell_spec(cfg: &RaceConfig, cell: (f64, f64), noise: NoiseSpec) -> InstanceSpec {
    let m = ((cell.0 * cfg.n as f64).round() as usize).max(1);
    let k = ((cell.1 * m as f64).round() as usize).max(1);
    InstanceSpec {
        operator: cfg.operator,
        n: cfg.n,
        m,
        k,
        noise,
    }
}

fn cell_name(cell: (f64, f64)) -> String {
    format!("{}/{}", cell.0, cell.1)
}

fn race_model(model: RaceModel, inst: &ProblemInstance) -> ModelSpec {
    match model {
        RaceModel::Qp { mu } => ModelSpec::qp(mu),
        RaceModel::Bpdn => ModelSpec::bpdn(inst.noise_vector().norm()),
        RaceModel::Bp => ModelSpec::bp(),
    }
}

/// Iterations, operator applications and relative error of each solver on
/// every `(m/n, k/m)` cell, plus optional per-iteration traces.
pub fn run_solver_race(cfg: &RaceConfig) -> Result<ExperimentOutput> {
    check_trials(cfg.trials)?;
    if cfg.cells.is_empty() {
        return Err(Error::InvalidParameter("race without cells".into()));
    }
    let noise = NoiseSpec::white(cfg.sigma);
    let per_trial = for_each_trial(cfg.cells.len(), cfg.trials, |c, t| {
        let cell = cfg.cells[c];
        let inst = cell_spec(cfg, cell, noise).generate(trial_seed(cfg.seed, c, t))?;
        let model = race_model(cfg.model, &inst);
        cfg.solvers
            .iter()
            .map(|&s| {
                let rec = solve(s, &model, &inst.op, &inst.b, &cfg.options, Some(&inst.x_true))?;
                Ok(record(&cell_name(cell), t, &inst, &rec, cfg.timing))
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let mut trials = Vec::new();
    for c in 0..cfg.cells.len() {
        let block = &per_trial[c * cfg.trials..(c + 1) * cfg.trials];
        for s in 0..cfg.solvers.len() {
            trials.extend(block.iter().map(|t| t[s].clone()));
        }
    }
    let mut tables = vec![Table {
        name: "summary".into(),
        rows: summarize(&trials, cfg.timing),
    }];
    if let Some(trace) = &cfg.trace {
        tables.push(run_trace(cfg, trace)?);
    }
    Ok(ExperimentOutput { tables, trials })
}

fn run_trace(cfg: &RaceConfig, trace: &TraceConfig) -> Result<Table> {
    let spec = cell_spec(cfg, trace.cell, NoiseSpec::white(cfg.sigma));
    let base = derive_seed(cfg.seed, u64::MAX);
    let runs = for_each_trial(trace.mus.len(), cfg.trials, |i, t| {
        let inst = spec.generate(trial_seed(base, i, t))?;
        let model = ModelSpec::qp(trace.mus[i]);
        let opts = SolverOptions {
            eps: 0.0,
            max_iter: trace.iterations,
            record_history: true,
            x0: Some(inst.op.apply_adjoint(&inst.b)?),
            ..cfg.options.clone()
        };
        trace
            .solvers
            .iter()
            .map(|&s| solve(s, &model, &inst.op, &inst.b, &opts, Some(&inst.x_true)))
            .collect::<Result<Vec<_>>>()
    })?;
    let mut rows = Vec::new();
    for (i, mu) in trace.mus.iter().enumerate() {
        let block = &runs[i * cfg.trials..(i + 1) * cfg.trials];
        for (s, solver) in trace.solvers.iter().enumerate() {
            let len = block.iter().map(|r| r[s].history.len()).min().unwrap_or(0);
            for j in 0..len {
                let h = |f: &dyn Fn(&crate::solver::IterationRecord) -> f64| {
                    mean(block.iter().map(|r| f(&r[s].history[j])))
                };
                rows.push(Row {
                    cell_id: format!("{}:mu={mu:e}", cell_name(trace.cell)),
                    solver: solver.name().into(),
                    iter: h(&|r| r.k as f64),
                    aat: h(&|r| r.aat as f64),
                    relerr_pct: h(&|r| r.relerr.unwrap_or(f64::NAN)),
                    res: h(&|r| r.res),
                    seconds: None,
                    objective: Some(h(&|r| r.objective)),
                });
            }
        }
    }
    Ok(Table {
        name: "trace".into(),
        rows,
    })
}
