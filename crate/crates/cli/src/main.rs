//! `l1adm`: solve one l1 problem from a config file, or run a named
//! experiment protocol.

mod config;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use l1adm::harness::{read_manifest, write_artifacts, ExperimentConfig, Protocol, Scale, MANIFEST_NAME};
use l1adm::io::write_vector;
use l1adm::{solve, RunRecord, SolverKind, Status, StopRule};
use serde::{Deserialize, Serialize};

use config::{Overrides, SolveConfig};

const THREADS_VAR: &str = "L1ADM_THREADS";
const RUN_NAME: &str = "run.json";
const CONFIG_NAME: &str = "config.json";

#[derive(Parser)]
#[command(name = "l1adm", version, about = "Alternating direction solvers for l1 problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the problem described by a JSON config.
    Solve(SolveArgs),
    /// Run an experiment protocol and write its CSV/JSON artifacts.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Stop {
    Relchg,
    Res,
}

#[derive(Args)]
struct SolveArgs {
    config: PathBuf,
    /// padm, dadm, ist or fista.
    #[arg(long)]
    solver: Option<String>,
    /// bp, bpdn, qp or l1l1.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    nu: Option<f64>,
    #[arg(long)]
    nonneg: bool,
    /// File of positive l1 weights.
    #[arg(long)]
    weights: Option<PathBuf>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
    #[arg(long, value_enum)]
    stop: Option<Stop>,
    #[arg(long)]
    seed: Option<u64>,
    /// Run directory.
    #[arg(long, default_value = "l1adm-run")]
    out: PathBuf,
    /// Overwrite a run directory made from a different config.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct ExperimentArgs {
    protocol: String,
    #[arg(long, conflicts_with = "full")]
    desk: bool,
    #[arg(long)]
    full: bool,
    #[arg(long)]
    seed: Option<u64>,
    /// Record wall-clock seconds (breaks byte-identical reruns).
    #[arg(long)]
    timing: bool,
    /// Overwrite a run directory made from a different config.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: PathBuf,
}

/// Contents of `run.json`.
#[derive(Serialize, Deserialize)]
struct RunFile {
    config_hash: String,
    seed: u64,
    config: SolveConfig,
    record: RunRecord,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Experiment(args) => cmd_experiment(&args).map(|()| ExitCode::SUCCESS),
    });
    outcome.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::from(1)
    })
}

fn configure_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .with_context(|| format!("{THREADS_VAR} must be a thread count, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global()?;
    Ok(())
}

/// Refuses to reuse `dir` when it holds results of another config.
fn check_hash(dir: &Path, found: Option<String>, expected: &str, force: bool) -> Result<()> {
    match found {
        Some(old) if old != expected && !force => bail!(
            "{} holds results of a different config (hash {old}, now {expected}); pass --force to overwrite",
            dir.display()
        ),
        _ => Ok(()),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<ExitCode> {
    let mut cfg = SolveConfig::load(&args.config)?;
    let solver = match &args.solver {
        Some(name) => Some(SolverKind::parse(name).with_context(|| {
            let valid: Vec<_> = SolverKind::ALL.iter().map(|s| s.name()).collect();
            format!("unknown solver {name:?}; expected one of {}", valid.join(", "))
        })?),
        None => None,
    };
    cfg.apply(&Overrides {
        solver,
        model: args.model.clone(),
        mu: args.mu,
        delta: args.delta,
        nu: args.nu,
        nonneg: args.nonneg,
        weights: args.weights.clone(),
        beta: args.beta,
        gamma: args.gamma,
        tau: args.tau,
        eps: args.eps,
        max_iter: args.max_iter,
        stop: args.stop.map(|s| match s {
            Stop::Relchg => StopRule::Relchg,
            Stop::Res => StopRule::Res,
        }),
        seed: args.seed,
    })?;
    let hash = cfg.hash()?;
    let run_path = args.out.join(RUN_NAME);
    let previous = fs::read(&run_path)
        .ok()
        .and_then(|bytes| serde_json::from_slice::<RunFile>(&bytes).ok())
        .map(|r| r.config_hash);
    check_hash(&args.out, previous, &hash, args.force)?;

    let problem = cfg.build()?;
    let record = solve(cfg.solver, &cfg.model, &problem.op, &problem.b, &cfg.options, problem.truth.as_ref())?;

    fs::create_dir_all(&args.out).with_context(|| format!("cannot create {}", args.out.display()))?;
    let canonical_path = args.out.join(CONFIG_NAME);
    fs::write(&canonical_path, cfg.canonical()?)
        .with_context(|| format!("cannot write {}", canonical_path.display()))?;
    write_vector(args.out.join("x.bin"), &record.x)?;
    write_vector(args.out.join("x.csv"), &record.x)?;
    let status = record.status;
    println!(
        "{} {}: {:?} after {} iterations, RelRes {:.3e}, Res {:.3e}{}",
        record.solver,
        cfg.model.family.name(),
        status,
        record.iterations,
        record.relres,
        record.last.res,
        record.relerr.map(|e| format!(", RelErr {e:.3e}%")).unwrap_or_default()
    );
    let run = RunFile {
        config_hash: hash,
        seed: cfg.seed,
        config: cfg,
        record,
    };
    fs::write(&run_path, serde_json::to_string_pretty(&run)?)
        .with_context(|| format!("cannot write {}", run_path.display()))?;
    Ok(match status {
        Status::Converged => ExitCode::SUCCESS,
        Status::MaxIter => ExitCode::from(2),
    })
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<()> {
    let Some(protocol) = Protocol::parse(&args.protocol) else {
        let valid: Vec<_> = Protocol::ALL.iter().map(|p| p.name()).collect();
        bail!("unknown protocol {:?}; valid protocols: {}", args.protocol, valid.join(", "));
    };
    let scale = if args.full { Scale::Full } else { Scale::Desk };
    let mut cfg = ExperimentConfig::preset(protocol, scale);
    if let Some(seed) = args.seed {
        cfg.set_seed(seed);
    }
    cfg.set_timing(args.timing);
    let hash = l1adm::harness::config_hash(&cfg)?;
    let previous = args
        .out
        .join(MANIFEST_NAME)
        .exists()
        .then(|| read_manifest(&args.out))
        .transpose()?
        .map(|m| m.config_hash);
    check_hash(&args.out, previous, &hash, args.force)?;

    let output = cfg.run()?;
    let manifest = write_artifacts(&args.out, &cfg, &output)?;
    for a in &manifest.artifacts {
        println!("{}", args.out.join(&a.file).display());
    }
    Ok(())
}
