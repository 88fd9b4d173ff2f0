//! CSV tables and the JSON run manifest.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::protocols::{ExperimentConfig, ExperimentOutput, Table, TrialRecord};
use crate::error::{Error, Result};

/// Column names shared by every table.
pub const COLUMNS: [&str; 7] = ["cell_id", "solver", "iter", "aat", "relerr_pct", "res", "seconds"];

pub const MANIFEST_NAME: &str = "manifest.json";
pub const TRIALS_NAME: &str = "trials.csv";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the canonical JSON form of `cfg`.
pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    Ok(sha256_hex(&serde_json::to_vec(cfg)?))
}

fn num(v: f64) -> String {
    v.to_string()
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Renders a table; traces carry an extra `objective` column.
pub fn table_csv(table: &Table) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let with_obj = table.has_objective();
    let mut header: Vec<&str> = COLUMNS.to_vec();
    if with_obj {
        header.push("objective");
    }
    w.write_record(&header)?;
    for r in &table.rows {
        let mut rec = vec![
            r.cell_id.clone(),
            r.solver.clone(),
            num(r.iter),
            num(r.aat),
            num(r.relerr_pct),
            num(r.res),
            opt(r.seconds),
        ];
        if with_obj {
            rec.push(opt(r.objective));
        }
        w.write_record(&rec)?;
    }
    w.into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv buffer: {e}")))
}

pub fn trials_csv(trials: &[TrialRecord]) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "cell_id",
        "trial",
        "seed",
        "solver",
        "iter",
        "aat",
        "relerr_pct",
        "res",
        "relres",
        "objective",
        "converged",
        "seconds",
    ])?;
    for t in trials {
        w.write_record([
            t.cell_id.clone(),
            t.trial.to_string(),
            t.seed.to_string(),
            t.solver.clone(),
            t.iter.to_string(),
            t.aat.to_string(),
            num(t.relerr_pct),
            num(t.res),
            num(t.relres),
            num(t.objective),
            t.converged.to_string(),
            opt(t.seconds),
        ])?;
    }
    w.into_inner()
        .map_err(|e| Error::InvalidParameter(format!("csv buffer: {e}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub file: String,
    pub sha256: String,
}

/// Describes one experiment run directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub protocol: String,
    pub library_version: String,
    pub seed: u64,
    pub config_hash: String,
    pub config: ExperimentConfig,
    pub artifacts: Vec<ArtifactEntry>,
}

fn write(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_manifest(dir: &Path) -> Result<Manifest> {
    let path = dir.join(MANIFEST_NAME);
    let text = fs::read(&path).map_err(|source| Error::Io {
        path: path.clone(),
        source,
    })?;
    Ok(serde_json::from_slice(&text)?)
}

/// Writes every table, the per-trial records and the manifest into `dir`.
pub fn write_artifacts(
    dir: &Path,
    cfg: &ExperimentConfig,
    output: &ExperimentOutput,
) -> Result<Manifest> {
    fs::create_dir_all(dir).map_err(|source| Error::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut files: Vec<(String, Vec<u8>)> = output
        .tables
        .iter()
        .map(|t| Ok((format!("{}.csv", t.name), table_csv(t)?)))
        .collect::<Result<_>>()?;
    files.push((TRIALS_NAME.to_string(), trials_csv(&output.trials)?));

    let mut artifacts = Vec::new();
    for (name, bytes) in &files {
        write(&dir.join(name), bytes)?;
        artifacts.push(ArtifactEntry {
            file: name.clone(),
            sha256: sha256_hex(bytes),
        });
    }
    let manifest = Manifest {
        protocol: cfg.name().to_string(),
        library_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.seed(),
        config_hash: config_hash(cfg)?,
        config: cfg.clone(),
        artifacts,
    };
    write(
        &dir.join(MANIFEST_NAME),
        serde_json::to_string_pretty(&manifest)?.as_bytes(),
    )?;
    Ok(manifest)
}

/// Paths of the files listed in a manifest.
pub fn artifact_paths(dir: &Path, manifest: &Manifest) -> Vec<PathBuf> {
    manifest.artifacts.iter().map(|a| dir.join(&a.file)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::protocols::Row;

    #[test]
    fn header_and_blank_seconds() {
        let t = Table {
            name: "x".into(),
            rows: vec![Row {
                cell_id: "0.3/0.1".into(),
                solver: "dadm".into(),
                iter: 55.5,
                aat: 111.0,
                relerr_pct: 0.4,
                res: 1e-3,
                seconds: None,
                objective: None,
            }],
        };
        let text = String::from_utf8(table_csv(&t).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("cell_id,solver,iter,aat,relerr_pct,res,seconds"));
        assert_eq!(lines.next(), Some("0.3/0.1,dadm,55.5,111,0.4,0.001,"));
    }
}
