//! Synthetic data, experiment protocols and their persisted artifacts.

mod data;
mod output;
mod protocols;

pub use data::{
    add_noise, derive_seed, gen_spikes, InstanceSpec, NoiseSpec, NoisyData, OperatorFamily,
    ProblemInstance,
};
pub use output::{
    artifact_paths, config_hash, read_manifest, sha256_hex, table_csv, trials_csv, write_artifacts,
    ArtifactEntry, Manifest, COLUMNS, MANIFEST_NAME, TRIALS_NAME,
};
pub use protocols::{
    linspace, run_error_vs_optimality, run_model_choice_sweep, run_solver_race, summarize,
    ErrVsOptConfig, ExperimentConfig, ExperimentOutput, ModelChoiceConfig, Protocol, RaceConfig,
    RaceModel, Row, Scale, Scenario, SweepModel, Table, TraceConfig, TrialRecord,
};
