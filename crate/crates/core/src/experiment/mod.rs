//! Reproducible experiments: config files, hashed output directories, sweeps,
//! circuit scoring and result tables. The `qlstm` binary is a thin shell over
//! these functions.
//!
//! A training run writes
//!
//! ```text
//! <output_dir>/run-<hash12>/
//!     config.json        normalized config echo
//!     config_hash.txt    full digest, then one digest per component
//!     report.csv         seed,epoch,train_loss,train_accuracy,val_accuracy
//!     timing.csv         seed,epoch,seconds
//!     summary.json       per-seed finals, cross-seed mean, circuit score
//!     checkpoints/split-<seed>.json
//! ```
//!
//! and a sweep writes `<output_dir>/sweep-<axis>-<hash12>/` holding
//! `table.csv`, `sweep.json` and one run directory per leg.

mod config;
mod report;
mod run;
mod score_cmd;
mod sweep;

use std::path::Path;

pub use config::{canonical_digest, ConfigHash, ExperimentConfig};
pub use report::{collect_results, ResultsTable};
pub use run::{run_dir_name, run_experiment, DatasetSummary, RunArtifacts, RunSummary, SeedSummary, RUN_FILES};
pub use score_cmd::{score_architecture, score_path, ScoreOutput, SCORE_SEQUENCE};
pub use sweep::{run_sweep, SweepArtifacts, SweepAxis, SweepLeg, SweepManifest, SweepOptions};

use crate::chem::{load_dataset, DatasetFormat, LoadOptions};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FingerprintSummary {
    pub rows: usize,
    pub skipped: usize,
}

/// SMILES CSV in, fingerprint CSV out. The output is only created once the
/// input has been read successfully.
pub fn fingerprint_file(input: &Path, output: &Path, options: &LoadOptions) -> Result<FingerprintSummary> {
    let table = load_dataset(input, DatasetFormat::SmilesCsv, options)?;
    if let Some(parent) = output.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
    }
    table.write_fingerprint_csv(output)?;
    Ok(FingerprintSummary { rows: table.len(), skipped: table.provenance.skipped.len() })
}
