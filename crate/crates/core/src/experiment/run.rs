use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::{ConfigHash, ExperimentConfig};
use crate::chem::DatasetTable;
use crate::error::{Error, Result};
use crate::model::ModelKind;
use crate::score::{score_qlstm_circuits, QlstmScore};
use crate::train::{train_model, RunReport};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSummary {
    pub source: String,
    pub rows: usize,
    pub skipped: usize,
    pub n_tasks: usize,
    pub fp_len: usize,
    pub computed_fingerprints: bool,
}

impl DatasetSummary {
    fn of(t: &DatasetTable) -> Self {
        DatasetSummary {
            source: t.provenance.source.clone(),
            rows: t.len(),
            skipped: t.provenance.skipped.len(),
            n_tasks: t.n_tasks,
            fp_len: t.fp_len(),
            computed_fingerprints: t.provenance.computed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedSummary {
    pub split_seed: u64,
    pub n_train: usize,
    pub n_val: usize,
    pub initial_val_accuracy: f64,
    pub final_train_accuracy: Option<f64>,
    pub final_val_accuracy: f64,
}

/// Contents of `summary.json`. Contains no timing, so it is reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub config_hash: String,
    pub dataset_label: String,
    pub model: ModelKind,
    pub config: ExperimentConfig,
    pub dataset: DatasetSummary,
    pub seeds: Vec<SeedSummary>,
    pub mean_val_accuracy: f64,
    pub mean_train_accuracy: Option<f64>,
    /// Circuit error score of the trained architecture (quantum model only).
    pub circuit_score: Option<QlstmScore>,
}

/// Where a finished run was written and what it produced.
#[derive(Debug, Clone)]
pub struct RunArtifacts {
    pub dir: PathBuf,
    pub hash: ConfigHash,
    pub report: RunReport,
    pub summary: RunSummary,
}

pub const RUN_FILES: [&str; 5] = ["config.json", "config_hash.txt", "report.csv", "timing.csv", "summary.json"];

pub fn run_dir_name(hash: &ConfigHash) -> String {
    format!("run-{}", hash.short())
}

/// Trains per `config` and writes `<output_dir>/run-<hash>/`. Files are written to a
/// `.partial` sibling first and renamed at the end, so the final directory only
/// ever holds a complete run.
pub fn run_experiment(config: &ExperimentConfig, base: &Path) -> Result<RunArtifacts> {
    let config = config.clone().normalized()?;
    config.validate(base)?;
    let hash = config.hash()?;
    let table = config.resolved_dataset(base).load()?;
    log::info!(
        "run {}: {} rows from {} ({} skipped)",
        hash.short(),
        table.len(),
        table.provenance.source,
        table.provenance.skipped.len()
    );
    let outcome = train_model(&config.train, &config.model, &table, config.seed)?;

    let circuit_score = match config.train.model {
        ModelKind::Qlstm => Some(score_qlstm_circuits(&config.model, &config.gate_errors.unwrap_or_default())?),
        ModelKind::Lstm => None,
    };
    let summary = RunSummary {
        config_hash: hash.full.clone(),
        dataset_label: config.dataset_label(),
        model: config.train.model,
        config: config.clone(),
        dataset: DatasetSummary::of(&table),
        seeds: outcome
            .report
            .seeds
            .iter()
            .map(|s| SeedSummary {
                split_seed: s.split_seed,
                n_train: s.n_train,
                n_val: s.n_val,
                initial_val_accuracy: s.initial_val_accuracy,
                final_train_accuracy: s.final_train_accuracy,
                final_val_accuracy: s.final_val_accuracy,
            })
            .collect(),
        mean_val_accuracy: outcome.report.mean_val_accuracy,
        mean_train_accuracy: outcome.report.mean_train_accuracy,
        circuit_score,
    };

    let out = &config.output_dir;
    fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let dir = out.join(run_dir_name(&hash));
    let partial = out.join(format!("{}.partial", run_dir_name(&hash)));
    if partial.exists() {
        fs::remove_dir_all(&partial).map_err(|e| Error::io(&partial, e))?;
    }
    let ckpt_dir = partial.join("checkpoints");
    fs::create_dir_all(&ckpt_dir).map_err(|e| Error::io(&ckpt_dir, e))?;
    write_json(&partial.join("config.json"), &config)?;
    fs::write(partial.join("config_hash.txt"), hash.to_text()).map_err(|e| Error::io(&partial, e))?;
    outcome.report.write_csv(&partial.join("report.csv"))?;
    outcome.report.write_timing_csv(&partial.join("timing.csv"))?;
    write_json(&partial.join("summary.json"), &summary)?;
    for c in &outcome.checkpoints {
        c.save(&ckpt_dir.join(format!("split-{}.json", c.seed_lineage.split_seed)))?;
    }
    if dir.exists() {
        fs::remove_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    }
    fs::rename(&partial, &dir).map_err(|e| Error::io(&dir, e))?;
    Ok(RunArtifacts { dir, hash, report: outcome.report, summary })
}

pub(crate) fn write_json<S: Serialize>(path: &Path, value: &S) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Error::io(path, e))
}
