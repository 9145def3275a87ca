use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{canonical_digest, ExperimentConfig};
use super::run::{run_experiment, write_json};
use crate::error::{config_err, usage, Error, Result};
use crate::model::ModelKind;
use crate::noise::NoiseConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Qubits,
    Noise,
    Lr,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Qubits => "qubits",
            SweepAxis::Noise => "noise",
            SweepAxis::Lr => "lr",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "qubits" => Ok(SweepAxis::Qubits),
            "noise" => Ok(SweepAxis::Noise),
            "lr" => Ok(SweepAxis::Lr),
            other => Err(usage!("unknown sweep axis '{other}' (expected qubits, noise or lr)")),
        }
    }
}

impl SweepAxis {
    /// Returns `base` with this axis set to `value`.
    pub fn apply(self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut c = base.clone().normalized()?;
        match self {
            SweepAxis::Qubits => {
                if value.fract() != 0.0 || value < 0.0 {
                    return Err(config_err!("qubit count {value} is not a whole number"));
                }
                c.model.n_qubits = value as usize;
            }
            SweepAxis::Noise => {
                let mut n = c.train.noise.take().unwrap_or_else(|| NoiseConfig::new(value));
                n.bit_flip_p = value;
                c.train.noise = Some(n);
            }
            SweepAxis::Lr => c.train.lr = value,
        }
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepLeg {
    pub value: f64,
    pub model: ModelKind,
    pub config_hash: Option<String>,
    pub run_dir: Option<PathBuf>,
    pub mean_val_accuracy: Option<f64>,
    pub error: Option<String>,
}

/// Contents of `sweep.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepManifest {
    pub axis: SweepAxis,
    pub dataset_label: String,
    pub values: Vec<f64>,
    pub models: Vec<ModelKind>,
    pub legs: Vec<SweepLeg>,
}

impl SweepManifest {
    pub fn columns(&self) -> Vec<String> {
        self.models.iter().map(|m| format!("{}:{}", self.dataset_label, m.name())).collect()
    }

    pub fn cell(&self, value: f64, model: ModelKind) -> Option<&SweepLeg> {
        self.legs.iter().find(|l| l.value == value && l.model == model)
    }

    /// Rows are axis values, columns `<dataset>:<model>`, cells the cross-seed
    /// mean validation accuracy or `FAILED`.
    pub fn write_table(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec![self.axis.to_string()];
        header.extend(self.columns());
        w.write_record(&header)?;
        for &v in &self.values {
            let mut row = vec![v.to_string()];
            for &m in &self.models {
                row.push(format_cell(self.cell(v, m)));
            }
            w.write_record(&row)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

pub(crate) fn format_cell(leg: Option<&SweepLeg>) -> String {
    match leg {
        Some(SweepLeg { mean_val_accuracy: Some(a), .. }) => format!("{a:.4}"),
        Some(_) => "FAILED".into(),
        None => String::new(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepOptions {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    /// Empty means the model named in the config.
    pub models: Vec<ModelKind>,
    /// Legs run concurrently when greater than one.
    pub parallel: usize,
}

#[derive(Debug, Clone)]
pub struct SweepArtifacts {
    pub dir: PathBuf,
    pub manifest: SweepManifest,
}

/// Runs every (value, model) leg. A failing leg is recorded and the sweep goes on.
pub fn run_sweep(base: &ExperimentConfig, base_dir: &Path, options: &SweepOptions) -> Result<SweepArtifacts> {
    if options.values.is_empty() {
        return Err(config_err!("sweep needs at least one value"));
    }
    if options.values.iter().any(|v| !v.is_finite()) {
        return Err(config_err!("sweep values must be finite"));
    }
    let base = base.clone().normalized()?;
    let models = if options.models.is_empty() { vec![base.train.model] } else { options.models.clone() };

    let id = canonical_digest(&serde_json::json!({
        "base": base.hash()?.full,
        "axis": options.axis,
        "values": options.values,
        "models": models,
    }))?;
    let dir = base.output_dir.join(format!("sweep-{}-{}", options.axis, &id[..12]));
    fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;

    let jobs: Vec<(f64, ModelKind)> =
        options.values.iter().flat_map(|&v| models.iter().map(move |&m| (v, m))).collect();
    let run_leg = |&(value, model): &(f64, ModelKind)| -> SweepLeg {
        let result = options.axis.apply(&base, value).and_then(|mut c| {
            c.train.model = model;
            c.output_dir = dir.clone();
            run_experiment(&c, base_dir)
        });
        match result {
            Ok(run) => SweepLeg {
                value,
                model,
                config_hash: Some(run.hash.full),
                run_dir: run.dir.file_name().map(PathBuf::from),
                mean_val_accuracy: Some(run.summary.mean_val_accuracy),
                error: None,
            },
            Err(e) => {
                log::error!("sweep leg {}={value} {}: {e}", options.axis, model.name());
                SweepLeg { value, model, config_hash: None, run_dir: None, mean_val_accuracy: None, error: Some(e.to_string()) }
            }
        }
    };
    let legs: Vec<SweepLeg> = if options.parallel > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(options.parallel)
            .build()
            .map_err(|e| config_err!("cannot start {} sweep workers: {e}", options.parallel))?;
        pool.install(|| jobs.par_iter().map(run_leg).collect())
    } else {
        jobs.iter().map(run_leg).collect()
    };

    let manifest = SweepManifest {
        axis: options.axis,
        dataset_label: base.dataset_label(),
        values: options.values.clone(),
        models,
        legs,
    };
    manifest.write_table(&dir.join("table.csv"))?;
    write_json(&dir.join("sweep.json"), &manifest)?;
    Ok(SweepArtifacts { dir, manifest })
}
