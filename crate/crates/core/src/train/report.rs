use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelKind;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub split_seed: u64,
    pub epoch: usize,
    /// Mean per-sample loss over the epoch's mini-batches.
    pub train_loss: f64,
    /// Measured after the epoch's last update.
    pub train_accuracy: f64,
    pub val_accuracy: f64,
    /// Wall-clock; excluded from the deterministic report CSV.
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedReport {
    pub split_seed: u64,
    pub n_train: usize,
    pub n_val: usize,
    pub initial_val_accuracy: f64,
    pub final_train_accuracy: Option<f64>,
    pub final_val_accuracy: f64,
    pub epochs: Vec<EpochRecord>,
}

impl SeedReport {
    pub fn new(split_seed: u64, n_train: usize, n_val: usize, initial_val_accuracy: f64, epochs: Vec<EpochRecord>) -> Self {
        let last = epochs.last();
        SeedReport {
            split_seed,
            n_train,
            n_val,
            initial_val_accuracy,
            final_train_accuracy: last.map(|e| e.train_accuracy),
            final_val_accuracy: last.map_or(initial_val_accuracy, |e| e.val_accuracy),
            epochs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub model: ModelKind,
    pub seeds: Vec<SeedReport>,
    /// Cross-seed mean of the final validation accuracies.
    pub mean_val_accuracy: f64,
    pub mean_train_accuracy: Option<f64>,
}

impl RunReport {
    pub fn new(model: ModelKind, seeds: Vec<SeedReport>) -> Self {
        let n = seeds.len().max(1) as f64;
        let mean_val_accuracy = seeds.iter().map(|s| s.final_val_accuracy).sum::<f64>() / n;
        let train: Option<Vec<f64>> = seeds.iter().map(|s| s.final_train_accuracy).collect();
        let mean_train_accuracy = train.map(|t| t.iter().sum::<f64>() / n);
        RunReport { model, seeds, mean_val_accuracy, mean_train_accuracy }
    }

    pub fn epochs(&self) -> impl Iterator<Item = &EpochRecord> {
        self.seeds.iter().flat_map(|s| s.epochs.iter())
    }

    /// One row per (seed, epoch); contains no timing so reruns compare byte for byte.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["seed", "epoch", "train_loss", "train_accuracy", "val_accuracy"])?;
        for e in self.epochs() {
            w.write_record([
                e.split_seed.to_string(),
                e.epoch.to_string(),
                e.train_loss.to_string(),
                e.train_accuracy.to_string(),
                e.val_accuracy.to_string(),
            ])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn write_timing_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["seed", "epoch", "seconds"])?;
        for e in self.epochs() {
            w.write_record([e.split_seed.to_string(), e.epoch.to_string(), format!("{:.6}", e.seconds)])?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// The report with timing zeroed, for equality checks across reruns.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        for s in &mut r.seeds {
            for e in &mut s.epochs {
                e.seconds = 0.0;
            }
        }
        r
    }
}
