//! Optimisation, metrics and the seeded multi-split training protocol.

mod adam;
mod loss;
mod report;
mod split;

use std::time::Instant;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use adam::{AdamHyper, AdamState};
pub use loss::{accuracy, accuracy_counts, bce_loss};
pub use report::{EpochRecord, RunReport, SeedReport};
pub use split::split_indices;

use crate::chem::DatasetTable;
use crate::error::{config_err, Error, Result};
use crate::model::{
    Checkpoint, Lstm, ModelKind, NoiseContext, ParamSet, Qlstm, QlstmConfig, SeedLineage, SequenceModel,
};
use crate::noise::NoiseConfig;
use crate::rng::{derive_seed, substream, substream_seed, StreamRng, Substream};
use crate::scalar::Real;

fn default_batch_size() -> usize {
    256
}
fn default_epochs() -> usize {
    100
}
fn default_lr() -> f64 {
    0.01
}
fn default_split_seeds() -> Vec<u64> {
    vec![0, 1, 2]
}
fn default_val_fraction() -> f64 {
    0.2
}
fn default_threshold() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    #[serde(default = "default_batch_size")]
    pub batch_size: usize,
    #[serde(default = "default_epochs")]
    pub epochs: usize,
    #[serde(default = "default_lr")]
    pub lr: f64,
    #[serde(default = "default_split_seeds")]
    pub split_seeds: Vec<u64>,
    #[serde(default = "default_val_fraction")]
    pub val_fraction: f64,
    #[serde(default = "default_model")]
    pub model: ModelKind,
    #[serde(default)]
    pub noise: Option<NoiseConfig>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
    #[serde(default)]
    pub adam: AdamHyper,
}

fn default_model() -> ModelKind {
    ModelKind::Qlstm
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            batch_size: default_batch_size(),
            epochs: default_epochs(),
            lr: default_lr(),
            split_seeds: default_split_seeds(),
            val_fraction: default_val_fraction(),
            model: default_model(),
            noise: None,
            threshold: default_threshold(),
            adam: AdamHyper::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.lr.is_finite() && self.lr > 0.0) {
            return Err(config_err!("train.lr = {} must be positive", self.lr));
        }
        if !(0.001..=0.1).contains(&self.lr) {
            log::warn!("train.lr = {} is outside the usual [0.001, 0.1] range", self.lr);
        }
        if self.batch_size == 0 {
            return Err(config_err!("train.batch_size must be at least 1"));
        }
        if self.split_seeds.is_empty() {
            return Err(config_err!("train.split_seeds must list at least one seed"));
        }
        if !(self.val_fraction > 0.0 && self.val_fraction < 1.0) {
            return Err(config_err!("train.val_fraction = {} must lie in (0, 1)", self.val_fraction));
        }
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(config_err!("train.threshold = {} must lie in (0, 1)", self.threshold));
        }
        let a = &self.adam;
        if !((0.0..1.0).contains(&a.beta1) && (0.0..1.0).contains(&a.beta2) && a.eps > 0.0) {
            return Err(config_err!("train.adam hyperparameters out of range: {a:?}"));
        }
        if let Some(n) = &self.noise {
            n.validate()?;
            if self.model == ModelKind::Lstm && n.bit_flip_p > 0.0 {
                log::warn!("noise is ignored by the classical LSTM baseline");
            }
        }
        Ok(())
    }

    /// Noise that actually perturbs circuits; `p = 0` runs exactly.
    fn active_noise(&self) -> Option<&NoiseConfig> {
        self.noise.as_ref().filter(|n| n.bit_flip_p > 0.0 && self.model == ModelKind::Qlstm)
    }
}

/// A finished run: the report plus the final parameters of every split.
#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub report: RunReport,
    pub checkpoints: Vec<Checkpoint>,
}

/// Trains one model per split seed in `f64`.
pub fn train_model(config: &TrainConfig, model: &QlstmConfig, dataset: &DatasetTable, global_seed: u64) -> Result<TrainOutcome> {
    train_model_as::<f64>(config, model, dataset, global_seed)
}

/// [`train_model`] with a chosen scalar type.
pub fn train_model_as<T: Real>(
    config: &TrainConfig,
    model: &QlstmConfig,
    dataset: &DatasetTable,
    global_seed: u64,
) -> Result<TrainOutcome> {
    config.validate()?;
    model.validate()?;
    dataset.validate()?;
    if dataset.n_tasks != model.n_tasks {
        return Err(config_err!("dataset has {} tasks but model.n_tasks = {}", dataset.n_tasks, model.n_tasks));
    }
    if dataset.fp_len() != model.fingerprint_len() {
        return Err(config_err!(
            "dataset fingerprints have {} bits but model.seq_len × model.chunk_dim = {}",
            dataset.fp_len(),
            model.fingerprint_len()
        ));
    }
    let mut seeds = Vec::new();
    let mut checkpoints = Vec::new();
    for &split_seed in &config.split_seeds {
        let (seed_report, checkpoint) = match config.model {
            ModelKind::Qlstm => {
                run_split(config, dataset, global_seed, split_seed, |rng| Qlstm::<T>::init(model.clone(), rng))?
            }
            ModelKind::Lstm => {
                run_split(config, dataset, global_seed, split_seed, |rng| Lstm::<T>::init(model.clone(), rng))?
            }
        };
        seeds.push(seed_report);
        checkpoints.push(checkpoint);
    }
    Ok(TrainOutcome { report: RunReport::new(config.model, seeds), checkpoints })
}

fn run_split<T, M, F>(
    config: &TrainConfig,
    dataset: &DatasetTable,
    global_seed: u64,
    split_seed: u64,
    init: F,
) -> Result<(SeedReport, Checkpoint)>
where
    T: Real,
    M: SequenceModel<T>,
    F: FnOnce(&mut StreamRng) -> Result<M>,
{
    let (train_idx, val_idx) = split_indices(dataset.len(), split_seed, config.val_fraction)?;
    let run_seed = derive_seed(&[global_seed, split_seed]);
    let init_seed = substream_seed(run_seed, Substream::Init, 0);
    let mut model = init(&mut substream(run_seed, Substream::Init, 0))?;
    let mut adam = AdamState::<T>::with_hyper(model.params().num_params(), config.adam);
    let noise = config.active_noise();
    let noise_base = noise.map(|n| derive_seed(&[n.rng_seed, run_seed]));

    let eval_ctx = |tag: u64, epoch: usize, sample: usize| {
        noise.zip(noise_base).map(|(n, base)| NoiseContext {
            p: n.bit_flip_p,
            trajectories: n.eval_trajectories,
            rng_seed: derive_seed(&[base, tag, epoch as u64]),
            sample: sample as u64,
        })
    };
    let evaluate = |model: &M, indices: &[usize], tag: u64, epoch: usize| -> Result<f64> {
        let logits = indices
            .par_iter()
            .map(|&i| model.logits(&dataset.rows[i].fingerprint.bits, eval_ctx(tag, epoch, i).as_ref()))
            .collect::<Result<Vec<_>>>()?;
        let labels: Vec<_> = indices.iter().map(|&i| dataset.rows[i].labels.clone()).collect();
        accuracy(&logits, &labels, config.threshold)
    };
    const TAG_VAL: u64 = 1;
    const TAG_TRAIN: u64 = 2;

    let initial_val_accuracy = evaluate(&model, &val_idx, TAG_VAL, 0)?;
    let mut epochs = Vec::with_capacity(config.epochs);
    let mut order = train_idx.clone();
    for epoch in 1..=config.epochs {
        let started = Instant::now();
        order.shuffle(&mut substream(run_seed, Substream::Shuffle, epoch as u64));
        let mut loss_sum = 0.0;
        for (batch_no, batch) in order.chunks(config.batch_size).enumerate() {
            let scale = T::one() / T::from_usize_lossy(batch.len());
            let per_sample = batch
                .par_iter()
                .map(|&i| {
                    let row = &dataset.rows[i];
                    let ctx = noise.zip(noise_base).map(|(n, base)| NoiseContext {
                        p: n.bit_flip_p,
                        trajectories: n.trajectories,
                        rng_seed: derive_seed(&[base, epoch as u64]),
                        sample: i as u64,
                    });
                    let trace = model.forward(&row.fingerprint.bits, ctx.as_ref())?;
                    let (loss, d_logits) = bce_loss(M::trace_logits(&trace), &row.labels)?;
                    let d_logits: Vec<T> = d_logits.into_iter().map(|d| d * scale).collect();
                    let grads = model.backward(&trace, &d_logits)?;
                    Ok((loss, grads))
                })
                .collect::<Result<Vec<_>>>()?;
            // Reduce in sample order so the result does not depend on scheduling.
            let mut grads = model.params().zeros_like();
            let mut batch_loss = 0.0;
            for (loss, g) in &per_sample {
                batch_loss += loss.to_f64_lossy();
                grads.add_assign(g);
            }
            if !batch_loss.is_finite() {
                return Err(Error::NonFinite(format!(
                    "training loss in epoch {epoch}, batch {batch_no} (split seed {split_seed})"
                )));
            }
            loss_sum += batch_loss;
            adam.step(model.params_mut(), &grads, config.lr).map_err(|e| match e {
                Error::NonFinite(m) => {
                    Error::NonFinite(format!("{m} in epoch {epoch}, batch {batch_no} (split seed {split_seed})"))
                }
                other => other,
            })?;
        }
        let train_loss = loss_sum / train_idx.len() as f64;
        let train_accuracy = evaluate(&model, &train_idx, TAG_TRAIN, epoch)?;
        let val_accuracy = evaluate(&model, &val_idx, TAG_VAL, epoch)?;
        let seconds = started.elapsed().as_secs_f64();
        log::info!(
            "{} split {split_seed} epoch {epoch}/{}: loss {train_loss:.5} train acc {train_accuracy:.4} val acc {val_accuracy:.4} ({seconds:.2}s)",
            model.kind().name(),
            config.epochs
        );
        epochs.push(EpochRecord { split_seed, epoch, train_loss, train_accuracy, val_accuracy, seconds });
    }

    let lineage = SeedLineage { global_seed, split_seed, init_seed };
    let checkpoint = Checkpoint::capture(model.kind(), model.config(), lineage, model.params());
    let report = SeedReport::new(split_seed, train_idx.len(), val_idx.len(), initial_val_accuracy, epochs);
    Ok((report, checkpoint))
}
