//! Model checkpoints: one JSON document holding the model kind, its config,
//! the seeds that produced it, and every parameter tensor in declared order.
//!
//! ```json
//! {
//!   "format": "qlstm-checkpoint",
//!   "version": 1,
//!   "model": "qlstm",
//!   "scalar": "f64",
//!   "config": { "n_qubits": 2, ... },
//!   "seed_lineage": { "global_seed": 0, "split_seed": 1, "init_seed": 1234 },
//!   "tensors": [ { "name": "w_in", "shape": [130, 2], "values": [...] }, ... ]
//! }
//! ```
//!
//! Values are stored as `f64` regardless of the training scalar.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ModelKind, ParamSet, QlstmConfig};
use crate::error::{usage, Error, Result};
use crate::scalar::Real;

pub const CHECKPOINT_FORMAT: &str = "qlstm-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedLineage {
    pub global_seed: u64,
    pub split_seed: u64,
    pub init_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorRecord {
    pub name: String,
    pub shape: Vec<usize>,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub model: ModelKind,
    pub scalar: String,
    pub config: QlstmConfig,
    pub seed_lineage: SeedLineage,
    pub tensors: Vec<TensorRecord>,
}

impl Checkpoint {
    pub fn capture<T: Real, P: ParamSet<T>>(model: ModelKind, config: &QlstmConfig, seed_lineage: SeedLineage, params: &P) -> Self {
        let tensors = params
            .tensors()
            .into_iter()
            .map(|t| TensorRecord { name: t.name, shape: t.shape, values: t.data.iter().map(|v| v.to_f64_lossy()).collect() })
            .collect();
        Checkpoint {
            format: CHECKPOINT_FORMAT.to_string(),
            version: CHECKPOINT_VERSION,
            model,
            scalar: T::NAME.to_string(),
            config: config.clone(),
            seed_lineage,
            tensors,
        }
    }

    /// Copies stored values into `params`, checking names and shapes.
    pub fn restore_into<T: Real, P: ParamSet<T>>(&self, params: &mut P) -> Result<()> {
        if self.format != CHECKPOINT_FORMAT || self.version != CHECKPOINT_VERSION {
            return Err(usage!("unsupported checkpoint {} v{}", self.format, self.version));
        }
        let expected: Vec<(String, Vec<usize>)> = params.tensors().into_iter().map(|t| (t.name, t.shape)).collect();
        if expected.len() != self.tensors.len() {
            return Err(usage!("checkpoint has {} tensors, model has {}", self.tensors.len(), expected.len()));
        }
        for ((name, shape), rec) in expected.iter().zip(&self.tensors) {
            if *name != rec.name || *shape != rec.shape || rec.values.len() != shape.iter().product::<usize>() {
                return Err(usage!("checkpoint tensor `{}` {:?} does not match model tensor `{name}` {shape:?}", rec.name, rec.shape));
            }
        }
        for (dst, rec) in params.tensors_mut().into_iter().zip(&self.tensors) {
            for (d, &v) in dst.iter_mut().zip(&rec.values) {
                *d = T::lit(v);
            }
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self)?;
        std::fs::write(path, text).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}
