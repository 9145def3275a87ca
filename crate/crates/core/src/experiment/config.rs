use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::chem::DatasetSpec;
use crate::error::{config_err, Error, Result};
use crate::model::QlstmConfig;
use crate::noise::NoiseConfig;
use crate::score::GateErrorTable;
use crate::train::TrainConfig;

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

/// Everything needed to reproduce one training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub dataset: DatasetSpec,
    #[serde(default)]
    pub model: QlstmConfig,
    #[serde(default)]
    pub train: TrainConfig,
    /// Shorthand for `train.noise`; moved there by [`ExperimentConfig::normalized`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseConfig>,
    #[serde(default)]
    pub gate_errors: Option<GateErrorTable>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text)?;
        cfg.normalized()
    }

    /// Reads a config file; relative dataset paths are later resolved against its directory.
    pub fn load(path: &Path) -> Result<(Self, PathBuf)> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let cfg = Self::from_json(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok((cfg, base))
    }

    /// Moves top-level noise into `train.noise`; rejects configs that set both.
    pub fn normalized(mut self) -> Result<Self> {
        if let Some(n) = self.noise.take() {
            if self.train.noise.is_some() {
                return Err(config_err!("noise given both at top level and in train.noise"));
            }
            self.train.noise = Some(n);
        }
        Ok(self)
    }

    /// Checks every sub-config and that referenced files exist.
    pub fn validate(&self, base: &Path) -> Result<()> {
        self.model.validate()?;
        self.train.validate()?;
        if let Some(t) = &self.gate_errors {
            t.validate()?;
        }
        let dataset = self.resolved_dataset(base);
        match &dataset {
            DatasetSpec::SmilesCsv { path, options } | DatasetSpec::FingerprintCsv { path, options } => {
                if !path.is_file() {
                    return Err(config_err!("dataset.path {} does not exist", path.display()));
                }
                if options.n_bits != self.model.fingerprint_len() {
                    return Err(config_err!(
                        "dataset.options.n_bits = {} but model.seq_len × model.chunk_dim = {}",
                        options.n_bits,
                        self.model.fingerprint_len()
                    ));
                }
            }
            DatasetSpec::Synthetic(s) => {
                if s.fp_len != self.model.fingerprint_len() {
                    return Err(config_err!(
                        "dataset.fp_len = {} but model.seq_len × model.chunk_dim = {}",
                        s.fp_len,
                        self.model.fingerprint_len()
                    ));
                }
                if self.model.n_tasks != 1 {
                    return Err(config_err!("synthetic data has one task; model.n_tasks = {}", self.model.n_tasks));
                }
            }
        }
        Ok(())
    }

    pub fn resolved_dataset(&self, base: &Path) -> DatasetSpec {
        let mut d = self.dataset.clone();
        d.resolve_relative(base);
        d
    }

    /// Short name for table columns: the file stem, or `synthetic`.
    pub fn dataset_label(&self) -> String {
        match &self.dataset {
            DatasetSpec::SmilesCsv { path, .. } | DatasetSpec::FingerprintCsv { path, .. } => {
                path.file_stem().map_or_else(|| "dataset".into(), |s| s.to_string_lossy().into_owned())
            }
            DatasetSpec::Synthetic(_) => "synthetic".into(),
        }
    }

    pub fn hash(&self) -> Result<ConfigHash> {
        ConfigHash::of(self)
    }
}

/// SHA-256 of canonical JSON: keys sorted, defaults filled in, `output_dir` left out.
pub fn canonical_digest<S: Serialize>(value: &S) -> Result<String> {
    let v = serde_json::to_value(value)?;
    let bytes = serde_json::to_vec(&v)?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

/// Digest of the whole config plus one per component, so that sweeps can show
/// which parts of two runs agree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigHash {
    pub full: String,
    pub dataset: String,
    pub model: String,
    /// `train` without its noise block.
    pub train: String,
    pub noise: String,
    pub gate_errors: String,
    pub seed: String,
}

impl ConfigHash {
    pub fn of(config: &ExperimentConfig) -> Result<Self> {
        let cfg = config.clone().normalized()?;
        let mut train = cfg.train.clone();
        let noise = train.noise.take();
        let full = canonical_digest(&serde_json::json!({
            "dataset": cfg.dataset,
            "model": cfg.model,
            "train": cfg.train,
            "gate_errors": cfg.gate_errors,
            "seed": cfg.seed,
        }))?;
        Ok(ConfigHash {
            full,
            dataset: canonical_digest(&cfg.dataset)?,
            model: canonical_digest(&cfg.model)?,
            train: canonical_digest(&train)?,
            noise: canonical_digest(&noise)?,
            gate_errors: canonical_digest(&cfg.gate_errors)?,
            seed: canonical_digest(&cfg.seed)?,
        })
    }

    pub fn short(&self) -> &str {
        &self.full[..12]
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}\ndataset {}\nmodel {}\ntrain {}\nnoise {}\ngate_errors {}\nseed {}\n",
            self.full, self.dataset, self.model, self.train, self.noise, self.gate_errors, self.seed
        )
    }
}
