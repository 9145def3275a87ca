//! Labelled fingerprint tables loaded from CSV or generated synthetically.

use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::morgan::{morgan_fingerprint, Fingerprint, DEFAULT_N_BITS, DEFAULT_RADIUS};
use super::smiles::{parse_smiles, strip_stereo};
use crate::error::{config_err, Error, Result};
use crate::rng::{substream, Substream};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetFormat {
    SmilesCsv,
    FingerprintCsv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LoadOptions {
    pub radius: usize,
    pub n_bits: usize,
    pub smiles_column: String,
    pub fp_column: String,
    /// Label columns in order; `None` takes every column except the input column.
    pub label_columns: Option<Vec<String>>,
    /// Remove `/`, `\` and `@` before parsing instead of rejecting the row.
    pub strip_stereo: bool,
    pub max_rows: Option<usize>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            radius: DEFAULT_RADIUS,
            n_bits: DEFAULT_N_BITS,
            smiles_column: "smiles".into(),
            fp_column: "fp".into(),
            label_columns: None,
            strip_stereo: false,
            max_rows: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticSpec {
    pub n_samples: usize,
    pub fp_len: usize,
    /// Probability that a bit differs from its class prototype.
    pub flip_prob: f64,
    pub seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec { n_samples: 200, fp_len: 256, flip_prob: 0.1, seed: 0 }
    }
}

/// Where a run's data comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "format", rename_all = "snake_case")]
pub enum DatasetSpec {
    SmilesCsv {
        path: PathBuf,
        #[serde(default)]
        options: LoadOptions,
    },
    FingerprintCsv {
        path: PathBuf,
        #[serde(default)]
        options: LoadOptions,
    },
    Synthetic(SyntheticSpec),
}

impl DatasetSpec {
    pub fn load(&self) -> Result<DatasetTable> {
        match self {
            DatasetSpec::SmilesCsv { path, options } => load_dataset(path, DatasetFormat::SmilesCsv, options),
            DatasetSpec::FingerprintCsv { path, options } => {
                load_dataset(path, DatasetFormat::FingerprintCsv, options)
            }
            DatasetSpec::Synthetic(spec) => synthetic_clusters(spec),
        }
    }

    /// Rewrites a relative path against `base`.
    pub fn resolve_relative(&mut self, base: &Path) {
        if let DatasetSpec::SmilesCsv { path, .. } | DatasetSpec::FingerprintCsv { path, .. } = self {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub id: String,
    pub fingerprint: Fingerprint,
    pub labels: Vec<Option<bool>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SkippedRow {
    pub line: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Provenance {
    pub source: String,
    /// True when fingerprints were computed here from SMILES.
    pub computed: bool,
    pub rows_read: usize,
    pub skipped: Vec<SkippedRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetTable {
    pub rows: Vec<DatasetRow>,
    pub n_tasks: usize,
    pub task_names: Vec<String>,
    pub provenance: Provenance,
}

impl DatasetTable {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn fp_len(&self) -> usize {
        self.rows.first().map_or(0, |r| r.fingerprint.len())
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows.is_empty() {
            return Err(config_err!("dataset {} has no rows", self.provenance.source));
        }
        if self.task_names.len() != self.n_tasks || self.n_tasks == 0 {
            return Err(config_err!("dataset declares {} tasks with {} names", self.n_tasks, self.task_names.len()));
        }
        let len = self.fp_len();
        for r in &self.rows {
            if r.labels.len() != self.n_tasks {
                return Err(config_err!("row {} has {} labels, expected {}", r.id, r.labels.len(), self.n_tasks));
            }
            if r.fingerprint.len() != len {
                return Err(config_err!("row {} fingerprint length {} differs from {len}", r.id, r.fingerprint.len()));
            }
        }
        Ok(())
    }

    /// Writes `fp,<task...>` rows readable by `load_dataset` as a fingerprint CSV.
    pub fn write_fingerprint_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        let mut header = vec!["fp".to_string()];
        header.extend(self.task_names.iter().cloned());
        w.write_record(&header)?;
        for r in &self.rows {
            let mut rec = vec![r.fingerprint.to_bitstring()];
            rec.extend(r.labels.iter().map(|l| match l {
                Some(true) => "1".to_string(),
                Some(false) => "0".to_string(),
                None => String::new(),
            }));
            w.write_record(&rec)?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }
}

fn parse_label(cell: &str, line: u64, column: &str) -> Result<Option<bool>> {
    let cell = cell.trim();
    if cell.is_empty() {
        return Ok(None);
    }
    match cell.parse::<f64>() {
        Ok(v) if v == 0.0 => Ok(Some(false)),
        Ok(v) if v == 1.0 => Ok(Some(true)),
        _ => Err(Error::Format { line: line as usize, message: format!("label '{cell}' in column '{column}' is not 0, 1 or empty") }),
    }
}

pub fn load_dataset(path: &Path, format: DatasetFormat, options: &LoadOptions) -> Result<DatasetTable> {
    if options.n_bits == 0 {
        return Err(config_err!("n_bits must be positive"));
    }
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new().flexible(true).trim(csv::Trim::Headers).from_reader(file);
    let headers = reader.headers()?.clone();
    let input_col = match format {
        DatasetFormat::SmilesCsv => &options.smiles_column,
        DatasetFormat::FingerprintCsv => &options.fp_column,
    };
    let input_idx = headers
        .iter()
        .position(|h| h == input_col)
        .ok_or_else(|| Error::Format { line: 1, message: format!("missing column '{input_col}'") })?;
    let label_names: Vec<String> = match &options.label_columns {
        Some(cols) => cols.clone(),
        None => headers.iter().enumerate().filter(|&(i, _)| i != input_idx).map(|(_, h)| h.to_string()).collect(),
    };
    if label_names.is_empty() {
        return Err(Error::Format { line: 1, message: "no label columns".into() });
    }
    let label_idx = label_names
        .iter()
        .map(|name| {
            headers
                .iter()
                .position(|h| h == name)
                .ok_or_else(|| Error::Format { line: 1, message: format!("missing label column '{name}'") })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut provenance = Provenance {
        source: path.display().to_string(),
        computed: format == DatasetFormat::SmilesCsv,
        ..Default::default()
    };
    let mut rows = Vec::new();
    for record in reader.records() {
        if options.max_rows.is_some_and(|m| provenance.rows_read >= m) {
            break;
        }
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != headers.len() {
            return Err(Error::Format {
                line: line as usize,
                message: format!("expected {} fields, found {}", headers.len(), record.len()),
            });
        }
        provenance.rows_read += 1;
        let labels = label_idx
            .iter()
            .zip(&label_names)
            .map(|(&i, name)| parse_label(&record[i], line, name))
            .collect::<Result<Vec<_>>>()?;
        let input = record[input_idx].trim();
        let fingerprint = match format {
            DatasetFormat::FingerprintCsv => {
                let fp = Fingerprint::from_bitstring(input, options.radius)
                    .map_err(|e| Error::Format { line: line as usize, message: e.to_string() })?;
                if fp.len() != options.n_bits {
                    return Err(Error::Format {
                        line: line as usize,
                        message: format!("fingerprint has {} bits, expected {}", fp.len(), options.n_bits),
                    });
                }
                fp
            }
            DatasetFormat::SmilesCsv => {
                let text = if options.strip_stereo { strip_stereo(input) } else { input.to_string() };
                match parse_smiles(&text).and_then(|m| morgan_fingerprint(&m, options.radius, options.n_bits)) {
                    Ok(fp) => fp,
                    Err(e) => {
                        log::warn!("{}:{line}: skipping '{input}': {e}", provenance.source);
                        provenance.skipped.push(SkippedRow { line, reason: e.to_string() });
                        continue;
                    }
                }
            }
        };
        let id = match format {
            DatasetFormat::SmilesCsv => input.to_string(),
            DatasetFormat::FingerprintCsv => format!("line{line}"),
        };
        rows.push(DatasetRow { id, fingerprint, labels });
    }
    let table = DatasetTable { rows, n_tasks: label_names.len(), task_names: label_names, provenance };
    table.validate()?;
    Ok(table)
}

/// Two noisy clusters around random prototypes; class `i % 2`.
pub fn synthetic_clusters(spec: &SyntheticSpec) -> Result<DatasetTable> {
    if spec.n_samples < 2 || spec.fp_len == 0 {
        return Err(config_err!("synthetic dataset needs at least 2 samples and a positive length"));
    }
    if !(0.0..0.5).contains(&spec.flip_prob) {
        return Err(config_err!("flip_prob {} outside [0, 0.5)", spec.flip_prob));
    }
    let mut rng = substream(spec.seed, Substream::Data, 0);
    let prototypes: [Vec<bool>; 2] = [
        (0..spec.fp_len).map(|_| rng.gen::<bool>()).collect(),
        (0..spec.fp_len).map(|_| rng.gen::<bool>()).collect(),
    ];
    let rows = (0..spec.n_samples)
        .map(|i| {
            let class = i % 2;
            let bits = prototypes[class].iter().map(|&b| b ^ (rng.gen::<f64>() < spec.flip_prob)).collect();
            DatasetRow {
                id: format!("synthetic{i}"),
                fingerprint: Fingerprint::from_bits(bits, 0),
                labels: vec![Some(class == 1)],
            }
        })
        .collect();
    let table = DatasetTable {
        rows,
        n_tasks: 1,
        task_names: vec!["label".into()],
        provenance: Provenance {
            source: format!("synthetic(n={}, len={}, flip={}, seed={})", spec.n_samples, spec.fp_len, spec.flip_prob, spec.seed),
            computed: true,
            rows_read: spec.n_samples,
            skipped: Vec::new(),
        },
    };
    Ok(table)
}
