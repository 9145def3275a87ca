use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::model::QlstmConfig;
use crate::quantum::Circuit;
use crate::score::{error_score, score_qlstm_circuits, GateErrorTable, QlstmScore, ScoreBreakdown};

/// Qubit counts reported alongside any architecture score.
pub const SCORE_SEQUENCE: [usize; 4] = [2, 4, 8, 12];

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "input", rename_all = "snake_case")]
pub enum ScoreOutput {
    Circuit {
        n_qubits: usize,
        table: GateErrorTable,
        breakdown: ScoreBreakdown,
    },
    Architecture {
        table: GateErrorTable,
        config: QlstmConfig,
        score: QlstmScore,
        /// The same architecture re-scored at 2, 4, 8 and 12 qubits.
        sequence: Vec<QlstmScore>,
    },
}

/// Scores a circuit text file, a model config or an experiment config.
///
/// JSON input with a `dataset` key is read as an experiment config, other
/// JSON as a model config; anything else as circuit text.
pub fn score_path(input: &Path, table_path: Option<&Path>) -> Result<ScoreOutput> {
    let text = std::fs::read_to_string(input).map_err(|e| Error::io(input, e))?;
    let mut table = match table_path {
        Some(p) => {
            let t = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
            Some(serde_json::from_str::<GateErrorTable>(&t)?)
        }
        None => None,
    };
    let json: Option<serde_json::Value> = serde_json::from_str(&text).ok().filter(serde_json::Value::is_object);
    match json {
        Some(v) => {
            let config = if v.get("dataset").is_some() {
                let exp = ExperimentConfig::from_json(&text)?;
                table = table.or(exp.gate_errors);
                exp.model
            } else {
                serde_json::from_value::<QlstmConfig>(v)?
            };
            score_architecture(&config, &table.unwrap_or_default())
        }
        None => {
            let circuit = Circuit::<f64>::parse_auto(&text)?;
            let table = table.unwrap_or_default();
            Ok(ScoreOutput::Circuit { n_qubits: circuit.n_qubits(), table, breakdown: error_score(&circuit, &table)? })
        }
    }
}

pub fn score_architecture(config: &QlstmConfig, table: &GateErrorTable) -> Result<ScoreOutput> {
    let score = score_qlstm_circuits(config, table)?;
    let sequence = SCORE_SEQUENCE
        .iter()
        .map(|&n| score_qlstm_circuits(&QlstmConfig { n_qubits: n, ..config.clone() }, table))
        .collect::<Result<Vec<_>>>()?;
    Ok(ScoreOutput::Architecture { table: *table, config: config.clone(), score, sequence })
}

impl ScoreOutput {
    pub fn render(&self) -> String {
        let mut s = String::new();
        match self {
            ScoreOutput::Circuit { n_qubits, table, breakdown } => {
                let _ = writeln!(
                    s,
                    "circuit on {n_qubits} qubits, e1 = {}, e2 = {}",
                    table.single_qubit_error, table.two_qubit_error
                );
                render_breakdown(&mut s, breakdown);
            }
            ScoreOutput::Architecture { table, config, score, sequence } => {
                let _ = writeln!(
                    s,
                    "QLSTM cell: {} qubits, depth {}, e1 = {}, e2 = {}",
                    config.n_qubits, config.depth, table.single_qubit_error, table.two_qubit_error
                );
                let _ = writeln!(s, "{:<10} {:>6} {:>6} {:>10}", "circuit", "layers", "gates", "s");
                for v in &score.per_vqc {
                    let gates: usize = v.breakdown.layers.iter().map(|l| l.gate_count).sum();
                    let _ = writeln!(s, "{:<10} {:>6} {:>6} {:>10.6}", v.name, v.breakdown.depth, gates, v.breakdown.score);
                }
                let _ = writeln!(s, "mean {:.6}  max {:.6}  cell {:.6}", score.mean, score.max, score.cell);
                let _ = writeln!(s, "\n{:>6} {:>10} {:>10} {:>10}", "qubits", "mean", "max", "cell");
                for q in sequence {
                    let _ = writeln!(s, "{:>6} {:>10.6} {:>10.6} {:>10.6}", q.n_qubits, q.mean, q.max, q.cell);
                }
            }
        }
        s
    }
}

fn render_breakdown(s: &mut String, b: &ScoreBreakdown) {
    let _ = writeln!(s, "{:>5} {:>6} {:>6} {:>5} {:>12}", "layer", "1q", "2q", "m", "avg error");
    for l in &b.layers {
        let _ = writeln!(
            s,
            "{:>5} {:>6} {:>6} {:>5} {:>12.8}",
            l.layer, l.single_qubit_gates, l.two_qubit_gates, l.gate_count, l.avg_error
        );
    }
    let _ = writeln!(s, "depth {}  s = {:.6}", b.depth, b.score);
}
