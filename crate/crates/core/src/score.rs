//! Circuit error-rate score.
//!
//! For a circuit with layers `j = 1..d`, each layer holding `N_1` single-qubit
//! and `N_2` two-qubit gates with error rates `E_1`, `E_2`:
//!
//! ```text
//! avg_j = (N_1 E_1 + N_2 E_2) / (N_1 + N_2)
//! m_j   = N_1 + N_2
//! s     = 1 - prod_j (1 - avg_j)^(m_j)
//! ```
//!
//! Empty layers contribute nothing and are skipped.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, usage, Result};
use crate::model::QlstmConfig;
use crate::quantum::Circuit;
use crate::scalar::Real;
use crate::vqc::{build_vqc_circuit, VqcParams};

/// Per-gate error rates. Defaults are median figures for a current
/// superconducting processor: 0.03% single-qubit, 0.32% two-qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GateErrorTable {
    pub single_qubit_error: f64,
    pub two_qubit_error: f64,
}

impl Default for GateErrorTable {
    fn default() -> Self {
        GateErrorTable { single_qubit_error: 0.0003, two_qubit_error: 0.0032 }
    }
}

impl GateErrorTable {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("single_qubit_error", self.single_qubit_error), ("two_qubit_error", self.two_qubit_error)] {
            if !(0.0..1.0).contains(&v) {
                return Err(config_err!("{name} = {v} must lie in [0, 1)"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerScore {
    /// Index of the layer in the circuit.
    pub layer: usize,
    pub single_qubit_gates: usize,
    pub two_qubit_gates: usize,
    /// `m_j`
    pub gate_count: usize,
    /// `(sum_i E_i N_i / sum_i N_i)_j`
    pub avg_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub layers: Vec<LayerScore>,
    /// Circuit layer count `d`.
    pub depth: usize,
    pub score: f64,
}

pub fn error_score<T: Real>(circuit: &Circuit<T>, table: &GateErrorTable) -> Result<ScoreBreakdown> {
    table.validate()?;
    if circuit.depth() == 0 {
        return Err(usage!("cannot score a circuit with no layers"));
    }
    let mut layers = Vec::new();
    let mut survival = 1.0f64;
    for (j, layer) in circuit.layers().iter().enumerate() {
        if layer.is_empty() {
            continue;
        }
        let two = layer.iter().filter(|g| g.is_two_qubit()).count();
        let single = layer.len() - two;
        let m = layer.len();
        let avg = (single as f64 * table.single_qubit_error + two as f64 * table.two_qubit_error) / m as f64;
        survival *= (1.0 - avg).powi(m as i32);
        layers.push(LayerScore { layer: j, single_qubit_gates: single, two_qubit_gates: two, gate_count: m, avg_error: avg });
    }
    Ok(ScoreBreakdown { layers, depth: circuit.depth(), score: 1.0 - survival })
}

/// Names of the cell's circuits in evaluation order.
pub const VQC_NAMES: [&str; 5] = ["forget", "input", "candidate", "output", "hidden"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqcScore {
    pub name: String,
    pub breakdown: ScoreBreakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QlstmScore {
    pub n_qubits: usize,
    pub per_vqc: Vec<VqcScore>,
    /// Maximum per-circuit score.
    pub max: f64,
    /// Mean per-circuit score; the headline aggregate.
    pub mean: f64,
    /// `1 - prod_k (1 - s_k)`: every circuit of one cell step succeeding.
    pub cell: f64,
}

/// Scores every circuit of a QLSTM cell. Angles do not change gate counts,
/// so circuits are built at zero parameters and zero input.
pub fn score_qlstm_circuits(config: &QlstmConfig, table: &GateErrorTable) -> Result<QlstmScore> {
    config.validate()?;
    let spec = config.vqc_spec();
    let circuit = build_vqc_circuit::<f64>(&spec, &VqcParams::zeros(&spec), &vec![0.0; spec.n_qubits])?;
    let per_vqc: Vec<VqcScore> = VQC_NAMES[..config.n_vqcs()]
        .iter()
        .map(|name| Ok(VqcScore { name: name.to_string(), breakdown: error_score(&circuit, table)? }))
        .collect::<Result<_>>()?;
    let scores: Vec<f64> = per_vqc.iter().map(|v| v.breakdown.score).collect();
    let max = scores.iter().copied().fold(0.0, f64::max);
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    let cell = 1.0 - scores.iter().map(|s| 1.0 - s).product::<f64>();
    Ok(QlstmScore { n_qubits: config.n_qubits, per_vqc, max, mean, cell })
}
