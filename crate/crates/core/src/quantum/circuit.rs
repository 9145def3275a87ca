use std::fmt::Write as _;

use super::gate::{GateKind, GateOp};
use super::state::StateVector;
use crate::error::{usage, Error, Result};
use crate::scalar::Real;

/// A layered circuit. Gates inside one layer act on disjoint qubits, so a
/// layer is one unit of parallel depth.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit<T> {
    n_qubits: usize,
    layers: Vec<Vec<GateOp<T>>>,
}

impl<T: Real> Circuit<T> {
    pub fn new(n_qubits: usize, layers: Vec<Vec<GateOp<T>>>) -> Result<Self> {
        for (j, layer) in layers.iter().enumerate() {
            check_layer(n_qubits, j, layer)?;
        }
        Ok(Circuit { n_qubits, layers })
    }

    pub fn empty(n_qubits: usize) -> Self {
        Circuit { n_qubits, layers: Vec::new() }
    }

    /// Appends a layer, checking that its gates touch disjoint valid qubits.
    pub fn push_layer(&mut self, layer: Vec<GateOp<T>>) -> Result<()> {
        check_layer(self.n_qubits, self.layers.len(), &layer)?;
        self.layers.push(layer);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn layers(&self) -> &[Vec<GateOp<T>>] {
        &self.layers
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn gate_count(&self) -> usize {
        self.layers.iter().map(Vec::len).sum()
    }

    pub fn gates(&self) -> impl Iterator<Item = &GateOp<T>> {
        self.layers.iter().flatten()
    }

    pub(crate) fn gate_mut(&mut self, layer: usize, index: usize) -> &mut GateOp<T> {
        &mut self.layers[layer][index]
    }

    /// Line-oriented text form: one layer per line, gates as
    /// `KIND(targets;angle)` separated by spaces. Empty layers are empty lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for layer in &self.layers {
            let tokens: Vec<String> = layer.iter().map(gate_token).collect();
            out.push_str(&tokens.join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text form. Lines starting with `#` are comments.
    pub fn parse(n_qubits: usize, text: &str) -> Result<Self> {
        let mut layers = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = line.trim();
            if line.starts_with('#') {
                continue;
            }
            let layer = line
                .split_whitespace()
                .map(|tok| parse_token::<T>(tok).map_err(|message| Error::Format { line: line_no, message }))
                .collect::<Result<Vec<_>>>()?;
            check_layer(n_qubits, layers.len(), &layer).map_err(|e| Error::Format { line: line_no, message: e.to_string() })?;
            layers.push(layer);
        }
        Ok(Circuit { n_qubits, layers })
    }

    /// Parses circuit text, taking the register width from the highest
    /// referenced qubit (at least 2) unless a `# qubits: N` header is present.
    pub fn parse_auto(text: &str) -> Result<Self> {
        let declared = text.lines().find_map(|l| {
            l.trim().strip_prefix('#').and_then(|r| r.trim().strip_prefix("qubits:")).and_then(|n| n.trim().parse::<usize>().ok())
        });
        let n = match declared {
            Some(n) => n,
            None => {
                let mut max_q = 1;
                for (i, line) in text.lines().enumerate() {
                    if line.trim().starts_with('#') {
                        continue;
                    }
                    for tok in line.split_whitespace() {
                        let g = parse_token::<T>(tok).map_err(|message| Error::Format { line: i + 1, message })?;
                        max_q = g.targets().into_iter().fold(max_q, usize::max);
                    }
                }
                max_q + 1
            }
        };
        Self::parse(n, text)
    }
}

fn check_layer<T: Real>(n_qubits: usize, j: usize, layer: &[GateOp<T>]) -> Result<()> {
    let mut used = 0u64;
    for g in layer {
        g.validate(n_qubits)?;
        for q in g.targets() {
            let bit = 1u64 << q;
            if used & bit != 0 {
                return Err(usage!("layer {j}: qubit {q} is targeted twice"));
            }
            used |= bit;
        }
    }
    Ok(())
}

fn gate_token<T: Real>(g: &GateOp<T>) -> String {
    let mut s = String::new();
    let targets: Vec<String> = g.targets().iter().map(ToString::to_string).collect();
    let _ = write!(s, "{}({}", g.kind(), targets.join(","));
    if let Some(a) = g.angle() {
        let _ = write!(s, ";{a}");
    }
    s.push(')');
    s
}

fn parse_token<T: Real>(tok: &str) -> std::result::Result<GateOp<T>, String> {
    let open = tok.find('(').ok_or_else(|| format!("`{tok}`: expected KIND(targets[;angle])"))?;
    let body = tok[open + 1..].strip_suffix(')').ok_or_else(|| format!("`{tok}`: missing `)`"))?;
    let kind = GateKind::from_name(&tok[..open]).ok_or_else(|| format!("`{tok}`: unknown gate `{}`", &tok[..open]))?;
    let (targets, angle) = match body.split_once(';') {
        Some((t, a)) => (t, Some(a.trim().parse::<T>().map_err(|_| format!("`{tok}`: bad angle `{a}`"))?)),
        None => (body, None),
    };
    let targets = targets
        .split(',')
        .map(|t| t.trim().parse::<usize>().map_err(|_| format!("`{tok}`: bad qubit index `{t}`")))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    GateOp::new(kind, &targets, angle).map_err(|e| format!("`{tok}`: {e}"))
}

/// Runs a circuit layer by layer, left to right within a layer.
pub fn apply_circuit<T: Real>(mut state: StateVector<T>, circuit: &Circuit<T>) -> Result<StateVector<T>> {
    if circuit.n_qubits() != state.n_qubits() {
        return Err(usage!("circuit has {} qubits, state has {}", circuit.n_qubits(), state.n_qubits()));
    }
    for g in circuit.gates() {
        state.apply_unchecked(g);
    }
    Ok(state)
}
