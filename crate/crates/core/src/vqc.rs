//! Variational quantum circuits: angle encoding, entangling rotation layers,
//! Pauli-Z readout, and exact parameter-shift gradients.
//!
//! Circuit layout for `n` qubits and `depth` variational layers:
//!
//! ```text
//! H on every qubit
//! RY(atan x_i) on every qubit
//! RZ(atan x_i^2) on every qubit
//! depth x [ CNOT ring i -> (i+1) mod n, RX(θ[l][i][0]), RY(θ[l][i][1]), RZ(θ[l][i][2]) ]
//! measure <Z_0> .. <Z_{output_dim-1}>
//! ```
//!
//! The CNOT ring is packed into two layers (three for odd `n`): pairs
//! starting at even qubits, then pairs starting at odd qubits, then the
//! wrap-around pair when `n` is odd.

use serde::{Deserialize, Serialize};

use crate::error::{config_err, usage, Result};
use crate::noise::Execution;
use crate::quantum::{Circuit, GateOp, StateVector, MAX_QUBITS, MIN_QUBITS};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entangler {
    RingCnot,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VqcSpec {
    pub n_qubits: usize,
    pub depth: usize,
    pub entangler: Entangler,
    pub output_dim: usize,
}

impl VqcSpec {
    pub fn new(n_qubits: usize, depth: usize, entangler: Entangler) -> Self {
        VqcSpec { n_qubits, depth, entangler, output_dim: n_qubits }
    }

    pub fn validate(&self) -> Result<()> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&self.n_qubits) {
            return Err(config_err!("n_qubits {} outside {MIN_QUBITS}..={MAX_QUBITS}", self.n_qubits));
        }
        if self.depth == 0 {
            return Err(config_err!("VQC depth must be at least 1"));
        }
        if self.output_dim == 0 || self.output_dim > self.n_qubits {
            return Err(config_err!("output_dim {} must be in 1..={}", self.output_dim, self.n_qubits));
        }
        Ok(())
    }

    pub fn n_params(&self) -> usize {
        self.depth * self.n_qubits * 3
    }

    pub fn entangler_gates(&self) -> usize {
        match self.entangler {
            Entangler::RingCnot => self.n_qubits,
            Entangler::None => 0,
        }
    }

    fn entangler_layers(&self) -> usize {
        match self.entangler {
            Entangler::None => 0,
            Entangler::RingCnot if self.n_qubits % 2 == 0 => 2,
            Entangler::RingCnot => 3,
        }
    }

    /// Structural layer count of the built circuit.
    pub fn layer_count(&self) -> usize {
        ENCODING_LAYERS + self.depth * (self.entangler_layers() + 3)
    }

    /// Total gate count: `n * 3 + depth * (n_entangler + 3n)`.
    pub fn gate_count(&self) -> usize {
        self.n_qubits * ENCODING_LAYERS + self.depth * (self.entangler_gates() + 3 * self.n_qubits)
    }

    fn rotation_layer(&self, layer: usize, axis: usize) -> usize {
        ENCODING_LAYERS + layer * (self.entangler_layers() + 3) + self.entangler_layers() + axis
    }
}

const ENCODING_LAYERS: usize = 3;
const ENCODE_RY_LAYER: usize = 1;
const ENCODE_RZ_LAYER: usize = 2;

/// Trainable angles, indexed `[layer][qubit][axis]` with axes RX, RY, RZ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VqcParams<T> {
    pub depth: usize,
    pub n_qubits: usize,
    pub thetas: Vec<T>,
}

impl<T: Real> VqcParams<T> {
    pub fn zeros(spec: &VqcSpec) -> Self {
        VqcParams { depth: spec.depth, n_qubits: spec.n_qubits, thetas: vec![T::zero(); spec.n_params()] }
    }

    pub fn from_fn(spec: &VqcSpec, mut f: impl FnMut(usize, usize, usize) -> T) -> Self {
        let mut p = Self::zeros(spec);
        for l in 0..spec.depth {
            for i in 0..spec.n_qubits {
                for a in 0..3 {
                    p.thetas[Self::flat(spec.n_qubits, l, i, a)] = f(l, i, a);
                }
            }
        }
        p
    }

    #[inline]
    fn flat(n_qubits: usize, layer: usize, qubit: usize, axis: usize) -> usize {
        (layer * n_qubits + qubit) * 3 + axis
    }

    pub fn get(&self, layer: usize, qubit: usize, axis: usize) -> T {
        self.thetas[Self::flat(self.n_qubits, layer, qubit, axis)]
    }

    pub fn get_mut(&mut self, layer: usize, qubit: usize, axis: usize) -> &mut T {
        let idx = Self::flat(self.n_qubits, layer, qubit, axis);
        &mut self.thetas[idx]
    }

    fn check(&self, spec: &VqcSpec) -> Result<()> {
        if self.depth != spec.depth || self.n_qubits != spec.n_qubits || self.thetas.len() != spec.n_params() {
            return Err(usage!(
                "VQC params shaped [{}][{}][3] ({} values) do not match spec [{}][{}][3]",
                self.depth,
                self.n_qubits,
                self.thetas.len(),
                spec.depth,
                spec.n_qubits
            ));
        }
        if let Some(i) = self.thetas.iter().position(|t| !t.is_finite()) {
            return Err(usage!("VQC parameter {i} is not finite"));
        }
        Ok(())
    }
}

/// Gradient of `upstream . vqc(x)` w.r.t. angles and input.
#[derive(Debug, Clone, PartialEq)]
pub struct VqcGradient<T> {
    pub d_thetas: VqcParams<T>,
    pub d_input: Vec<T>,
}

/// Encoding layers: H, then RY(atan x_i), then RZ(atan x_i^2) on every qubit.
pub fn encode_input<T: Real>(x: &[T], n_qubits: usize) -> Result<Vec<Vec<GateOp<T>>>> {
    if x.len() != n_qubits {
        return Err(usage!("input has {} values, circuit has {n_qubits} qubits", x.len()));
    }
    if let Some(i) = x.iter().position(|v| !v.is_finite()) {
        return Err(usage!("input value {i} is not finite"));
    }
    Ok(vec![
        (0..n_qubits).map(GateOp::H).collect(),
        x.iter().enumerate().map(|(i, &v)| GateOp::RY(i, v.atan())).collect(),
        x.iter().enumerate().map(|(i, &v)| GateOp::RZ(i, (v * v).atan())).collect(),
    ])
}

fn entangler_layers<T: Real>(spec: &VqcSpec) -> Vec<Vec<GateOp<T>>> {
    let n = spec.n_qubits;
    match spec.entangler {
        Entangler::None => Vec::new(),
        Entangler::RingCnot => {
            let cnot = |i: usize| GateOp::CNOT { control: i, target: (i + 1) % n };
            if n % 2 == 0 {
                vec![(0..n).step_by(2).map(cnot).collect(), (1..n).step_by(2).map(cnot).collect()]
            } else {
                vec![
                    (0..n - 1).step_by(2).map(cnot).collect(),
                    (1..n - 1).step_by(2).map(cnot).collect(),
                    vec![cnot(n - 1)],
                ]
            }
        }
    }
}

pub fn build_vqc_circuit<T: Real>(spec: &VqcSpec, params: &VqcParams<T>, x: &[T]) -> Result<Circuit<T>> {
    spec.validate()?;
    params.check(spec)?;
    let n = spec.n_qubits;
    let mut layers = encode_input(x, n)?;
    for l in 0..spec.depth {
        layers.extend(entangler_layers(spec));
        layers.push((0..n).map(|i| GateOp::RX(i, params.get(l, i, 0))).collect());
        layers.push((0..n).map(|i| GateOp::RY(i, params.get(l, i, 1))).collect());
        layers.push((0..n).map(|i| GateOp::RZ(i, params.get(l, i, 2))).collect());
    }
    debug_assert_eq!(layers.len(), spec.layer_count());
    Circuit::new(n, layers)
}

/// Raw VQC output `[<Z_0>, .., <Z_{output_dim-1}>]`.
pub fn vqc_forward<T: Real>(spec: &VqcSpec, params: &VqcParams<T>, x: &[T]) -> Result<Vec<T>> {
    vqc_forward_with(spec, params, x, &Execution::Exact)
}

pub fn vqc_forward_with<T: Real>(spec: &VqcSpec, params: &VqcParams<T>, x: &[T], exec: &Execution) -> Result<Vec<T>> {
    let circuit = build_vqc_circuit(spec, params, x)?;
    Ok(exec.expectations(&circuit, spec.output_dim))
}

pub fn parameter_shift_grad<T: Real>(spec: &VqcSpec, params: &VqcParams<T>, x: &[T], upstream: &[T]) -> Result<VqcGradient<T>> {
    parameter_shift_grad_with(spec, params, x, upstream, &Execution::Exact)
}

/// Parameter-shift gradient. Each rotation contributes
/// `(f(θ + π/2) - f(θ - π/2)) / 2`; input gradients chain through
/// `d atan(x)/dx = 1/(1+x^2)` and `d atan(x^2)/dx = 2x/(1+x^4)`.
///
/// Under noisy execution every shifted evaluation replays the same flip
/// patterns, so the result is the exact gradient of the sampled estimate.
pub fn parameter_shift_grad_with<T: Real>(
    spec: &VqcSpec,
    params: &VqcParams<T>,
    x: &[T],
    upstream: &[T],
    exec: &Execution,
) -> Result<VqcGradient<T>> {
    if upstream.len() != spec.output_dim {
        return Err(usage!("upstream has {} values, VQC outputs {}", upstream.len(), spec.output_dim));
    }
    let mut circuit = build_vqc_circuit(spec, params, x)?;
    let mut d_thetas = VqcParams::zeros(spec);
    let mut d_input = vec![T::zero(); spec.n_qubits];
    if upstream.iter().all(|u| u.is_zero()) {
        return Ok(VqcGradient { d_thetas, d_input });
    }

    let mut shifted = |layer: usize, index: usize| -> T {
        let gate = circuit.gate_mut(layer, index);
        let angle = gate.angle().unwrap_or_default();
        gate.set_angle(angle + T::FRAC_PI_2());
        let plus = exec.expectations(&circuit, spec.output_dim);
        circuit.gate_mut(layer, index).set_angle(angle - T::FRAC_PI_2());
        let minus = exec.expectations(&circuit, spec.output_dim);
        circuit.gate_mut(layer, index).set_angle(angle);
        upstream.iter().zip(plus.iter().zip(&minus)).map(|(&u, (&p, &m))| u * (p - m)).sum::<T>() * T::half()
    };

    for l in 0..spec.depth {
        for i in 0..spec.n_qubits {
            for a in 0..3 {
                *d_thetas.get_mut(l, i, a) = shifted(spec.rotation_layer(l, a), i);
            }
        }
    }
    for (i, &xi) in x.iter().enumerate() {
        let d_ry = shifted(ENCODE_RY_LAYER, i);
        let d_rz = shifted(ENCODE_RZ_LAYER, i);
        let x2 = xi * xi;
        d_input[i] = d_ry / (T::one() + x2) + d_rz * T::two() * xi / (T::one() + x2 * x2);
    }
    Ok(VqcGradient { d_thetas, d_input })
}

/// Runs `circuit` from `|0..0>` and reads `<Z_q>` for `q < output_dim`.
pub(crate) fn exact_expectations<T: Real>(circuit: &Circuit<T>, output_dim: usize) -> Vec<T> {
    let mut state = StateVector::zero(circuit.n_qubits()).expect("circuit width validated");
    for g in circuit.gates() {
        state.apply_unchecked(g);
    }
    (0..output_dim).map(|q| state.expectation_z_unchecked(q)).collect()
}
