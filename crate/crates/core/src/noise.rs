//! Bit-flip noise by trajectory sampling.
//!
//! After every circuit layer each qubit independently receives a Pauli-X with
//! probability `p`. Draws are taken in layer order, then qubit-index order,
//! one uniform `f64` per (layer, qubit) site.

use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{config_err, usage, Result};
use crate::quantum::{Circuit, GateOp, StateVector};
use crate::rng::{derive_seed, StreamRng};
use crate::scalar::Real;
use crate::vqc::{build_vqc_circuit, exact_expectations, VqcParams, VqcSpec};

fn default_trajectories() -> usize {
    32
}

fn default_eval_trajectories() -> usize {
    512
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub bit_flip_p: f64,
    /// Trajectories per circuit evaluation while training.
    #[serde(default = "default_trajectories")]
    pub trajectories: usize,
    /// Trajectories per circuit evaluation when measuring accuracy.
    #[serde(default = "default_eval_trajectories")]
    pub eval_trajectories: usize,
    #[serde(default)]
    pub rng_seed: u64,
}

impl NoiseConfig {
    pub fn new(bit_flip_p: f64) -> Self {
        NoiseConfig { bit_flip_p, trajectories: default_trajectories(), eval_trajectories: default_eval_trajectories(), rng_seed: 0 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.bit_flip_p) {
            return Err(config_err!("noise.bit_flip_p = {} must lie in [0, 1]", self.bit_flip_p));
        }
        if self.trajectories == 0 || self.eval_trajectories == 0 {
            return Err(config_err!("noise trajectories must be at least 1"));
        }
        Ok(())
    }
}

/// Identifies one circuit invocation: the trajectory stream is a pure
/// function of these three words.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NoiseKey {
    pub rng_seed: u64,
    pub sample: u64,
    pub invocation: u64,
}

impl NoiseKey {
    pub fn rng(&self) -> StreamRng {
        StreamRng::seed_from_u64(derive_seed(&[self.rng_seed, self.sample, self.invocation]))
    }
}

/// How expectation values are obtained from a circuit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Execution {
    Exact,
    BitFlip { p: f64, trajectories: usize, key: NoiseKey },
}

impl Execution {
    /// Mean `<Z_q>` for `q < output_dim`, starting from `|0..0>`.
    pub fn expectations<T: Real>(&self, circuit: &Circuit<T>, output_dim: usize) -> Vec<T> {
        match *self {
            Execution::Exact => exact_expectations(circuit, output_dim),
            Execution::BitFlip { p, trajectories, key } => {
                let mut rng = key.rng();
                let mut acc = vec![T::zero(); output_dim];
                for _ in 0..trajectories {
                    let state = StateVector::zero(circuit.n_qubits()).expect("circuit width validated");
                    let state = run_with_flips(state, circuit, p, &mut rng);
                    for (q, a) in acc.iter_mut().enumerate() {
                        *a += state.expectation_z_unchecked(q);
                    }
                }
                let denom = T::from_usize_lossy(trajectories);
                acc.into_iter().map(|a| a / denom).collect()
            }
        }
    }
}

fn run_with_flips<T: Real, R: Rng + ?Sized>(mut state: StateVector<T>, circuit: &Circuit<T>, p: f64, rng: &mut R) -> StateVector<T> {
    let n = circuit.n_qubits();
    for layer in circuit.layers() {
        for g in layer {
            state.apply_unchecked(g);
        }
        for q in 0..n {
            if rng.gen::<f64>() < p {
                state.apply_unchecked(&GateOp::X(q));
            }
        }
    }
    state
}

/// One noisy trajectory of `circuit` applied to `state`.
pub fn noisy_apply_circuit<T: Real, R: Rng + ?Sized>(
    state: StateVector<T>,
    circuit: &Circuit<T>,
    noise: &NoiseConfig,
    rng: &mut R,
) -> Result<StateVector<T>> {
    noise.validate()?;
    if circuit.n_qubits() != state.n_qubits() {
        return Err(usage!("circuit has {} qubits, state has {}", circuit.n_qubits(), state.n_qubits()));
    }
    Ok(run_with_flips(state, circuit, noise.bit_flip_p, rng))
}

/// VQC output averaged over `noise.trajectories` noisy runs.
pub fn noisy_vqc_forward<T: Real>(
    spec: &VqcSpec,
    params: &VqcParams<T>,
    x: &[T],
    noise: &NoiseConfig,
    sample: u64,
    invocation: u64,
) -> Result<Vec<T>> {
    noise.validate()?;
    let circuit = build_vqc_circuit(spec, params, x)?;
    let exec = Execution::BitFlip {
        p: noise.bit_flip_p,
        trajectories: noise.trajectories,
        key: NoiseKey { rng_seed: noise.rng_seed, sample, invocation },
    };
    Ok(exec.expectations(&circuit, spec.output_dim))
}
