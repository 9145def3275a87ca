//! Quantum long short-term memory for molecular property classification.
//!
//! The crate contains a dense statevector simulator ([`quantum`]), variational
//! circuits with parameter-shift gradients ([`vqc`]), a recurrent cell whose
//! gate networks are those circuits plus a classical LSTM baseline
//! ([`model`]), Adam training with seeded splits ([`train`]), bit-flip noise
//! by trajectory sampling ([`noise`]), a layer-wise circuit error score
//! ([`score`]), SMILES parsing and circular fingerprints ([`chem`]), and the
//! experiment runner behind the `qlstm` binary ([`experiment`]).
//!
//! The numerical core is generic over [`Real`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

pub mod chem;
pub mod error;
pub mod experiment;
pub mod model;
pub mod noise;
pub mod quantum;
pub mod rng;
pub mod scalar;
pub mod score;
pub mod train;
pub mod vqc;

pub use error::{Error, Result};
pub use scalar::Real;

pub type StateVector = quantum::StateVector<f64>;
pub type GateOp = quantum::GateOp<f64>;
pub type Circuit = quantum::Circuit<f64>;
pub type VqcParams = vqc::VqcParams<f64>;
pub type VqcGradient = vqc::VqcGradient<f64>;
pub type QlstmParams = model::QlstmParams<f64>;
pub type LstmParams = model::LstmParams<f64>;
pub type Qlstm = model::Qlstm<f64>;
pub type Lstm = model::Lstm<f64>;

pub type StateVectorF32 = quantum::StateVector<f32>;
pub type QlstmF32 = model::Qlstm<f32>;
