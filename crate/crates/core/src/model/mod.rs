//! Recurrent models over chunked fingerprints: the quantum cell, whose gate
//! networks are variational circuits, and a classical LSTM with the same
//! input projection and output head.

mod checkpoint;
mod lstm;
mod qlstm;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{config_err, usage, Result};
use crate::noise::{Execution, NoiseKey};
use crate::quantum::{MAX_QUBITS, MIN_QUBITS};
use crate::scalar::{sigmoid, Real};
use crate::vqc::{Entangler, VqcSpec};

pub use checkpoint::{Checkpoint, SeedLineage, TensorRecord, CHECKPOINT_FORMAT, CHECKPOINT_VERSION};
pub use lstm::{Lstm, LstmParams, LstmStep, LstmTrace};
pub use qlstm::{qlstm_cell_forward, Qlstm, QlstmParams, QlstmStep, QlstmTrace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Qlstm,
    Lstm,
}

impl ModelKind {
    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Qlstm => "qlstm",
            ModelKind::Lstm => "lstm",
        }
    }
}

fn default_n_qubits() -> usize {
    4
}
fn default_seq_len() -> usize {
    8
}
fn default_chunk_dim() -> usize {
    128
}
fn default_depth() -> usize {
    1
}
fn default_entangler() -> Entangler {
    Entangler::RingCnot
}
fn default_n_tasks() -> usize {
    1
}

/// Shape of either model. The hidden width always equals `n_qubits`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QlstmConfig {
    #[serde(default = "default_n_qubits")]
    pub n_qubits: usize,
    #[serde(default = "default_seq_len")]
    pub seq_len: usize,
    /// Fingerprint bits consumed per step.
    #[serde(default = "default_chunk_dim")]
    pub chunk_dim: usize,
    /// Variational layers per circuit.
    #[serde(default = "default_depth")]
    pub depth: usize,
    #[serde(default = "default_entangler")]
    pub entangler: Entangler,
    #[serde(default = "default_n_tasks")]
    pub n_tasks: usize,
    /// Reuse the output-gate circuit to produce the hidden state.
    #[serde(default)]
    pub share_output_vqc: bool,
}

impl Default for QlstmConfig {
    fn default() -> Self {
        QlstmConfig {
            n_qubits: default_n_qubits(),
            seq_len: default_seq_len(),
            chunk_dim: default_chunk_dim(),
            depth: default_depth(),
            entangler: default_entangler(),
            n_tasks: default_n_tasks(),
            share_output_vqc: false,
        }
    }
}

impl QlstmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&self.n_qubits) {
            return Err(config_err!("model.n_qubits = {} outside {MIN_QUBITS}..={MAX_QUBITS}", self.n_qubits));
        }
        if self.seq_len == 0 {
            return Err(config_err!("model.seq_len must be at least 1"));
        }
        if self.chunk_dim == 0 {
            return Err(config_err!("model.chunk_dim must be at least 1"));
        }
        if self.depth == 0 {
            return Err(config_err!("model.depth must be at least 1"));
        }
        if self.n_tasks == 0 {
            return Err(config_err!("model.n_tasks must be at least 1"));
        }
        Ok(())
    }

    pub fn hidden_dim(&self) -> usize {
        self.n_qubits
    }

    pub fn fingerprint_len(&self) -> usize {
        self.seq_len * self.chunk_dim
    }

    pub fn vt_len(&self) -> usize {
        self.chunk_dim + self.hidden_dim()
    }

    pub fn vqc_spec(&self) -> VqcSpec {
        VqcSpec::new(self.n_qubits, self.depth, self.entangler)
    }

    /// 5 circuits, or 4 when the output gate circuit also produces `h`.
    pub fn n_vqcs(&self) -> usize {
        if self.share_output_vqc {
            4
        } else {
            5
        }
    }

    /// Trainable parameter count of the quantum model.
    pub fn qlstm_param_count(&self) -> usize {
        let n = self.n_qubits;
        self.vt_len() * n + n + self.n_vqcs() * self.depth * n * 3 + n * self.n_tasks + self.n_tasks
    }

    /// Trainable parameter count of the classical model.
    pub fn lstm_param_count(&self) -> usize {
        let n = self.n_qubits;
        self.vt_len() * n + n + 4 * (n * n + n) + n * self.n_tasks + self.n_tasks
    }

    pub fn param_count(&self, kind: ModelKind) -> usize {
        match kind {
            ModelKind::Qlstm => self.qlstm_param_count(),
            ModelKind::Lstm => self.lstm_param_count(),
        }
    }

    pub(crate) fn check_fingerprint(&self, len: usize) -> Result<()> {
        if len != self.fingerprint_len() {
            return Err(usage!(
                "fingerprint has {len} bits, model expects seq_len {} x chunk_dim {} = {}",
                self.seq_len,
                self.chunk_dim,
                self.fingerprint_len()
            ));
        }
        Ok(())
    }
}

/// A named, shaped view of one parameter tensor.
#[derive(Debug, Clone)]
pub struct TensorView<'a, T> {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: &'a [T],
}

/// A bundle of parameter tensors in a fixed declared order. Gradients use the
/// same type as the parameters they belong to.
pub trait ParamSet<T: Real>: Clone + Send + Sync {
    fn tensors(&self) -> Vec<TensorView<'_, T>>;
    fn tensors_mut(&mut self) -> Vec<&mut [T]>;

    fn num_params(&self) -> usize {
        self.tensors().iter().map(|t| t.data.len()).sum()
    }

    fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for t in z.tensors_mut() {
            t.fill(T::zero());
        }
        z
    }

    fn add_assign(&mut self, other: &Self) {
        let src = other.flat();
        let mut k = 0;
        for t in self.tensors_mut() {
            for v in t.iter_mut() {
                *v += src[k];
                k += 1;
            }
        }
    }

    fn scale(&mut self, s: T) {
        for t in self.tensors_mut() {
            t.iter_mut().for_each(|v| *v *= s);
        }
    }

    fn flat(&self) -> Vec<T> {
        self.tensors().iter().flat_map(|t| t.data.iter().copied()).collect()
    }

    fn set_flat(&mut self, values: &[T]) -> Result<()> {
        if values.len() != self.num_params() {
            return Err(usage!("expected {} parameter values, got {}", self.num_params(), values.len()));
        }
        let mut k = 0;
        for t in self.tensors_mut() {
            let n = t.len();
            t.copy_from_slice(&values[k..k + n]);
            k += n;
        }
        Ok(())
    }

    /// Index and tensor name of the first non-finite entry, if any.
    fn first_non_finite(&self) -> Option<(String, usize)> {
        self.tensors()
            .iter()
            .find_map(|t| t.data.iter().position(|v| !v.is_finite()).map(|i| (t.name.clone(), i)))
    }
}

/// Per-sample noise settings for the quantum model. Circuit invocation `k`
/// of step `t` draws its trajectories from key `(rng_seed, sample, 5t + k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseContext {
    pub p: f64,
    pub trajectories: usize,
    pub rng_seed: u64,
    pub sample: u64,
}

impl NoiseContext {
    pub(crate) fn execution(ctx: Option<&NoiseContext>, step: usize, circuit: usize) -> Execution {
        match ctx {
            None => Execution::Exact,
            Some(c) => Execution::BitFlip {
                p: c.p,
                trajectories: c.trajectories,
                key: NoiseKey { rng_seed: c.rng_seed, sample: c.sample, invocation: (step * 5 + circuit) as u64 },
            },
        }
    }
}

/// A sequence classifier that can be trained by the generic loop.
pub trait SequenceModel<T: Real>: Send + Sync {
    type Params: ParamSet<T>;
    type Trace: Send;

    fn kind(&self) -> ModelKind;
    fn config(&self) -> &QlstmConfig;
    fn params(&self) -> &Self::Params;
    fn params_mut(&mut self) -> &mut Self::Params;

    /// Runs the whole fingerprint through the cell from a zero state.
    fn forward(&self, fingerprint: &[bool], noise: Option<&NoiseContext>) -> Result<Self::Trace>;
    fn trace_logits(trace: &Self::Trace) -> &[T];
    /// Full backpropagation through time.
    fn backward(&self, trace: &Self::Trace, d_logits: &[T]) -> Result<Self::Params>;

    fn logits(&self, fingerprint: &[bool], noise: Option<&NoiseContext>) -> Result<Vec<T>> {
        Ok(Self::trace_logits(&self.forward(fingerprint, noise)?).to_vec())
    }
}

/// Recurrent state carried between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct CellState<T> {
    pub c: Vec<T>,
    pub h: Vec<T>,
}

impl<T: Real> CellState<T> {
    pub fn zeros(hidden: usize) -> Self {
        CellState { c: vec![T::zero(); hidden], h: vec![T::zero(); hidden] }
    }
}

/// Post-activation gate values of one step.
#[derive(Debug, Clone, PartialEq)]
pub struct GateActivations<T> {
    pub forget: Vec<T>,
    pub input: Vec<T>,
    pub candidate: Vec<T>,
    pub output: Vec<T>,
}

impl<T: Real> GateActivations<T> {
    /// Applies sigmoid / tanh to raw gate pre-activations.
    pub fn from_raw(f: &[T], i: &[T], g: &[T], o: &[T]) -> Self {
        GateActivations {
            forget: f.iter().map(|&v| sigmoid(v)).collect(),
            input: i.iter().map(|&v| sigmoid(v)).collect(),
            candidate: g.iter().map(|&v| v.tanh()).collect(),
            output: o.iter().map(|&v| sigmoid(v)).collect(),
        }
    }

    /// Gradients w.r.t. the raw pre-activations given gradients w.r.t. the activations.
    pub fn raw_grads(&self, df: &[T], di: &[T], dg: &[T], d_o: &[T]) -> [Vec<T>; 4] {
        let dsig = |a: &[T], d: &[T]| a.iter().zip(d).map(|(&a, &d)| d * a * (T::one() - a)).collect::<Vec<T>>();
        [
            dsig(&self.forget, df),
            dsig(&self.input, di),
            self.candidate.iter().zip(dg).map(|(&g, &d)| d * (T::one() - g * g)).collect(),
            dsig(&self.output, d_o),
        ]
    }
}

/// `c_t = f ⊙ c_{t-1} + i ⊙ C̃`
pub fn cell_update<T: Real>(c_prev: &[T], acts: &GateActivations<T>) -> Vec<T> {
    c_prev
        .iter()
        .zip(&acts.forget)
        .zip(acts.input.iter().zip(&acts.candidate))
        .map(|((&c, &f), (&i, &g))| f * c + i * g)
        .collect()
}

/// Reverse of [`cell_update`]: returns `(df, di, dg, dc_prev)`.
pub fn cell_update_backward<T: Real>(dc: &[T], acts: &GateActivations<T>, c_prev: &[T]) -> (Vec<T>, Vec<T>, Vec<T>, Vec<T>) {
    let df = dc.iter().zip(c_prev).map(|(&d, &c)| d * c).collect();
    let di = dc.iter().zip(&acts.candidate).map(|(&d, &g)| d * g).collect();
    let dg = dc.iter().zip(&acts.input).map(|(&d, &i)| d * i).collect();
    let dc_prev = dc.iter().zip(&acts.forget).map(|(&d, &f)| d * f).collect();
    (df, di, dg, dc_prev)
}

/// `v_t = [x_t ‖ h_{t-1}]`
pub fn make_vt<T: Real>(x_chunk: &[T], h_prev: &[T]) -> Result<Vec<T>> {
    if x_chunk.is_empty() {
        return Err(usage!("input chunk must hold at least one value"));
    }
    if h_prev.is_empty() {
        return Err(usage!("hidden state must hold at least one value"));
    }
    let mut v = Vec::with_capacity(x_chunk.len() + h_prev.len());
    v.extend_from_slice(x_chunk);
    v.extend_from_slice(h_prev);
    Ok(v)
}

/// `y = W^T x + b` with `W` stored row-major as `[in][out]`.
pub(crate) fn affine<T: Real>(w: &[T], b: &[T], x: &[T]) -> Vec<T> {
    let n_out = b.len();
    debug_assert_eq!(w.len(), x.len() * n_out);
    let mut y = b.to_vec();
    for (row, &xi) in w.chunks_exact(n_out).zip(x) {
        if xi.is_zero() {
            continue;
        }
        for (yo, &wv) in y.iter_mut().zip(row) {
            *yo += xi * wv;
        }
    }
    y
}

/// Accumulates `dW += x dy^T`, `db += dy` and returns `dx = W dy`.
pub(crate) fn affine_backward<T: Real>(w: &[T], x: &[T], dy: &[T], dw: &mut [T], db: &mut [T]) -> Vec<T> {
    let n_out = dy.len();
    for (b, &d) in db.iter_mut().zip(dy) {
        *b += d;
    }
    let mut dx = vec![T::zero(); x.len()];
    for (i, (&xi, (row, drow))) in x.iter().zip(w.chunks_exact(n_out).zip(dw.chunks_exact_mut(n_out))).enumerate() {
        let mut acc = T::zero();
        for o in 0..n_out {
            drow[o] += xi * dy[o];
            acc += row[o] * dy[o];
        }
        dx[i] = acc;
    }
    dx
}

pub(crate) fn uniform_vec<T: Real, R: Rng + ?Sized>(rng: &mut R, len: usize, bound: f64) -> Vec<T> {
    (0..len).map(|_| T::lit(rng.gen_range(-bound..=bound))).collect()
}

/// Splits a fingerprint into `seq_len` chunks of 0/1 values.
pub(crate) fn chunks<T: Real>(config: &QlstmConfig, fingerprint: &[bool]) -> Result<Vec<Vec<T>>> {
    config.check_fingerprint(fingerprint.len())?;
    Ok(fingerprint
        .chunks_exact(config.chunk_dim)
        .map(|c| c.iter().map(|&b| if b { T::one() } else { T::zero() }).collect())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn make_vt_concatenates() {
        assert_eq!(make_vt(&[1.0, 2.0], &[3.0]).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(make_vt(&[0.0; 3], &[0.0; 2]).unwrap(), vec![0.0; 5]);
        assert!(matches!(make_vt::<f64>(&[], &[1.0]), Err(crate::Error::Usage(_))));
    }

    #[test]
    fn zero_gate_outputs_halve_the_cell() {
        let acts = GateActivations::from_raw(&[0.0; 2], &[0.0; 2], &[0.0; 2], &[0.0; 2]);
        assert_eq!(acts.forget, vec![0.5; 2]);
        assert_eq!(acts.candidate, vec![0.0; 2]);
        assert_eq!(cell_update(&[0.8, -0.4], &acts), vec![0.4, -0.2]);
    }

    #[test]
    fn perfect_memory_keeps_the_cell() {
        let acts = GateActivations { forget: vec![1.0; 3], input: vec![0.0; 3], candidate: vec![0.7, -0.2, 0.9], output: vec![0.5; 3] };
        let c0 = vec![0.3, -1.1, 2.5];
        let mut c = c0.clone();
        for _ in 0..10 {
            c = cell_update(&c, &acts);
        }
        assert_eq!(c, c0);
        let dc = vec![0.1, -0.2, 0.3];
        let (_, _, _, dc_prev) = cell_update_backward(&dc, &acts, &c0);
        assert_eq!(dc_prev, dc);
    }

    #[test]
    fn affine_backward_matches_definition() {
        let w = vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]; // [3][2]
        let x = vec![1.0, -1.0, 0.5];
        let y = affine(&w, &[0.1, 0.2], &x);
        assert_eq!(y, vec![0.1 + 1.0 - 3.0 + 2.5, 0.2 + 2.0 - 4.0 + 3.0]);
        let mut dw = vec![0.0; 6];
        let mut db = vec![0.0; 2];
        let dx = affine_backward(&w, &x, &[1.0, 2.0], &mut dw, &mut db);
        assert_eq!(dx, vec![5.0, 11.0, 17.0]);
        assert_eq!(db, vec![1.0, 2.0]);
        assert_eq!(dw, vec![1.0, 2.0, -1.0, -2.0, 0.5, 1.0]);
    }

    #[test]
    fn config_checks() {
        let c = QlstmConfig::default();
        assert_eq!(c.fingerprint_len(), 1024);
        assert_eq!(c.hidden_dim(), c.n_qubits);
        assert!(QlstmConfig { n_qubits: 1, ..c.clone() }.validate().is_err());
        assert!(QlstmConfig { n_qubits: 15, ..c.clone() }.validate().is_err());
        assert!(QlstmConfig { seq_len: 0, ..c.clone() }.validate().is_err());
        assert!(c.check_fingerprint(1023).is_err());
    }
}
