use rand::Rng;

use super::{
    affine, affine_backward, cell_update, cell_update_backward, chunks, make_vt, uniform_vec, CellState, GateActivations,
    ModelKind, NoiseContext, ParamSet, QlstmConfig, SequenceModel, TensorView,
};
use crate::error::{usage, Result};
use crate::scalar::Real;
use crate::vqc::{parameter_shift_grad_with, vqc_forward_with, VqcParams};

const FORGET: usize = 0;
const INPUT: usize = 1;
const CANDIDATE: usize = 2;
const OUTPUT: usize = 3;
const HIDDEN: usize = 4;

/// Trainable parameters of the quantum model.
///
/// `w_in` is `[chunk_dim + n_qubits][n_qubits]` and `w_out` is
/// `[n_qubits][n_tasks]`, both row-major `[in][out]`. `vqcs` holds the forget,
/// input, candidate, output and hidden-state circuits in that order; the last
/// is absent when the config shares the output circuit.
#[derive(Debug, Clone, PartialEq)]
pub struct QlstmParams<T> {
    pub w_in: Vec<T>,
    pub b_in: Vec<T>,
    pub vqcs: Vec<VqcParams<T>>,
    pub w_out: Vec<T>,
    pub b_out: Vec<T>,
}

impl<T: Real> QlstmParams<T> {
    pub fn zeros(config: &QlstmConfig) -> Self {
        let n = config.n_qubits;
        let spec = config.vqc_spec();
        QlstmParams {
            w_in: vec![T::zero(); config.vt_len() * n],
            b_in: vec![T::zero(); n],
            vqcs: (0..config.n_vqcs()).map(|_| VqcParams::zeros(&spec)).collect(),
            w_out: vec![T::zero(); n * config.n_tasks],
            b_out: vec![T::zero(); config.n_tasks],
        }
    }

    /// Classical weights uniform in [-0.1, 0.1], angles uniform in [-π, π].
    pub fn init<R: Rng + ?Sized>(config: &QlstmConfig, rng: &mut R) -> Self {
        let n = config.n_qubits;
        let spec = config.vqc_spec();
        let pi = std::f64::consts::PI;
        let w_in = uniform_vec(rng, config.vt_len() * n, 0.1);
        let b_in = uniform_vec(rng, n, 0.1);
        let vqcs = (0..config.n_vqcs())
            .map(|_| VqcParams { depth: spec.depth, n_qubits: n, thetas: uniform_vec(rng, spec.n_params(), pi) })
            .collect();
        let w_out = uniform_vec(rng, n * config.n_tasks, 0.1);
        let b_out = uniform_vec(rng, config.n_tasks, 0.1);
        QlstmParams { w_in, b_in, vqcs, w_out, b_out }
    }

    fn check(&self, config: &QlstmConfig) -> Result<()> {
        let n = config.n_qubits;
        let spec = config.vqc_spec();
        let ok = self.w_in.len() == config.vt_len() * n
            && self.b_in.len() == n
            && self.vqcs.len() == config.n_vqcs()
            && self.vqcs.iter().all(|v| v.depth == spec.depth && v.n_qubits == n && v.thetas.len() == spec.n_params())
            && self.w_out.len() == n * config.n_tasks
            && self.b_out.len() == config.n_tasks;
        if ok {
            Ok(())
        } else {
            Err(usage!("QLSTM parameters do not match the model config"))
        }
    }
}

impl<T: Real> ParamSet<T> for QlstmParams<T> {
    fn tensors(&self) -> Vec<TensorView<'_, T>> {
        let n = self.b_in.len();
        let tasks = self.b_out.len();
        let mut out = vec![
            TensorView { name: "w_in".into(), shape: vec![self.w_in.len() / n, n], data: &self.w_in[..] },
            TensorView { name: "b_in".into(), shape: vec![n], data: &self.b_in[..] },
        ];
        for (k, v) in self.vqcs.iter().enumerate() {
            out.push(TensorView { name: format!("vqc_{k}"), shape: vec![v.depth, v.n_qubits, 3], data: &v.thetas[..] });
        }
        out.push(TensorView { name: "w_out".into(), shape: vec![n, tasks], data: &self.w_out[..] });
        out.push(TensorView { name: "b_out".into(), shape: vec![tasks], data: &self.b_out[..] });
        out
    }

    fn tensors_mut(&mut self) -> Vec<&mut [T]> {
        let mut out: Vec<&mut [T]> = vec![&mut self.w_in[..], &mut self.b_in[..]];
        for v in self.vqcs.iter_mut() {
            out.push(&mut v.thetas[..]);
        }
        out.push(&mut self.w_out[..]);
        out.push(&mut self.b_out[..]);
        out
    }
}

/// Intermediate values of one cell step kept for the backward pass.
#[derive(Debug, Clone)]
pub struct QlstmStep<T> {
    pub v: Vec<T>,
    /// Projected input fed to the four gate circuits.
    pub u: Vec<T>,
    pub acts: GateActivations<T>,
    pub c_prev: Vec<T>,
    pub c: Vec<T>,
    pub tanh_c: Vec<T>,
    /// `o ⊙ tanh(c)`, the hidden-state circuit input.
    pub z: Vec<T>,
    pub h: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct QlstmTrace<T> {
    pub steps: Vec<QlstmStep<T>>,
    pub logits: Vec<T>,
    noise: Option<NoiseContext>,
}

fn hidden_circuit(config: &QlstmConfig) -> usize {
    if config.share_output_vqc {
        OUTPUT
    } else {
        HIDDEN
    }
}

/// One cell step:
///
/// ```text
/// u  = W_in [x ‖ h_prev] + b_in
/// f  = σ(VQC_f(u)),  i = σ(VQC_i(u)),  C̃ = tanh(VQC_c(u)),  o = σ(VQC_o(u))
/// c  = f ⊙ c_prev + i ⊙ C̃
/// h  = VQC_h(o ⊙ tanh(c))
/// ```
pub fn qlstm_cell_forward<T: Real>(
    config: &QlstmConfig,
    params: &QlstmParams<T>,
    x_chunk: &[T],
    prev: &CellState<T>,
    noise: Option<&NoiseContext>,
    step: usize,
) -> Result<(CellState<T>, QlstmStep<T>)> {
    if x_chunk.len() != config.chunk_dim || prev.h.len() != config.hidden_dim() || prev.c.len() != config.hidden_dim() {
        return Err(usage!(
            "cell step expects chunk {} and state {}, got chunk {} and state ({}, {})",
            config.chunk_dim,
            config.hidden_dim(),
            x_chunk.len(),
            prev.c.len(),
            prev.h.len()
        ));
    }
    let spec = config.vqc_spec();
    let v = make_vt(x_chunk, &prev.h)?;
    let u = affine(&params.w_in, &params.b_in, &v);
    let raw = |k: usize| vqc_forward_with(&spec, &params.vqcs[k], &u, &NoiseContext::execution(noise, step, k));
    let acts = GateActivations::from_raw(&raw(FORGET)?, &raw(INPUT)?, &raw(CANDIDATE)?, &raw(OUTPUT)?);
    let c = cell_update(&prev.c, &acts);
    let tanh_c: Vec<T> = c.iter().map(|v| v.tanh()).collect();
    let z: Vec<T> = acts.output.iter().zip(&tanh_c).map(|(&o, &t)| o * t).collect();
    let h = vqc_forward_with(&spec, &params.vqcs[hidden_circuit(config)], &z, &NoiseContext::execution(noise, step, HIDDEN))?;
    let state = CellState { c: c.clone(), h: h.clone() };
    Ok((state, QlstmStep { v, u, acts, c_prev: prev.c.clone(), c, tanh_c, z, h }))
}

/// The quantum recurrent classifier.
#[derive(Debug, Clone)]
pub struct Qlstm<T> {
    config: QlstmConfig,
    params: QlstmParams<T>,
}

impl<T: Real> Qlstm<T> {
    pub fn new(config: QlstmConfig, params: QlstmParams<T>) -> Result<Self> {
        config.validate()?;
        params.check(&config)?;
        Ok(Qlstm { config, params })
    }

    pub fn init<R: Rng + ?Sized>(config: QlstmConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let params = QlstmParams::init(&config, rng);
        Ok(Qlstm { config, params })
    }
}

impl<T: Real> SequenceModel<T> for Qlstm<T> {
    type Params = QlstmParams<T>;
    type Trace = QlstmTrace<T>;

    fn kind(&self) -> ModelKind {
        ModelKind::Qlstm
    }

    fn config(&self) -> &QlstmConfig {
        &self.config
    }

    fn params(&self) -> &QlstmParams<T> {
        &self.params
    }

    fn params_mut(&mut self) -> &mut QlstmParams<T> {
        &mut self.params
    }

    fn forward(&self, fingerprint: &[bool], noise: Option<&NoiseContext>) -> Result<QlstmTrace<T>> {
        let xs = chunks::<T>(&self.config, fingerprint)?;
        let mut state = CellState::zeros(self.config.hidden_dim());
        let mut steps = Vec::with_capacity(xs.len());
        for (t, x) in xs.iter().enumerate() {
            let (next, step) = qlstm_cell_forward(&self.config, &self.params, x, &state, noise, t)?;
            state = next;
            steps.push(step);
        }
        let logits = affine(&self.params.w_out, &self.params.b_out, &state.h);
        Ok(QlstmTrace { steps, logits, noise: noise.copied() })
    }

    fn trace_logits(trace: &QlstmTrace<T>) -> &[T] {
        &trace.logits
    }

    fn backward(&self, trace: &QlstmTrace<T>, d_logits: &[T]) -> Result<QlstmParams<T>> {
        let cfg = &self.config;
        if d_logits.len() != cfg.n_tasks || trace.steps.len() != cfg.seq_len {
            return Err(usage!("trace or logit gradient does not match the model config"));
        }
        let spec = cfg.vqc_spec();
        let noise = trace.noise.as_ref();
        let mut grads = QlstmParams::zeros(cfg);
        let last_h = &trace.steps.last().expect("seq_len >= 1").h;
        let mut dh = affine_backward(&self.params.w_out, last_h, d_logits, &mut grads.w_out, &mut grads.b_out);
        let mut dc_next = vec![T::zero(); cfg.hidden_dim()];

        for (t, st) in trace.steps.iter().enumerate().rev() {
            let hk = hidden_circuit(cfg);
            let g_h = parameter_shift_grad_with(&spec, &self.params.vqcs[hk], &st.z, &dh, &NoiseContext::execution(noise, t, HIDDEN))?;
            add(&mut grads.vqcs[hk].thetas, &g_h.d_thetas.thetas);
            let dz = g_h.d_input;

            let d_o: Vec<T> = dz.iter().zip(&st.tanh_c).map(|(&d, &tc)| d * tc).collect();
            let dc: Vec<T> = dc_next
                .iter()
                .zip(&dz)
                .zip(st.acts.output.iter().zip(&st.tanh_c))
                .map(|((&dn, &d), (&o, &tc))| dn + d * o * (T::one() - tc * tc))
                .collect();
            let (df, di, dg, dc_prev) = cell_update_backward(&dc, &st.acts, &st.c_prev);
            let upstream = st.acts.raw_grads(&df, &di, &dg, &d_o);

            let mut du = vec![T::zero(); cfg.n_qubits];
            for (k, up) in upstream.iter().enumerate() {
                let g = parameter_shift_grad_with(&spec, &self.params.vqcs[k], &st.u, up, &NoiseContext::execution(noise, t, k))?;
                add(&mut grads.vqcs[k].thetas, &g.d_thetas.thetas);
                add(&mut du, &g.d_input);
            }
            let dv = affine_backward(&self.params.w_in, &st.v, &du, &mut grads.w_in, &mut grads.b_in);
            dh = dv[cfg.chunk_dim..].to_vec();
            dc_next = dc_prev;
        }
        Ok(grads)
    }
}

fn add<T: Real>(acc: &mut [T], v: &[T]) {
    for (a, &b) in acc.iter_mut().zip(v) {
        *a += b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Substream};

    fn small() -> QlstmConfig {
        QlstmConfig { n_qubits: 2, seq_len: 2, chunk_dim: 3, ..QlstmConfig::default() }
    }

    #[test]
    fn zero_params_give_half_gates() {
        let cfg = small();
        let params = QlstmParams::<f64>::zeros(&cfg);
        let prev = CellState { c: vec![0.6, -0.2], h: vec![0.0, 0.0] };
        let (state, step) = qlstm_cell_forward(&cfg, &params, &[0.0; 3], &prev, None, 0).unwrap();
        for v in step.acts.forget.iter().chain(&step.acts.input).chain(&step.acts.output) {
            assert!((v - 0.5).abs() < 1e-10);
        }
        assert!(step.acts.candidate.iter().all(|v| v.abs() < 1e-10));
        assert!((state.c[0] - 0.3).abs() < 1e-10);
        assert!((state.c[1] + 0.1).abs() < 1e-10);
    }

    #[test]
    fn gate_band_and_hidden_range() {
        let cfg = QlstmConfig { n_qubits: 3, seq_len: 4, chunk_dim: 5, ..QlstmConfig::default() };
        let mut rng = substream(11, Substream::Init, 0);
        let lo = crate::scalar::sigmoid(-1.0f64);
        let hi = crate::scalar::sigmoid(1.0f64);
        for _ in 0..20 {
            let model = Qlstm::<f64>::init(cfg.clone(), &mut rng).unwrap();
            let fp: Vec<bool> = (0..20).map(|_| rng.gen()).collect();
            let trace = model.forward(&fp, None).unwrap();
            for st in &trace.steps {
                for a in st.acts.forget.iter().chain(&st.acts.input).chain(&st.acts.output) {
                    assert!(*a >= lo - 1e-12 && *a <= hi + 1e-12);
                }
                assert!(st.h.iter().all(|h| (-1.0..=1.0).contains(h)));
            }
        }
    }

    #[test]
    fn zero_logit_gradient_gives_zero_gradients() {
        let cfg = small();
        let mut rng = substream(3, Substream::Init, 0);
        let model = Qlstm::<f64>::init(cfg, &mut rng).unwrap();
        let trace = model.forward(&[true, false, true, true, false, false], None).unwrap();
        let g = model.backward(&trace, &[0.0]).unwrap();
        assert!(g.flat().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn param_count_matches_closed_form() {
        for share in [false, true] {
            let cfg = QlstmConfig { share_output_vqc: share, n_tasks: 3, ..QlstmConfig::default() };
            let p = QlstmParams::<f64>::zeros(&cfg);
            assert_eq!(p.num_params(), cfg.qlstm_param_count());
        }
    }

    #[test]
    fn rejects_wrong_fingerprint_length() {
        let mut rng = substream(3, Substream::Init, 0);
        let model = Qlstm::<f64>::init(small(), &mut rng).unwrap();
        assert!(matches!(model.forward(&[true; 5], None), Err(crate::Error::Usage(_))));
    }
}
