use rand::Rng;

use super::{
    affine, affine_backward, cell_update, cell_update_backward, chunks, make_vt, uniform_vec, CellState, GateActivations,
    ModelKind, NoiseContext, ParamSet, QlstmConfig, SequenceModel, TensorView,
};
use crate::error::{usage, Result};
use crate::scalar::Real;

const GATE_NAMES: [&str; 4] = ["forget", "input", "candidate", "output"];

/// Classical baseline parameters. The input projection and output head have
/// the same shapes as in [`super::QlstmParams`]; each gate is an `n x n`
/// affine map over the projected input.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmParams<T> {
    pub w_in: Vec<T>,
    pub b_in: Vec<T>,
    /// Forget, input, candidate, output; each `[n][n]` row-major `[in][out]`.
    pub w_gates: [Vec<T>; 4],
    pub b_gates: [Vec<T>; 4],
    pub w_out: Vec<T>,
    pub b_out: Vec<T>,
}

impl<T: Real> LstmParams<T> {
    pub fn zeros(config: &QlstmConfig) -> Self {
        let n = config.n_qubits;
        LstmParams {
            w_in: vec![T::zero(); config.vt_len() * n],
            b_in: vec![T::zero(); n],
            w_gates: std::array::from_fn(|_| vec![T::zero(); n * n]),
            b_gates: std::array::from_fn(|_| vec![T::zero(); n]),
            w_out: vec![T::zero(); n * config.n_tasks],
            b_out: vec![T::zero(); config.n_tasks],
        }
    }

    pub fn init<R: Rng + ?Sized>(config: &QlstmConfig, rng: &mut R) -> Self {
        let n = config.n_qubits;
        let w_in = uniform_vec(rng, config.vt_len() * n, 0.1);
        let b_in = uniform_vec(rng, n, 0.1);
        let w_gates = std::array::from_fn(|_| uniform_vec(rng, n * n, 0.1));
        let b_gates = std::array::from_fn(|_| uniform_vec(rng, n, 0.1));
        let w_out = uniform_vec(rng, n * config.n_tasks, 0.1);
        let b_out = uniform_vec(rng, config.n_tasks, 0.1);
        LstmParams { w_in, b_in, w_gates, b_gates, w_out, b_out }
    }

    fn check(&self, config: &QlstmConfig) -> Result<()> {
        let n = config.n_qubits;
        let ok = self.w_in.len() == config.vt_len() * n
            && self.b_in.len() == n
            && self.w_gates.iter().all(|w| w.len() == n * n)
            && self.b_gates.iter().all(|b| b.len() == n)
            && self.w_out.len() == n * config.n_tasks
            && self.b_out.len() == config.n_tasks;
        if ok {
            Ok(())
        } else {
            Err(usage!("LSTM parameters do not match the model config"))
        }
    }
}

impl<T: Real> ParamSet<T> for LstmParams<T> {
    fn tensors(&self) -> Vec<TensorView<'_, T>> {
        let n = self.b_in.len();
        let tasks = self.b_out.len();
        let mut out = vec![
            TensorView { name: "w_in".into(), shape: vec![self.w_in.len() / n, n], data: &self.w_in[..] },
            TensorView { name: "b_in".into(), shape: vec![n], data: &self.b_in[..] },
        ];
        for (k, name) in GATE_NAMES.iter().enumerate() {
            out.push(TensorView { name: format!("w_{name}"), shape: vec![n, n], data: &self.w_gates[k][..] });
            out.push(TensorView { name: format!("b_{name}"), shape: vec![n], data: &self.b_gates[k][..] });
        }
        out.push(TensorView { name: "w_out".into(), shape: vec![n, tasks], data: &self.w_out[..] });
        out.push(TensorView { name: "b_out".into(), shape: vec![tasks], data: &self.b_out[..] });
        out
    }

    fn tensors_mut(&mut self) -> Vec<&mut [T]> {
        let mut out: Vec<&mut [T]> = vec![&mut self.w_in[..], &mut self.b_in[..]];
        for (w, b) in self.w_gates.iter_mut().zip(self.b_gates.iter_mut()) {
            out.push(&mut w[..]);
            out.push(&mut b[..]);
        }
        out.push(&mut self.w_out[..]);
        out.push(&mut self.b_out[..]);
        out
    }
}

#[derive(Debug, Clone)]
pub struct LstmStep<T> {
    pub v: Vec<T>,
    pub u: Vec<T>,
    pub acts: GateActivations<T>,
    pub c_prev: Vec<T>,
    pub c: Vec<T>,
    pub tanh_c: Vec<T>,
    pub h: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct LstmTrace<T> {
    pub steps: Vec<LstmStep<T>>,
    pub logits: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct Lstm<T> {
    config: QlstmConfig,
    params: LstmParams<T>,
}

impl<T: Real> Lstm<T> {
    pub fn new(config: QlstmConfig, params: LstmParams<T>) -> Result<Self> {
        config.validate()?;
        params.check(&config)?;
        Ok(Lstm { config, params })
    }

    pub fn init<R: Rng + ?Sized>(config: QlstmConfig, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let params = LstmParams::init(&config, rng);
        Ok(Lstm { config, params })
    }

    /// One step of the classical cell; `h = o ⊙ tanh(c)`.
    pub fn cell_forward(&self, x_chunk: &[T], prev: &CellState<T>) -> Result<(CellState<T>, LstmStep<T>)> {
        if x_chunk.len() != self.config.chunk_dim || prev.h.len() != self.config.hidden_dim() {
            return Err(usage!("cell step expects chunk {} and hidden {}", self.config.chunk_dim, self.config.hidden_dim()));
        }
        let p = &self.params;
        let v = make_vt(x_chunk, &prev.h)?;
        let u = affine(&p.w_in, &p.b_in, &v);
        let pre = |k: usize| affine(&p.w_gates[k], &p.b_gates[k], &u);
        let acts = GateActivations::from_raw(&pre(0), &pre(1), &pre(2), &pre(3));
        let c = cell_update(&prev.c, &acts);
        let tanh_c: Vec<T> = c.iter().map(|v| v.tanh()).collect();
        let h: Vec<T> = acts.output.iter().zip(&tanh_c).map(|(&o, &t)| o * t).collect();
        let state = CellState { c: c.clone(), h: h.clone() };
        Ok((state, LstmStep { v, u, acts, c_prev: prev.c.clone(), c, tanh_c, h }))
    }
}

impl<T: Real> SequenceModel<T> for Lstm<T> {
    type Params = LstmParams<T>;
    type Trace = LstmTrace<T>;

    fn kind(&self) -> ModelKind {
        ModelKind::Lstm
    }

    fn config(&self) -> &QlstmConfig {
        &self.config
    }

    fn params(&self) -> &LstmParams<T> {
        &self.params
    }

    fn params_mut(&mut self) -> &mut LstmParams<T> {
        &mut self.params
    }

    /// Noise settings are ignored: the classical model has no circuits.
    fn forward(&self, fingerprint: &[bool], _noise: Option<&NoiseContext>) -> Result<LstmTrace<T>> {
        let xs = chunks::<T>(&self.config, fingerprint)?;
        let mut state = CellState::zeros(self.config.hidden_dim());
        let mut steps = Vec::with_capacity(xs.len());
        for x in &xs {
            let (next, step) = self.cell_forward(x, &state)?;
            state = next;
            steps.push(step);
        }
        let logits = affine(&self.params.w_out, &self.params.b_out, &state.h);
        Ok(LstmTrace { steps, logits })
    }

    fn trace_logits(trace: &LstmTrace<T>) -> &[T] {
        &trace.logits
    }

    fn backward(&self, trace: &LstmTrace<T>, d_logits: &[T]) -> Result<LstmParams<T>> {
        let cfg = &self.config;
        if d_logits.len() != cfg.n_tasks || trace.steps.len() != cfg.seq_len {
            return Err(usage!("trace or logit gradient does not match the model config"));
        }
        let p = &self.params;
        let mut grads = LstmParams::zeros(cfg);
        let last_h = &trace.steps.last().expect("seq_len >= 1").h;
        let mut dh = affine_backward(&p.w_out, last_h, d_logits, &mut grads.w_out, &mut grads.b_out);
        let mut dc_next = vec![T::zero(); cfg.hidden_dim()];

        for st in trace.steps.iter().rev() {
            let d_o: Vec<T> = dh.iter().zip(&st.tanh_c).map(|(&d, &tc)| d * tc).collect();
            let dc: Vec<T> = dc_next
                .iter()
                .zip(&dh)
                .zip(st.acts.output.iter().zip(&st.tanh_c))
                .map(|((&dn, &d), (&o, &tc))| dn + d * o * (T::one() - tc * tc))
                .collect();
            let (df, di, dg, dc_prev) = cell_update_backward(&dc, &st.acts, &st.c_prev);
            let upstream = st.acts.raw_grads(&df, &di, &dg, &d_o);
            let mut du = vec![T::zero(); cfg.n_qubits];
            for (k, up) in upstream.iter().enumerate() {
                let dx = affine_backward(&p.w_gates[k], &st.u, up, &mut grads.w_gates[k], &mut grads.b_gates[k]);
                for (a, b) in du.iter_mut().zip(dx) {
                    *a += b;
                }
            }
            let dv = affine_backward(&p.w_in, &st.v, &du, &mut grads.w_in, &mut grads.b_in);
            dh = dv[cfg.chunk_dim..].to_vec();
            dc_next = dc_prev;
        }
        Ok(grads)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Substream};

    #[test]
    fn zero_weights_give_half_gates() {
        let cfg = QlstmConfig { n_qubits: 2, seq_len: 1, chunk_dim: 4, ..QlstmConfig::default() };
        let model = Lstm::new(cfg.clone(), LstmParams::<f64>::zeros(&cfg)).unwrap();
        let (_, step) = model.cell_forward(&[1.0, 0.0, 1.0, 1.0], &CellState::zeros(2)).unwrap();
        assert_eq!(step.acts.forget, vec![0.5, 0.5]);
        assert_eq!(step.acts.input, vec![0.5, 0.5]);
        assert_eq!(step.acts.output, vec![0.5, 0.5]);
        assert_eq!(step.acts.candidate, vec![0.0, 0.0]);
    }

    #[test]
    fn param_count_matches_closed_form() {
        let cfg = QlstmConfig { n_qubits: 6, n_tasks: 2, ..QlstmConfig::default() };
        assert_eq!(LstmParams::<f64>::zeros(&cfg).num_params(), cfg.lstm_param_count());
    }

    #[test]
    fn deterministic_logits() {
        let cfg = QlstmConfig { n_qubits: 3, seq_len: 4, chunk_dim: 8, ..QlstmConfig::default() };
        let model = Lstm::<f64>::init(cfg, &mut substream(5, Substream::Init, 0)).unwrap();
        let fp: Vec<bool> = (0..32).map(|i| i % 3 == 0).collect();
        assert_eq!(model.logits(&fp, None).unwrap(), model.logits(&fp, None).unwrap());
    }
}
