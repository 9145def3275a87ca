mod common;

use common::{central_diff, grad_close};
use proptest::prelude::*;
use qlstm_core::model::{Lstm, NoiseContext, ParamSet, Qlstm, QlstmConfig, SequenceModel};
use qlstm_core::train::{bce_loss, split_indices, AdamState};
use qlstm_core::vqc::{parameter_shift_grad, vqc_forward, Entangler, VqcParams, VqcSpec};
use rand::{Rng, SeedableRng};

fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand_chacha::ChaCha8Rng::seed_from_u64(seed)
}

#[test]
fn vqc_parameter_shift_matches_finite_differences() {
    for (n, depth, ent) in [(2, 1, Entangler::RingCnot), (3, 2, Entangler::RingCnot), (4, 1, Entangler::None)] {
        let spec = VqcSpec::new(n, depth, ent);
        let mut r = rng(n as u64 * 10 + depth as u64);
        let params = VqcParams::from_fn(&spec, |_, _, _| r.gen_range(-3.0..3.0));
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(-2.0..2.0)).collect();
        let up: Vec<f64> = (0..spec.output_dim).map(|_| r.gen_range(-1.0..1.0)).collect();
        let g = parameter_shift_grad(&spec, &params, &x, &up).unwrap();

        let dot = |p: &VqcParams<f64>, x: &[f64]| -> f64 {
            vqc_forward(&spec, p, x).unwrap().iter().zip(&up).map(|(a, b)| a * b).sum()
        };
        let mut f_theta = |t: &[f64]| dot(&VqcParams { thetas: t.to_vec(), ..params.clone() }, &x);
        for i in 0..params.thetas.len() {
            let fd = central_diff(&mut f_theta, &params.thetas, i, 1e-5);
            assert!(grad_close(g.d_thetas.thetas[i], fd, 1e-6, 1e-9), "theta {i}: {} vs {fd}", g.d_thetas.thetas[i]);
        }
        let mut f_x = |xv: &[f64]| dot(&params, xv);
        for i in 0..n {
            let fd = central_diff(&mut f_x, &x, i, 1e-5);
            assert!(grad_close(g.d_input[i], fd, 1e-6, 1e-9), "x {i}: {} vs {fd}", g.d_input[i]);
        }
    }
}

/// Compares `backward` with central differences of the BCE loss for every parameter.
fn check_model<M: SequenceModel<f64>>(
    mut model: M,
    fp: &[bool],
    labels: &[Option<bool>],
    noise: Option<&NoiseContext>,
) -> usize {
    let trace = model.forward(fp, noise).unwrap();
    let (_, d_logits) = bce_loss(M::trace_logits(&trace), labels).unwrap();
    let analytic = model.backward(&trace, &d_logits).unwrap().flat();
    let theta = model.params().flat();
    let mut bad = Vec::new();
    for i in 0..theta.len() {
        let mut f = |t: &[f64]| {
            model.params_mut().set_flat(t).unwrap();
            bce_loss(&model.logits(fp, noise).unwrap(), labels).unwrap().0
        };
        let fd = central_diff(&mut f, &theta, i, 1e-5);
        if !grad_close(analytic[i], fd, 1e-3, 1e-6) {
            bad.push((i, analytic[i], fd));
        }
    }
    assert!(bad.is_empty(), "mismatched gradients (index, analytic, numeric): {bad:?}");
    theta.len()
}

fn bits(r: &mut impl Rng, n: usize) -> Vec<bool> {
    (0..n).map(|_| r.gen()).collect()
}

#[test]
fn qlstm_bptt_matches_finite_differences() {
    let configs = [
        QlstmConfig { n_qubits: 2, depth: 1, seq_len: 2, chunk_dim: 3, ..Default::default() },
        QlstmConfig { n_qubits: 3, depth: 2, seq_len: 3, chunk_dim: 2, n_tasks: 2, ..Default::default() },
        QlstmConfig { n_qubits: 2, depth: 1, seq_len: 2, chunk_dim: 2, share_output_vqc: true, ..Default::default() },
    ];
    for (k, cfg) in configs.into_iter().enumerate() {
        let mut r = rng(k as u64);
        let fp = bits(&mut r, cfg.fingerprint_len());
        let labels: Vec<_> = (0..cfg.n_tasks).map(|t| if t == 1 { None } else { Some(r.gen()) }).collect();
        let labels = if cfg.n_tasks == 2 { vec![Some(true), labels[1]] } else { labels };
        let n = check_model(Qlstm::<f64>::init(cfg.clone(), &mut r).unwrap(), &fp, &labels, None);
        assert_eq!(n, cfg.qlstm_param_count());
    }
}

#[test]
fn noisy_qlstm_gradient_is_exact_for_fixed_trajectories() {
    let cfg = QlstmConfig { n_qubits: 2, depth: 1, seq_len: 2, chunk_dim: 2, ..Default::default() };
    let mut r = rng(9);
    let fp = bits(&mut r, cfg.fingerprint_len());
    let ctx = NoiseContext { p: 0.05, trajectories: 8, rng_seed: 3, sample: 11 };
    check_model(Qlstm::<f64>::init(cfg, &mut r).unwrap(), &fp, &[Some(false)], Some(&ctx));
}

#[test]
fn lstm_bptt_matches_finite_differences() {
    for (k, cfg) in [
        QlstmConfig { n_qubits: 2, seq_len: 3, chunk_dim: 4, ..Default::default() },
        QlstmConfig { n_qubits: 4, seq_len: 2, chunk_dim: 3, n_tasks: 3, ..Default::default() },
    ]
    .into_iter()
    .enumerate()
    {
        let mut r = rng(100 + k as u64);
        let fp = bits(&mut r, cfg.fingerprint_len());
        let labels: Vec<_> = (0..cfg.n_tasks).map(|_| Some(r.gen())).collect();
        let n = check_model(Lstm::<f64>::init(cfg.clone(), &mut r).unwrap(), &fp, &labels, None);
        assert_eq!(n, cfg.lstm_param_count());
    }
}

proptest! {
    #[test]
    fn bce_gradient_matches_finite_differences(
        zs in prop::collection::vec(-10.0..10.0f64, 1..5),
        ys in prop::collection::vec(prop::option::weighted(0.8, any::<bool>()), 5),
    ) {
        let labels = &ys[..zs.len()];
        let (_, g) = bce_loss(&zs, labels).unwrap();
        let mut f = |z: &[f64]| bce_loss(z, labels).unwrap().0;
        for i in 0..zs.len() {
            let fd = central_diff(&mut f, &zs, i, 1e-6);
            prop_assert!(grad_close(g[i], fd, 1e-6, 1e-9), "{} vs {}", g[i], fd);
        }
    }

    #[test]
    fn adam_commutes_with_permutation(
        params in prop::collection::vec(-5.0..5.0f64, 1..12),
        seed in any::<u64>(),
    ) {
        let n = params.len();
        let mut r = rng(seed);
        let grads: Vec<Vec<f64>> = (0..3).map(|_| (0..n).map(|_| r.gen_range(-1.0..1.0)).collect()).collect();
        let mut perm: Vec<usize> = (0..n).collect();
        rand::seq::SliceRandom::shuffle(&mut perm[..], &mut r);

        let mut plain = params.clone();
        let mut a = AdamState::<f64>::new(n);
        let mut permuted: Vec<f64> = perm.iter().map(|&i| params[i]).collect();
        let mut b = AdamState::<f64>::new(n);
        for g in &grads {
            a.step_slice(&mut plain, g, 0.01).unwrap();
            let gp: Vec<f64> = perm.iter().map(|&i| g[i]).collect();
            b.step_slice(&mut permuted, &gp, 0.01).unwrap();
        }
        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(permuted[k], plain[i]);
        }
    }

    #[test]
    fn splits_are_deterministic_disjoint_and_exhaustive(n in 2usize..500, seed in any::<u64>(), frac in 0.05..0.95f64) {
        let (train, val) = split_indices(n, seed, frac).unwrap();
        prop_assert_eq!(split_indices(n, seed, frac).unwrap(), (train.clone(), val.clone()));
        let expected_val = ((n as f64 * frac).round() as usize).clamp(1, n - 1);
        prop_assert_eq!(val.len(), expected_val);
        let mut all: Vec<usize> = train.iter().chain(&val).copied().collect();
        all.sort_unstable();
        prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
    }
}
