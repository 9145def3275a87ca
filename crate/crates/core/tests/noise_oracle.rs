mod common;

use common::{density_matrix_z, random_gate};
use qlstm_core::noise::{noisy_apply_circuit, noisy_vqc_forward, NoiseConfig};
use qlstm_core::quantum::{apply_circuit, init_zero_state, Circuit, GateOp};
use qlstm_core::vqc::{vqc_forward, Entangler, VqcParams, VqcSpec};
use rand::{Rng, SeedableRng};

const TRAJECTORIES: usize = 100_000;

/// Per-qubit sample mean and standard error of ⟨Z⟩ over noisy trajectories.
fn trajectory_stats(circuit: &Circuit<f64>, p: f64, seed: u64) -> Vec<(f64, f64)> {
    let n = circuit.n_qubits();
    let noise = NoiseConfig::new(p);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut sum = vec![0.0; n];
    let mut sum_sq = vec![0.0; n];
    for _ in 0..TRAJECTORIES {
        let s = noisy_apply_circuit(init_zero_state(n).unwrap(), circuit, &noise, &mut rng).unwrap();
        for q in 0..n {
            let z = s.expectation_z(q).unwrap();
            sum[q] += z;
            sum_sq[q] += z * z;
        }
    }
    let m = TRAJECTORIES as f64;
    (0..n)
        .map(|q| {
            let mean = sum[q] / m;
            let var = (sum_sq[q] / m - mean * mean).max(0.0);
            (mean, (var / m).sqrt())
        })
        .collect()
}

#[test]
fn single_layer_bit_flip_matches_binomial_expectation() {
    for p in [0.01, 0.05] {
        let c = Circuit::<f64>::new(2, vec![vec![]]).unwrap();
        let (mean, _) = trajectory_stats(&c, p, 17)[0];
        let sigma = (4.0 * p * (1.0 - p) / TRAJECTORIES as f64).sqrt();
        assert!((mean - (1.0 - 2.0 * p)).abs() < 3.0 * sigma, "p={p}: {mean}");
    }
}

#[test]
fn trajectories_agree_with_density_matrix_oracle() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for (n, layers, p) in [(2, 3, 0.05), (2, 5, 0.02), (3, 4, 0.05), (3, 2, 0.2)] {
        let layers: Vec<Vec<GateOp<f64>>> = (0..layers).map(|_| vec![random_gate(&mut rng, n)]).collect();
        let circuit = Circuit::new(n, layers.clone()).unwrap();
        let exact = density_matrix_z(n, &layers, p);
        let stats = trajectory_stats(&circuit, p, rng.gen());
        for (q, ((mean, se), want)) in stats.iter().zip(&exact).enumerate() {
            // A deterministic ±1 outcome has zero sample variance; allow rounding there.
            assert!((mean - want).abs() <= 3.0 * se + 1e-12, "n={n} q={q}: {mean} vs {want} (se {se})");
        }
    }
}

#[test]
fn certain_flip_and_no_flip() {
    let empty = Circuit::<f64>::new(2, vec![vec![]]).unwrap();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0);
    let s = noisy_apply_circuit(init_zero_state(2).unwrap(), &empty, &NoiseConfig::new(1.0), &mut rng).unwrap();
    assert_eq!(s.amplitudes()[3].re, 1.0);

    let c = Circuit::new(3, vec![vec![GateOp::H(0), GateOp::RY(2, 0.4)], vec![GateOp::CNOT { control: 0, target: 1 }]]).unwrap();
    let noisy = noisy_apply_circuit(init_zero_state(3).unwrap(), &c, &NoiseConfig::new(0.0), &mut rng).unwrap();
    assert_eq!(noisy, apply_circuit(init_zero_state(3).unwrap(), &c).unwrap());
}

#[test]
fn noisy_vqc_forward_properties() {
    let spec = VqcSpec::new(3, 2, Entangler::RingCnot);
    let params = VqcParams::from_fn(&spec, |l, q, a| 0.3 * (l + 2 * q) as f64 - 0.2 * a as f64);
    let x = [0.5, -1.0, 2.0];
    let exact = vqc_forward(&spec, &params, &x).unwrap();

    let zero = NoiseConfig { trajectories: 7, ..NoiseConfig::new(0.0) };
    let out = noisy_vqc_forward(&spec, &params, &x, &zero, 0, 0).unwrap();
    for (a, b) in out.iter().zip(&exact) {
        assert!((a - b).abs() < 1e-12);
    }

    let noise = NoiseConfig { trajectories: 64, rng_seed: 4, ..NoiseConfig::new(0.05) };
    let a = noisy_vqc_forward(&spec, &params, &x, &noise, 2, 9).unwrap();
    let b = noisy_vqc_forward(&spec, &params, &x, &noise, 2, 9).unwrap();
    assert_eq!(a, b);
    assert!(a.iter().all(|v| (-1.0..=1.0).contains(v)));
    let c = noisy_vqc_forward(&spec, &params, &x, &noise, 3, 9).unwrap();
    assert_ne!(a, c);
}
