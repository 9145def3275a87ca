mod common;

use common::*;
use proptest::prelude::*;
use qlstm_core::quantum::{apply_circuit, expectation_z, gate_unitary, init_zero_state, Circuit, GateOp};
use rand::SeedableRng;

fn one_gate_per_layer(n: usize, gates: &[GateOp<f64>]) -> Circuit<f64> {
    Circuit::new(n, gates.iter().map(|g| vec![*g]).collect()).unwrap()
}

#[test]
fn random_circuits_match_kronecker_oracle() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for case in 0..300 {
        let n = 2 + case % 3;
        let len = 1 + rand::Rng::gen_range(&mut rng, 0..12);
        let gates: Vec<_> = (0..len).map(|_| random_gate(&mut rng, n)).collect();
        let state = apply_circuit(init_zero_state(n).unwrap(), &one_gate_per_layer(n, &gates)).unwrap();
        let expected = oracle_run(n, &gates);
        for (k, (a, b)) in state.amplitudes().iter().zip(&expected).enumerate() {
            assert!((a - b).norm() < 1e-9, "case {case} amp {k}: {a} vs {b} for {gates:?}");
        }
    }
}

#[test]
fn gate_unitaries_match_textbook_matrices() {
    let gates = [
        GateOp::H(0),
        GateOp::X(0),
        GateOp::RX(0, 0.3),
        GateOp::RY(0, -1.1),
        GateOp::RZ(0, 2.5),
        GateOp::CNOT { control: 0, target: 1 },
        GateOp::CNOT { control: 1, target: 0 },
        GateOp::CZ(0, 1),
    ];
    for g in gates {
        let u = gate_unitary(&g);
        // Local basis: the gate's k-th target is index bit k.
        let (n, local) = match g {
            GateOp::CNOT { .. } => (2, GateOp::CNOT { control: 0, target: 1 }),
            GateOp::CZ(..) => (2, GateOp::CZ(0, 1)),
            other => (1, other),
        };
        let expected = full_operator(n, &local);
        for (i, row) in expected.iter().enumerate() {
            for (j, e) in row.iter().enumerate() {
                assert!((u.at(i, j) - e).norm() < 1e-12, "{g:?} [{i}][{j}]");
            }
        }
        let id = u.adjoint().matmul(&u);
        for i in 0..u.dim {
            for j in 0..u.dim {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id.at(i, j).re - want).abs() < 1e-12 && id.at(i, j).im.abs() < 1e-12);
            }
        }
    }
}

#[test]
fn ry_closed_form() {
    let t = std::f64::consts::FRAC_PI_3;
    let s = apply_circuit(init_zero_state(2).unwrap(), &one_gate_per_layer(2, &[GateOp::RY(0, t)])).unwrap();
    // 2x2 product [[c, -s], [s, c]] . [1, 0]
    let a = s.amplitudes();
    assert!((a[0].re - (t / 2.0).cos()).abs() < 1e-12);
    assert!((a[1].re - (t / 2.0).sin()).abs() < 1e-12);
    assert!(a[2].norm() < 1e-15 && a[3].norm() < 1e-15);
    let s = apply_circuit(init_zero_state(2).unwrap(), &one_gate_per_layer(2, &[GateOp::RY(0, 0.7)])).unwrap();
    assert!((expectation_z(&s, 0).unwrap() - 0.7f64.cos()).abs() < 1e-12);
}

fn gate_strategy(n: usize) -> impl Strategy<Value = GateOp<f64>> {
    (0..7usize, 0..n, 0..n - 1, -10.0..10.0f64).prop_map(move |(kind, q, o, t)| {
        let other = if o >= q { o + 1 } else { o };
        match kind {
            0 => GateOp::H(q),
            1 => GateOp::X(q),
            2 => GateOp::RX(q, t),
            3 => GateOp::RY(q, t),
            4 => GateOp::RZ(q, t),
            5 => GateOp::CNOT { control: q, target: other },
            _ => GateOp::CZ(q, other),
        }
    })
}

fn circuit_strategy() -> impl Strategy<Value = (usize, Vec<GateOp<f64>>)> {
    (2..=6usize).prop_flat_map(|n| (Just(n), prop::collection::vec(gate_strategy(n), 0..30)))
}

proptest! {
    #[test]
    fn norm_is_preserved((n, gates) in circuit_strategy()) {
        let s = apply_circuit(init_zero_state(n).unwrap(), &one_gate_per_layer(n, &gates)).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        for q in 0..n {
            let z = expectation_z(&s, q).unwrap();
            prop_assert!((-1.0 - 1e-12..=1.0 + 1e-12).contains(&z));
        }
    }

    #[test]
    fn text_format_round_trips((n, gates) in circuit_strategy()) {
        let c = one_gate_per_layer(n, &gates);
        let parsed = Circuit::<f64>::parse(n, &c.to_text()).unwrap();
        prop_assert_eq!(parsed, c);
    }
}
