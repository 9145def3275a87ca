//! Independent oracles and fixtures shared by the integration tests.
//!
//! Nothing here calls into the simulator: gate matrices are written out from
//! their textbook definitions and full operators are built by Kronecker products.
#![allow(dead_code)]

use num_complex::Complex64 as C;
use qlstm_core::quantum::GateOp;
use rand::Rng;

pub type Mat = Vec<Vec<C>>;

fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

pub fn identity(dim: usize) -> Mat {
    (0..dim).map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect()).collect()
}

pub fn matmul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let m = b[0].len();
    let k = b.len();
    (0..n).map(|i| (0..m).map(|j| (0..k).map(|t| a[i][t] * b[t][j]).sum()).collect()).collect()
}

pub fn adjoint(a: &Mat) -> Mat {
    (0..a[0].len()).map(|i| (0..a.len()).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn kron(a: &Mat, b: &Mat) -> Mat {
    let (ra, ca, rb, cb) = (a.len(), a[0].len(), b.len(), b[0].len());
    let mut out = vec![vec![c(0.0, 0.0); ca * cb]; ra * rb];
    for i in 0..ra {
        for j in 0..ca {
            for k in 0..rb {
                for l in 0..cb {
                    out[i * rb + k][j * cb + l] = a[i][j] * b[k][l];
                }
            }
        }
    }
    out
}

pub fn add(a: &Mat, b: &Mat) -> Mat {
    a.iter().zip(b).map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect()).collect()
}

pub fn scale(a: &Mat, s: f64) -> Mat {
    a.iter().map(|r| r.iter().map(|x| x * s).collect()).collect()
}

pub fn h() -> Mat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![c(s, 0.0), c(s, 0.0)], vec![c(s, 0.0), c(-s, 0.0)]]
}

pub fn x() -> Mat {
    vec![vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]]
}

pub fn z() -> Mat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-1.0, 0.0)]]
}

pub fn rx(t: f64) -> Mat {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    vec![vec![c(co, 0.0), c(0.0, -si)], vec![c(0.0, -si), c(co, 0.0)]]
}

pub fn ry(t: f64) -> Mat {
    let (co, si) = ((t / 2.0).cos(), (t / 2.0).sin());
    vec![vec![c(co, 0.0), c(-si, 0.0)], vec![c(si, 0.0), c(co, 0.0)]]
}

pub fn rz(t: f64) -> Mat {
    vec![vec![C::from_polar(1.0, -t / 2.0), c(0.0, 0.0)], vec![c(0.0, 0.0), C::from_polar(1.0, t / 2.0)]]
}

fn p0() -> Mat {
    vec![vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.0, 0.0)]]
}

fn p1() -> Mat {
    vec![vec![c(0.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]
}

/// `⊗_q ops[q]` with qubit 0 as the least significant index bit.
pub fn kron_all(ops: &[Mat]) -> Mat {
    ops.iter().rev().skip(1).fold(ops.last().unwrap().clone(), |acc, m| kron(&acc, m))
}

pub fn embed(n: usize, placed: &[(usize, Mat)]) -> Mat {
    let mut ops: Vec<Mat> = vec![identity(2); n];
    for (q, m) in placed {
        ops[*q] = m.clone();
    }
    kron_all(&ops)
}

/// Full `2^n × 2^n` operator of one gate.
pub fn full_operator(n: usize, gate: &GateOp<f64>) -> Mat {
    match *gate {
        GateOp::H(q) => embed(n, &[(q, h())]),
        GateOp::X(q) => embed(n, &[(q, x())]),
        GateOp::RX(q, t) => embed(n, &[(q, rx(t))]),
        GateOp::RY(q, t) => embed(n, &[(q, ry(t))]),
        GateOp::RZ(q, t) => embed(n, &[(q, rz(t))]),
        GateOp::CNOT { control, target } => add(&embed(n, &[(control, p0())]), &embed(n, &[(control, p1()), (target, x())])),
        GateOp::CZ(a, b) => add(&embed(n, &[(a, p0())]), &embed(n, &[(a, p1()), (b, z())])),
    }
}

pub fn apply(m: &Mat, v: &[C]) -> Vec<C> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

pub fn zero_state(n: usize) -> Vec<C> {
    let mut v = vec![c(0.0, 0.0); 1 << n];
    v[0] = c(1.0, 0.0);
    v
}

/// Final amplitudes of `gates` (applied in order) on `|0…0⟩`.
pub fn oracle_run(n: usize, gates: &[GateOp<f64>]) -> Vec<C> {
    gates.iter().fold(zero_state(n), |v, g| apply(&full_operator(n, g), &v))
}

pub fn random_gate<R: Rng>(rng: &mut R, n: usize) -> GateOp<f64> {
    let q = rng.gen_range(0..n);
    let mut other = rng.gen_range(0..n - 1);
    if other >= q {
        other += 1;
    }
    let t = rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI);
    match rng.gen_range(0..7) {
        0 => GateOp::H(q),
        1 => GateOp::X(q),
        2 => GateOp::RX(q, t),
        3 => GateOp::RY(q, t),
        4 => GateOp::RZ(q, t),
        5 => GateOp::CNOT { control: q, target: other },
        _ => GateOp::CZ(q, other),
    }
}

/// Density-matrix evolution of a layered circuit with a bit-flip channel on
/// every qubit after every layer. Returns `⟨Z_q⟩` for each qubit.
pub fn density_matrix_z(n: usize, layers: &[Vec<GateOp<f64>>], p: f64) -> Vec<f64> {
    let psi = zero_state(n);
    let mut rho: Mat = psi.iter().map(|a| psi.iter().map(|b| a * b.conj()).collect()).collect();
    for layer in layers {
        for g in layer {
            let u = full_operator(n, g);
            rho = matmul(&matmul(&u, &rho), &adjoint(&u));
        }
        for q in 0..n {
            let xq = embed(n, &[(q, x())]);
            let flipped = matmul(&matmul(&xq, &rho), &xq);
            rho = add(&scale(&rho, 1.0 - p), &scale(&flipped, p));
        }
    }
    (0..n)
        .map(|q| (0..1usize << n).map(|k| if k >> q & 1 == 0 { rho[k][k].re } else { -rho[k][k].re }).sum())
        .collect()
}

/// `(smiles, heavy atoms, bonds, total hydrogens)`, counted by hand.
pub const SMILES_CORPUS: [(&str, usize, usize, usize); 30] = [
    ("C", 1, 0, 4),
    ("CC", 2, 1, 6),
    ("CCO", 3, 2, 6),
    ("C1CC1", 3, 3, 6),
    ("C(=O)O", 3, 2, 2),
    ("c1ccccc1", 6, 6, 6),
    ("CC(=O)O", 4, 3, 4),
    ("C#N", 2, 1, 1),
    ("N", 1, 0, 3),
    ("O", 1, 0, 2),
    ("CCN(CC)CC", 7, 6, 15),
    ("c1ccncc1", 6, 6, 5),
    ("c1ccoc1", 5, 5, 4),
    ("c1ccsc1", 5, 5, 4),
    ("c1cc[nH]c1", 5, 5, 5),
    ("O=C=O", 3, 2, 0),
    ("C=C", 2, 1, 4),
    ("C#C", 2, 1, 2),
    ("ClC(Cl)(Cl)Cl", 5, 4, 0),
    ("CC(C)(C)C", 5, 4, 12),
    ("C1CCCCC1", 6, 6, 12),
    ("c1ccc2ccccc2c1", 10, 11, 8),
    ("CC(=O)Oc1ccccc1C(=O)O", 13, 13, 8),
    ("[Na+].[Cl-]", 2, 0, 0),
    ("[NH4+]", 1, 0, 4),
    ("CS(=O)(=O)C", 5, 4, 6),
    ("CCS", 3, 2, 6),
    ("OCC%10CC%10", 5, 5, 8),
    ("C[N+](C)(C)C", 5, 4, 12),
    ("c1ccc(cc1)O", 7, 7, 6),
];

/// A 200-row SMILES table with BACE's column names (`mol`, `CID`, `Class`).
pub fn bace_like_csv(rows: usize, seed: u64) -> String {
    use rand::SeedableRng;
    let scaffolds = ["c1ccccc1", "c1ccncc1", "C1CCCCC1", "c1ccc2ccccc2c1", "C1CCNCC1", "c1ccoc1", "c1ccsc1"];
    let prefixes = ["C", "CC", "O", "N", "Cl", "F", "OC(=O)", "CCN(C)C", "N#C", "CC(C)"];
    let suffixes = ["C", "O", "N", "Br", "C(=O)O", "C(=O)N", "OC", "C#N", "S(=O)(=O)N", "CC=C"];
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = String::from("mol,CID,Class\n");
    for i in 0..rows {
        let s = scaffolds[rng.gen_range(0..scaffolds.len())];
        let p = prefixes[rng.gen_range(0..prefixes.len())];
        let t = suffixes[rng.gen_range(0..suffixes.len())];
        let smiles = format!("{p}{s}{t}");
        let label = (smiles.contains('N') || smiles.contains('n')) as u8 ^ (rng.gen::<f64>() < 0.1) as u8;
        out.push_str(&format!("{smiles},BACE_{i},{label}\n"));
    }
    out
}

/// Central finite difference of `f` at `x[i]`.
pub fn central_diff(f: &mut dyn FnMut(&[f64]) -> f64, x: &[f64], i: usize, h: f64) -> f64 {
    let mut xp = x.to_vec();
    let mut xm = x.to_vec();
    xp[i] += h;
    xm[i] -= h;
    (f(&xp) - f(&xm)) / (2.0 * h)
}

pub fn grad_close(analytic: f64, numeric: f64, rel: f64, abs: f64) -> bool {
    let diff = (analytic - numeric).abs();
    diff <= abs || diff <= rel * analytic.abs().max(numeric.abs())
}
