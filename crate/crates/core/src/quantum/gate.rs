use std::fmt;

use num_complex::Complex;

use crate::error::{usage, Result};
use crate::scalar::Real;

/// Gate families supported by the simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    H,
    X,
    RX,
    RY,
    RZ,
    CNOT,
    CZ,
}

impl GateKind {
    pub const ALL: [GateKind; 7] =
        [GateKind::H, GateKind::X, GateKind::RX, GateKind::RY, GateKind::RZ, GateKind::CNOT, GateKind::CZ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::CZ => 2,
            _ => 1,
        }
    }

    pub fn is_rotation(self) -> bool {
        matches!(self, GateKind::RX | GateKind::RY | GateKind::RZ)
    }

    pub fn name(self) -> &'static str {
        match self {
            GateKind::H => "H",
            GateKind::X => "X",
            GateKind::RX => "RX",
            GateKind::RY => "RY",
            GateKind::RZ => "RZ",
            GateKind::CNOT => "CNOT",
            GateKind::CZ => "CZ",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        GateKind::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A gate applied to specific qubits. Rotations are `exp(-i θ P / 2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateOp<T> {
    H(usize),
    X(usize),
    RX(usize, T),
    RY(usize, T),
    RZ(usize, T),
    CNOT { control: usize, target: usize },
    CZ(usize, usize),
}

impl<T: Real> GateOp<T> {
    /// Builds a gate from its parts, checking arity and angle presence.
    pub fn new(kind: GateKind, targets: &[usize], angle: Option<T>) -> Result<Self> {
        if targets.len() != kind.arity() {
            return Err(usage!("{kind} takes {} target(s), got {}", kind.arity(), targets.len()));
        }
        if kind.is_rotation() != angle.is_some() {
            return Err(usage!("{kind}: angle must be given iff the gate is a rotation"));
        }
        if let Some(a) = angle {
            if !a.is_finite() {
                return Err(usage!("{kind}: angle must be finite"));
            }
        }
        let q = targets[0];
        let gate = match kind {
            GateKind::H => GateOp::H(q),
            GateKind::X => GateOp::X(q),
            GateKind::RX => GateOp::RX(q, angle.unwrap_or_default()),
            GateKind::RY => GateOp::RY(q, angle.unwrap_or_default()),
            GateKind::RZ => GateOp::RZ(q, angle.unwrap_or_default()),
            GateKind::CNOT => GateOp::CNOT { control: q, target: targets[1] },
            GateKind::CZ => GateOp::CZ(q, targets[1]),
        };
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(usage!("{kind}: targets must be distinct"));
        }
        Ok(gate)
    }

    pub fn kind(&self) -> GateKind {
        match self {
            GateOp::H(_) => GateKind::H,
            GateOp::X(_) => GateKind::X,
            GateOp::RX(..) => GateKind::RX,
            GateOp::RY(..) => GateKind::RY,
            GateOp::RZ(..) => GateKind::RZ,
            GateOp::CNOT { .. } => GateKind::CNOT,
            GateOp::CZ(..) => GateKind::CZ,
        }
    }

    /// Target qubits; for CNOT the control comes first.
    pub fn targets(&self) -> Vec<usize> {
        match *self {
            GateOp::H(q) | GateOp::X(q) | GateOp::RX(q, _) | GateOp::RY(q, _) | GateOp::RZ(q, _) => vec![q],
            GateOp::CNOT { control, target } => vec![control, target],
            GateOp::CZ(a, b) => vec![a, b],
        }
    }

    pub fn angle(&self) -> Option<T> {
        match *self {
            GateOp::RX(_, a) | GateOp::RY(_, a) | GateOp::RZ(_, a) => Some(a),
            _ => None,
        }
    }

    pub(crate) fn set_angle(&mut self, angle: T) {
        match self {
            GateOp::RX(_, a) | GateOp::RY(_, a) | GateOp::RZ(_, a) => *a = angle,
            _ => {}
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind().arity() == 2
    }

    /// Checks targets against a register width.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let targets = self.targets();
        if let Some(&q) = targets.iter().find(|&&q| q >= n_qubits) {
            return Err(usage!("{}: qubit {q} out of range for {n_qubits} qubits", self.kind()));
        }
        if targets.len() == 2 && targets[0] == targets[1] {
            return Err(usage!("{}: targets must be distinct", self.kind()));
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(usage!("{}: non-finite angle", self.kind()));
            }
        }
        Ok(())
    }
}

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix<T> {
    pub dim: usize,
    pub data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    pub fn identity(dim: usize) -> Self {
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex::new(T::one(), T::zero());
        }
        Matrix { dim, data }
    }

    pub fn at(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        let mut data = self.data.clone();
        for r in 0..d {
            for c in 0..d {
                data[c * d + r] = self.data[r * d + c].conj();
            }
        }
        Matrix { dim: d, data }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        let d = self.dim;
        let mut data = vec![Complex::new(T::zero(), T::zero()); d * d];
        for r in 0..d {
            for k in 0..d {
                let a = self.data[r * d + k];
                for c in 0..d {
                    data[r * d + c] = data[r * d + c] + a * rhs.data[k * d + c];
                }
            }
        }
        Matrix { dim: d, data }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.data.iter().zip(&other.data).map(|(a, b)| (*a - *b).norm()).fold(T::zero(), T::max)
    }
}

/// Local unitary of a gate. For two-qubit gates the local basis index is
/// `bit(targets[0]) + 2 * bit(targets[1])`, so for CNOT the control is the
/// low bit.
pub fn gate_unitary<T: Real>(gate: &GateOp<T>) -> Matrix<T> {
    let z = T::zero();
    let o = T::one();
    let c = |re: T, im: T| Complex::new(re, im);
    let rows: Vec<Complex<T>> = match *gate {
        GateOp::H(_) => {
            let s = T::FRAC_1_SQRT_2();
            vec![c(s, z), c(s, z), c(s, z), c(-s, z)]
        }
        GateOp::X(_) => vec![c(z, z), c(o, z), c(o, z), c(z, z)],
        GateOp::RX(_, t) => {
            let (s, co) = (t * T::half()).sin_cos();
            vec![c(co, z), c(z, -s), c(z, -s), c(co, z)]
        }
        GateOp::RY(_, t) => {
            let (s, co) = (t * T::half()).sin_cos();
            vec![c(co, z), c(-s, z), c(s, z), c(co, z)]
        }
        GateOp::RZ(_, t) => {
            let (s, co) = (t * T::half()).sin_cos();
            vec![c(co, -s), c(z, z), c(z, z), c(co, s)]
        }
        GateOp::CNOT { .. } => {
            // |c t> -> |c, t xor c>, index = c + 2t
            let mut m = vec![c(z, z); 16];
            for idx in 0..4usize {
                let (ctrl, tgt) = (idx & 1, idx >> 1);
                let out = ctrl | ((tgt ^ ctrl) << 1);
                m[out * 4 + idx] = c(o, z);
            }
            m
        }
        GateOp::CZ(..) => {
            let mut m = vec![c(z, z); 16];
            for idx in 0..4usize {
                m[idx * 4 + idx] = if idx == 3 { c(-o, z) } else { c(o, z) };
            }
            m
        }
    };
    let dim = if gate.is_two_qubit() { 4 } else { 2 };
    Matrix { dim, data: rows }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn close(a: &Matrix<f64>, b: &Matrix<f64>, tol: f64) -> bool {
        a.max_abs_diff(b) < tol
    }

    #[test]
    fn rz_zero_is_identity() {
        assert!(close(&gate_unitary(&GateOp::RZ(0, 0.0)), &Matrix::identity(2), 1e-12));
    }

    #[test]
    fn pauli_x_matrix() {
        let x = gate_unitary::<f64>(&GateOp::X(0));
        let expected: Vec<Complex<f64>> = [0.0, 1.0, 1.0, 0.0].iter().map(|&r| Complex::new(r, 0.0)).collect();
        assert_eq!(x.data, expected);
    }

    #[test]
    fn rx_pi_is_minus_i_x() {
        // exp(-i pi X / 2) = cos(pi/2) I - i sin(pi/2) X = -i X
        let rx = gate_unitary(&GateOp::RX(0, PI));
        let x = gate_unitary::<f64>(&GateOp::X(0));
        let minus_i_x = Matrix { dim: 2, data: x.data.iter().map(|v| v * Complex::new(0.0, -1.0)).collect() };
        assert!(close(&rx, &minus_i_x, 1e-12));
    }

    #[test]
    fn constructor_rejects_bad_shapes() {
        assert!(GateOp::<f64>::new(GateKind::RX, &[0], None).is_err());
        assert!(GateOp::<f64>::new(GateKind::H, &[0], Some(1.0)).is_err());
        assert!(GateOp::<f64>::new(GateKind::CNOT, &[1, 1], None).is_err());
        assert!(GateOp::<f64>::new(GateKind::CZ, &[0], None).is_err());
        assert!(GateOp::<f64>::new(GateKind::RY, &[0], Some(f64::NAN)).is_err());
        assert_eq!(GateOp::<f64>::new(GateKind::CNOT, &[2, 0], None).unwrap(), GateOp::CNOT { control: 2, target: 0 });
    }

    #[test]
    fn validate_checks_range() {
        assert!(GateOp::<f64>::H(2).validate(2).is_err());
        assert!(GateOp::<f64>::CZ(0, 1).validate(2).is_ok());
    }
}
