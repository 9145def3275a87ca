use num_complex::Complex;

use super::gate::GateOp;
use crate::error::{config_err, usage, Result};
use crate::scalar::Real;

pub const MIN_QUBITS: usize = 2;
pub const MAX_QUBITS: usize = 14;

/// Amplitude of one computational basis state.
pub type ComplexAmp<T> = Complex<T>;

/// Dense pure state over `n_qubits`. Amplitudes are little-endian: qubit 0 is
/// the least significant bit of the index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    n_qubits: usize,
    amps: Vec<ComplexAmp<T>>,
}

impl<T: Real> StateVector<T> {
    /// `|0...0>` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n_qubits) {
            return Err(config_err!("qubit count {n_qubits} outside {MIN_QUBITS}..={MAX_QUBITS}"));
        }
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << n_qubits];
        amps[0] = Complex::new(T::one(), T::zero());
        Ok(StateVector { n_qubits, amps })
    }

    /// Builds a state from raw amplitudes. The caller is responsible for normalization.
    pub fn from_amplitudes(amps: Vec<ComplexAmp<T>>) -> Result<Self> {
        let len = amps.len();
        if !len.is_power_of_two() {
            return Err(usage!("amplitude count {len} is not a power of two"));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if !(MIN_QUBITS..=MAX_QUBITS).contains(&n_qubits) {
            return Err(config_err!("qubit count {n_qubits} outside {MIN_QUBITS}..={MAX_QUBITS}"));
        }
        Ok(StateVector { n_qubits, amps })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[ComplexAmp<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Applies a gate in place.
    pub fn apply(&mut self, gate: &GateOp<T>) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    pub(crate) fn apply_unchecked(&mut self, gate: &GateOp<T>) {
        match *gate {
            GateOp::H(q) => {
                let s = T::FRAC_1_SQRT_2();
                self.for_pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = (x + y).scale(s);
                    *b = (x - y).scale(s);
                });
            }
            GateOp::X(q) => self.for_pairs(q, std::mem::swap),
            GateOp::RX(q, t) => {
                let (s, c) = (t * T::half()).sin_cos();
                self.for_pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    // [[c, -is], [-is, c]]
                    *a = Complex::new(c * x.re + s * y.im, c * x.im - s * y.re);
                    *b = Complex::new(s * x.im + c * y.re, -s * x.re + c * y.im);
                });
            }
            GateOp::RY(q, t) => {
                let (s, c) = (t * T::half()).sin_cos();
                self.for_pairs(q, |a, b| {
                    let (x, y) = (*a, *b);
                    *a = x.scale(c) - y.scale(s);
                    *b = x.scale(s) + y.scale(c);
                });
            }
            GateOp::RZ(q, t) => {
                let (s, c) = (t * T::half()).sin_cos();
                let lo = Complex::new(c, -s);
                let hi = Complex::new(c, s);
                self.for_pairs(q, |a, b| {
                    *a = *a * lo;
                    *b = *b * hi;
                });
            }
            GateOp::CNOT { control, target } => {
                let cmask = 1usize << control;
                let tmask = 1usize << target;
                for i in 0..self.amps.len() {
                    if i & cmask != 0 && i & tmask == 0 {
                        self.amps.swap(i, i | tmask);
                    }
                }
            }
            GateOp::CZ(a, b) => {
                let mask = (1usize << a) | (1usize << b);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & mask == mask {
                        *amp = -*amp;
                    }
                }
            }
        }
    }

    /// Calls `f(amp[i], amp[i | 1<<q])` for every index `i` with bit `q` clear.
    #[inline]
    fn for_pairs(&mut self, q: usize, mut f: impl FnMut(&mut ComplexAmp<T>, &mut ComplexAmp<T>)) {
        let stride = 1usize << q;
        for chunk in self.amps.chunks_exact_mut(stride << 1) {
            let (lo, hi) = chunk.split_at_mut(stride);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                f(a, b);
            }
        }
    }

    /// `<Z_qubit>`: +1 weight where the qubit's bit is 0, -1 where it is 1.
    pub fn expectation_z(&self, qubit: usize) -> Result<T> {
        if qubit >= self.n_qubits {
            return Err(usage!("qubit {qubit} out of range for {} qubits", self.n_qubits));
        }
        Ok(self.expectation_z_unchecked(qubit))
    }

    pub(crate) fn expectation_z_unchecked(&self, qubit: usize) -> T {
        let mask = 1usize << qubit;
        let mut acc = T::zero();
        for (i, a) in self.amps.iter().enumerate() {
            if i & mask == 0 {
                acc += a.norm_sqr();
            } else {
                acc -= a.norm_sqr();
            }
        }
        acc
    }
}

/// `|0...0>` on `n_qubits` qubits.
pub fn init_zero_state<T: Real>(n_qubits: usize) -> Result<StateVector<T>> {
    StateVector::zero(n_qubits)
}

/// Applies one gate, consuming and returning the state.
pub fn apply_gate<T: Real>(mut state: StateVector<T>, gate: &GateOp<T>) -> Result<StateVector<T>> {
    state.apply(gate)?;
    Ok(state)
}

pub fn expectation_z<T: Real>(state: &StateVector<T>, qubit: usize) -> Result<T> {
    state.expectation_z(qubit)
}
