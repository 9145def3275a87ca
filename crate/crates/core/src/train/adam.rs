use serde::{Deserialize, Serialize};

use crate::error::{usage, Error, Result};
use crate::model::ParamSet;
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdamHyper {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
}

impl Default for AdamHyper {
    fn default() -> Self {
        AdamHyper { beta1: 0.9, beta2: 0.999, eps: 1e-8 }
    }
}

/// First and second moment estimates over a flattened parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState<T> {
    pub m: Vec<T>,
    pub v: Vec<T>,
    pub t: u64,
    pub hyper: AdamHyper,
}

impl<T: Real> AdamState<T> {
    pub fn new(n_params: usize) -> Self {
        Self::with_hyper(n_params, AdamHyper::default())
    }

    pub fn with_hyper(n_params: usize, hyper: AdamHyper) -> Self {
        AdamState { m: vec![T::zero(); n_params], v: vec![T::zero(); n_params], t: 0, hyper }
    }

    /// One bias-corrected update. A non-finite gradient aborts before any state changes.
    pub fn step_slice(&mut self, params: &mut [T], grads: &[T], lr: f64) -> Result<()> {
        if params.len() != self.m.len() || grads.len() != self.m.len() {
            return Err(usage!(
                "optimizer holds {} moments, got {} params and {} grads",
                self.m.len(),
                params.len(),
                grads.len()
            ));
        }
        if let Some(i) = grads.iter().position(|g| !g.is_finite()) {
            return Err(Error::NonFinite(format!("gradient entry {i} is {}", grads[i])));
        }
        self.t += 1;
        let AdamHyper { beta1, beta2, eps } = self.hyper;
        let (b1, b2) = (T::lit(beta1), T::lit(beta2));
        let c1 = T::lit(1.0 - beta1.powi(self.t as i32));
        let c2 = T::lit(1.0 - beta2.powi(self.t as i32));
        let (lr, eps) = (T::lit(lr), T::lit(eps));
        for ((p, &g), (m, v)) in params.iter_mut().zip(grads).zip(self.m.iter_mut().zip(self.v.iter_mut())) {
            *m = b1 * *m + (T::one() - b1) * g;
            *v = b2 * *v + (T::one() - b2) * g * g;
            let m_hat = *m / c1;
            let v_hat = *v / c2;
            *p -= lr * m_hat / (v_hat.sqrt() + eps);
        }
        Ok(())
    }

    pub fn step<P: ParamSet<T>>(&mut self, params: &mut P, grads: &P, lr: f64) -> Result<()> {
        if let Some((name, i)) = grads.first_non_finite() {
            return Err(Error::NonFinite(format!("gradient of {name}[{i}]")));
        }
        let mut flat = params.flat();
        self.step_slice(&mut flat, &grads.flat(), lr)?;
        params.set_flat(&flat)
    }
}
