use crate::error::{usage, Error, Result};
use crate::scalar::{sigmoid, Real};

/// Mean binary cross-entropy over the valid tasks of one sample, and its
/// gradient with respect to the logits. Masked tasks (`None`) contribute nothing;
/// a fully masked sample yields zero loss and zero gradient.
pub fn bce_loss<T: Real>(logits: &[T], labels: &[Option<bool>]) -> Result<(T, Vec<T>)> {
    if logits.len() != labels.len() {
        return Err(usage!("{} logits for {} labels", logits.len(), labels.len()));
    }
    let valid = labels.iter().filter(|l| l.is_some()).count();
    let mut grad = vec![T::zero(); logits.len()];
    if valid == 0 {
        return Ok((T::zero(), grad));
    }
    let inv = T::one() / T::from_usize_lossy(valid);
    let mut loss = T::zero();
    for ((&z, label), g) in logits.iter().zip(labels).zip(grad.iter_mut()) {
        let Some(y) = *label else { continue };
        let y = if y { T::one() } else { T::zero() };
        loss += z.max(T::zero()) - z * y + (-z.abs()).exp().ln_1p();
        *g = (sigmoid(z) - y) * inv;
    }
    Ok((loss * inv, grad))
}

/// Fraction of valid (sample, task) pairs whose prediction `σ(z) ≥ threshold`
/// matches the label. Ties predict the positive class.
pub fn accuracy<T: Real>(logits: &[Vec<T>], labels: &[Vec<Option<bool>>], threshold: f64) -> Result<f64> {
    let (correct, valid) = accuracy_counts(logits, labels, threshold)?;
    if valid == 0 {
        return Err(Error::Undefined("accuracy over zero labelled entries".into()));
    }
    Ok(correct as f64 / valid as f64)
}

/// `(correct, valid)` counts behind [`accuracy`].
pub fn accuracy_counts<T: Real>(logits: &[Vec<T>], labels: &[Vec<Option<bool>>], threshold: f64) -> Result<(usize, usize)> {
    if logits.len() != labels.len() {
        return Err(usage!("{} logit rows for {} label rows", logits.len(), labels.len()));
    }
    let t = T::lit(threshold);
    let mut correct = 0;
    let mut valid = 0;
    for (zs, ys) in logits.iter().zip(labels) {
        if zs.len() != ys.len() {
            return Err(usage!("{} logits for {} labels", zs.len(), ys.len()));
        }
        for (&z, y) in zs.iter().zip(ys) {
            if let Some(y) = *y {
                valid += 1;
                if (sigmoid(z) >= t) == y {
                    correct += 1;
                }
            }
        }
    }
    Ok((correct, valid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_logit() {
        let (l, g) = bce_loss(&[0.0], &[Some(true)]).unwrap();
        assert!((l - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(g, vec![-0.5]);
    }

    #[test]
    fn large_logit_is_stable() {
        let (l, _) = bce_loss(&[20.0], &[Some(true)]).unwrap();
        // ln(1 + e^-20) by series: e^-20 - e^-40/2
        let e = (-20.0f64).exp();
        assert!((l - (e - e * e / 2.0)).abs() < 1e-20);
        let (l, _) = bce_loss(&[-800.0f64], &[Some(true)]).unwrap();
        assert_eq!(l, 800.0);
    }

    #[test]
    fn per_task_average() {
        let (l, g) = bce_loss(&[0.0; 3], &[Some(true), Some(false), Some(true)]).unwrap();
        assert!((l - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(g, vec![-0.5 / 3.0, 0.5 / 3.0, -0.5 / 3.0]);
    }

    #[test]
    fn masked_entries() {
        let (l, g) = bce_loss(&[3.0, 0.0], &[None, Some(false)]).unwrap();
        assert!((l - std::f64::consts::LN_2).abs() < 1e-15);
        assert_eq!(g, vec![0.0, 0.5]);
        let (l, g) = bce_loss(&[1.0, 2.0], &[None, None]).unwrap();
        assert_eq!((l, g), (0.0, vec![0.0, 0.0]));
    }

    #[test]
    fn accuracy_cases() {
        let labels = vec![vec![Some(true)], vec![Some(false)], vec![Some(true)], vec![Some(false)]];
        let perfect: Vec<Vec<f64>> = vec![vec![20.0], vec![-20.0], vec![20.0], vec![-20.0]];
        assert_eq!(accuracy(&perfect, &labels, 0.5).unwrap(), 1.0);
        let inverted: Vec<Vec<f64>> = perfect.iter().map(|r| vec![-r[0]]).collect();
        assert_eq!(accuracy(&inverted, &labels, 0.5).unwrap(), 0.0);
        let zeros = vec![vec![0.0f64]; 4];
        assert_eq!(accuracy(&zeros, &labels, 0.5).unwrap(), 0.5);
        assert!(matches!(accuracy(&zeros, &vec![vec![None]; 4], 0.5), Err(Error::Undefined(_))));
    }
}
