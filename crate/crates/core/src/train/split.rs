use rand::seq::SliceRandom;

use crate::error::{config_err, Result};
use crate::rng::{substream, Substream};

/// Seeded train/validation partition of `0..n`.
///
/// The validation set has `round(n · val_fraction)` members, clamped to
/// `1..=n-1` so that both sides are non-empty.
pub fn split_indices(n: usize, seed: u64, val_fraction: f64) -> Result<(Vec<usize>, Vec<usize>)> {
    if n < 2 {
        return Err(config_err!("cannot split {n} samples; need at least 2"));
    }
    if !(val_fraction > 0.0 && val_fraction < 1.0) {
        return Err(config_err!("train.val_fraction = {val_fraction} must lie in (0, 1)"));
    }
    let n_val = ((n as f64 * val_fraction).round() as usize).clamp(1, n - 1);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut substream(seed, Substream::Split, 0));
    let val = order.split_off(n - n_val);
    Ok((order, val))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ten_samples() {
        let (train, val) = split_indices(10, 4, 0.2).unwrap();
        assert_eq!((train.len(), val.len()), (8, 2));
        let mut all: Vec<_> = train.iter().chain(&val).copied().collect();
        all.sort();
        assert_eq!(all, (0..10).collect::<Vec<_>>());
        assert_eq!(split_indices(10, 4, 0.2).unwrap(), (train, val));
    }

    #[test]
    fn seeds_differ() {
        assert_ne!(split_indices(100, 1, 0.2).unwrap(), split_indices(100, 2, 0.2).unwrap());
    }

    #[test]
    fn degenerate_inputs() {
        assert!(split_indices(1, 0, 0.2).is_err());
        assert!(split_indices(10, 0, 0.0).is_err());
        assert_eq!(split_indices(2, 0, 0.01).unwrap().1.len(), 1);
    }
}
