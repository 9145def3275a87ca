//! Seed derivation. Every random draw in a run flows from one global seed
//! through named substreams so that any component can be replayed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Named substreams of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substream {
    Split,
    Init,
    Shuffle,
    Noise,
    Data,
}

impl Substream {
    fn tag(self) -> u64 {
        match self {
            Substream::Split => 0x5350_4c49_54,
            Substream::Init => 0x494e_4954,
            Substream::Shuffle => 0x5348_5546,
            Substream::Noise => 0x4e4f_4953_45,
            Substream::Data => 0x4441_5441,
        }
    }
}

/// Folds a sequence of words into one seed.
pub fn derive_seed(words: &[u64]) -> u64 {
    words.iter().fold(0x51_7cc1_b727_220a_u64, |acc, &w| mix64(acc ^ mix64(w)))
}

pub fn substream_seed(global: u64, stream: Substream, index: u64) -> u64 {
    derive_seed(&[global, stream.tag(), index])
}

pub fn substream(global: u64, stream: Substream, index: u64) -> StreamRng {
    StreamRng::seed_from_u64(substream_seed(global, stream, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn substreams_are_distinct_and_reproducible() {
        let a: u64 = substream(7, Substream::Init, 1).gen();
        let b: u64 = substream(7, Substream::Init, 1).gen();
        let c: u64 = substream(7, Substream::Shuffle, 1).gen();
        let d: u64 = substream(7, Substream::Init, 2).gen();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn derive_seed_is_order_sensitive() {
        assert_ne!(derive_seed(&[1, 2]), derive_seed(&[2, 1]));
    }
}
