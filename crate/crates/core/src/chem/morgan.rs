//! Circular (Morgan-style) fingerprints.
//!
//! Hashing is FNV-1a over the little-endian bytes of 64-bit words, followed by the
//! SplitMix64 finalizer. Nothing depends on pointer values or `std` hasher state, so
//! bit positions are identical across runs and platforms.

use serde::{Deserialize, Serialize};

use super::molecule::MoleculeGraph;
use crate::error::{config_err, usage, Result};
use crate::rng::mix64;

pub const DEFAULT_RADIUS: usize = 6;
pub const DEFAULT_N_BITS: usize = 1024;

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0000_0100_0000_01b3;

pub fn stable_hash(words: &[u64]) -> u64 {
    let mut h = FNV_OFFSET;
    for w in words {
        for byte in w.to_le_bytes() {
            h ^= byte as u64;
            h = h.wrapping_mul(FNV_PRIME);
        }
    }
    mix64(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub bits: Vec<bool>,
    pub radius: usize,
    pub n_set: usize,
}

impl Fingerprint {
    pub fn from_bits(bits: Vec<bool>, radius: usize) -> Self {
        let n_set = bits.iter().filter(|&&b| b).count();
        Fingerprint { bits, radius, n_set }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    /// Parses a `0`/`1` string. `radius` is recorded as given since it cannot be recovered.
    pub fn from_bitstring(s: &str, radius: usize) -> Result<Self> {
        let bits = s
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(usage!("fingerprint character {i} is '{other}', expected 0 or 1")),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_bits(bits, radius))
    }
}

fn atom_invariants(mol: &MoleculeGraph) -> Vec<u64> {
    let adj = mol.adjacency();
    mol.atoms
        .iter()
        .enumerate()
        .map(|(i, a)| {
            stable_hash(&[
                a.atomic_number as u64,
                adj[i].len() as u64,
                a.hydrogens as u64,
                a.charge as i64 as u64,
                a.aromatic as u64,
            ])
        })
        .collect()
}

/// Per-radius atom codes, `codes[r][atom]` for `r` in `0..=radius`.
pub fn atom_codes(mol: &MoleculeGraph, radius: usize) -> Vec<Vec<u64>> {
    let adj = mol.adjacency();
    let mut out = vec![atom_invariants(mol)];
    for r in 1..=radius {
        let prev = &out[r - 1];
        let next = (0..mol.atoms.len())
            .map(|i| {
                let mut env: Vec<(u64, u64)> = adj[i].iter().map(|&(j, order)| (order.code(), prev[j])).collect();
                env.sort_unstable();
                let mut words = Vec::with_capacity(2 + 2 * env.len());
                words.push(r as u64);
                words.push(prev[i]);
                for (o, c) in env {
                    words.push(o);
                    words.push(c);
                }
                stable_hash(&words)
            })
            .collect();
        out.push(next);
    }
    out
}

pub fn morgan_fingerprint(mol: &MoleculeGraph, radius: usize, n_bits: usize) -> Result<Fingerprint> {
    if n_bits == 0 {
        return Err(config_err!("fingerprint length must be positive"));
    }
    mol.validate()?;
    let mut bits = vec![false; n_bits];
    for codes in atom_codes(mol, radius) {
        for code in codes {
            bits[(code % n_bits as u64) as usize] = true;
        }
    }
    Ok(Fingerprint::from_bits(bits, radius))
}
