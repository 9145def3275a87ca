use serde::{Deserialize, Serialize};

use crate::error::{usage, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub symbol: String,
    pub atomic_number: u8,
    pub aromatic: bool,
    pub charge: i8,
    /// Attached hydrogens, explicit in brackets or filled from valence rules.
    pub hydrogens: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Stable small code used in fingerprint hashing.
    pub fn code(self) -> u64 {
        match self {
            BondOrder::Single => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            BondOrder::Aromatic => 4,
        }
    }

    /// Contribution to an atom's valence; aromatic bonds count as one.
    pub fn valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct MoleculeGraph {
    pub atoms: Vec<Atom>,
    pub bonds: Vec<Bond>,
}

impl MoleculeGraph {
    pub fn validate(&self) -> Result<()> {
        if self.atoms.is_empty() {
            return Err(usage!("molecule has no atoms"));
        }
        let mut seen = std::collections::HashSet::new();
        for b in &self.bonds {
            if b.a >= self.atoms.len() || b.b >= self.atoms.len() || b.a == b.b {
                return Err(usage!("bond {}-{} has invalid endpoints", b.a, b.b));
            }
            if !seen.insert((b.a.min(b.b), b.a.max(b.b))) {
                return Err(usage!("duplicate bond {}-{}", b.a, b.b));
            }
        }
        Ok(())
    }

    /// `(neighbor, order)` lists per atom.
    pub fn adjacency(&self) -> Vec<Vec<(usize, BondOrder)>> {
        let mut adj = vec![Vec::new(); self.atoms.len()];
        for b in &self.bonds {
            adj[b.a].push((b.b, b.order));
            adj[b.b].push((b.a, b.order));
        }
        adj
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.bonds.iter().filter(|b| b.a == atom || b.b == atom).count()
    }

    pub fn total_hydrogens(&self) -> usize {
        self.atoms.iter().map(|a| a.hydrogens as usize).sum()
    }

    /// Relabels atoms so that old atom `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.atoms.len() {
            return Err(usage!("permutation length {} for {} atoms", perm.len(), self.atoms.len()));
        }
        let mut atoms = self.atoms.clone();
        for (old, &new) in perm.iter().enumerate() {
            atoms[new] = self.atoms[old].clone();
        }
        let bonds = self.bonds.iter().map(|b| Bond { a: perm[b.a], b: perm[b.b], order: b.order }).collect();
        Ok(MoleculeGraph { atoms, bonds })
    }
}
