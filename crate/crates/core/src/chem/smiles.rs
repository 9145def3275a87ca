//! Parser for a practical subset of SMILES.

use std::collections::BTreeMap;

use super::element::{self, AROMATIC_BRACKET, AROMATIC_ORGANIC, ORGANIC_SUBSET};
use super::molecule::{Atom, Bond, BondOrder, MoleculeGraph};
use crate::error::{Error, Result};

fn err(position: usize, message: impl Into<String>) -> Error {
    Error::Smiles { position, message: message.into() }
}

struct RingOpen {
    atom: usize,
    bond: Option<BondOrder>,
    position: usize,
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    atoms: Vec<Atom>,
    bonds: Vec<Bond>,
    /// Atoms whose hydrogen count was given in brackets.
    explicit_h: Vec<bool>,
    prev: Option<usize>,
    pending: Option<(BondOrder, usize)>,
    branches: Vec<(Option<usize>, usize)>,
    rings: BTreeMap<u32, RingOpen>,
}

pub fn parse_smiles(text: &str) -> Result<MoleculeGraph> {
    if text.trim().is_empty() {
        return Err(err(0, "empty SMILES"));
    }
    let mut p = Parser {
        text: text.as_bytes(),
        pos: 0,
        atoms: Vec::new(),
        bonds: Vec::new(),
        explicit_h: Vec::new(),
        prev: None,
        pending: None,
        branches: Vec::new(),
        rings: BTreeMap::new(),
    };
    p.run()?;
    p.fill_hydrogens();
    let mol = MoleculeGraph { atoms: p.atoms, bonds: p.bonds };
    mol.validate()?;
    Ok(mol)
}

/// Drops stereo markers (`/`, `\`, `@`) so that stereo-annotated input parses as its flat graph.
pub fn strip_stereo(text: &str) -> String {
    text.chars().filter(|c| !matches!(c, '/' | '\\' | '@')).collect()
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }

    fn run(&mut self) -> Result<()> {
        while let Some(c) = self.peek() {
            let start = self.pos;
            match c {
                b'(' => {
                    if self.prev.is_none() {
                        return Err(err(start, "branch without a preceding atom"));
                    }
                    if self.pending.is_some() {
                        return Err(err(start, "bond symbol before branch"));
                    }
                    self.branches.push((self.prev, start));
                    self.pos += 1;
                }
                b')' => {
                    let Some((prev, _)) = self.branches.pop() else {
                        return Err(err(start, "unmatched ')'"));
                    };
                    if self.pending.is_some() {
                        return Err(err(start, "dangling bond at end of branch"));
                    }
                    self.prev = prev;
                    self.pos += 1;
                }
                b'-' | b'=' | b'#' | b':' => {
                    if self.pending.is_some() {
                        return Err(err(start, "two consecutive bond symbols"));
                    }
                    let order = match c {
                        b'-' => BondOrder::Single,
                        b'=' => BondOrder::Double,
                        b'#' => BondOrder::Triple,
                        _ => BondOrder::Aromatic,
                    };
                    self.pending = Some((order, start));
                    self.pos += 1;
                }
                b'.' => {
                    if self.pending.is_some() {
                        return Err(err(start, "bond symbol before '.'"));
                    }
                    self.prev = None;
                    self.pos += 1;
                }
                b'0'..=b'9' => {
                    self.pos += 1;
                    self.ring_bond((c - b'0') as u32, start)?;
                }
                b'%' => {
                    let digits = self.text.get(start + 1..start + 3);
                    let Some(d) = digits.filter(|d| d.iter().all(u8::is_ascii_digit)) else {
                        return Err(err(start, "'%' must be followed by two digits"));
                    };
                    let label = ((d[0] - b'0') * 10 + (d[1] - b'0')) as u32;
                    self.pos += 3;
                    self.ring_bond(label, start)?;
                }
                b'[' => {
                    let atom = self.bracket_atom()?;
                    self.add_atom(atom, true)?;
                }
                b'/' | b'\\' => return Err(err(start, "directional bonds are not supported")),
                b'@' => return Err(err(start, "chirality is not supported")),
                _ => {
                    let atom = self.organic_atom()?;
                    self.add_atom(atom, false)?;
                }
            }
        }
        if let Some((_, pos)) = self.pending {
            return Err(err(pos, "dangling bond at end of input"));
        }
        if let Some(&(_, pos)) = self.branches.last() {
            return Err(err(pos, "unclosed branch"));
        }
        if let Some(ring) = self.rings.values().min_by_key(|r| r.position) {
            return Err(err(ring.position, "unmatched ring bond"));
        }
        if self.atoms.is_empty() {
            return Err(err(0, "no atoms"));
        }
        Ok(())
    }

    fn add_atom(&mut self, atom: Atom, bracket: bool) -> Result<()> {
        let idx = self.atoms.len();
        self.atoms.push(atom);
        self.explicit_h.push(bracket);
        match (self.prev, self.pending.take()) {
            (Some(prev), pending) => {
                let order = pending.map(|(o, _)| o).unwrap_or_else(|| self.default_order(prev, idx));
                self.bonds.push(Bond { a: prev, b: idx, order });
            }
            (None, Some((_, at))) => return Err(err(at, "bond without a preceding atom")),
            (None, None) => {}
        }
        self.prev = Some(idx);
        Ok(())
    }

    fn default_order(&self, a: usize, b: usize) -> BondOrder {
        if self.atoms[a].aromatic && self.atoms[b].aromatic {
            BondOrder::Aromatic
        } else {
            BondOrder::Single
        }
    }

    fn ring_bond(&mut self, label: u32, position: usize) -> Result<()> {
        let Some(atom) = self.prev else {
            return Err(err(position, "ring bond without a preceding atom"));
        };
        let pending = self.pending.take().map(|(o, _)| o);
        match self.rings.remove(&label) {
            None => {
                self.rings.insert(label, RingOpen { atom, bond: pending, position });
            }
            Some(open) => {
                if open.atom == atom {
                    return Err(err(position, "ring bond closes on the same atom"));
                }
                let order = match (open.bond, pending) {
                    (Some(a), Some(b)) if a != b => {
                        return Err(err(position, "conflicting ring bond orders"));
                    }
                    (Some(a), _) | (None, Some(a)) => a,
                    (None, None) => self.default_order(open.atom, atom),
                };
                let (lo, hi) = (open.atom.min(atom), open.atom.max(atom));
                if self.bonds.iter().any(|b| b.a.min(b.b) == lo && b.a.max(b.b) == hi) {
                    return Err(err(position, "ring bond duplicates an existing bond"));
                }
                self.bonds.push(Bond { a: open.atom, b: atom, order });
            }
        }
        Ok(())
    }

    fn organic_atom(&mut self) -> Result<Atom> {
        let start = self.pos;
        let rest = &self.text[start..];
        let two = rest.get(..2).and_then(|s| std::str::from_utf8(s).ok());
        let one = rest.get(..1).and_then(|s| std::str::from_utf8(s).ok()).unwrap_or("");
        let (symbol, aromatic, len) = if let Some(t) = two.filter(|t| *t == "Cl" || *t == "Br") {
            (t.to_string(), false, 2)
        } else if ORGANIC_SUBSET.contains(&one) {
            (one.to_string(), false, 1)
        } else if AROMATIC_ORGANIC.contains(&one) {
            (one.to_uppercase(), true, 1)
        } else {
            let shown = std::str::from_utf8(rest).ok().and_then(|s| s.chars().next()).unwrap_or('?');
            return Err(err(start, format!("unsupported token '{shown}'")));
        };
        let el = element::lookup(&symbol).expect("organic subset element");
        self.pos += len;
        Ok(Atom { symbol, atomic_number: el.atomic_number, aromatic, charge: 0, hydrogens: 0 })
    }

    fn bracket_atom(&mut self) -> Result<Atom> {
        let open = self.pos;
        self.pos += 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            return Err(err(self.pos, "isotopes are not supported"));
        }
        let sym_start = self.pos;
        let first = self.peek().ok_or_else(|| err(open, "unterminated bracket atom"))?;
        if !first.is_ascii_alphabetic() {
            return Err(err(sym_start, "expected element symbol"));
        }
        let second = self.text.get(sym_start + 1).copied().filter(u8::is_ascii_lowercase);
        let (symbol, aromatic) = if first.is_ascii_uppercase() {
            let one = (first as char).to_string();
            match second.map(|s| format!("{one}{}", s as char)) {
                Some(two) if element::lookup(&two).is_some() => {
                    self.pos += 2;
                    (two, false)
                }
                _ => {
                    self.pos += 1;
                    (one, false)
                }
            }
        } else {
            let one = (first as char).to_string();
            match second.map(|s| format!("{one}{}", s as char)) {
                Some(two) if AROMATIC_BRACKET.contains(&two.as_str()) => {
                    self.pos += 2;
                    (two, true)
                }
                _ if AROMATIC_BRACKET.contains(&one.as_str()) => {
                    self.pos += 1;
                    (one, true)
                }
                _ => return Err(err(sym_start, format!("unsupported aromatic symbol '{one}'"))),
            }
        };
        let canonical = if aromatic {
            let mut c = symbol.chars();
            let head = c.next().unwrap().to_ascii_uppercase();
            format!("{head}{}", c.as_str())
        } else {
            symbol
        };
        let el = element::lookup(&canonical).ok_or_else(|| err(sym_start, format!("unknown element '{canonical}'")))?;

        if self.peek() == Some(b'@') {
            return Err(err(self.pos, "chirality is not supported"));
        }
        let mut hydrogens = 0u8;
        if self.peek() == Some(b'H') {
            self.pos += 1;
            hydrogens = 1;
            if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                hydrogens = d - b'0';
                self.pos += 1;
            }
        }
        let mut charge: i32 = 0;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            let unit = if sign == b'+' { 1 } else { -1 };
            self.pos += 1;
            if let Some(d) = self.peek().filter(u8::is_ascii_digit) {
                charge = unit * (d - b'0') as i32;
                self.pos += 1;
            } else {
                charge = unit;
                while self.peek() == Some(sign) {
                    charge += unit;
                    self.pos += 1;
                }
            }
        }
        match self.peek() {
            Some(b']') => self.pos += 1,
            Some(b':') => return Err(err(self.pos, "atom classes are not supported")),
            Some(_) => return Err(err(self.pos, "unexpected character in bracket atom")),
            None => return Err(err(open, "unterminated bracket atom")),
        }
        Ok(Atom {
            symbol: canonical,
            atomic_number: el.atomic_number,
            aromatic,
            charge: charge.clamp(i8::MIN as i32, i8::MAX as i32) as i8,
            hydrogens,
        })
    }

    /// Implicit hydrogens for organic-subset atoms: the smallest normal valence that
    /// accommodates the bonds, minus one more for aromatic atoms.
    fn fill_hydrogens(&mut self) {
        let mut used = vec![0u32; self.atoms.len()];
        for b in &self.bonds {
            used[b.a] += b.order.valence() as u32;
            used[b.b] += b.order.valence() as u32;
        }
        for (i, atom) in self.atoms.iter_mut().enumerate() {
            if self.explicit_h[i] {
                continue;
            }
            let valences = element::lookup(&atom.symbol).map(|e| e.valences).unwrap_or(&[]);
            let sum = used[i];
            let Some(target) = valences.iter().map(|&v| v as u32).find(|&v| v >= sum) else {
                atom.hydrogens = 0;
                continue;
            };
            let h = if atom.aromatic { target.saturating_sub(sum + 1) } else { target - sum };
            atom.hydrogens = h as u8;
        }
    }
}
