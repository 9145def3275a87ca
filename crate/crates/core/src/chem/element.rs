/// Static data for one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Element {
    pub symbol: &'static str,
    pub atomic_number: u8,
    /// Normal valences used for implicit hydrogens; empty outside the organic subset.
    pub valences: &'static [u8],
}

const fn el(symbol: &'static str, atomic_number: u8, valences: &'static [u8]) -> Element {
    Element { symbol, atomic_number, valences }
}

static ELEMENTS: &[Element] = &[
    el("H", 1, &[]),
    el("He", 2, &[]),
    el("Li", 3, &[]),
    el("Be", 4, &[]),
    el("B", 5, &[3]),
    el("C", 6, &[4]),
    el("N", 7, &[3, 5]),
    el("O", 8, &[2]),
    el("F", 9, &[1]),
    el("Ne", 10, &[]),
    el("Na", 11, &[]),
    el("Mg", 12, &[]),
    el("Al", 13, &[]),
    el("Si", 14, &[]),
    el("P", 15, &[3, 5]),
    el("S", 16, &[2, 4, 6]),
    el("Cl", 17, &[1]),
    el("Ar", 18, &[]),
    el("K", 19, &[]),
    el("Ca", 20, &[]),
    el("Ti", 22, &[]),
    el("V", 23, &[]),
    el("Cr", 24, &[]),
    el("Mn", 25, &[]),
    el("Fe", 26, &[]),
    el("Co", 27, &[]),
    el("Ni", 28, &[]),
    el("Cu", 29, &[]),
    el("Zn", 30, &[]),
    el("Ga", 31, &[]),
    el("Ge", 32, &[]),
    el("As", 33, &[]),
    el("Se", 34, &[]),
    el("Br", 35, &[1]),
    el("Kr", 36, &[]),
    el("Rb", 37, &[]),
    el("Sr", 38, &[]),
    el("Zr", 40, &[]),
    el("Mo", 42, &[]),
    el("Ru", 44, &[]),
    el("Rh", 45, &[]),
    el("Pd", 46, &[]),
    el("Ag", 47, &[]),
    el("Cd", 48, &[]),
    el("In", 49, &[]),
    el("Sn", 50, &[]),
    el("Sb", 51, &[]),
    el("Te", 52, &[]),
    el("I", 53, &[1]),
    el("Xe", 54, &[]),
    el("Cs", 55, &[]),
    el("Ba", 56, &[]),
    el("Gd", 64, &[]),
    el("W", 74, &[]),
    el("Pt", 78, &[]),
    el("Au", 79, &[]),
    el("Hg", 80, &[]),
    el("Tl", 81, &[]),
    el("Pb", 82, &[]),
    el("Bi", 83, &[]),
];

pub fn lookup(symbol: &str) -> Option<&'static Element> {
    ELEMENTS.iter().find(|e| e.symbol == symbol)
}

/// Symbols allowed without brackets.
pub const ORGANIC_SUBSET: [&str; 10] = ["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"];

/// Lowercase aromatic forms allowed without brackets.
pub const AROMATIC_ORGANIC: [&str; 6] = ["b", "c", "n", "o", "p", "s"];

/// Lowercase aromatic forms allowed inside brackets.
pub const AROMATIC_BRACKET: [&str; 8] = ["b", "c", "n", "o", "p", "s", "se", "as"];
