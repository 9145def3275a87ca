//! Molecules, SMILES parsing, circular fingerprints and dataset tables.

pub mod dataset;
pub mod element;
pub mod molecule;
pub mod morgan;
pub mod smiles;

pub use dataset::{
    load_dataset, synthetic_clusters, DatasetFormat, DatasetRow, DatasetSpec, DatasetTable, LoadOptions, Provenance,
    SyntheticSpec,
};
pub use molecule::{Atom, Bond, BondOrder, MoleculeGraph};
pub use morgan::{morgan_fingerprint, Fingerprint, DEFAULT_N_BITS, DEFAULT_RADIUS};
pub use smiles::{parse_smiles, strip_stereo};
