//! Identifying which groups balanced-cover dihedral, dicyclic and split
//! metacyclic character quasigroups.

pub mod catalog;
pub mod dicyclic;
pub mod dihedral;
pub mod presentation;
pub mod split;

pub use catalog::{catalog, group_by_name, identify, CatalogGroup};
pub use dicyclic::{
    classify_dicyclic, dicyclic_case, dicyclic_check, dicyclic_predicted_set, third_family_group, DicyclicCase,
    DicyclicClassification, DicyclicOutcome, DicyclicReport, DicyclicWitness, SquareCase, TwistCase,
};
pub use dihedral::{
    dihedral_check, dihedral_equivalence, find_dihedral_witness, DihedralComparison, DihedralReport, DihedralWitness,
};
pub use presentation::enumerate_group;
pub use split::{
    semidirect, split_blocks, split_cover_construct, split_hypotheses, verify_split_witness, SplitCover, SplitReport,
    SplitWitness,
};
