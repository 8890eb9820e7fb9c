//! Character quasigroups of metacyclic groups.
//!
//! The crate computes the irreducible characters of `M(k,l,m,n)` exactly in
//! cyclotomic integers, assembles the weighted character quasigroup, and
//! searches for quasigroup lifts and balanced group covers. The
//! [`classify`] module checks structural cover criteria for particular
//! families of targets.

pub mod characters;
pub mod classify;
pub mod covers;
pub mod cyclotomic;
pub mod error;
pub mod metacyclic;
pub mod orbits;
pub mod wqg;

#[cfg(test)]
mod proptests;

pub use characters::{CharacterLabel, CharacterTable, ClassFunction};
pub use covers::{BlockAssignment, Covering, LiftOptions, Multiset, SearchOptions};
pub use cyclotomic::{CycloContext, Cyclotomic, RationalScalar, RootSum};
pub use error::{Error, Result};
pub use metacyclic::{is_isomorphic, CayleyTable, GroupElement, MetacyclicParams};
pub use orbits::OrbitTable;
pub use wqg::WeightedQuasigroup;
