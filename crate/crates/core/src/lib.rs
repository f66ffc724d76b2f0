//! Nest graphs and the permutation-group machinery used to classify the
//! edge-transitive core-free ones.
//!
//! * [`perm`] and [`group`]: permutations and Schreier–Sims groups.
//! * [`graph`]: simple graphs, partitions, quotients and covers.
//! * [`aut`]: automorphism groups and canonical certificates.
//! * [`nest`]: the `Nest(n; a, b, c; k)` family.
//! * [`symmetry`]: transitivity, cores and block systems.
//! * [`census`]: the exhaustive census, its JSONL store and reports.

pub mod aut;
pub mod census;
pub mod error;
pub mod graph;
pub mod group;
pub mod nest;
pub mod perm;
pub mod symmetry;
mod union_find;

pub use aut::{are_isomorphic, automorphism_group, canonical_form, Certificate};
pub use census::{CensusOptions, CensusRecord};
pub use error::{Error, Result};
pub use graph::{Graph, Partition};
pub use group::{cyclic_core, cyclic_subgroup, PermGroup};
pub use nest::NestParams;
pub use perm::{compose, Perm};
pub use symmetry::BlockSystemInfo;
