//! Finite groups as Cayley tables, with the machinery needed to study direct
//! product decompositions: subgroup lattices over bitsets, isomorphism
//! testing, normal complements, Remak decompositions, and an exhaustive
//! checker for the statement that every extension of `H` by `K` realised
//! inside a group isomorphic to `H x K` is a direct extension.

pub mod bitset;
pub mod catalog;
pub mod decomposition;
pub mod error;
pub mod group;
pub mod harness;
pub mod iso;
pub mod limits;
pub mod recipe;
pub mod subgroups;

pub use error::{Error, Result};
pub use group::{validate_group, Group, GroupRecord};
pub use iso::{find_isomorphism, Fingerprint, Iso};
pub use limits::Limits;
pub use recipe::{construct, construct_with, Recipe};
pub use subgroups::Subgroup;
