//! Supercharacter theories of finite groups, computed exactly from character tables.
//!
//! The central operations are the two dual refinement maps: [`sct::clpt`]
//! partitions the classes by the values of the supercharacters `σ_X`, and
//! [`sct::irpt`] partitions the irreducible characters by the central
//! character values `ω_χ(Ŝ)`. Alternating them refines any partition to the
//! coarsest supercharacter theory below it, and [`enumerate::all_scts`]
//! uses that to list every supercharacter theory of a table.

pub mod auts;
pub mod bitset;
pub mod chartable;
pub mod cli;
pub mod cyclotomic;
pub mod enumerate;
mod error;
pub mod partition;
pub mod sct;

pub use bitset::BitSet;
pub use chartable::{CharacterTable, CharSubset, ClassSubset, ValidationFailure, ValidationReport};
pub use cyclotomic::{Cyclotomic, Rational};
pub use error::{Error, Result};
pub use partition::Partition;
pub use sct::SuperTheory;
pub use auts::TableAutomorphism;
pub use enumerate::{all_scts, EnumerationResult};
