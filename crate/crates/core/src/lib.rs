//! Finite lattice toolkit: left modularity, gradedness, supersolvability,
//! congruences and the maximum graded quotient, with exhaustive checkers.

pub mod bitset;
pub mod canon;
pub mod catalog;
pub mod congruence;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod format;
pub mod harness;
pub mod lattice;
pub mod properties;

pub use canon::CanonicalKey;
pub use error::{Error, Result};
pub use lattice::{Chain, Lattice};
pub use properties::{Property, PropertyReport};
