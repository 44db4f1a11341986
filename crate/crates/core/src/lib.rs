//! Additive combinatorics over prime fields.
//!
//! The crate bundles the machinery needed to study sets `A ⊆ F_p` whose
//! sumset or restricted sumset equals the set of quadratic residues:
//! Legendre symbols and residue sets ([`field`]), dense functions on `Z_m`
//! with both convolutions and energies ([`funcspace`]), Gauss/Jacobi/Weil
//! character sums ([`charsums`]), perfect difference sets and the Singer
//! construction ([`diffsets`]), sumset diagnostics ([`sumsets`]), the
//! transform built from the Legendre character ([`chartransform`]), and an
//! exhaustive search engine that emits certificates ([`search`]).

pub mod charsums;
pub mod chartransform;
pub mod diffsets;
pub mod error;
pub mod field;
pub mod funcspace;
pub mod identities;
pub mod search;
pub mod sumsets;
pub mod tolerance;

pub use error::{Error, Result};
pub use field::{Elem, FSet, PrimeField};
pub use funcspace::{CFunction, IntFunction, ZmFunction};
pub use sumsets::Mode;
