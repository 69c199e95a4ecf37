//! Plane trees on `[n]`, dispositions from `[m]` to `[n]`, and the
//! Prüfer-style correspondence that transports statistics between them.
//!
//! The crate provides four families of combinatorial objects (multivariate
//! integer polynomials, dispositions, plane trees, and colored cycle
//! decompositions of permutations), exhaustive enumerators and uniform
//! samplers for them, and a verifier that proves the product identities
//! relating their generating functions by exact polynomial comparison at
//! desk scale.

pub mod bijection;
pub mod disposition;
pub mod error;
pub mod perm;
pub mod poly;
pub mod tree;
pub mod verify;

pub use error::{Error, Result};
