//! Exact arithmetic for even lattices, finite quadratic forms, primitive
//! embeddings into the Enriques lattice `N = U ⊕ U(2) ⊕ E8(2)` and the
//! imaginary-quadratic class-group data attached to singular K3 surfaces.

pub mod accept;
pub mod cm;
pub mod embed;
pub mod error;
pub mod fqf;
pub mod lattice;
pub mod matrix;
pub mod nikulin;
pub mod standard;

pub use error::{Error, Result};
pub use fqf::{discriminant_form, FiniteQuadraticForm, Subgroup};
pub use lattice::Lattice;
pub use matrix::IntMatrix;
