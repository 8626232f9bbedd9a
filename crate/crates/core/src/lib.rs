//! Exact lattice-polytope toolkit for toric Calabi-Yau hypersurfaces.

pub mod classify;
pub mod ehrhart;
pub mod error;
pub mod jacobian;
pub mod laurent;
pub mod lattice;
pub mod periods;
pub mod polytope;
pub mod reflexive;
pub mod report;

pub use error::{Error, Result};
pub use laurent::LaurentPolynomial;
pub use lattice::{IntMatrix, LatticeVector, RationalMatrix};
pub use polytope::{Face, LatticePolytope};
