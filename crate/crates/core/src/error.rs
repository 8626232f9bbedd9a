use num_bigint::BigInt;
use thiserror::Error;

use crate::lattice::LatticeVector;

/// Errors raised by the toolkit.
///
/// Everything except [`Error::Inconsistent`] is a precondition or input
/// problem; `Inconsistent` means two independent computations that must agree
/// did not.
#[derive(Debug, Error)]
pub enum Error {
    #[error("points span an affine subspace of dimension {affine_dim}, expected {ambient_dim}")]
    NotFullDimensional { affine_dim: usize, ambient_dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("the origin is not an interior point of the polytope")]
    OriginNotInterior,

    #[error("facet offset {offset} ≠ 1: not reflexive (facet {facet} with normal {normal}); dual is not a lattice polytope")]
    NotReflexive {
        facet: usize,
        normal: LatticeVector,
        offset: BigInt,
    },

    #[error("the inequality system does not define a bounded region")]
    Unbounded,

    #[error("point {0} is not contained in the polytope")]
    PointOutside(LatticeVector),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("Newton polytope mismatch: vertices without coefficient {missing:?}, support points outside {outside:?}")]
    NewtonPolytopeMismatch {
        missing: Vec<LatticeVector>,
        outside: Vec<LatticeVector>,
    },

    #[error("Laurent polynomial is not regular for this polytope")]
    NotRegular,

    #[error("expected a simplex, got a polytope with {vertices} vertices")]
    NotSimplex { vertices: usize },

    #[error("not enough coefficients: need {needed}, have {have}")]
    InsufficientTerms { needed: usize, have: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),
}

impl Error {
    /// True when the error signals disagreement between two routes that must
    /// agree, as opposed to a violated precondition.
    pub fn is_internal(&self) -> bool {
        matches!(self, Error::Inconsistent(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
