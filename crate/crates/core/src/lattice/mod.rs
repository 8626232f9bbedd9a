//! Exact integer and rational linear algebra plus lattice-point enumeration.
//!
//! All arithmetic in this module is arbitrary precision. The only exception is
//! the enumeration inner loop, which switches to `i64` when a bound check
//! proves no intermediate value can overflow.

mod cone;
mod elim;
pub(crate) mod enumerate;
mod hnf;
mod matrix;
pub mod modp;
mod rank;
mod vector;

pub use cone::extreme_rays;
pub use elim::{FieldMode, IntEchelon, ModEchelon, RowSpace, Scalar};
pub use enumerate::{count_lattice_points, lattice_points_in, BoundingBox, Facet};
pub use hnf::{hnf, integer_kernel, lattice_index, row_basis, saturation, snf};
pub use matrix::{IntMatrix, RationalMatrix};
pub use rank::{bareiss_rank, determinant, rank, solve_rational, RankMode};
pub use vector::LatticeVector;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Greatest common divisor of a slice, always nonnegative; 0 for an all-zero slice.
pub fn gcd_all(values: &[BigInt]) -> BigInt {
    values
        .iter()
        .fold(BigInt::zero(), |acc, v| acc.gcd(v))
        .abs()
}

/// Extended gcd: returns (g, x, y) with g = x·a + y·b and g ≥ 0.
pub(crate) fn egcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::from(1), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::from(1));
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn egcd_bezout_identity() {
        for (a, b) in [(12, 18), (-7, 3), (0, -5), (5, 0), (0, 0), (-4, -6)] {
            let (a, b) = (BigInt::from(a), BigInt::from(b));
            let (g, x, y) = egcd(&a, &b);
            assert_eq!(&x * &a + &y * &b, g);
            assert_eq!(g, a.gcd(&b));
        }
    }
}
