use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::elim::ModEchelon;
use super::matrix::clear_denominators;
use super::{modp, IntMatrix, RationalMatrix};

/// How ranks are computed: exactly over Q, or over F_p for a large prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RankMode {
    Exact,
    Modular { prime: u64 },
}

impl RankMode {
    /// Modular mode with a prime in (2^60, 2^62) drawn from `seed`.
    pub fn modular(seed: u64) -> Self {
        RankMode::Modular {
            prime: modp::random_prime(seed),
        }
    }
}

/// Fraction-free forward elimination in place, searching pivots among the
/// first `cols` columns and updating whole rows. Returns the pivot columns.
/// Entries below the pivots become zero; every division is exact.
fn bareiss_forward(a: &mut [Vec<BigInt>], cols: usize) -> Vec<usize> {
    let width = a.first().map_or(0, |r| r.len());
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let (top, bottom) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        for row in bottom.iter_mut() {
            if row[c].is_zero() {
                for x in row.iter_mut().skip(c + 1) {
                    if !x.is_zero() {
                        *x = &*x * &pivot_row[c] / &prev;
                    }
                }
                continue;
            }
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..width {
                let v = &pivot_row[c] * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Exact rank of an integer matrix by Bareiss elimination.
pub fn bareiss_rank(m: &IntMatrix) -> usize {
    let mut a = m.to_rows();
    bareiss_forward(&mut a, m.cols()).len()
}

/// Determinant of a square integer matrix.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert_eq!(m.rows(), m.cols(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.to_rows();
    // track the sign of the row permutation separately
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return BigInt::zero();
        };
        if p != c {
            a.swap(p, c);
            sign = -sign;
        }
        for i in c + 1..n {
            for j in c + 1..n {
                let v = &a[c][c] * &a[i][j] - &a[i][c] * &a[c][j];
                a[i][j] = v / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[c][c].clone();
    }
    if sign < 0 {
        -prev
    } else {
        prev
    }
}

/// Rank of a rational matrix, exactly or over a prime field. In modular mode
/// the result never exceeds the exact rank.
pub fn rank(a: &RationalMatrix, mode: RankMode) -> usize {
    let rows: Vec<Vec<BigInt>> = (0..a.rows()).map(|r| a.integer_row(r)).collect();
    match mode {
        RankMode::Exact => bareiss_rank(&IntMatrix::from_rows(&rows, a.cols())),
        RankMode::Modular { prime } => {
            assert!(prime > 1 << 60, "modular rank needs a prime above 2^60");
            let mut ech = ModEchelon::new(a.cols(), prime);
            for r in &rows {
                ech.insert_big(r);
            }
            ech.rank()
        }
    }
}

/// Solves `a·x = b` exactly. Free variables are set to zero; `None` means the
/// system is inconsistent.
pub fn solve_rational(a: &RationalMatrix, b: &RationalMatrix) -> Option<RationalMatrix> {
    assert_eq!(a.rows(), b.rows(), "incompatible shapes");
    let n = a.cols();
    let k = b.cols();
    let mut aug: Vec<Vec<BigInt>> = (0..a.rows())
        .map(|r| {
            let mut row: Vec<BigRational> = a.row(r).to_vec();
            row.extend(b.row(r).iter().cloned());
            clear_denominators(&row)
        })
        .collect();
    let pivots = bareiss_forward(&mut aug, n);
    let rank = pivots.len();
    for row in aug.iter().skip(rank) {
        if row[n..].iter().any(|x| !x.is_zero()) {
            return None;
        }
    }
    let mut x = RationalMatrix::zeros(n, k);
    for col in 0..k {
        for (r, &pc) in pivots.iter().enumerate().rev() {
            let mut acc = BigRational::from_integer(aug[r][n + col].clone());
            for (j, a_rj) in aug[r].iter().enumerate().take(n).skip(pc + 1) {
                if !a_rj.is_zero() {
                    acc -= BigRational::from_integer(a_rj.clone()) * x.get(j, col);
                }
            }
            x.set(pc, col, acc / BigRational::from_integer(aug[r][pc].clone()));
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_examples() {
        let z = RationalMatrix::zeros(3, 4);
        assert_eq!(rank(&z, RankMode::Exact), 0);
        let id = IntMatrix::identity(5).to_rational();
        assert_eq!(rank(&id, RankMode::Exact), 5);
        assert_eq!(rank(&id, RankMode::modular(0)), 5);
        let rep = RationalMatrix::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[1, 2, 3]]);
        assert_eq!(rank(&rep, RankMode::Exact), 2);
        assert_eq!(rank(&rep, RankMode::modular(7)), 2);
    }

    #[test]
    fn determinant_examples() {
        let m = IntMatrix::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(determinant(&m), BigInt::from(-1));
        let m = IntMatrix::from_i64_rows(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 1]]);
        // cofactor expansion: 2(3−2) − 0 + 1(1−3) = 0
        assert_eq!(determinant(&m), BigInt::zero());
    }

    #[test]
    fn solve_consistent_and_not() {
        let a = RationalMatrix::from_i64_rows(&[&[2, 1], &[1, 3]]);
        let b = RationalMatrix::from_i64_rows(&[&[1], &[2]]);
        let x = solve_rational(&a, &b).unwrap();
        assert_eq!(a.mul(&x), b);
        let a = RationalMatrix::from_i64_rows(&[&[1, 1], &[2, 2]]);
        let b = RationalMatrix::from_i64_rows(&[&[1], &[3]]);
        assert!(solve_rational(&a, &b).is_none());
    }

    fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
        proptest::collection::vec(proptest::collection::vec(-4i64..=4, cols), rows)
    }

    proptest! {
        #[test]
        fn modular_never_exceeds_exact(m in matrix(5, 6), seed in 0u64..50) {
            let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let a = RationalMatrix::from_i64_rows(&rows);
            let exact = rank(&a, RankMode::Exact);
            let modular = rank(&a, RankMode::modular(seed));
            prop_assert!(modular <= exact);
            prop_assert_eq!(modular, exact);
        }

        #[test]
        fn solutions_satisfy_system(m in matrix(4, 3), x0 in proptest::collection::vec(-5i64..=5, 3)) {
            let rows: Vec<&[i64]> = m.iter().map(|r| r.as_slice()).collect();
            let a = RationalMatrix::from_i64_rows(&rows);
            let xs: Vec<Vec<i64>> = x0.iter().map(|&v| vec![v]).collect();
            let xr: Vec<&[i64]> = xs.iter().map(|r| r.as_slice()).collect();
            let b = a.mul(&RationalMatrix::from_i64_rows(&xr));
            let x = solve_rational(&a, &b).expect("consistent by construction");
            prop_assert_eq!(a.mul(&x), b);
        }
    }
}
