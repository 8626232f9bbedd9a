use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{egcd, IntMatrix};

/// Row-style Hermite normal form. Returns `(h, u)` with `u` unimodular and
/// `h = u·m`; pivots of `h` are positive and the entries above each pivot lie
/// in `[0, pivot)`. Zero rows of `h` come last.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.to_rows();
    let mut u = IntMatrix::identity(rows).to_rows();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        for i in r + 1..rows {
            if h[i][c].is_zero() {
                continue;
            }
            if h[r][c].is_zero() {
                h.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let a = h[r][c].clone();
            let b = h[i][c].clone();
            let (g, x, y) = egcd(&a, &b);
            let a_g = &a / &g;
            let b_g = &b / &g;
            combine_rows(&mut h, r, i, &x, &y, &b_g, &a_g);
            combine_rows(&mut u, r, i, &x, &y, &b_g, &a_g);
        }
        if h[r][c].is_zero() {
            continue;
        }
        if h[r][c].is_negative() {
            negate(&mut h[r]);
            negate(&mut u[r]);
        }
        let pivot = h[r][c].clone();
        for j in 0..r {
            let q = h[j][c].div_floor(&pivot);
            if !q.is_zero() {
                sub_multiple(&mut h, j, r, &q);
                sub_multiple(&mut u, j, r, &q);
            }
        }
        r += 1;
    }
    (
        IntMatrix::from_rows(&h, cols),
        IntMatrix::from_rows(&u, rows),
    )
}

/// Nonzero rows of the Hermite normal form: the canonical basis of the row
/// lattice of `m`.
pub fn row_basis(m: &IntMatrix) -> IntMatrix {
    let (h, _) = hnf(m);
    let rows: Vec<Vec<BigInt>> = h
        .to_rows()
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    IntMatrix::from_rows(&rows, m.cols())
}

// (row_r, row_i) <- (x·row_r + y·row_i, −b·row_r + a·row_i); determinant 1.
fn combine_rows(
    m: &mut [Vec<BigInt>],
    r: usize,
    i: usize,
    x: &BigInt,
    y: &BigInt,
    b: &BigInt,
    a: &BigInt,
) {
    for c in 0..m[r].len() {
        let vr = &m[r][c];
        let vi = &m[i][c];
        if vr.is_zero() && vi.is_zero() {
            continue;
        }
        let new_r = x * vr + y * vi;
        let new_i = a * vi - b * vr;
        m[r][c] = new_r;
        m[i][c] = new_i;
    }
}

fn sub_multiple(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for c in 0..m[target].len() {
        if !m[source][c].is_zero() {
            let d = q * &m[source][c];
            m[target][c] -= d;
        }
    }
}

fn negate(row: &mut [BigInt]) {
    for x in row {
        *x = -&*x;
    }
}

/// Smith invariant factors `d₁ | d₂ | …`, `min(rows, cols)` of them, zeros last.
pub fn snf(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.rows();
    let cols = m.cols();
    let mut a = m.to_rows();
    let k = rows.min(cols);
    for t in 0..k {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[bi][bj].abs() <= a[i][j].abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            a.swap(t, bi);
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..cols {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
    }
    let mut d: Vec<BigInt> = (0..k).map(|i| a[i][i].abs()).collect();
    for i in 0..k {
        for j in i + 1..k {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

/// Basis (as rows, in Hermite form) of the integer kernel `{x : m·x = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (h, u) = hnf(&m.transpose());
    let kernel: Vec<Vec<BigInt>> = (0..h.rows())
        .filter(|&r| h.row(r).iter().all(Zero::is_zero))
        .map(|r| u.row_vec(r))
        .collect();
    if kernel.is_empty() {
        return IntMatrix::zeros(0, m.cols());
    }
    row_basis(&IntMatrix::from_rows(&kernel, m.cols()))
}

/// Basis of the saturation `span_Q(rows of m) ∩ Z^cols`, in Hermite form.
pub fn saturation(m: &IntMatrix) -> IntMatrix {
    let complement = integer_kernel(m);
    integer_kernel(&complement)
}

/// Index of the row lattice of `m` inside its saturation, i.e. the product of
/// the nonzero Smith factors.
pub fn lattice_index(m: &IntMatrix) -> BigInt {
    snf(m)
        .into_iter()
        .filter(|d| !d.is_zero())
        .fold(BigInt::one(), |acc, d| acc * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::determinant;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    fn is_hermite(h: &IntMatrix) -> bool {
        let mut last_pivot: Option<usize> = None;
        let mut seen_zero = false;
        for r in 0..h.rows() {
            let row = h.row(r);
            match row.iter().position(|x| !x.is_zero()) {
                None => seen_zero = true,
                Some(c) => {
                    if seen_zero || last_pivot.is_some_and(|p| c <= p) || !row[c].is_positive() {
                        return false;
                    }
                    for above in 0..r {
                        let e = h.get(above, c);
                        if e.is_negative() || e >= &row[c] {
                            return false;
                        }
                    }
                    last_pivot = Some(c);
                }
            }
        }
        true
    }

    #[test]
    fn identity_is_fixed() {
        let id = IntMatrix::identity(3);
        let (h, u) = hnf(&id);
        assert_eq!(h, id);
        assert_eq!(u, id);
    }

    #[test]
    fn small_example_by_multiplication() {
        let a = m(&[&[2, 4], &[6, 8]]);
        let (h, u) = hnf(&a);
        assert_eq!(u.mul(&a), h);
        assert_eq!(determinant(&u).abs(), BigInt::one());
        assert!(is_hermite(&h));
        // |det| is preserved: 2·8 − 4·6 = −8
        assert_eq!(h.get(0, 0) * h.get(1, 1), BigInt::from(8));
    }

    #[test]
    fn zero_matrix() {
        let z = IntMatrix::zeros(2, 2);
        let (h, u) = hnf(&z);
        assert_eq!(h, z);
        assert_eq!(u, IntMatrix::identity(2));
    }

    #[test]
    fn smith_examples() {
        let to = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(snf(&m(&[&[5, 0], &[0, 5]])), to(&[5, 5]));
        assert_eq!(snf(&m(&[&[2, 0], &[0, 3]])), to(&[1, 6]));
        assert_eq!(snf(&m(&[&[0, 0], &[0, 4]])), to(&[4, 0]));
        // 5·I − J in dimension 4
        let q = m(&[&[4, -1, -1, -1], &[-1, 4, -1, -1], &[-1, -1, 4, -1], &[-1, -1, -1, 4]]);
        assert_eq!(snf(&q), to(&[1, 5, 5, 5]));
        assert_eq!(snf(&m(&[&[2, 1], &[1, 1]])), to(&[1, 1]));
    }

    #[test]
    fn kernel_and_saturation() {
        let a = m(&[&[1, 1, 1]]);
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        assert!(a.mul(&k.transpose()).is_zero());
        assert_eq!(lattice_index(&k), BigInt::one());

        let d = m(&[&[2, 0, 0], &[0, 2, 0]]);
        let s = saturation(&d);
        assert_eq!(s, m(&[&[1, 0, 0], &[0, 1, 0]]));

        let full = m(&[&[2, 1], &[0, 3]]);
        assert_eq!(saturation(&full), IntMatrix::identity(2));
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
        proptest::collection::vec(-6i64..=6, rows * cols).prop_map(move |v| {
            let rs: Vec<Vec<BigInt>> = v.chunks(cols).map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
            IntMatrix::from_rows(&rs, cols)
        })
    }

    // product of elementary row operations
    fn unimodular(n: usize, ops: &[(usize, usize, i64)]) -> IntMatrix {
        let mut u = IntMatrix::identity(n).to_rows();
        for &(i, j, k) in ops {
            let (i, j) = (i % n, j % n);
            if i == j {
                u.swap(0, i);
                continue;
            }
            for c in 0..n {
                let d = &u[j][c] * k;
                u[i][c] += d;
            }
        }
        IntMatrix::from_rows(&u, n)
    }

    proptest! {
        #[test]
        fn hnf_is_canonical(a in small_matrix(3, 4), ops in proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..8)) {
            let (h, u) = hnf(&a);
            prop_assert_eq!(&u.mul(&a), &h);
            prop_assert!(is_hermite(&h));
            prop_assert_eq!(determinant(&u).abs(), BigInt::one());
            let v = unimodular(3, &ops);
            let (h2, _) = hnf(&v.mul(&a));
            prop_assert_eq!(h2, h);
        }

        #[test]
        fn smith_chain_and_invariance(a in small_matrix(3, 3), l in proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6), r in proptest::collection::vec((0usize..3, 0usize..3, -3i64..=3), 0..6)) {
            let d = snf(&a);
            for w in d.windows(2) {
                if !w[0].is_zero() {
                    prop_assert!((&w[1] % &w[0]).is_zero());
                } else {
                    prop_assert!(w[1].is_zero());
                }
            }
            let prod: BigInt = d.iter().fold(BigInt::one(), |acc, x| acc * x);
            prop_assert_eq!(prod, determinant(&a).abs());
            let b = unimodular(3, &l).mul(&a).mul(&unimodular(3, &r));
            prop_assert_eq!(snf(&b), d);
        }

        #[test]
        fn kernel_is_annihilated(a in small_matrix(2, 4)) {
            let k = integer_kernel(&a);
            prop_assert!(a.mul(&k.transpose()).is_zero());
            let rank = crate::lattice::bareiss_rank(&a);
            prop_assert_eq!(k.rows(), 4 - rank);
        }
    }
}
