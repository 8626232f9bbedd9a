//! Double description method for polyhedral cones `{x : a_i·x ≥ 0}`.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::elim::IntEchelon;
use super::{gcd_all, solve_rational, IntMatrix, RationalMatrix};
use super::matrix::clear_denominators;

#[derive(Clone, Debug, PartialEq, Eq)]
struct BitSet(Vec<u64>);

impl BitSet {
    fn new(bits: usize) -> Self {
        BitSet(vec![0; bits.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn contains_all(&self, other: &BitSet) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    tight: BitSet,
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn primitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let g = gcd_all(&v);
    if !g.is_zero() && g != BigInt::from(1) {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
    v
}

/// Primitive generators of the extreme rays of the cone `{x ∈ Q^dim : a·x ≥ 0
/// for every row a}`, sorted lexicographically. Returns `None` when the rows
/// have rank below `dim` (the cone then contains a line). A cone equal to
/// `{0}` yields an empty list.
pub fn extreme_rays(rows: &[Vec<BigInt>], dim: usize) -> Option<Vec<Vec<BigInt>>> {
    let mut ech = IntEchelon::new(dim);
    let mut basis = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        if ech.insert(r.clone()) {
            basis.push(i);
            if basis.len() == dim {
                break;
            }
        }
    }
    if basis.len() < dim {
        return None;
    }

    let a = RationalMatrix::from_rows(
        &basis
            .iter()
            .map(|&i| {
                rows[i]
                    .iter()
                    .map(|x| num_rational::BigRational::from_integer(x.clone()))
                    .collect()
            })
            .collect::<Vec<_>>(),
        dim,
    );
    let inv = solve_rational(&a, &IntMatrix::identity(dim).to_rational())
        .expect("independent rows give an invertible matrix");
    let mut rays: Vec<Ray> = (0..dim)
        .map(|j| {
            let col: Vec<_> = (0..dim).map(|i| inv.get(i, j).clone()).collect();
            let v = primitive(clear_denominators(&col));
            let mut tight = BitSet::new(rows.len());
            for (k, &b) in basis.iter().enumerate() {
                if k != j {
                    tight.set(b);
                }
            }
            Ray { v, tight }
        })
        .collect();

    let mut in_basis = vec![false; rows.len()];
    for &b in &basis {
        in_basis[b] = true;
    }

    for (idx, row) in rows.iter().enumerate() {
        if in_basis[idx] {
            continue;
        }
        let values: Vec<BigInt> = rays.iter().map(|r| dot(row, &r.v)).collect();
        if values.iter().all(|s| !s.is_negative()) {
            for (r, s) in rays.iter_mut().zip(&values) {
                if s.is_zero() {
                    r.tight.set(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| values[i].is_negative()).collect();

        let mut next: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if common.count() + 2 < dim {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && r.tight.contains_all(&common));
                if blocked {
                    continue;
                }
                let v: Vec<BigInt> = rays[q]
                    .v
                    .iter()
                    .zip(&rays[p].v)
                    .map(|(vq, vp)| &values[p] * vq - &values[q] * vp)
                    .collect();
                let mut tight = common;
                tight.set(idx);
                next.push(Ray {
                    v: primitive(v),
                    tight,
                });
            }
        }
        for (i, mut r) in rays.into_iter().enumerate() {
            if values[i].is_zero() {
                r.tight.set(idx);
                next.push(r);
            } else if values[i].is_positive() {
                next.push(r);
            }
        }
        rays = next;
    }

    let mut out: Vec<Vec<BigInt>> = rays.into_iter().map(|r| r.v).collect();
    out.sort();
    out.dedup();
    Some(out)
}
