//! Normal form under GL(n, Z) and vertex relabelling.
//!
//! For a fixed vertex order σ, the row-style Hermite form of the `n × v`
//! matrix `(σV)ᵀ` is invariant under `GL(n, Z)`, and it determines `σV` up to
//! that action. The normal form is the column-lexicographic minimum over all
//! orders. Column `j` of the Hermite form only depends on the first `j + 1`
//! columns, so the minimum is found by extending prefixes one vertex at a
//! time and keeping just those that realize the smallest next column.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::LatticePolytope;
use crate::lattice::{egcd, IntMatrix};

#[derive(Clone, PartialEq, Eq, Hash)]
struct Prefix {
    used: Vec<bool>,
    // rows of the transform U with U·(σV)ᵀ in Hermite form so far
    transform: Vec<Vec<BigInt>>,
    rank: usize,
}

impl Prefix {
    /// Next Hermite column after appending column `c`, together with the
    /// updated transform.
    fn extend(&self, c: &[BigInt]) -> (Vec<BigInt>, Vec<Vec<BigInt>>, usize) {
        let n = c.len();
        let mut u = self.transform.clone();
        let mut col: Vec<BigInt> = u
            .iter()
            .map(|row| row.iter().zip(c).map(|(a, b)| a * b).sum())
            .collect();
        let r = self.rank;
        if r == n || col[r..].iter().all(Zero::is_zero) {
            return (col, u, r);
        }
        // gather the gcd of col[r..] into row r
        for i in r + 1..n {
            if col[i].is_zero() {
                continue;
            }
            if col[r].is_zero() {
                col.swap(r, i);
                u.swap(r, i);
                continue;
            }
            let (g, x, y) = egcd(&col[r], &col[i]);
            let a = &col[r] / &g;
            let b = &col[i] / &g;
            for k in 0..n {
                let ur = &u[r][k];
                let ui = &u[i][k];
                let new_r = &x * ur + &y * ui;
                let new_i = &a * ui - &b * ur;
                u[r][k] = new_r;
                u[i][k] = new_i;
            }
            col[r] = g;
            col[i] = BigInt::zero();
        }
        if col[r].is_negative() {
            col[r] = -&col[r];
            for x in u[r].iter_mut() {
                *x = -&*x;
            }
        }
        for j in 0..r {
            let q = col[j].div_floor(&col[r]);
            if !q.is_zero() {
                let d = &q * &col[r];
                col[j] -= d;
                let sub: Vec<BigInt> = u[r].iter().map(|x| &q * x).collect();
                for (x, s) in u[j].iter_mut().zip(sub) {
                    *x -= s;
                }
            }
        }
        (col, u, r + 1)
    }
}

/// Vertex matrix (`v × n`) in normal form: equal for two polytopes exactly
/// when one is the image of the other under `GL(n, Z)`.
pub fn canonical_form(p: &LatticePolytope) -> IntMatrix {
    let n = p.dim();
    let verts: Vec<Vec<BigInt>> = p.vertices().iter().map(|v| v.coords().to_vec()).collect();
    let nv = verts.len();
    let mut identity = vec![vec![BigInt::zero(); n]; n];
    for (i, row) in identity.iter_mut().enumerate() {
        row[i] = BigInt::from(1);
    }
    let mut frontier = vec![Prefix {
        used: vec![false; nv],
        transform: identity,
        rank: 0,
    }];
    let mut columns: Vec<Vec<BigInt>> = Vec::with_capacity(nv);
    for _ in 0..nv {
        let mut best: Option<Vec<BigInt>> = None;
        let mut next: HashSet<Prefix> = HashSet::new();
        for pre in &frontier {
            for (v, coords) in verts.iter().enumerate() {
                if pre.used[v] {
                    continue;
                }
                let (col, u, rank) = pre.extend(coords);
                let better = match &best {
                    None => true,
                    Some(b) => match col.cmp(b) {
                        std::cmp::Ordering::Less => true,
                        std::cmp::Ordering::Equal => false,
                        std::cmp::Ordering::Greater => continue,
                    },
                };
                if better {
                    best = Some(col);
                    next.clear();
                }
                let mut used = pre.used.clone();
                used[v] = true;
                next.insert(Prefix {
                    used,
                    transform: u,
                    rank,
                });
            }
        }
        columns.push(best.expect("a vertex remains"));
        frontier = next.into_iter().collect();
    }
    IntMatrix::from_rows(&columns, n)
}
