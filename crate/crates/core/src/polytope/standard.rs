//! Frequently used polytopes.

use super::LatticePolytope;
use crate::lattice::LatticeVector;

fn build(points: Vec<Vec<i64>>) -> LatticePolytope {
    let pts: Vec<LatticeVector> = points.into_iter().map(LatticeVector::from).collect();
    LatticePolytope::from_vertices(&pts).expect("standard polytopes are full-dimensional")
}

/// The segment `[−1, 1]`.
pub fn segment() -> LatticePolytope {
    build(vec![vec![-1], vec![1]])
}

/// The cube `[−1, 1]^n`.
pub fn cube(n: usize) -> LatticePolytope {
    let pts = (0..1u32 << n)
        .map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { 1 } else { -1 }).collect())
        .collect();
    build(pts)
}

/// The cross-polytope `conv{±e_i}`, dual to the cube.
pub fn cross_polytope(n: usize) -> LatticePolytope {
    let mut pts = Vec::with_capacity(2 * n);
    for i in 0..n {
        for s in [1, -1] {
            let mut v = vec![0; n];
            v[i] = s;
            pts.push(v);
        }
    }
    build(pts)
}

/// `conv{e_1, …, e_n, −(e_1 + … + e_n)}`, the fan polytope of projective space.
pub fn simplex(n: usize) -> LatticePolytope {
    let mut pts: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![0; n];
            v[i] = 1;
            v
        })
        .collect();
    pts.push(vec![-1; n]);
    build(pts)
}

/// Newton polytope of degree-`(n+1)` hypersurfaces in `P^n`, shifted so the
/// unique interior point is the origin; dual to [`simplex`].
pub fn fermat(n: usize) -> LatticePolytope {
    let k = n as i64 + 1;
    let mut pts: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut v = vec![-1; n];
            v[i] = k - 1;
            v
        })
        .collect();
    pts.push(vec![-1; n]);
    build(pts)
}

/// Convex hull of the ray generators of the fan of `P² × P²`.
pub fn p2xp2_fan() -> LatticePolytope {
    build(vec![
        vec![1, 0, 0, 0],
        vec![0, 1, 0, 0],
        vec![-1, -1, 0, 0],
        vec![0, 0, 1, 0],
        vec![0, 0, 0, 1],
        vec![0, 0, -1, -1],
    ])
}
