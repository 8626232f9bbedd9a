//! Full-dimensional lattice polytopes: convex hull, faces, duality, degrees
//! and a lattice-equivalence normal form.

mod canonical;
mod face;
pub(crate) mod io;
pub mod standard;

pub use face::{Face, FaceLattice};
pub use io::{format_polytope, parse_polytope};

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{
    bareiss_rank, enumerate, extreme_rays, gcd_all, BoundingBox, Facet, IntMatrix, LatticeVector,
};

/// A full-dimensional polytope with integral vertices, stored in both vertex
/// and facet form. Vertices and facets are sorted lexicographically.
#[derive(Clone, Debug)]
pub struct LatticePolytope {
    dim: usize,
    vertices: Vec<LatticeVector>,
    facets: Vec<Facet>,
    // facet index -> sorted indices of the vertices on it
    facet_vertices: Vec<Vec<usize>>,
    points: OnceLock<Vec<LatticeVector>>,
    point_facets: OnceLock<Vec<Vec<usize>>>,
    faces: OnceLock<FaceLattice>,
}

impl PartialEq for LatticePolytope {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices
    }
}

impl Eq for LatticePolytope {}

impl LatticePolytope {
    /// Convex hull of `points`. Non-vertices and duplicates are dropped.
    pub fn from_vertices(points: &[LatticeVector]) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidInput("no points given".into()));
        };
        let n = first.dim();
        if n == 0 {
            return Err(Error::InvalidInput("ambient dimension must be positive".into()));
        }
        if let Some(p) = points.iter().find(|p| p.dim() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: p.dim(),
            });
        }
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();

        let diffs: Vec<LatticeVector> = pts[1..].iter().map(|p| p - &pts[0]).collect();
        let affine_dim = if diffs.is_empty() {
            0
        } else {
            bareiss_rank(&IntMatrix::from_vectors(&diffs, n))
        };
        if affine_dim < n {
            return Err(Error::NotFullDimensional {
                affine_dim,
                ambient_dim: n,
            });
        }

        // facets are extreme rays of {(u, b) : ⟨p, u⟩ + b ≥ 0 for all p}
        let rows: Vec<Vec<BigInt>> = pts
            .iter()
            .map(|p| {
                let mut r = p.coords().to_vec();
                r.push(BigInt::one());
                r
            })
            .collect();
        let rays = extreme_rays(&rows, n + 1)
            .ok_or_else(|| Error::Inconsistent("homogenized cone is not pointed".into()))?;
        let mut facets: Vec<Facet> = rays
            .into_iter()
            .map(|mut r| {
                let b = r.pop().expect("ray has n + 1 coordinates");
                let g = gcd_all(&r);
                Facet::new(
                    LatticeVector::new(r.into_iter().map(|x| x / &g).collect()),
                    b / &g,
                )
            })
            .collect();
        facets.sort_by(|a, b| (&a.normal, &a.offset).cmp(&(&b.normal, &b.offset)));

        let tight: Vec<Vec<usize>> = pts
            .iter()
            .map(|p| {
                (0..facets.len())
                    .filter(|&f| facets[f].slack(p).is_zero())
                    .collect()
            })
            .collect();
        let vertices: Vec<LatticeVector> = pts
            .iter()
            .zip(&tight)
            .filter(|(_, t)| {
                t.len() >= n && {
                    let normals: Vec<LatticeVector> =
                        t.iter().map(|&f| facets[f].normal.clone()).collect();
                    bareiss_rank(&IntMatrix::from_vectors(&normals, n)) == n
                }
            })
            .map(|(p, _)| p.clone())
            .collect();

        Ok(Self::assemble(n, vertices, facets))
    }

    fn assemble(dim: usize, vertices: Vec<LatticeVector>, facets: Vec<Facet>) -> Self {
        let facet_vertices = facets
            .iter()
            .map(|f| {
                (0..vertices.len())
                    .filter(|&v| f.slack(&vertices[v]).is_zero())
                    .collect()
            })
            .collect();
        LatticePolytope {
            dim,
            vertices,
            facets,
            facet_vertices,
            points: OnceLock::new(),
            point_facets: OnceLock::new(),
            faces: OnceLock::new(),
        }
    }

    pub fn from_i64_vertices(points: &[&[i64]]) -> Result<Self> {
        let pts: Vec<LatticeVector> = points.iter().map(|p| LatticeVector::from_i64(p)).collect();
        Self::from_vertices(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[LatticeVector] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Indices of the vertices lying on facet `f`.
    pub fn facet_vertices(&self, f: usize) -> &[usize] {
        &self.facet_vertices[f]
    }

    /// Vertices as rows of a `v × n` matrix.
    pub fn vertex_matrix(&self) -> IntMatrix {
        IntMatrix::from_vectors(&self.vertices, self.dim)
    }

    pub fn offsets(&self) -> Vec<BigInt> {
        self.facets.iter().map(|f| f.offset.clone()).collect()
    }

    pub fn contains(&self, x: &LatticeVector) -> bool {
        x.dim() == self.dim && self.facets.iter().all(|f| !f.slack(x).is_negative())
    }

    pub fn contains_in_interior(&self, x: &LatticeVector) -> bool {
        x.dim() == self.dim && self.facets.iter().all(|f| f.slack(x).is_positive())
    }

    /// True when every facet offset is positive, i.e. 0 is an interior point.
    pub fn origin_is_interior(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_positive())
    }

    /// All facet offsets equal 1 (which forces the origin to be interior).
    pub fn is_reflexive(&self) -> bool {
        self.facets.iter().all(|f| f.offset.is_one())
    }

    pub fn bounding_box(&self) -> BoundingBox {
        BoundingBox::from_points(&self.vertices)
    }

    /// Lattice points in lexicographic order.
    pub fn points(&self) -> &[LatticeVector] {
        self.points
            .get_or_init(|| enumerate::points_unchecked(&self.facets, &self.bounding_box()))
    }

    /// For each entry of [`points`](Self::points), the facets it lies on.
    pub fn point_facets(&self) -> &[Vec<usize>] {
        self.point_facets.get_or_init(|| {
            self.points()
                .iter()
                .map(|p| {
                    (0..self.facets.len())
                        .filter(|&f| self.facets[f].slack(p).is_zero())
                        .collect()
                })
                .collect()
        })
    }

    pub fn boundary_points(&self) -> Vec<LatticeVector> {
        self.points()
            .iter()
            .zip(self.point_facets())
            .filter(|(_, t)| !t.is_empty())
            .map(|(p, _)| p.clone())
            .collect()
    }

    pub fn interior_points(&self) -> Vec<LatticeVector> {
        self.points()
            .iter()
            .zip(self.point_facets())
            .filter(|(_, t)| t.is_empty())
            .map(|(p, _)| p.clone())
            .collect()
    }

    /// `(l, l*)`: all lattice points and interior lattice points.
    pub fn count_points(&self) -> (u64, u64) {
        let l = self.points().len() as u64;
        let interior = self.point_facets().iter().filter(|t| t.is_empty()).count() as u64;
        (l, interior)
    }

    /// `l(kΔ)`, counted with scaled facet offsets.
    pub fn count_in_dilation(&self, k: u64) -> u64 {
        let k = BigInt::from(k);
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| f.with_offset(&f.offset * &k))
            .collect();
        enumerate::count_unchecked(&facets, &self.bounding_box().scaled(&k))
    }

    /// `l*(kΔ)`: points with every slack at least 1.
    pub fn count_interior_in_dilation(&self, k: u64) -> u64 {
        let k = BigInt::from(k);
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| f.with_offset(&f.offset * &k - 1))
            .collect();
        enumerate::count_unchecked(&facets, &self.bounding_box().scaled(&k))
    }

    /// Lattice points of `kΔ` in lexicographic order.
    pub fn points_in_dilation(&self, k: u64) -> Vec<LatticeVector> {
        let k = BigInt::from(k);
        let facets: Vec<Facet> = self
            .facets
            .iter()
            .map(|f| f.with_offset(&f.offset * &k))
            .collect();
        enumerate::points_unchecked(&facets, &self.bounding_box().scaled(&k))
    }

    /// Image under `x ↦ g·x` for an invertible integer matrix `g`.
    pub fn transform(&self, g: &IntMatrix) -> Result<Self> {
        let pts: Vec<LatticeVector> = self
            .vertices
            .iter()
            .map(|v| LatticeVector::new(g.mul_vector(v.coords())))
            .collect();
        Self::from_vertices(&pts)
    }

    pub fn translate(&self, t: &LatticeVector) -> Result<Self> {
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| v + t).collect();
        Self::from_vertices(&pts)
    }

    pub fn dilate(&self, k: i64) -> Result<Self> {
        let k = BigInt::from(k);
        let pts: Vec<LatticeVector> = self.vertices.iter().map(|v| v.scale(&k)).collect();
        Self::from_vertices(&pts)
    }

    /// The polar dual `{y : ⟨x, y⟩ ≥ −1 on Δ}`, defined here only when it is
    /// again a lattice polytope, i.e. when `self` is reflexive.
    pub fn dual(&self) -> Result<Self> {
        if !self.origin_is_interior() {
            return Err(Error::OriginNotInterior);
        }
        if let Some((i, f)) = self.facets.iter().enumerate().find(|(_, f)| !f.offset.is_one()) {
            return Err(Error::NotReflexive {
                facet: i,
                normal: f.normal.clone(),
                offset: f.offset.clone(),
            });
        }
        let normals: Vec<LatticeVector> = self.facets.iter().map(|f| f.normal.clone()).collect();
        Self::from_vertices(&normals)
    }

    /// Normalized volume `n!·vol(Δ)`.
    pub fn normalized_volume(&self) -> BigInt {
        crate::ehrhart::normalized_volume(self)
    }

    /// Lattice-equivalence normal form; see [`canonical::canonical_form`].
    pub fn canonical_form(&self) -> IntMatrix {
        canonical::canonical_form(self)
    }
}
