use std::collections::{BTreeSet, HashMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::LatticePolytope;
use crate::error::{Error, Result};
use crate::lattice::{bareiss_rank, saturation, solve_rational, IntMatrix, LatticeVector, RationalMatrix};

/// A nonempty face of a polytope. Indices refer to the owning polytope's
/// vertex and facet lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    dim: usize,
    ambient_dim: usize,
    vertices: Vec<usize>,
    facets: Vec<usize>,
    origin: LatticeVector,
    basis: IntMatrix,
}

impl Face {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.ambient_dim - self.dim
    }

    /// Indices of the polytope vertices on this face.
    pub fn vertex_indices(&self) -> &[usize] {
        &self.vertices
    }

    /// Indices of the facets containing this face (empty for the polytope itself).
    pub fn facet_indices(&self) -> &[usize] {
        &self.facets
    }

    /// Base point of the affine lattice: the face's first vertex.
    pub fn origin(&self) -> &LatticeVector {
        &self.origin
    }

    /// `dim × n` Hermite basis of the direction lattice `M ∩ span(Θ − Θ)`.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn vertices(&self, p: &LatticePolytope) -> Vec<LatticeVector> {
        self.vertices.iter().map(|&v| p.vertices[v].clone()).collect()
    }

    /// Coordinates of `x − origin` in the face basis; `x` must lie in the
    /// affine lattice of the face.
    pub fn local_coordinates(&self, x: &LatticeVector) -> LatticeVector {
        let d = x - &self.origin;
        let bt = self.basis.transpose().to_rational();
        let rhs: Vec<Vec<BigRational>> = d
            .coords()
            .iter()
            .map(|c| vec![BigRational::from_integer(c.clone())])
            .collect();
        let sol = solve_rational(&bt, &RationalMatrix::from_rows(&rhs, 1))
            .expect("point lies in the affine span of the face");
        LatticeVector::new(
            (0..self.dim)
                .map(|i| {
                    let q = sol.get(i, 0);
                    assert!(q.is_integer(), "point is not in the face lattice");
                    q.to_integer()
                })
                .collect(),
        )
    }
}

/// All nonempty faces of a polytope grouped by dimension, each group sorted
/// by vertex index set.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    by_dim: Vec<Vec<Face>>,
    index: HashMap<Vec<usize>, (usize, usize)>,
}

impl FaceLattice {
    pub(super) fn build(p: &LatticePolytope) -> Self {
        let n = p.dim;
        let all: Vec<usize> = (0..p.vertices.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue: VecDeque<Vec<usize>> = VecDeque::new();
        for fv in &p.facet_vertices {
            if seen.insert(fv.clone()) {
                queue.push_back(fv.clone());
            }
        }
        while let Some(s) = queue.pop_front() {
            for fv in &p.facet_vertices {
                let t: Vec<usize> = s.iter().copied().filter(|v| fv.binary_search(v).is_ok()).collect();
                if !t.is_empty() && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        seen.insert(all);

        let mut by_dim: Vec<Vec<Face>> = vec![Vec::new(); n + 1];
        for vs in seen {
            let face = make_face(p, vs);
            by_dim[face.dim].push(face);
        }
        let mut index = HashMap::new();
        for (d, faces) in by_dim.iter_mut().enumerate() {
            faces.sort_by(|a, b| a.vertices.cmp(&b.vertices));
            for (i, f) in faces.iter().enumerate() {
                index.insert(f.vertices.clone(), (d, i));
            }
        }
        FaceLattice { by_dim, index }
    }

    pub fn faces(&self, d: usize) -> &[Face] {
        self.by_dim.get(d).map_or(&[], |v| v.as_slice())
    }

    pub fn counts(&self) -> Vec<usize> {
        self.by_dim.iter().map(Vec::len).collect()
    }

    pub fn by_vertices(&self, vertices: &[usize]) -> Option<&Face> {
        self.index.get(vertices).map(|&(d, i)| &self.by_dim[d][i])
    }

    pub fn iter(&self) -> impl Iterator<Item = &Face> {
        self.by_dim.iter().flatten()
    }
}

fn make_face(p: &LatticePolytope, vertices: Vec<usize>) -> Face {
    let n = p.dim;
    let facets: Vec<usize> = (0..p.facets.len())
        .filter(|&f| vertices.iter().all(|v| p.facet_vertices[f].binary_search(v).is_ok()))
        .collect();
    let origin = p.vertices[vertices[0]].clone();
    let diffs: Vec<LatticeVector> = vertices[1..].iter().map(|&v| &p.vertices[v] - &origin).collect();
    let (dim, basis) = if diffs.is_empty() {
        (0, IntMatrix::zeros(0, n))
    } else {
        let m = IntMatrix::from_vectors(&diffs, n);
        let dim = bareiss_rank(&m);
        (dim, saturation(&m))
    };
    debug_assert_eq!(basis.rows(), dim);
    Face {
        dim,
        ambient_dim: n,
        vertices,
        facets,
        origin,
        basis,
    }
}

impl LatticePolytope {
    pub fn face_lattice(&self) -> &FaceLattice {
        self.faces.get_or_init(|| FaceLattice::build(self))
    }

    /// All faces of dimension `d`; `d = n` gives the polytope itself.
    pub fn faces(&self, d: usize) -> &[Face] {
        self.face_lattice().faces(d)
    }

    /// `(l, l*)` of a face: lattice points on it, and in its relative interior.
    pub fn face_points(&self, face: &Face) -> (u64, u64) {
        let mut l = 0;
        let mut interior = 0;
        for t in self.point_facets() {
            if face.facets.iter().all(|f| t.binary_search(f).is_ok()) {
                l += 1;
                if t.len() == face.facets.len() {
                    interior += 1;
                }
            }
        }
        (l, interior)
    }

    /// The face as a full-dimensional polytope in `Z^dim` via its affine basis.
    pub fn face_polytope(&self, face: &Face) -> Result<LatticePolytope> {
        if face.dim == 0 {
            return Err(Error::Unsupported("a vertex has no positive-dimensional lattice".into()));
        }
        let local: Vec<LatticeVector> = face
            .vertices(self)
            .iter()
            .map(|v| face.local_coordinates(v))
            .collect();
        LatticePolytope::from_vertices(&local)
    }

    /// Degree `d(Θ) = dim! · vol(Θ)` relative to the face's own lattice.
    /// Undefined (an error) for vertices.
    pub fn degree(&self, face: &Face) -> Result<BigInt> {
        match face.dim {
            0 => Err(Error::Unsupported("degree of a 0-dimensional face".into())),
            1 => {
                let (l, _) = self.face_points(face);
                Ok(BigInt::from(l - 1))
            }
            2 => {
                let (l, li) = self.face_points(face);
                Ok(BigInt::from(l + li - 2))
            }
            d if d == self.dim => Ok(self.normalized_volume()),
            _ => Ok(self.face_polytope(face)?.normalized_volume()),
        }
    }

    /// The face of `dual` cut out by the normals of the facets containing
    /// `face`. `dual` must be `self.dual()`.
    pub fn dual_face(&self, dual: &LatticePolytope, face: &Face) -> Result<Face> {
        if face.facets.is_empty() {
            return Err(Error::InvalidInput("the whole polytope has an empty dual face".into()));
        }
        let mut vs: Vec<usize> = face
            .facets
            .iter()
            .map(|&f| {
                dual.vertices
                    .binary_search(&self.facets[f].normal)
                    .map_err(|_| Error::InvalidInput("second polytope is not the dual".into()))
            })
            .collect::<Result<_>>()?;
        vs.sort_unstable();
        dual.face_lattice()
            .by_vertices(&vs)
            .cloned()
            .ok_or_else(|| Error::Inconsistent("dual face is missing from the face lattice".into()))
    }

    /// The face whose relative interior contains `m`, with its codimension.
    pub fn smallest_containing_face(&self, m: &LatticeVector) -> Result<(Face, usize)> {
        if !self.contains(m) {
            return Err(Error::PointOutside(m.clone()));
        }
        let tight: Vec<usize> = (0..self.facets.len())
            .filter(|&f| self.facets[f].slack(m).is_zero())
            .collect();
        let vs: Vec<usize> = (0..self.vertices.len())
            .filter(|v| tight.iter().all(|&f| self.facet_vertices[f].binary_search(v).is_ok()))
            .collect();
        let face = self
            .face_lattice()
            .by_vertices(&vs)
            .cloned()
            .ok_or_else(|| Error::Inconsistent("containing face is missing".into()))?;
        let codim = face.codim();
        Ok((face, codim))
    }
}
