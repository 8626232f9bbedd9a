//! Reflexive polygons up to lattice equivalence, and reflexive simplices from
//! weight systems.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{integer_kernel, rank, row_basis, snf, IntMatrix, LatticeVector, RankMode};
use crate::polytope::LatticePolytope;

/// Box half-width used by [`classify_polygons`].
pub const POLYGON_BOX: i64 = 4;

/// The sixteen classes in their customary numbering `P1..P16`, where `P_i`
/// and `P_{17−i}` are dual for `i ≤ 6`.
const LABELLED: [&[[i64; 2]]; 16] = [
    &[[1, 0], [0, 1], [-1, -1]],
    &[[1, 0], [0, 1], [-1, 0], [0, -1]],
    &[[-1, -1], [1, 0], [0, 1], [-1, 0]],
    &[[-1, 1], [1, 1], [0, -1]],
    &[[1, 0], [1, 1], [0, 1], [-1, 0], [0, -1]],
    &[[-1, -1], [1, 0], [0, 1], [-1, 1]],
    &[[1, 0], [1, 1], [0, 1], [-1, 0], [-1, -1], [0, -1]],
    &[[-1, -1], [1, 0], [1, 1], [-1, 1]],
    &[[0, -1], [1, 0], [1, 1], [-1, 1], [-1, 0]],
    &[[-1, -1], [1, 0], [-1, 2]],
    &[[-1, -1], [0, -1], [1, 0], [-1, 2]],
    &[[-1, -1], [1, -1], [1, 0], [0, 1], [-1, 1]],
    &[[-1, -1], [1, -1], [-1, 3]],
    &[[-1, -1], [1, -1], [1, 0], [-1, 2]],
    &[[-1, -1], [1, -1], [1, 1], [-1, 1]],
    &[[-1, -1], [2, -1], [-1, 2]],
];

#[derive(Clone, Debug, Serialize)]
pub struct PolygonClass {
    /// Position `i` in the `P_i` numbering.
    pub label: usize,
    /// Rows of the canonical vertex matrix.
    pub vertices: Vec<Vec<i64>>,
    pub points: u64,
    pub dual_points: u64,
    pub boundary: u64,
    /// Normalized area, which for reflexive polygons equals `boundary`.
    pub degree: u64,
    /// Catalog index of the dual class.
    pub dual: usize,
}

impl PolygonClass {
    pub fn polytope(&self) -> LatticePolytope {
        let rows: Vec<&[i64]> = self.vertices.iter().map(Vec::as_slice).collect();
        LatticePolytope::from_i64_vertices(&rows).expect("catalog entries are polygons")
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PolygonCatalog {
    pub search_box: i64,
    /// Reflexive vertex sets met by the search before deduplication.
    pub candidates: usize,
    pub classes: Vec<PolygonClass>,
}

impl PolygonCatalog {
    /// Index of the class equivalent to `p`, if any.
    pub fn find(&self, p: &LatticePolytope) -> Option<usize> {
        let key = small_form(p)?;
        self.classes.iter().position(|c| c.vertices == key)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.classes
            .iter()
            .map(|c| serde_json::to_string(c).expect("plain data serializes") + "\n")
            .collect()
    }
}

fn small_form(p: &LatticePolytope) -> Option<Vec<Vec<i64>>> {
    let form = p.canonical_form();
    (0..form.rows())
        .map(|r| form.row(r).iter().map(ToPrimitive::to_i64).collect())
        .collect()
}

fn cross(o: [i64; 2], a: [i64; 2], b: [i64; 2]) -> i64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Strict convex hull in counterclockwise order.
fn hull(points: &[[i64; 2]]) -> Vec<[i64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut out: Vec<[i64; 2]> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = out.len();
        for &p in &pts {
            while out.len() >= start + 2 && cross(out[out.len() - 2], out[out.len() - 1], p) <= 0 {
                out.pop();
            }
            out.push(p);
        }
        out.pop();
        if pass == 0 {
            pts.reverse();
        }
    }
    out
}

fn strictly_inside(h: &[[i64; 2]], x: [i64; 2]) -> bool {
    h.len() >= 3 && (0..h.len()).all(|i| cross(h[i], h[(i + 1) % h.len()], x) > 0)
}

/// Some lattice point other than the origin lies strictly inside.
fn has_foreign_interior(h: &[[i64; 2]]) -> bool {
    if h.len() < 3 {
        return false;
    }
    let (lo_x, hi_x) = h.iter().fold((i64::MAX, i64::MIN), |(a, b), p| (a.min(p[0]), b.max(p[0])));
    let (lo_y, hi_y) = h.iter().fold((i64::MAX, i64::MIN), |(a, b), p| (a.min(p[1]), b.max(p[1])));
    (lo_x + 1..hi_x).any(|x| (lo_y + 1..hi_y).any(|y| [x, y] != [0, 0] && strictly_inside(h, [x, y])))
}

/// Depth-first search over vertex sets in strictly convex position, taken in
/// increasing index order so each set is visited once. Adding points never
/// removes interior points, so a hull (with the origin adjoined) that already
/// has a nonzero interior point ends the branch.
fn search(grid: &[[i64; 2]], start: usize, chosen: &mut Vec<[i64; 2]>, found: &mut Vec<Vec<[i64; 2]>>) {
    for i in start..grid.len() {
        chosen.push(grid[i]);
        let h = hull(chosen);
        if h.len() == chosen.len() {
            let mut with_origin = chosen.clone();
            with_origin.push([0, 0]);
            if !has_foreign_interior(&hull(&with_origin)) {
                if strictly_inside(&h, [0, 0]) {
                    found.push(h);
                }
                search(grid, i + 1, chosen, found);
            }
        }
        chosen.pop();
    }
}

/// Reflexive polygons with vertices in `[−b, b]²`, up to `GL(2, Z)`, each
/// paired with its dual. Fails with `Inconsistent` if the result is not
/// closed under duality or meets a class outside the standard sixteen.
pub fn classify_polygons_in_box(b: i64) -> Result<PolygonCatalog> {
    if !(1..=8).contains(&b) {
        return Err(Error::InvalidInput(format!("search box {b} outside 1..=8")));
    }
    let grid: Vec<[i64; 2]> = (-b..=b)
        .flat_map(|x| (-b..=b).map(move |y| [x, y]))
        .filter(|&p| p != [0, 0])
        .collect();
    let mut found = Vec::new();
    search(&grid, 0, &mut Vec::new(), &mut found);

    let known: BTreeMap<Vec<Vec<i64>>, usize> = LABELLED
        .iter()
        .enumerate()
        .map(|(i, vs)| {
            let rows: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
            let p = LatticePolytope::from_i64_vertices(&rows).expect("labelled polygons are valid");
            (small_form(&p).expect("small entries"), i)
        })
        .collect();
    let mut seen = BTreeSet::new();
    for vs in &found {
        let rows: Vec<&[i64]> = vs.iter().map(|v| v.as_slice()).collect();
        let p = LatticePolytope::from_i64_vertices(&rows)?;
        let form = small_form(&p).ok_or_else(|| Error::Inconsistent("huge canonical form".into()))?;
        if !known.contains_key(&form) {
            return Err(Error::Inconsistent(format!("unexpected reflexive polygon {vs:?}")));
        }
        seen.insert(form);
    }

    let mut order: Vec<(usize, Vec<Vec<i64>>)> = seen.into_iter().map(|f| (known[&f], f)).collect();
    order.sort();
    let index: BTreeMap<&Vec<Vec<i64>>, usize> = order.iter().enumerate().map(|(i, (_, f))| (f, i)).collect();
    let mut classes = Vec::with_capacity(order.len());
    for (label, form) in &order {
        let rows: Vec<&[i64]> = form.iter().map(Vec::as_slice).collect();
        let p = LatticePolytope::from_i64_vertices(&rows)?;
        let dual = p.dual()?;
        let dual_form = small_form(&dual).ok_or_else(|| Error::Inconsistent("huge dual".into()))?;
        let &dual_index = index
            .get(&dual_form)
            .ok_or_else(|| Error::Inconsistent(format!("dual of P{} missing from the catalog", label + 1)))?;
        let (points, _) = p.count_points();
        let (dual_points, _) = dual.count_points();
        classes.push(PolygonClass {
            label: label + 1,
            vertices: form.clone(),
            points,
            dual_points,
            boundary: p.boundary_points().len() as u64,
            degree: p.normalized_volume().to_u64().expect("small area"),
            dual: dual_index,
        });
    }
    Ok(PolygonCatalog {
        search_box: b,
        candidates: found.len(),
        classes,
    })
}

pub fn classify_polygons() -> Result<PolygonCatalog> {
    classify_polygons_in_box(POLYGON_BOX)
}

#[derive(Clone, Debug, Serialize)]
pub struct TwelveRow {
    pub label: usize,
    pub boundary: u64,
    pub dual_boundary: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct TwelveCheck {
    pub rows: Vec<TwelveRow>,
    pub holds: bool,
}

/// Boundary points of each class and of its dual sum to 12.
pub fn check_12(catalog: &PolygonCatalog) -> TwelveCheck {
    let rows: Vec<TwelveRow> = catalog
        .classes
        .iter()
        .map(|c| TwelveRow {
            label: c.label,
            boundary: c.boundary,
            dual_boundary: catalog.classes[c.dual].boundary,
        })
        .collect();
    let holds = rows.iter().all(|r| r.boundary + r.dual_boundary == 12);
    TwelveCheck { rows, holds }
}

/// A solution of `Σ 1/d_i = 1` with `d_0 ≤ … ≤ d_n`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WeightSystem {
    pub n: usize,
    pub d_values: Vec<u64>,
    /// `lcm(d_i)`, which is also `Σ w_i`.
    pub d: u64,
    /// `w_i = d / d_i`.
    pub weights: Vec<u64>,
    /// `d_0⋯d_n / d²`.
    pub group_order: u64,
}

impl WeightSystem {
    pub fn from_d_values(d_values: &[u64]) -> Result<Self> {
        let n = d_values.len().checked_sub(1).filter(|&n| n >= 1).ok_or_else(|| {
            Error::InvalidInput("a weight system needs at least two entries".into())
        })?;
        if d_values.contains(&0) {
            return Err(Error::InvalidInput("d values must be positive".into()));
        }
        let sum: BigRational = d_values
            .iter()
            .map(|&x| BigRational::new(BigInt::one(), BigInt::from(x)))
            .sum();
        if !sum.is_one() {
            return Err(Error::InvalidInput(format!("Σ 1/d_i = {sum}, not 1")));
        }
        let mut d_values = d_values.to_vec();
        d_values.sort_unstable();
        let d = d_values.iter().fold(1u64, |acc, &x| acc.lcm(&x));
        let weights: Vec<u64> = d_values.iter().map(|&x| d / x).collect();
        let product = d_values.iter().fold(BigInt::one(), |acc, &x| acc * x);
        let group_order = (product / (BigInt::from(d) * d))
            .to_u64()
            .ok_or_else(|| Error::Unsupported("group order overflows u64".into()))?;
        Ok(WeightSystem {
            n,
            d_values,
            d,
            weights,
            group_order,
        })
    }

    /// From weights with `w_i | Σ w` and `gcd(w) = 1`.
    pub fn from_weights(weights: &[u64]) -> Result<Self> {
        let total: u64 = weights.iter().sum();
        if weights.contains(&0) || weights.iter().fold(0, |g, w| g.gcd(w)) != 1 {
            return Err(Error::InvalidInput("weights must be positive and coprime".into()));
        }
        let d_values: Vec<u64> = weights
            .iter()
            .map(|&w| {
                if total.is_multiple_of(w) {
                    Ok(total / w)
                } else {
                    Err(Error::InvalidInput(format!("weight {w} does not divide {total}")))
                }
            })
            .collect::<Result<_>>()?;
        Self::from_d_values(&d_values)
    }
}

fn weight_search(left: usize, min: u64, rest: &BigRational, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
    if left == 1 {
        // the last entry is forced
        let inv = rest.recip();
        if inv.is_integer() {
            let x = inv.to_integer().to_u64().expect("bounded by the search");
            if x >= min {
                prefix.push(x);
                out.push(prefix.clone());
                prefix.pop();
            }
        }
        return;
    }
    // 1/x < rest forces x > 1/rest; x ≤ left/rest since the rest are ≤ 1/x
    let lower = (rest.recip().floor().to_integer() + 1u32).to_u64().expect("bounded");
    let upper = (BigRational::from_integer(BigInt::from(left as u64)) / rest)
        .floor()
        .to_integer()
        .to_u64()
        .expect("bounded");
    for x in lower.max(min)..=upper {
        let next = rest - BigRational::new(BigInt::one(), BigInt::from(x));
        prefix.push(x);
        weight_search(left - 1, x, &next, prefix, out);
        prefix.pop();
    }
}

/// All weight systems with `n + 1` entries, sorted.
pub fn enumerate_weight_systems(n: usize) -> Result<Vec<WeightSystem>> {
    if !(1..=5).contains(&n) {
        return Err(Error::InvalidInput(format!("n = {n} outside 1..=5")));
    }
    let mut raw = Vec::new();
    weight_search(n + 1, 1, &BigRational::one(), &mut Vec::new(), &mut raw);
    raw.iter().map(|d| WeightSystem::from_d_values(d)).collect()
}

/// Coordinates of `x` in a Hermite row basis, if `x` lies in its lattice.
fn coords_in(basis: &IntMatrix, x: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rest = x.to_vec();
    let mut out = Vec::with_capacity(basis.rows());
    for r in 0..basis.rows() {
        let row = basis.row(r);
        let pivot = row.iter().position(|v| !v.is_zero())?;
        let (q, m) = rest[pivot].div_mod_floor(&row[pivot]);
        if !m.is_zero() {
            return None;
        }
        for (a, b) in rest.iter_mut().zip(row) {
            *a -= &q * b;
        }
        out.push(q);
    }
    rest.iter().all(Zero::is_zero).then_some(out)
}

/// Vertices `v_i = d_i·e_i − (1, …, 1)` of the simplex cut out of the hyperplane
/// `Σ w_i x_i = 0` by `x_i ≥ −1`.
fn weighted_vertices(w: &WeightSystem) -> Vec<Vec<BigInt>> {
    (0..=w.n)
        .map(|i| {
            (0..=w.n)
                .map(|j| BigInt::from(if i == j { w.d_values[i] as i64 - 1 } else { -1 }))
                .collect()
        })
        .collect()
}

/// `{x ∈ Z^{n+1} : Σ w_i x_i = 0}` as Hermite rows.
fn weight_lattice(w: &WeightSystem) -> IntMatrix {
    let row: Vec<BigInt> = w.weights.iter().map(|&x| BigInt::from(x)).collect();
    integer_kernel(&IntMatrix::from_rows(&[row], w.n + 1))
}

fn simplex_in(basis: &IntMatrix, vertices: &[Vec<BigInt>]) -> Result<LatticePolytope> {
    let pts: Vec<LatticeVector> = vertices
        .iter()
        .map(|v| {
            coords_in(basis, v)
                .map(LatticeVector::new)
                .ok_or_else(|| Error::Inconsistent("vertex outside its lattice".into()))
        })
        .collect::<Result<_>>()?;
    LatticePolytope::from_vertices(&pts)
}

/// The simplex of `w` in coordinates of the full lattice of the hyperplane
/// `Σ w_i x_i = 0`.
pub fn simplex_from_weights(w: &WeightSystem) -> Result<LatticePolytope> {
    simplex_in(&weight_lattice(w), &weighted_vertices(w))
}

#[derive(Clone, Debug, Serialize)]
pub struct SimplexMatrixReport {
    /// `b_ij = ⟨p_i, l_j⟩` with `l_j` the inner normal of the facet opposite
    /// `p_j`.
    pub matrix: Vec<Vec<i64>>,
    pub symmetric: bool,
    pub rank: usize,
    pub off_diagonal_minus_one: bool,
    pub unit_fractions: bool,
    pub d_values: Vec<u64>,
    /// Primitive positive solution of `Σ w_i p_i = 0`, in vertex order.
    pub weights: Vec<u64>,
    pub holds: bool,
}

/// Pairing matrix of a reflexive simplex and the identities it satisfies.
pub fn simplex_matrix_check(p: &LatticePolytope) -> Result<SimplexMatrixReport> {
    let n = p.dim();
    if p.vertices().len() != n + 1 {
        return Err(Error::NotSimplex {
            vertices: p.vertices().len(),
        });
    }
    p.dual()?;
    let vertices = p.vertices();
    // the facet opposite p_j is the one p_j is not on
    let normals: Vec<&LatticeVector> = (0..=n)
        .map(|j| {
            let f = (0..p.facets().len())
                .find(|&f| !p.facet_vertices(f).contains(&j))
                .expect("a simplex has a facet opposite each vertex");
            &p.facets()[f].normal
        })
        .collect();
    let big: Vec<Vec<BigInt>> = vertices
        .iter()
        .map(|v| normals.iter().map(|l| v.dot(l)).collect())
        .collect();
    let matrix: Vec<Vec<i64>> = big
        .iter()
        .map(|r| r.iter().map(|x| x.to_i64().expect("small pairing")).collect())
        .collect();
    let symmetric = (0..=n).all(|i| (0..=n).all(|j| matrix[i][j] == matrix[j][i]));
    let off_diagonal_minus_one = (0..=n).all(|i| (0..=n).all(|j| i == j || matrix[i][j] == -1));
    let r = rank(&IntMatrix::from_rows(&big, n + 1).to_rational(), RankMode::Exact);
    let d_values: Vec<u64> = (0..=n).map(|i| (matrix[i][i] + 1) as u64).collect();
    let unit_fractions = d_values
        .iter()
        .map(|&x| BigRational::new(BigInt::one(), BigInt::from(x)))
        .sum::<BigRational>()
        .is_one();
    let coords: Vec<Vec<BigInt>> = vertices.iter().map(|v| v.coords().to_vec()).collect();
    let kernel = integer_kernel(&IntMatrix::from_rows(&coords, n).transpose());
    let weights = if kernel.rows() == 1 {
        let w = kernel.row_vec(0);
        let flip = w.iter().any(Signed::is_negative);
        w.iter().map(|x| (if flip { -x } else { x.clone() }).to_u64().unwrap_or(0)).collect()
    } else {
        Vec::new()
    };
    let holds = symmetric && off_diagonal_minus_one && r == n && unit_fractions;
    Ok(SimplexMatrixReport {
        matrix,
        symmetric,
        rank: r,
        off_diagonal_minus_one,
        unit_fractions,
        d_values,
        weights,
        holds,
    })
}

/// One reflexive simplex per orbit of intermediate lattices.
#[derive(Clone, Debug, Serialize)]
pub struct IntermediateLattice {
    /// Order of the subgroup, `[M : M_B]`.
    pub index: u64,
    /// Number of subgroups in the orbit.
    pub orbit: usize,
    #[serde(skip)]
    pub polytope: LatticePolytope,
}

#[derive(Clone, Debug, Serialize)]
pub struct IntermediateLattices {
    /// Invariant factors of `M(w)/M_B(w)`, those above 1.
    pub group: Vec<u64>,
    pub subgroups: usize,
    pub classes: Vec<IntermediateLattice>,
}

/// Lattices between the vertex lattice `M_B(w)` and the full lattice `M(w)`
/// of the hyperplane, modulo permutations of coordinates with equal weight.
pub fn intermediate_lattices(w: &WeightSystem) -> Result<IntermediateLattices> {
    if w.n > 3 {
        return Err(Error::Unsupported("intermediate lattices are enumerated for n ≤ 3 only".into()));
    }
    let full = weight_lattice(w);
    let vertices = weighted_vertices(w);
    let vertex_lattice = row_basis(&IntMatrix::from_rows(&vertices, w.n + 1));
    let in_full: Vec<Vec<BigInt>> = (0..vertex_lattice.rows())
        .map(|r| coords_in(&full, vertex_lattice.row(r)).expect("vertices lie in M(w)"))
        .collect();
    let group: Vec<u64> = snf(&IntMatrix::from_rows(&in_full, w.n))
        .iter()
        .filter(|x| !x.is_one())
        .map(|x| x.to_u64().expect("small group"))
        .collect();

    // coset representatives of M(w)/M_B(w) from the Hermite box of M_B(w)
    let hermite = row_basis(&IntMatrix::from_rows(&in_full, w.n));
    let diag: Vec<i64> = (0..w.n)
        .map(|i| hermite.get(i, i).to_i64().expect("small index"))
        .collect();
    let mut reps: Vec<Vec<BigInt>> = vec![vec![BigInt::zero(); w.n + 1]];
    for (i, &h) in diag.iter().enumerate() {
        let mut next = Vec::with_capacity(reps.len() * h as usize);
        for r in &reps {
            for k in 0..h {
                next.push(r.iter().zip(full.row(i)).map(|(a, b)| a + b * k).collect());
            }
        }
        reps = next;
    }

    let mut subgroups: BTreeSet<IntMatrix> = BTreeSet::from([vertex_lattice.clone()]);
    let mut frontier = vec![vertex_lattice.clone()];
    while let Some(l) = frontier.pop() {
        for x in &reps {
            let mut rows = l.to_rows();
            rows.push(x.clone());
            let bigger = row_basis(&IntMatrix::from_rows(&rows, w.n + 1));
            if subgroups.insert(bigger.clone()) {
                frontier.push(bigger);
            }
        }
    }

    let perms = weight_symmetries(&w.weights);
    let mut orbits: BTreeMap<IntMatrix, usize> = BTreeMap::new();
    for l in &subgroups {
        let key = perms
            .iter()
            .map(|sigma| {
                let rows: Vec<Vec<BigInt>> = l
                    .to_rows()
                    .into_iter()
                    .map(|r| sigma.iter().map(|&j| r[j].clone()).collect())
                    .collect();
                row_basis(&IntMatrix::from_rows(&rows, w.n + 1))
            })
            .min()
            .expect("the identity is a symmetry");
        *orbits.entry(key).or_default() += 1;
    }
    let base_index = crate::lattice::lattice_index(&IntMatrix::from_rows(&in_full, w.n));
    let mut classes = Vec::with_capacity(orbits.len());
    for (l, orbit) in orbits {
        let in_full_l: Vec<Vec<BigInt>> = (0..l.rows())
            .map(|r| coords_in(&full, l.row(r)).expect("sublattice of M(w)"))
            .collect();
        let index = &base_index / crate::lattice::lattice_index(&IntMatrix::from_rows(&in_full_l, w.n));
        classes.push(IntermediateLattice {
            index: index.to_u64().expect("small index"),
            orbit,
            polytope: simplex_in(&l, &vertices)?,
        });
    }
    classes.sort_by_key(|c| c.index);
    Ok(IntermediateLattices {
        group,
        subgroups: subgroups.len(),
        classes,
    })
}

/// Coordinate permutations that preserve the weight vector.
fn weight_symmetries(weights: &[u64]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![Vec::new()];
    for slot in 0..weights.len() {
        let mut next = Vec::new();
        for p in &out {
            for j in (0..weights.len()).filter(|j| !p.contains(j) && weights[*j] == weights[slot]) {
                let mut q = p.clone();
                q.push(j);
                next.push(q);
            }
        }
        out = next;
    }
    out
}
