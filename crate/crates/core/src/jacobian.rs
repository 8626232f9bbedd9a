//! Graded pieces of the Jacobian ring `R_f = S_Δ / J`, where `S_Δ` is spanned
//! by monomials `X₀^k X^m` with `m ∈ kΔ` and `J` is generated by
//! `F₀ = X₀f` and `F_i = X₀ X_i ∂f/∂X_i`.
//!
//! Every generator of `J` has exponents `(1, s)` with `s` in the support of
//! `f`, so multiplication never leaves a coset of the lattice `L` spanned by
//! those vectors in `Z^{n+1}`. The multiplication maps are eliminated block by
//! block, one block per coset. For full support `L = Z^{n+1}` and there is a
//! single block; for Fermat-type polynomials the blocks are small.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::ehrhart::delta_vector;
use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::lattice::modp::reduce;
use crate::lattice::{hnf, rank, FieldMode, IntMatrix, LatticeVector, RankMode, RationalMatrix, RowSpace, Scalar};
use crate::polytope::LatticePolytope;

/// Basis of `S^k_Δ`: the lattice points of `kΔ` in lexicographic order.
#[derive(Clone, Debug, Serialize)]
pub struct GradedSlice {
    pub degree: u64,
    pub points: Vec<LatticeVector>,
}

impl GradedSlice {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn position(&self, m: &LatticeVector) -> Option<usize> {
        self.points.binary_search(m).ok()
    }
}

pub fn slice(p: &LatticePolytope, k: u64) -> GradedSlice {
    GradedSlice {
        degree: k,
        points: p.points_in_dilation(k),
    }
}

/// Requires the support of `f` inside `p` with a nonzero coefficient at
/// every vertex, i.e. Newton polytope equal to `p`.
pub fn check_newton_polytope(p: &LatticePolytope, f: &LaurentPolynomial) -> Result<()> {
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            got: f.dim(),
        });
    }
    let missing: Vec<LatticeVector> = p
        .vertices()
        .iter()
        .filter(|v| f.coefficient(v).is_zero())
        .cloned()
        .collect();
    let outside: Vec<LatticeVector> = f.support().into_iter().filter(|m| !p.contains(m)).collect();
    if missing.is_empty() && outside.is_empty() {
        Ok(())
    } else {
        Err(Error::NewtonPolytopeMismatch { missing, outside })
    }
}

/// Coordinates of `F₀, …, F_n` in the basis of `slice(p, 1)`.
pub fn derivative_sections(p: &LatticePolytope, f: &LaurentPolynomial) -> Result<Vec<Vec<BigRational>>> {
    check_newton_polytope(p, f)?;
    let n = p.dim();
    let basis = slice(p, 1);
    let mut out = vec![vec![BigRational::zero(); basis.len()]; n + 1];
    for (m, c) in f.terms() {
        let j = basis.position(m).expect("support lies in the polytope");
        out[0][j] = c.clone();
        for i in 0..n {
            out[i + 1][j] = c * BigRational::from_integer(m.coords()[i].clone());
        }
    }
    Ok(out)
}

/// Which lattice points receive coefficients in [`generic_polynomial`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Support {
    /// Every lattice point of the polytope.
    Full,
    /// Lattice points in the sublattice spanned by the vertices, which keeps
    /// the coset blocks as small as the polytope allows.
    VertexLattice,
}

/// Nonzero integer coefficients in `[−50, 50]` drawn from `rng`.
fn draw(p: &LatticePolytope, support: Support, rng: &mut ChaCha8Rng) -> LaurentPolynomial {
    let points: Vec<LatticeVector> = match support {
        Support::Full => p.points().to_vec(),
        Support::VertexLattice => {
            let h = Reducer::new(&p.vertex_matrix());
            p.points().iter().filter(|m| h.contains(m)).cloned().collect()
        }
    };
    let terms = points.into_iter().map(|m| {
        let mut c = 0i64;
        while c == 0 {
            c = rng.gen_range(-50..=50);
        }
        (m, BigRational::from_integer(BigInt::from(c)))
    });
    LaurentPolynomial::from_terms(p.dim(), terms).expect("dimensions agree")
}

/// One seeded draw of coefficients on the chosen support.
pub fn generic_polynomial(p: &LatticePolytope, support: Support, seed: u64) -> LaurentPolynomial {
    draw(p, support, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// A seeded polynomial that passes the regularity test, redrawing up to
/// `attempts` times. Returns the polynomial, its ring and the draw count.
pub fn generic_regular(
    p: &LatticePolytope,
    support: Support,
    seed: u64,
    mode: FieldMode,
    attempts: u32,
) -> Result<(LaurentPolynomial, JacobianRing, u32)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=attempts {
        let f = draw(p, support, &mut rng);
        let ring = JacobianRing::new(p, &f, mode)?;
        if ring.regular {
            return Ok((f, ring, attempt));
        }
    }
    Err(Error::NotRegular)
}

/// Reduction modulo a full-rank lattice given by generating rows.
struct Reducer {
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
}

impl Reducer {
    fn new(generators: &IntMatrix) -> Self {
        let (h, _) = hnf(generators);
        let mut rows = Vec::new();
        let mut pivots = Vec::new();
        for r in 0..h.rows() {
            if let Some(c) = h.row(r).iter().position(|x| !x.is_zero()) {
                rows.push(h.row_vec(r));
                pivots.push(c);
            }
        }
        Reducer { rows, pivots }
    }

    fn reduce(&self, x: &mut [BigInt]) {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let q = num_integer::Integer::div_floor(&x[c], &row[c]);
            if !q.is_zero() {
                for (a, b) in x.iter_mut().zip(row) {
                    *a -= &q * b;
                }
            }
        }
    }

    fn contains(&self, m: &LatticeVector) -> bool {
        let mut x = m.coords().to_vec();
        self.reduce(&mut x);
        x.iter().all(Zero::is_zero)
    }
}

/// Columns of one degree, grouped into coset blocks. Inside a block,
/// columns run by codimension of the carrying face (descending), then
/// lexicographically, so each ideal `I^{(i)}` is a suffix.
struct Layout {
    points: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
    codim: Vec<usize>,
    block: Vec<usize>,
    local: Vec<usize>,
    blocks: Vec<Vec<usize>>,
    /// Number of interior columns at the end of each block.
    interior: Vec<usize>,
}

fn to_i64(m: &LatticeVector) -> Result<Vec<i64>> {
    m.to_i64()
        .ok_or_else(|| Error::Unsupported("coordinates beyond 64 bits in a graded slice".into()))
}

impl Layout {
    fn build(p: &LatticePolytope, k: u64, cosets: &Reducer, codims: &mut HashMap<Vec<usize>, usize>) -> Result<Self> {
        let pts = p.points_in_dilation(k);
        let kk = BigInt::from(k);
        let mut points = Vec::with_capacity(pts.len());
        let mut codim = Vec::with_capacity(pts.len());
        let mut keys: HashMap<Vec<BigInt>, usize> = HashMap::new();
        let mut block = Vec::with_capacity(pts.len());
        for m in &pts {
            points.push(to_i64(m)?);
            if k == 0 {
                // the apex of the cone lies in no ideal I^{(i)}
                codim.push(p.dim() + 1);
                block.push(0);
                keys.entry(Vec::new()).or_insert(0);
                continue;
            }
            let tight: Vec<usize> = p
                .facets()
                .iter()
                .enumerate()
                .filter(|(_, f)| f.normal.dot(m) == -(&f.offset * &kk))
                .map(|(i, _)| i)
                .collect();
            let c = match codims.get(&tight) {
                Some(&c) => c,
                None => {
                    let c = face_codim(p, &tight);
                    codims.insert(tight, c);
                    c
                }
            };
            codim.push(c);
            let mut x = Vec::with_capacity(p.dim() + 1);
            x.push(kk.clone());
            x.extend(m.coords().iter().cloned());
            cosets.reduce(&mut x);
            let next = keys.len();
            block.push(*keys.entry(x).or_insert(next));
        }
        let mut blocks = vec![Vec::new(); keys.len()];
        for (j, &b) in block.iter().enumerate() {
            blocks[b].push(j);
        }
        let mut local = vec![0; pts.len()];
        let mut interior = vec![0; blocks.len()];
        for (b, cols) in blocks.iter_mut().enumerate() {
            // lexicographic order is inherited from the enumeration
            cols.sort_by_key(|&j| std::cmp::Reverse(codim[j]));
            for (i, &j) in cols.iter().enumerate() {
                local[j] = i;
                if codim[j] == 0 {
                    interior[b] += 1;
                }
            }
        }
        let index = points.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        Ok(Layout {
            points,
            index,
            codim,
            block,
            local,
            blocks,
            interior,
        })
    }

    fn column(&self, m: &[i64]) -> usize {
        self.index[m]
    }
}

fn face_codim(p: &LatticePolytope, tight: &[usize]) -> usize {
    if tight.is_empty() {
        return 0;
    }
    let vs: Vec<usize> = (0..p.vertices().len())
        .filter(|v| tight.iter().all(|&f| p.facet_vertices(f).binary_search(v).is_ok()))
        .collect();
    p.face_lattice()
        .by_vertices(&vs)
        .map(|face| face.codim())
        .expect("tight facets cut out a face")
}

/// Coefficients of `F₀..F_n` at each support point, as integers (after
/// clearing denominators) and reduced modulo the working prime.
enum Coefficients {
    Int(Vec<Vec<BigInt>>),
    Mod(Vec<Vec<u64>>),
}

fn coefficients(f: &LaurentPolynomial, mode: FieldMode) -> (Vec<Vec<i64>>, Coefficients) {
    let n = f.dim();
    let terms = f.cleared_terms();
    let support: Vec<Vec<i64>> = terms
        .iter()
        .map(|(m, _)| m.to_i64().expect("support inside a small polytope"))
        .collect();
    let int: Vec<Vec<BigInt>> = (0..=n)
        .map(|i| {
            terms
                .iter()
                .map(|(m, c)| if i == 0 { c.clone() } else { c * &m.coords()[i - 1] })
                .collect()
        })
        .collect();
    let coeffs = match mode {
        FieldMode::Exact => Coefficients::Int(int),
        FieldMode::Modular(p) => Coefficients::Mod(
            int.iter()
                .map(|row| row.iter().map(|x| reduce(x, p)).collect())
                .collect(),
        ),
    };
    (support, coeffs)
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Inserts `Σ_s coeff[i][s] e_{m+s}` for each source `m` and each `i` until
/// the block is full; `offset` shifts local columns (used for interior
/// suffixes).
fn eliminate(
    mode: FieldMode,
    width: usize,
    sources: &[&[i64]],
    support: &[Vec<i64>],
    coeffs: &Coefficients,
    target: &Layout,
    offset: usize,
) -> RowSpace {
    let mut space = RowSpace::new(mode, width);
    'outer: for m in sources {
        let cols: Vec<usize> = support
            .iter()
            .map(|s| target.local[target.column(&add(m, s))] - offset)
            .collect();
        let rows = match coeffs {
            Coefficients::Int(c) => c.len(),
            Coefficients::Mod(c) => c.len(),
        };
        for i in 0..rows {
            if space.rank() == width {
                break 'outer;
            }
            match (&mut space, coeffs) {
                (RowSpace::Int(e), Coefficients::Int(c)) => {
                    let mut row = vec![BigInt::zero(); width];
                    for (&j, x) in cols.iter().zip(&c[i]) {
                        row[j] += x;
                    }
                    e.insert(row);
                }
                (RowSpace::Mod(e), Coefficients::Mod(c)) => {
                    let mut row = vec![0u64; width];
                    for (&j, &x) in cols.iter().zip(&c[i]) {
                        row[j] = x;
                    }
                    e.insert(row);
                }
                _ => unreachable!("coefficients follow the field mode"),
            }
        }
    }
    space
}

#[derive(Clone, Debug, Serialize)]
pub struct JacobianReport {
    pub n: usize,
    pub regular: bool,
    /// `dim R_f^k` for `k = 0..=n+1`.
    pub dims_r: Vec<usize>,
    /// `dim H_f^k`, the image of `I^{(1)}`.
    pub dims_h: Vec<usize>,
    /// `dim D_f^k = dim I^{(1),k} / (J·I^{(1)})^k`.
    pub dims_d: Vec<usize>,
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub psi: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub phi: Vec<BigInt>,
    pub mode: &'static str,
    pub prime: Option<u64>,
    pub blocks: usize,
}

/// The graded Jacobian ring in degrees `0..=n+1`, kept in echelon form so
/// that dimensions and normal forms can be read off.
pub struct JacobianRing {
    n: usize,
    mode: FieldMode,
    layouts: Vec<Layout>,
    /// `echelons[k][b]` spans `J^k` restricted to block `b`; empty for `k = 0`.
    echelons: Vec<Vec<RowSpace>>,
    dims_r: Vec<usize>,
    dims_d: Vec<usize>,
    psi: Vec<BigInt>,
    phi: Vec<BigInt>,
    reflexive: bool,
    pub regular: bool,
}

impl JacobianRing {
    pub fn new(p: &LatticePolytope, f: &LaurentPolynomial, mode: FieldMode) -> Result<Self> {
        check_newton_polytope(p, f)?;
        let n = p.dim();
        let gens: Vec<Vec<BigInt>> = f
            .support()
            .iter()
            .map(|m| {
                let mut row = vec![BigInt::from(1)];
                row.extend(m.coords().iter().cloned());
                row
            })
            .collect();
        let cosets = Reducer::new(&IntMatrix::from_rows(&gens, n + 1));
        let mut codims = HashMap::new();
        let layouts: Vec<Layout> = (0..=n as u64 + 1)
            .map(|k| Layout::build(p, k, &cosets, &mut codims))
            .collect::<Result<_>>()?;
        let (support, coeffs) = coefficients(f, mode);
        let anchor = &support[0];

        let mut echelons = vec![Vec::new()];
        let mut dims_r = vec![1];
        let mut dims_d = vec![0];
        for k in 1..layouts.len() {
            let (src, dst) = (&layouts[k - 1], &layouts[k]);
            let mut sources: Vec<Vec<&[i64]>> = vec![Vec::new(); dst.blocks.len()];
            let mut inner: Vec<Vec<&[i64]>> = vec![Vec::new(); dst.blocks.len()];
            for (j, m) in src.points.iter().enumerate() {
                let b = dst.block[dst.column(&add(m, anchor))];
                sources[b].push(m);
                if src.codim[j] == 0 {
                    inner[b].push(m);
                }
            }
            let spaces: Vec<RowSpace> = (0..dst.blocks.len())
                .into_par_iter()
                .map(|b| eliminate(mode, dst.blocks[b].len(), &sources[b], &support, &coeffs, dst, 0))
                .collect();
            let j_rank: usize = spaces.iter().map(RowSpace::rank).sum();
            dims_r.push(dst.points.len() - j_rank);
            let d_rank: usize = (0..dst.blocks.len())
                .into_par_iter()
                .map(|b| {
                    let width = dst.interior[b];
                    let offset = dst.blocks[b].len() - width;
                    eliminate(mode, width, &inner[b], &support, &coeffs, dst, offset).rank()
                })
                .sum();
            let interior: usize = dst.interior.iter().sum();
            dims_d.push(interior - d_rank);
            echelons.push(spaces);
        }

        let delta = delta_vector(p)?;
        let regular = (0..=n).all(|k| BigInt::from(dims_r[k]) == delta.psi[k]) && dims_r[n + 1] == 0;
        Ok(JacobianRing {
            n,
            mode,
            layouts,
            echelons,
            dims_r,
            dims_d,
            psi: delta.psi,
            phi: delta.phi,
            reflexive: p.is_reflexive(),
            regular,
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims_r
    }

    /// Number of coset blocks the multiplication maps split into.
    pub fn blocks(&self) -> usize {
        self.layouts[self.n + 1].blocks.len()
    }

    /// Dimension of the image of `I^{(i)}` in `R_f^k` for `k = 0..=n+1`:
    /// monomials on no face of codimension `i`, less the pivots of `J`
    /// among them.
    fn ideal_image(&self, i: usize) -> Vec<usize> {
        let mut out = vec![0];
        for k in 1..self.layouts.len() {
            let layout = &self.layouts[k];
            let dim = (0..layout.points.len())
                .filter(|&j| layout.codim[j] < i)
                .filter(|&j| !self.echelons[k][layout.block[j]].is_pivot(layout.local[j]))
                .count();
            out.push(dim);
        }
        out
    }

    pub fn report(&self) -> JacobianReport {
        let (mode, prime) = match self.mode {
            FieldMode::Exact => ("exact", None),
            FieldMode::Modular(p) => ("modular", Some(p)),
        };
        JacobianReport {
            n: self.n,
            regular: self.regular,
            dims_r: self.dims_r.clone(),
            dims_h: self.ideal_image(1),
            dims_d: self.dims_d.clone(),
            psi: self.psi.clone(),
            phi: self.phi.clone(),
            mode,
            prime,
            blocks: self.blocks(),
        }
    }

    fn require_regular(&self) -> Result<()> {
        if self.regular {
            Ok(())
        } else {
            Err(Error::NotRegular)
        }
    }

    /// `filtration[i − 1][k]` is the dimension of the image of `I^{(i)}` in
    /// `R_f^k`, for `1 ≤ i ≤ n`.
    pub fn filtration(&self) -> Result<Vec<Vec<usize>>> {
        self.require_regular()?;
        Ok((1..=self.n).map(|i| self.ideal_image(i)).collect())
    }

    /// `dim D_f^k`, checked against φ.
    pub fn dualizing_dims(&self) -> Result<Vec<usize>> {
        self.require_regular()?;
        let matches = self
            .dims_d
            .iter()
            .zip(&self.phi)
            .all(|(d, f)| BigInt::from(*d) == *f);
        if !matches {
            return Err(Error::Inconsistent(format!(
                "dualizing dimensions {:?} differ from φ = {:?}",
                self.dims_d,
                self.phi.iter().map(|x| x.to_string()).collect::<Vec<_>>()
            )));
        }
        Ok(self.dims_d.clone())
    }

    /// Standard monomials of `R_f^k` as (block, local column, point).
    fn standard_monomials(&self, k: usize) -> Vec<&[i64]> {
        let layout = &self.layouts[k];
        (0..layout.points.len())
            .filter(|&j| k == 0 || !self.echelons[k][layout.block[j]].is_pivot(layout.local[j]))
            .map(|j| layout.points[j].as_slice())
            .collect()
    }

    /// Coordinate of `X₀^k X^m` on the standard monomial `top` of `R_f^k`.
    fn top_coordinate(&self, k: usize, m: &[i64], top: usize) -> Scalar {
        let layout = &self.layouts[k];
        let j = layout.column(m);
        let b = layout.block[j];
        let zero = match self.mode {
            FieldMode::Exact => Scalar::Rat(BigRational::zero()),
            FieldMode::Modular(_) => Scalar::Mod(0),
        };
        if b != layout.block[top] {
            return zero;
        }
        let mut unit = vec![BigInt::zero(); layout.blocks[b].len()];
        unit[layout.local[j]] = BigInt::from(1);
        self.echelons[k][b].normal_form(&unit)[layout.local[top]].clone()
    }

    /// Multiplication `R^i × R^{n−i} → R^n ≅ k` for every `i`.
    pub fn pairing_check(&self) -> Result<PairingReport> {
        if !self.reflexive {
            return Err(Error::InvalidInput("the pairing check needs a reflexive polytope".into()));
        }
        self.require_regular()?;
        let n = self.n;
        let top_layout = &self.layouts[n];
        let tops: Vec<usize> = (0..top_layout.points.len())
            .filter(|&j| !self.echelons[n][top_layout.block[j]].is_pivot(top_layout.local[j]))
            .collect();
        if tops.len() != 1 {
            return Err(Error::Inconsistent(format!("dim R^n = {}, expected 1", tops.len())));
        }
        let top = tops[0];
        let mut rows = Vec::new();
        for i in 0..=n {
            let left = self.standard_monomials(i);
            let right = self.standard_monomials(n - i);
            let mut cache: HashMap<Vec<i64>, Scalar> = HashMap::new();
            let matrix: Vec<Vec<Scalar>> = left
                .iter()
                .map(|a| {
                    right
                        .iter()
                        .map(|b| {
                            let s = add(a, b);
                            if let Some(x) = cache.get(&s) {
                                return x.clone();
                            }
                            let x = self.top_coordinate(n, &s, top);
                            cache.insert(s, x.clone());
                            x
                        })
                        .collect()
                })
                .collect();
            let r = scalar_rank(&matrix, right.len(), self.mode);
            rows.push(PairingRow {
                degree: i,
                left: left.len(),
                right: right.len(),
                rank: r,
                perfect: left.len() == right.len() && r == left.len(),
            });
        }
        let passed = rows.iter().all(|r| r.perfect);
        Ok(PairingReport { rows, passed })
    }
}

fn scalar_rank(rows: &[Vec<Scalar>], cols: usize, mode: FieldMode) -> usize {
    match mode {
        FieldMode::Modular(_) => {
            let mut space = RowSpace::new(mode, cols);
            for row in rows {
                space.insert_scalars(row);
            }
            space.rank()
        }
        FieldMode::Exact => {
            let rats: Vec<Vec<BigRational>> = rows
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|s| match s {
                            Scalar::Rat(x) => x.clone(),
                            Scalar::Mod(_) => unreachable!("exact mode"),
                        })
                        .collect()
                })
                .collect();
            rank(&RationalMatrix::from_rows(&rats, cols), RankMode::Exact)
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingRow {
    pub degree: usize,
    pub left: usize,
    pub right: usize,
    pub rank: usize,
    pub perfect: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PairingReport {
    pub rows: Vec<PairingRow>,
    pub passed: bool,
}

pub fn jacobian_dims(p: &LatticePolytope, f: &LaurentPolynomial, mode: FieldMode) -> Result<JacobianReport> {
    Ok(JacobianRing::new(p, f, mode)?.report())
}

pub fn ideal_filtration_dims(p: &LatticePolytope, f: &LaurentPolynomial, mode: FieldMode) -> Result<Vec<Vec<usize>>> {
    JacobianRing::new(p, f, mode)?.filtration()
}

pub fn dualizing_dims(p: &LatticePolytope, f: &LaurentPolynomial, mode: FieldMode) -> Result<Vec<usize>> {
    JacobianRing::new(p, f, mode)?.dualizing_dims()
}

pub fn gorenstein_pairing_check(p: &LatticePolytope, f: &LaurentPolynomial, mode: FieldMode) -> Result<PairingReport> {
    JacobianRing::new(p, f, mode)?.pairing_check()
}
