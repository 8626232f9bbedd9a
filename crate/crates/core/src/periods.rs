//! Constant-term period series, recurrence fitting and the Hasse test.
//!
//! For a reflexive polytope with boundary points `m_1, …, m_r` the series
//! coefficient `B_i` is the constant term of `(X^{m_1} + … + X^{m_r})^i`:
//! the number of `i`-step walks with steps `m_j` that return to the origin.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::laurent::LaurentPolynomial;
use crate::lattice::{integer_kernel, modp, IntMatrix, LatticeVector};
use crate::polytope::LatticePolytope;

#[derive(Clone, Debug, Serialize)]
pub struct PeriodSeries {
    pub kmax: usize,
    /// Boundary points carrying coefficient 1; the parameter sits at the
    /// origin.
    pub steps: Vec<LatticeVector>,
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub coefficients: Vec<BigInt>,
    /// gcd of the indices of nonzero coefficients past `B_0`.
    pub compression_step: usize,
}

impl PeriodSeries {
    /// `B_0, B_s, B_{2s}, …` for the compression step `s`.
    pub fn compressed(&self) -> Vec<BigInt> {
        self.coefficients
            .iter()
            .step_by(self.compression_step)
            .cloned()
            .collect()
    }
}

/// Packs small coordinate vectors into one `i64` key.
struct Packer {
    radius: i64,
    base: i64,
}

impl Packer {
    fn new(radius: i64, dim: usize) -> Result<Self> {
        let base = 2 * radius + 1;
        let fits = (0..dim).try_fold(1i64, |acc, _| acc.checked_mul(base)).is_some();
        if !fits {
            return Err(Error::Unsupported("walk coordinates too large to index".into()));
        }
        Ok(Packer { radius, base })
    }

    fn pack(&self, x: &[i64]) -> i64 {
        x.iter().fold(0, |acc, &c| acc * self.base + c + self.radius)
    }

    fn unpack(&self, mut key: i64, dim: usize) -> Vec<i64> {
        let mut x = vec![0; dim];
        for c in x.iter_mut().rev() {
            *c = key % self.base - self.radius;
            key /= self.base;
        }
        x
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `B_0..=B_kmax` for the boundary points of a reflexive polytope.
///
/// Walks of length `a` and `b = a` or `a + 1` are grown side by side and
/// `B_{a+b} = Σ_e w_a(e)·w_b(−e)`. A state at step `t` is dropped when its
/// negative cannot be reached in the `2h − t` steps still available, where
/// `h = ⌈kmax/2⌉`.
pub fn pi0(p: &LatticePolytope, kmax: usize) -> Result<PeriodSeries> {
    p.dual()?;
    let n = p.dim();
    let steps = p.boundary_points();
    let step_coords: Vec<Vec<i64>> = steps
        .iter()
        .map(|m| m.to_i64().ok_or_else(|| Error::Unsupported("huge boundary point".into())))
        .collect::<Result<_>>()?;
    let normals: Vec<Vec<i64>> = p
        .facets()
        .iter()
        .map(|f| f.normal.to_i64().ok_or_else(|| Error::Unsupported("huge facet normal".into())))
        .collect::<Result<_>>()?;
    let half = kmax.div_ceil(2) as i64;
    let reach = step_coords
        .iter()
        .flatten()
        .map(|c| c.abs())
        .max()
        .unwrap_or(1);
    let packer = Packer::new(half * reach, n)?;
    // −e ∈ rP  ⇔  ⟨u, e⟩ ≤ r for every facet, offsets being 1
    let heights: Vec<Vec<i64>> = step_coords
        .iter()
        .map(|s| normals.iter().map(|u| dot(u, s)).collect())
        .collect();
    let shifts: Vec<i64> = step_coords.iter().map(|s| packer.pack(s) - packer.pack(&vec![0; n])).collect();
    let origin = packer.pack(&vec![0; n]);

    let mut coefficients = vec![BigInt::zero(); kmax + 1];
    coefficients[0] = BigInt::one();
    let mut current: HashMap<i64, BigInt> = HashMap::from([(origin, BigInt::one())]);
    let mut height = vec![0i64; normals.len()];
    for t in 1..=half {
        let room = 2 * half - t;
        let mut next: HashMap<i64, BigInt> = HashMap::with_capacity(current.len() * 2);
        for (key, w) in &current {
            let e = packer.unpack(*key, n);
            for (h, u) in height.iter_mut().zip(&normals) {
                *h = dot(u, &e);
            }
            for (shift, step_height) in shifts.iter().zip(&heights) {
                if height.iter().zip(step_height).all(|(a, b)| a + b <= room) {
                    *next.entry(key + shift).or_insert_with(BigInt::zero) += w;
                }
            }
        }
        // packing is affine, so −e packs to 2·origin − key
        let pair = |a: &HashMap<i64, BigInt>, b: &HashMap<i64, BigInt>| -> BigInt {
            a.iter()
                .filter_map(|(key, w)| b.get(&(2 * origin - key)).map(|v| w * v))
                .sum()
        };
        let odd = 2 * t as usize - 1;
        if odd <= kmax {
            coefficients[odd] = pair(&current, &next);
        }
        let even = 2 * t as usize;
        if even <= kmax {
            coefficients[even] = pair(&next, &next);
        }
        current = next;
    }
    let compression_step = coefficients
        .iter()
        .enumerate()
        .skip(1)
        .filter(|(_, b)| !b.is_zero())
        .fold(0usize, |g, (i, _)| g.gcd(&i))
        .max(1);
    Ok(PeriodSeries {
        kmax,
        steps,
        coefficients,
        compression_step,
    })
}

/// `Σ_j p_j(i)·c_{i−j} = 0` for all `i ≥ order`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recurrence {
    pub order: usize,
    pub degree: usize,
    /// `polys[j][e]` is the coefficient of `i^e` in `p_j`.
    #[serde(serialize_with = "polys_as_strings")]
    pub polys: Vec<Vec<BigInt>>,
}

fn polys_as_strings<S: serde::Serializer>(polys: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(polys.iter().map(|p| p.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
}

impl Recurrence {
    pub fn residual(&self, seq: &[BigInt], i: usize) -> BigInt {
        let x = BigInt::from(i);
        (0..=self.order)
            .map(|j| {
                let pj = self.polys[j]
                    .iter()
                    .rev()
                    .fold(BigInt::zero(), |acc, c| acc * &x + c);
                pj * &seq[i - j]
            })
            .sum()
    }

    /// True when every index in `range` (all at least `order`) satisfies the
    /// recurrence.
    pub fn annihilates(&self, seq: &[BigInt], range: std::ops::Range<usize>) -> bool {
        range.into_iter().all(|i| self.residual(seq, i).is_zero())
    }
}

/// Held-out suffix length used to validate a fit.
pub const HOLDOUT: usize = 5;

/// Terms needed to search up to the given bounds.
pub fn terms_needed(max_order: usize, max_degree: usize) -> usize {
    (max_order + 1) * (max_degree + 1) + max_order + HOLDOUT
}

/// Smallest recurrence, sweeping `(order + degree, order)` upward, whose
/// nullspace fit on all but the last [`HOLDOUT`] terms also annihilates them.
/// `Ok(None)` when nothing within the bounds fits.
pub fn fit_recurrence(seq: &[BigInt], max_order: usize, max_degree: usize) -> Result<Option<Recurrence>> {
    let needed = terms_needed(max_order, max_degree);
    if seq.len() < needed {
        return Err(Error::InsufficientTerms {
            needed,
            have: seq.len(),
        });
    }
    let train = seq.len() - HOLDOUT;
    for total in 1..=max_order + max_degree {
        for order in 1..=max_order.min(total) {
            let degree = total - order;
            if degree > max_degree {
                continue;
            }
            if let Some(r) = fit_exact(seq, train, order, degree) {
                return Ok(Some(r));
            }
        }
    }
    Ok(None)
}

fn fit_exact(seq: &[BigInt], train: usize, order: usize, degree: usize) -> Option<Recurrence> {
    let unknowns = (order + 1) * (degree + 1);
    let rows: Vec<Vec<BigInt>> = (order..train)
        .map(|i| {
            let x = BigInt::from(i);
            let mut row = Vec::with_capacity(unknowns);
            for j in 0..=order {
                let mut power = BigInt::one();
                for _ in 0..=degree {
                    row.push(&power * &seq[i - j]);
                    power *= &x;
                }
            }
            row
        })
        .collect();
    let kernel = integer_kernel(&IntMatrix::from_rows(&rows, unknowns));
    for k in 0..kernel.rows() {
        let v = kernel.row(k);
        let polys: Vec<Vec<BigInt>> = v.chunks(degree + 1).map(<[BigInt]>::to_vec).collect();
        if polys[0].iter().all(Zero::is_zero) || polys[order].iter().all(Zero::is_zero) {
            continue;
        }
        let r = normalize(Recurrence { order, degree, polys });
        if r.annihilates(seq, order..seq.len()) {
            return Some(r);
        }
    }
    None
}

fn normalize(mut r: Recurrence) -> Recurrence {
    let content = r.polys.iter().flatten().fold(BigInt::zero(), |g, x| g.gcd(x));
    let lead = r.polys[0]
        .iter()
        .rev()
        .find(|x| !x.is_zero())
        .expect("p_0 is nonzero")
        .clone();
    let divisor = if lead.is_negative() { -content } else { content };
    for x in r.polys.iter_mut().flatten() {
        *x /= &divisor;
    }
    r
}

/// Largest prime accepted by [`hasse_constant_term`].
pub const HASSE_PRIME_BOUND: u64 = 1000;

#[derive(Clone, Debug, Serialize)]
pub struct HasseReport {
    pub prime: u64,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub constant_term: BigInt,
    pub residue: u64,
    pub vanishes: bool,
}

type Sparse = HashMap<Vec<i64>, BigInt>;

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::with_capacity(a.len() * 2);
    for (x, u) in a {
        for (y, v) in b {
            let z: Vec<i64> = x.iter().zip(y).map(|(p, q)| p + q).collect();
            *out.entry(z).or_insert_with(BigInt::zero) += u * v;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sparse_pow(f: &Sparse, e: u64, dim: usize) -> Sparse {
    let mut result = Sparse::from([(vec![0; dim], BigInt::one())]);
    let mut base = f.clone();
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = sparse_mul(&result, &base);
        }
        e >>= 1;
        if e > 0 {
            base = sparse_mul(&base, &base);
        }
    }
    result
}

/// Constant term of `f^{p−1}`, exactly and modulo `p`. The power is split
/// as `g·g` with `g = f^{(p−1)/2}` so only half of it is expanded.
pub fn hasse_constant_term(f: &LaurentPolynomial, prime: u64) -> Result<HasseReport> {
    if !modp::is_prime(prime) || prime > HASSE_PRIME_BOUND {
        return Err(Error::InvalidInput(format!(
            "{prime} must be a prime at most {HASSE_PRIME_BOUND}"
        )));
    }
    let terms = f
        .integer_terms()
        .ok_or_else(|| Error::InvalidInput("the Hasse test needs integer coefficients".into()))?;
    f.newton_polytope()?.dual()?;
    let dim = f.dim();
    let sparse: Sparse = terms
        .into_iter()
        .map(|(m, c)| (m.to_i64().expect("reflexive polytopes have small vertices"), c))
        .collect();
    let constant_term = if prime == 2 {
        sparse.get(&vec![0; dim]).cloned().unwrap_or_default()
    } else {
        let g = sparse_pow(&sparse, (prime - 1) / 2, dim);
        g.iter()
            .filter_map(|(m, c)| {
                let neg: Vec<i64> = m.iter().map(|x| -x).collect();
                g.get(&neg).map(|d| c * d)
            })
            .sum()
    };
    let residue = modp::reduce(&constant_term, prime);
    Ok(HasseReport {
        prime,
        constant_term,
        residue,
        vanishes: residue == 0,
    })
}

/// Exact value of `(s·k)! / (k!)^s`.
pub fn multinomial_diagonal(s: u32, k: u64) -> BigInt {
    let fact = |m: u64| (1..=m).fold(BigInt::one(), |acc, i| acc * i);
    fact(s as u64 * k) / fact(k).pow(s)
}

/// Converts a recurrence coefficient table to `i64` for display, if small.
pub fn small_polys(r: &Recurrence) -> Option<Vec<Vec<i64>>> {
    r.polys
        .iter()
        .map(|p| p.iter().map(ToPrimitive::to_i64).collect())
        .collect()
}
