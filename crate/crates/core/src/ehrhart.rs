//! Ehrhart polynomials and δ-vectors.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::LatticePolytope;

/// `Λ(t)` with `Λ(k) = l(kΔ)`; coefficients constant term first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartPolynomial {
    #[serde(serialize_with = "crate::report::rationals_as_strings")]
    coefficients: Vec<BigRational>,
}

impl EhrhartPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[BigRational] {
        &self.coefficients
    }

    pub fn leading(&self) -> &BigRational {
        self.coefficients.last().expect("nonempty")
    }

    pub fn evaluate(&self, t: &BigInt) -> BigRational {
        let t = BigRational::from_integer(t.clone());
        self.coefficients
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * &t + c)
    }
}

/// `ψ_0..ψ_n` and `φ_0..φ_{n+1}` with `φ_i = ψ_{n+1−i}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeltaVector {
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub psi: Vec<BigInt>,
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub phi: Vec<BigInt>,
}

impl DeltaVector {
    pub fn sum(&self) -> BigInt {
        self.psi.iter().sum()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.psi.len() - 1;
        (0..=n).all(|i| self.psi[i] == self.psi[n - i])
    }
}

/// `l(kΔ)` for `k = 0..=kmax`.
pub fn dilation_counts(p: &LatticePolytope, kmax: u64) -> Vec<u64> {
    (0..=kmax)
        .into_par_iter()
        .map(|k| p.count_in_dilation(k))
        .collect()
}

/// Exact interpolation of `l(kΔ)` at `k = 0..=n`.
pub fn ehrhart(p: &LatticePolytope) -> EhrhartPolynomial {
    let n = p.dim();
    let values: Vec<BigRational> = dilation_counts(p, n as u64)
        .into_iter()
        .map(|c| BigRational::from_integer(BigInt::from(c)))
        .collect();
    EhrhartPolynomial {
        coefficients: interpolate(&values),
    }
}

/// Coefficients of the unique polynomial of degree ≤ len−1 through
/// `(k, values[k])`, via Newton forward differences.
fn interpolate(values: &[BigRational]) -> Vec<BigRational> {
    let m = values.len();
    let mut diffs = values.to_vec();
    let mut leading = Vec::with_capacity(m);
    for j in 0..m {
        leading.push(diffs[0].clone());
        for i in 0..m - 1 - j {
            diffs[i] = &diffs[i + 1] - &diffs[i];
        }
    }
    let mut poly = vec![BigRational::zero(); m];
    // basis polynomial t(t−1)…(t−j+1)/j!
    let mut basis = vec![BigRational::one()];
    for (j, coeff) in leading.iter().enumerate() {
        for (i, b) in basis.iter().enumerate() {
            poly[i] += coeff * b;
        }
        let mut next = vec![BigRational::zero(); basis.len() + 1];
        let shift = BigRational::from_integer(BigInt::from(j));
        let denom = BigRational::from_integer(BigInt::from(j + 1));
        for (i, b) in basis.iter().enumerate() {
            next[i + 1] += b / &denom;
            next[i] -= b * &shift / &denom;
        }
        basis = next;
    }
    while poly.len() > 1 && poly.last().is_some_and(Zero::is_zero) {
        poly.pop();
    }
    poly
}

/// ψ from `(1 − t)^{n+1} Σ_k l(kΔ) t^k`; the coefficient of `t^{n+1}` must vanish.
pub fn delta_vector(p: &LatticePolytope) -> Result<DeltaVector> {
    let n = p.dim();
    let counts = dilation_counts(p, n as u64 + 1);
    psi_from_counts(n, &counts)
}

pub(crate) fn psi_from_counts(n: usize, counts: &[u64]) -> Result<DeltaVector> {
    let binom = binomials(n + 1);
    let mut series = vec![BigInt::zero(); n + 2];
    for (i, s) in series.iter_mut().enumerate() {
        for j in 0..=i {
            let term = &binom[j] * BigInt::from(counts[i - j]);
            if j % 2 == 0 {
                *s += term;
            } else {
                *s -= term;
            }
        }
    }
    if !series[n + 1].is_zero() {
        return Err(Error::Inconsistent(format!(
            "δ-vector has a nonzero coefficient {} in degree {}",
            series[n + 1],
            n + 1
        )));
    }
    series.truncate(n + 1);
    let mut phi: Vec<BigInt> = series.iter().rev().cloned().collect();
    phi.insert(0, BigInt::zero());
    Ok(DeltaVector { psi: series, phi })
}

fn binomials(m: usize) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for k in 0..m {
        let next = &row[k] * BigInt::from(m - k) / BigInt::from(k + 1);
        row.push(next);
    }
    row
}

/// `n! · vol(Δ)`, the leading coefficient of `Λ` scaled by `n!`.
pub fn normalized_volume(p: &LatticePolytope) -> BigInt {
    let lead = ehrhart(p).leading().clone();
    let fact: BigInt = (1..=p.dim()).map(BigInt::from).product();
    let v = lead * BigRational::from_integer(fact);
    debug_assert!(v.is_integer());
    v.to_integer()
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityRow {
    pub k: u64,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub predicted: BigInt,
    pub counted: u64,
    pub ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReciprocityReport {
    pub rows: Vec<ReciprocityRow>,
}

impl ReciprocityReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

/// Compares `(−1)^n Λ(−k)` with directly counted interior points of `kΔ`.
pub fn check_reciprocity(p: &LatticePolytope, kmax: u64) -> Result<ReciprocityReport> {
    if kmax == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let lambda = ehrhart(p);
    let n = p.dim();
    let rows = (1..=kmax)
        .into_par_iter()
        .map(|k| {
            let v = lambda.evaluate(&-BigInt::from(k));
            let v = if n % 2 == 1 { -v } else { v };
            let counted = p.count_interior_in_dilation(k);
            let predicted = v.to_integer();
            let ok = v.is_integer() && !predicted.is_negative() && predicted == BigInt::from(counted);
            ReciprocityRow {
                k,
                predicted,
                counted,
                ok,
            }
        })
        .collect();
    Ok(ReciprocityReport { rows })
}
