//! Sparse Laurent polynomials with exact rational coefficients.
//!
//! Text format: first content line `n t`, then `t` lines `c e_1 … e_n` where
//! `c` is an integer or a fraction `num/den`. `#` starts a comment.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt::Write;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::polytope::io::content_lines;
use crate::polytope::LatticePolytope;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPolynomial {
    dim: usize,
    terms: BTreeMap<LatticeVector, BigRational>,
}

impl LaurentPolynomial {
    pub fn zero(dim: usize) -> Self {
        LaurentPolynomial {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Sums coefficients of repeated exponents and drops zeros.
    pub fn from_terms<I>(dim: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (LatticeVector, BigRational)>,
    {
        let mut f = Self::zero(dim);
        for (m, c) in terms {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: m.dim(),
                });
            }
            f.add_term(m, c);
        }
        Ok(f)
    }

    pub fn from_i64_terms(dim: usize, terms: &[(i64, &[i64])]) -> Result<Self> {
        Self::from_terms(
            dim,
            terms
                .iter()
                .map(|(c, m)| (LatticeVector::from_i64(m), BigRational::from_integer(BigInt::from(*c)))),
        )
    }

    fn add_term(&mut self, m: LatticeVector, c: BigRational) {
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.is_zero()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&LatticeVector, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &LatticeVector) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn support(&self) -> Vec<LatticeVector> {
        self.terms.keys().cloned().collect()
    }

    pub fn constant_term(&self) -> BigRational {
        self.coefficient(&LatticeVector::zero(self.dim))
    }

    /// Convex hull of the support; an error if it is not full-dimensional.
    pub fn newton_polytope(&self) -> Result<LatticePolytope> {
        if self.terms.is_empty() {
            return Err(Error::InvalidInput("the zero polynomial has no Newton polytope".into()));
        }
        LatticePolytope::from_vertices(&self.support())
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.dim);
        }
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    /// Multiplication by the monomial `X^t`.
    pub fn shift(&self, t: &LatticeVector) -> Self {
        LaurentPolynomial {
            dim: self.dim,
            terms: self.terms.iter().map(|(m, x)| (m + t, x.clone())).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.dim);
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a + b, x * y);
            }
        }
        out
    }

    /// Coefficients as integers, if they all are.
    pub fn integer_terms(&self) -> Option<Vec<(LatticeVector, BigInt)>> {
        self.terms
            .iter()
            .map(|(m, c)| c.is_integer().then(|| (m.clone(), c.to_integer())))
            .collect()
    }

    /// Integer coefficients of `D·f` where `D` is the lcm of the denominators.
    pub fn cleared_terms(&self) -> Vec<(LatticeVector, BigInt)> {
        let d = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        self.terms
            .iter()
            .map(|(m, c)| (m.clone(), (c * BigRational::from_integer(d.clone())).to_integer()))
            .collect()
    }
}

fn parse_rational(tok: &str, line: usize) -> Result<BigRational> {
    let bad = || Error::Parse {
        line,
        message: format!("not a rational coefficient: {tok:?}"),
    };
    match tok.split_once('/') {
        Some((a, b)) => {
            let a: BigInt = a.parse().map_err(|_| bad())?;
            let b: BigInt = b.parse().map_err(|_| bad())?;
            if b.is_zero() {
                return Err(Error::Parse {
                    line,
                    message: "zero denominator".into(),
                });
            }
            Ok(BigRational::new(a, b))
        }
        None => Ok(BigRational::from_integer(tok.parse().map_err(|_| bad())?)),
    }
}

pub fn parse_laurent(text: &str) -> Result<LaurentPolynomial> {
    let mut lines = content_lines(text);
    let last_line = text.lines().count().max(1);
    let Some((hl, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            message: "empty input: expected header `n t`".into(),
        });
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    let parse_count = |tok: &str| {
        tok.parse::<usize>().map_err(|_| Error::Parse {
            line: hl,
            message: format!("expected a count, found {tok:?}"),
        })
    };
    if toks.len() != 2 {
        return Err(Error::Parse {
            line: hl,
            message: "header must be `n t`".into(),
        });
    }
    let n = parse_count(toks[0])?;
    let t = parse_count(toks[1])?;
    if n == 0 {
        return Err(Error::Parse {
            line: hl,
            message: "dimension must be positive".into(),
        });
    }
    let mut f = LaurentPolynomial::zero(n);
    let mut seen = BTreeMap::new();
    for read in 0..t {
        let Some((ln, line)) = lines.next() else {
            return Err(Error::Parse {
                line: last_line,
                message: format!("expected {t} term lines, found {read}"),
            });
        };
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != n + 1 {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected a coefficient and {n} exponents, found {} tokens", toks.len()),
            });
        }
        let c = parse_rational(toks[0], ln)?;
        let m: Vec<BigInt> = toks[1..]
            .iter()
            .map(|tok| {
                tok.parse().map_err(|_| Error::Parse {
                    line: ln,
                    message: format!("not an integer exponent: {tok:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let m = LatticeVector::new(m);
        if let Some(prev) = seen.insert(m.clone(), ln) {
            return Err(Error::Parse {
                line: ln,
                message: format!("exponent {m} already given on line {prev}"),
            });
        }
        f.add_term(m, c);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(Error::Parse {
            line: ln,
            message: "unexpected content after the term list".into(),
        });
    }
    Ok(f)
}

pub fn format_laurent(f: &LaurentPolynomial) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", f.dim(), f.len()).unwrap();
    for (m, c) in f.terms() {
        let exps: Vec<String> = m.coords().iter().map(|x| x.to_string()).collect();
        writeln!(out, "{} {}", c, exps.join(" ")).unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(BigInt::from(a), BigInt::from(b))
    }

    #[test]
    fn parse_and_format() {
        let text = "# x + 1/x - 3/2\n1 3\n1 1\n1 -1\n-3/2 0\n";
        let f = parse_laurent(text).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.constant_term(), rat(-3, 2));
        assert_eq!(parse_laurent(&format_laurent(&f)).unwrap(), f);
        let p = f.newton_polytope().unwrap();
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("", 1),
            ("1 2\n1 1\n", 2),
            ("1 1\n1 1 1\n", 2),
            ("1 1\nx 1\n", 2),
            ("1 1\n1/0 1\n", 2),
            ("1 2\n1 1\n2 1\n", 3),
            ("1 1\n1 1\n\n1 0\n", 4),
        ];
        for (text, line) in cases {
            match parse_laurent(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn arithmetic() {
        let f = LaurentPolynomial::from_i64_terms(1, &[(1, &[1]), (1, &[-1])]).unwrap();
        let g = f.mul(&f);
        // x² + 2 + x⁻²
        assert_eq!(g.len(), 3);
        assert_eq!(g.constant_term(), rat(2, 1));
        let h = f.mul(&LaurentPolynomial::from_i64_terms(1, &[(1, &[1]), (-1, &[-1])]).unwrap());
        assert_eq!(h.constant_term(), rat(0, 1));
        assert_eq!(h.len(), 2);
        assert_eq!(f.shift(&LatticeVector::from_i64(&[1])).constant_term(), rat(1, 1));
        let half = f.scale(&rat(1, 2));
        assert_eq!(half.cleared_terms().iter().map(|(_, c)| c.clone()).collect::<Vec<_>>(), vec![BigInt::from(1); 2]);
        assert!(f.scale(&rat(0, 1)).is_zero());
    }
}
