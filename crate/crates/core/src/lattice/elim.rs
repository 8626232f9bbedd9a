//! Incremental row echelon forms over F_p and over Z (fraction-free).
//!
//! Both keep each stored row zero to the left of its pivot, so reducing a
//! vector by pivots in increasing column order leaves it zero on every pivot
//! column. That residue is a canonical representative modulo the row space.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::clear_denominators;
use super::modp::{inv_mod, mul_mod, reduce, sub_mod};
use super::RankMode;

/// Field over which ranks and normal forms are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldMode {
    Exact,
    Modular(u64),
}

impl From<RankMode> for FieldMode {
    fn from(m: RankMode) -> Self {
        match m {
            RankMode::Exact => FieldMode::Exact,
            RankMode::Modular { prime } => FieldMode::Modular(prime),
        }
    }
}

/// An element of Q or of F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scalar {
    Mod(u64),
    Rat(BigRational),
}

impl Scalar {
    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Mod(x) => *x == 0,
            Scalar::Rat(x) => x.is_zero(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ModEchelon {
    cols: usize,
    p: u64,
    rows: Vec<Vec<u64>>,
    pivot_row: Vec<Option<usize>>,
}

impl ModEchelon {
    pub fn new(cols: usize, p: u64) -> Self {
        ModEchelon {
            cols,
            p,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    pub fn reduce(&self, v: &mut [u64]) {
        let p = self.p;
        for c in 0..self.cols {
            if v[c] == 0 {
                continue;
            }
            if let Some(r) = self.pivot_row[c] {
                let f = v[c];
                let row = &self.rows[r];
                for j in c..self.cols {
                    if row[j] != 0 {
                        v[j] = sub_mod(v[j], mul_mod(f, row[j], p), p);
                    }
                }
            }
        }
    }

    /// Adds a row; returns false if it was already in the span.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        self.reduce(&mut v);
        let Some(c) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = inv_mod(v[c], self.p);
        for x in v.iter_mut().skip(c) {
            *x = mul_mod(*x, inv, self.p);
        }
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(v);
        true
    }

    pub fn insert_big(&mut self, v: &[BigInt]) -> bool {
        let p = self.p;
        self.insert(v.iter().map(|x| reduce(x, p)).collect())
    }
}

/// Fraction-free echelon form over Z with primitive rows.
#[derive(Clone, Debug)]
pub struct IntEchelon {
    cols: usize,
    rows: Vec<Vec<BigInt>>,
    pivot_row: Vec<Option<usize>>,
}

impl IntEchelon {
    pub fn new(cols: usize) -> Self {
        IntEchelon {
            cols,
            rows: Vec::new(),
            pivot_row: vec![None; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row[col].is_some()
    }

    /// Reduces `v` in place; `scale` is multiplied by the factor applied to
    /// `v`, so `v / scale` stays congruent to the input modulo the row space.
    pub fn reduce(&self, v: &mut [BigInt], scale: &mut BigInt) {
        for c in 0..self.cols {
            if v[c].is_zero() {
                continue;
            }
            let Some(r) = self.pivot_row[c] else {
                continue;
            };
            let row = &self.rows[r];
            let g = v[c].gcd(&row[c]);
            let a = &row[c] / &g;
            let b = &v[c] / &g;
            if !a.is_one() {
                for x in v.iter_mut() {
                    if !x.is_zero() {
                        *x *= &a;
                    }
                }
                *scale *= &a;
            }
            for j in c..self.cols {
                if !row[j].is_zero() {
                    v[j] -= &b * &row[j];
                }
            }
            let content = v.iter().fold(scale.clone(), |acc, x| acc.gcd(x));
            if !content.is_one() && !content.is_zero() {
                for x in v.iter_mut() {
                    *x /= &content;
                }
                *scale /= &content;
            }
        }
    }

    pub fn insert(&mut self, mut v: Vec<BigInt>) -> bool {
        debug_assert_eq!(v.len(), self.cols);
        let mut scale = BigInt::one();
        self.reduce(&mut v, &mut scale);
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let content = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
        let sign = if v[c].is_negative() { -content } else { content };
        for x in v.iter_mut() {
            *x /= &sign;
        }
        self.pivot_row[c] = Some(self.rows.len());
        self.rows.push(v);
        true
    }
}

/// Echelon form over whichever field `FieldMode` selects.
#[derive(Clone, Debug)]
pub enum RowSpace {
    Mod(ModEchelon),
    Int(IntEchelon),
}

impl RowSpace {
    pub fn new(mode: FieldMode, cols: usize) -> Self {
        match mode {
            FieldMode::Exact => RowSpace::Int(IntEchelon::new(cols)),
            FieldMode::Modular(p) => RowSpace::Mod(ModEchelon::new(cols, p)),
        }
    }

    pub fn rank(&self) -> usize {
        match self {
            RowSpace::Mod(e) => e.rank(),
            RowSpace::Int(e) => e.rank(),
        }
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        match self {
            RowSpace::Mod(e) => e.is_pivot(col),
            RowSpace::Int(e) => e.is_pivot(col),
        }
    }

    pub fn insert(&mut self, v: &[BigInt]) -> bool {
        match self {
            RowSpace::Mod(e) => e.insert_big(v),
            RowSpace::Int(e) => e.insert(v.to_vec()),
        }
    }

    /// Inserts a row of field elements; they must match the field of `self`.
    pub fn insert_scalars(&mut self, v: &[Scalar]) -> bool {
        match self {
            RowSpace::Mod(e) => e.insert(
                v.iter()
                    .map(|s| match s {
                        Scalar::Mod(x) => *x,
                        Scalar::Rat(_) => panic!("rational entry in a modular row space"),
                    })
                    .collect(),
            ),
            RowSpace::Int(e) => {
                let rats: Vec<BigRational> = v
                    .iter()
                    .map(|s| match s {
                        Scalar::Rat(x) => x.clone(),
                        Scalar::Mod(_) => panic!("modular entry in an exact row space"),
                    })
                    .collect();
                e.insert(clear_denominators(&rats))
            }
        }
    }

    /// Canonical representative of `v` modulo the row space; zero on every
    /// pivot column.
    pub fn normal_form(&self, v: &[BigInt]) -> Vec<Scalar> {
        match self {
            RowSpace::Mod(e) => {
                let mut w: Vec<u64> = v.iter().map(|x| reduce(x, e.p)).collect();
                e.reduce(&mut w);
                w.into_iter().map(Scalar::Mod).collect()
            }
            RowSpace::Int(e) => {
                let mut w = v.to_vec();
                let mut scale = BigInt::one();
                e.reduce(&mut w, &mut scale);
                w.into_iter()
                    .map(|x| Scalar::Rat(BigRational::new(x, scale.clone())))
                    .collect()
            }
        }
    }
}
