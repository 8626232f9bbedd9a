use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::Serialize;

use super::{extreme_rays, LatticeVector};
use crate::error::{Error, Result};

/// The half-space `⟨x, normal⟩ ≥ −offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Facet {
    pub normal: LatticeVector,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub offset: BigInt,
}

impl Facet {
    pub fn new(normal: LatticeVector, offset: BigInt) -> Self {
        Facet { normal, offset }
    }

    /// `⟨x, normal⟩ + offset`: zero on the supporting hyperplane, nonnegative inside.
    pub fn slack(&self, x: &LatticeVector) -> BigInt {
        x.dot(&self.normal) + &self.offset
    }

    pub fn with_offset(&self, offset: BigInt) -> Facet {
        Facet {
            normal: self.normal.clone(),
            offset,
        }
    }
}

/// Axis-aligned integer box `lower ≤ x ≤ upper`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundingBox {
    pub lower: Vec<BigInt>,
    pub upper: Vec<BigInt>,
}

impl BoundingBox {
    pub fn from_points(points: &[LatticeVector]) -> Self {
        let n = points[0].dim();
        let mut lower = points[0].coords().to_vec();
        let mut upper = lower.clone();
        for p in &points[1..] {
            for i in 0..n {
                if p.coords()[i] < lower[i] {
                    lower[i] = p.coords()[i].clone();
                }
                if p.coords()[i] > upper[i] {
                    upper[i] = p.coords()[i].clone();
                }
            }
        }
        BoundingBox { lower, upper }
    }

    pub fn cube(dim: usize, radius: i64) -> Self {
        BoundingBox {
            lower: vec![BigInt::from(-radius); dim],
            upper: vec![BigInt::from(radius); dim],
        }
    }

    pub fn scaled(&self, k: &BigInt) -> Self {
        BoundingBox {
            lower: self.lower.iter().map(|x| x * k).collect(),
            upper: self.upper.iter().map(|x| x * k).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }
}

/// Integer points of `{x : ⟨x, u⟩ ≥ −b for every facet}` inside `bbox`, in
/// lexicographic order. Fails with `Unbounded` if the inequalities alone do
/// not cut out a bounded region.
pub fn lattice_points_in(facets: &[Facet], bbox: &BoundingBox) -> Result<Vec<LatticeVector>> {
    check_bounded(facets, bbox.dim())?;
    Ok(points_unchecked(facets, bbox))
}

/// Number of points `lattice_points_in` would return.
pub fn count_lattice_points(facets: &[Facet], bbox: &BoundingBox) -> Result<u64> {
    check_bounded(facets, bbox.dim())?;
    Ok(count_unchecked(facets, bbox))
}

fn check_bounded(facets: &[Facet], dim: usize) -> Result<()> {
    for f in facets {
        if f.normal.dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: f.normal.dim(),
            });
        }
    }
    let rows: Vec<Vec<BigInt>> = facets.iter().map(|f| f.normal.coords().to_vec()).collect();
    match extreme_rays(&rows, dim) {
        Some(r) if r.is_empty() => Ok(()),
        _ => Err(Error::Unbounded),
    }
}

pub(crate) fn points_unchecked(facets: &[Facet], bbox: &BoundingBox) -> Vec<LatticeVector> {
    let mut out = Vec::new();
    match SmallSystem::try_new(facets, bbox) {
        Some(sys) => walk(&sys, &mut |x: &[i64]| out.push(LatticeVector::from_i64(x))),
        None => {
            let sys = System::big(facets, bbox);
            walk(&sys, &mut |x: &[BigInt]| out.push(LatticeVector::new(x.to_vec())))
        }
    }
    out
}

pub(crate) fn count_unchecked(facets: &[Facet], bbox: &BoundingBox) -> u64 {
    let mut count = 0u64;
    match SmallSystem::try_new(facets, bbox) {
        Some(sys) => walk(&sys, &mut |_: &[i64]| count += 1),
        None => walk(&System::big(facets, bbox), &mut |_: &[BigInt]| count += 1),
    }
    count
}

struct System<T> {
    normals: Vec<Vec<T>>,
    offsets: Vec<T>,
    lower: Vec<T>,
    upper: Vec<T>,
    // tail[f][t] = max over the box of Σ_{j ≥ t} normal_f[j]·x_j
    tail: Vec<Vec<T>>,
}

type SmallSystem = System<i64>;

impl SmallSystem {
    /// The `i64` variant, available when every partial sum provably stays
    /// below 2^62 in absolute value.
    fn try_new(facets: &[Facet], bbox: &BoundingBox) -> Option<Self> {
        let n = bbox.dim() as i128;
        let coord = bbox
            .lower
            .iter()
            .chain(&bbox.upper)
            .map(|x| x.abs().to_i128())
            .try_fold(0i128, |m, x| x.map(|x| m.max(x)))?;
        let normal = facets
            .iter()
            .flat_map(|f| f.normal.coords())
            .map(|x| x.abs().to_i128())
            .try_fold(0i128, |m, x| x.map(|x| m.max(x)))?;
        let offset = facets
            .iter()
            .map(|f| f.offset.abs().to_i128())
            .try_fold(0i128, |m, x| x.map(|x| m.max(x)))?;
        let bound = normal
            .checked_mul(coord)?
            .checked_mul(n.max(1))?
            .checked_add(offset)?;
        if bound >= 1i128 << 62 {
            return None;
        }
        let to = |v: &[BigInt]| v.iter().map(|x| x.to_i64().unwrap()).collect::<Vec<_>>();
        Some(System::build(
            facets.iter().map(|f| to(f.normal.coords())).collect(),
            facets.iter().map(|f| f.offset.to_i64().unwrap()).collect(),
            to(&bbox.lower),
            to(&bbox.upper),
        ))
    }
}

impl System<BigInt> {
    fn big(facets: &[Facet], bbox: &BoundingBox) -> Self {
        System::build(
            facets.iter().map(|f| f.normal.coords().to_vec()).collect(),
            facets.iter().map(|f| f.offset.clone()).collect(),
            bbox.lower.clone(),
            bbox.upper.clone(),
        )
    }
}

impl<T: Integer + Signed + Clone> System<T> {
    fn build(normals: Vec<Vec<T>>, offsets: Vec<T>, lower: Vec<T>, upper: Vec<T>) -> Self {
        let n = lower.len();
        let tail = normals
            .iter()
            .map(|u| {
                let mut t = vec![T::zero(); n + 1];
                for j in (0..n).rev() {
                    let a = u[j].clone() * lower[j].clone();
                    let b = u[j].clone() * upper[j].clone();
                    t[j] = t[j + 1].clone() + if a > b { a } else { b };
                }
                t
            })
            .collect();
        System {
            normals,
            offsets,
            lower,
            upper,
            tail,
        }
    }
}

fn walk<T: Integer + Signed + Clone>(sys: &System<T>, visit: &mut dyn FnMut(&[T])) {
    let n = sys.lower.len();
    if n == 0 {
        if sys.offsets.iter().all(|o| !o.is_negative()) {
            visit(&[]);
        }
        return;
    }
    let mut x = vec![T::zero(); n];
    let mut partial = vec![T::zero(); sys.normals.len()];
    descend(sys, 0, &mut x, &mut partial, visit);
}

fn descend<T: Integer + Signed + Clone>(
    sys: &System<T>,
    t: usize,
    x: &mut Vec<T>,
    partial: &mut Vec<T>,
    visit: &mut dyn FnMut(&[T]),
) {
    let n = x.len();
    let mut lo = sys.lower[t].clone();
    let mut hi = sys.upper[t].clone();
    for (f, u) in sys.normals.iter().enumerate() {
        // u_t·x_t ≥ −offset − partial − tail[t+1]
        let rhs = -(sys.offsets[f].clone() + partial[f].clone() + sys.tail[f][t + 1].clone());
        let c = &u[t];
        if c.is_zero() {
            if rhs.is_positive() {
                return;
            }
        } else if c.is_positive() {
            let b = rhs.div_ceil(c);
            if b > lo {
                lo = b;
            }
        } else {
            let b = rhs.div_floor(c);
            if b < hi {
                hi = b;
            }
        }
    }
    let mut v = lo;
    while v <= hi {
        x[t] = v.clone();
        if t + 1 == n {
            visit(x);
        } else {
            for (f, u) in sys.normals.iter().enumerate() {
                partial[f] = partial[f].clone() + u[t].clone() * v.clone();
            }
            descend(sys, t + 1, x, partial, visit);
            for (f, u) in sys.normals.iter().enumerate() {
                partial[f] = partial[f].clone() - u[t].clone() * v.clone();
            }
        }
        v = v + T::one();
    }
}
