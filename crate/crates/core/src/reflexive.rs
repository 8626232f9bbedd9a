//! Reflexive pairs: Hodge numbers of the associated Calabi–Yau
//! hypersurfaces, Euler numbers, K3 edge ranks and fundamental groups.
//!
//! Everything here is combinatorial. Face sums iterate faces of `Δ` and pair
//! each with its dual face in `Δ*`.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ehrhart::{delta_vector, DeltaVector};
use crate::error::{Error, Result};
use crate::lattice::{lattice_index, snf, IntMatrix};
use crate::polytope::{Face, LatticePolytope};

#[derive(Clone, Debug, Serialize)]
pub struct ReflexivePairInfo {
    pub is_reflexive: bool,
    pub origin_interior: bool,
    /// Why the polytope is not reflexive, if it is not.
    pub reason: Option<String>,
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub offsets: Vec<BigInt>,
    /// Invariant factors (> 1) of `N / N_{Δ*}`; only for reflexive input.
    pub pair_group: Option<Vec<u64>>,
    /// `[M : M_Δ]`, the index of the lattice spanned by the vertices.
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub vertex_index: BigInt,
    pub delta: Option<DeltaVector>,
}

/// Reflexivity by facet offsets, cross-checked against ψ-symmetry.
///
/// With the origin interior, ψ is symmetric exactly when every facet sits at
/// distance 1; a disagreement is reported as [`Error::Inconsistent`].
pub fn is_reflexive(p: &LatticePolytope) -> Result<ReflexivePairInfo> {
    let offsets = p.offsets();
    let vertex_index = lattice_index(&p.vertex_matrix());
    let origin_interior = p.origin_is_interior();
    if !origin_interior {
        return Ok(ReflexivePairInfo {
            is_reflexive: false,
            origin_interior,
            reason: Some(Error::OriginNotInterior.to_string()),
            offsets,
            pair_group: None,
            vertex_index,
            delta: None,
        });
    }
    let (reflexive, reason) = match p.dual() {
        Ok(_) => (true, None),
        Err(e @ Error::NotReflexive { .. }) => (false, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let delta = delta_vector(p)?;
    if delta.is_symmetric() != reflexive {
        return Err(Error::Inconsistent(format!(
            "facet offsets say reflexive = {reflexive} but ψ = {:?} {} symmetric",
            delta.psi.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
            if reflexive { "is not" } else { "is" }
        )));
    }
    let pair_group = if reflexive {
        Some(fundamental_group(p, GroupKind::Pair)?)
    } else {
        None
    };
    Ok(ReflexivePairInfo {
        is_reflexive: reflexive,
        origin_interior,
        reason,
        offsets,
        pair_group,
        vertex_index,
        delta: Some(delta),
    })
}

/// One row of the per-face table behind the Hodge and Euler sums.
#[derive(Clone, Debug, Serialize)]
pub struct FaceContribution {
    pub dim: usize,
    pub codim: usize,
    pub vertices: Vec<usize>,
    pub interior_points: u64,
    pub dual_interior_points: u64,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub degree: BigInt,
    /// `None` when the dual face is a vertex.
    #[serde(serialize_with = "crate::report::opt_big_as_string")]
    pub dual_degree: Option<BigInt>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HodgeReport {
    pub n: usize,
    pub reflexive: bool,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub h11: BigInt,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub h_n21: BigInt,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub h_n21_affine: BigInt,
    #[serde(serialize_with = "crate::report::opt_big_as_string")]
    pub euler: Option<BigInt>,
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub picard_ambient: BigInt,
    pub faces: Vec<FaceContribution>,
}

fn require_hodge_dim(p: &LatticePolytope) -> Result<()> {
    if p.dim() < 4 {
        return Err(Error::Unsupported(format!(
            "Hodge formulas need dimension ≥ 4, got {}; use check_24 or k3_edge_rank for dimension 3",
            p.dim()
        )));
    }
    Ok(())
}

/// `(h, affine)` where
/// `h = l(Δ) − n − 1 − Σ_{codim 1} l*(Θ) + Σ_{codim 2} l*(Θ)·l*(Θ*)`
/// and `affine` omits the last sum.
fn h_n21_parts(p: &LatticePolytope, dual: &LatticePolytope) -> Result<(BigInt, BigInt)> {
    let n = p.dim();
    let (l, _) = p.count_points();
    let mut affine = BigInt::from(l) - BigInt::from(n + 1);
    for facet in p.faces(n - 1) {
        affine -= p.face_points(facet).1;
    }
    let mut correction = BigInt::zero();
    for face in p.faces(n - 2) {
        let inner = p.face_points(face).1;
        if inner == 0 {
            continue;
        }
        let dual_face = p.dual_face(dual, face)?;
        correction += BigInt::from(inner) * dual.face_points(&dual_face).1;
    }
    Ok((&affine + correction, affine))
}

/// `h^{n−2,1}` of the hypersurface family with Newton polytope `p`, with the
/// affine part (no codimension-2 correction) second.
pub fn hodge_h_n21(p: &LatticePolytope) -> Result<(BigInt, BigInt)> {
    require_hodge_dim(p)?;
    let dual = p.dual()?;
    h_n21_parts(p, &dual)
}

/// `h^{1,1}` of the family with Newton polytope `p`, equal to `h^{n−2,1}` of
/// the dual family; the ambient Picard number `l(Δ*) − n − 1` second.
pub fn hodge_h11(p: &LatticePolytope) -> Result<(BigInt, BigInt)> {
    require_hodge_dim(p)?;
    let dual = p.dual()?;
    let (h, _) = h_n21_parts(&dual, p)?;
    let picard = BigInt::from(dual.count_points().0) - BigInt::from(p.dim() + 1);
    Ok((h, picard))
}

fn contribution(p: &LatticePolytope, dual: &LatticePolytope, face: &Face) -> Result<FaceContribution> {
    let dual_face = p.dual_face(dual, face)?;
    let dual_degree = if dual_face.dim() == 0 {
        None
    } else {
        Some(dual.degree(&dual_face)?)
    };
    Ok(FaceContribution {
        dim: face.dim(),
        codim: face.codim(),
        vertices: face.vertex_indices().to_vec(),
        interior_points: p.face_points(face).1,
        dual_interior_points: dual.face_points(&dual_face).1,
        degree: p.degree(face)?,
        dual_degree,
    })
}

/// Full report: both Hodge numbers, the Euler number for `n = 4`, and the
/// per-face table over all proper faces of positive dimension.
pub fn hodge_report(p: &LatticePolytope) -> Result<HodgeReport> {
    require_hodge_dim(p)?;
    let n = p.dim();
    let dual = p.dual()?;
    let (h_n21, h_n21_affine) = h_n21_parts(p, &dual)?;
    let (h11, _) = h_n21_parts(&dual, p)?;
    let picard_ambient = BigInt::from(dual.count_points().0) - BigInt::from(n + 1);
    let mut faces = Vec::new();
    for d in 1..n {
        for face in p.faces(d) {
            faces.push(contribution(p, &dual, face)?);
        }
    }
    let euler = if n == 4 {
        let e = euler_from_table(&faces);
        if e != BigInt::from(2) * (&h11 - &h_n21) {
            return Err(Error::Inconsistent(format!(
                "Euler number {e} ≠ 2(h11 − h21) = 2({h11} − {h_n21})"
            )));
        }
        Some(e)
    } else {
        None
    };
    Ok(HodgeReport {
        n,
        reflexive: true,
        h11,
        h_n21,
        h_n21_affine,
        euler,
        picard_ambient,
        faces,
    })
}

fn euler_from_table(faces: &[FaceContribution]) -> BigInt {
    let mut e = BigInt::zero();
    for f in faces {
        let Some(dd) = &f.dual_degree else { continue };
        match f.dim {
            1 => e += &f.degree * dd,
            2 => e -= &f.degree * dd,
            _ => {}
        }
    }
    e
}

/// `Σ_{edges} d(Θ)d(Θ*) − Σ_{2-faces} d(Θ)d(Θ*)` for a reflexive 4-polytope.
pub fn euler_cy3(p: &LatticePolytope) -> Result<BigInt> {
    if p.dim() != 4 {
        return Err(Error::Unsupported(format!(
            "the Euler formula is for dimension 4, got {}",
            p.dim()
        )));
    }
    let dual = p.dual()?;
    let mut faces = Vec::new();
    for d in 1..=2 {
        for face in p.faces(d) {
            faces.push(contribution(p, &dual, face)?);
        }
    }
    Ok(euler_from_table(&faces))
}

fn require_dim3(p: &LatticePolytope) -> Result<LatticePolytope> {
    if p.dim() != 3 {
        return Err(Error::Unsupported(format!(
            "K3 edge formulas are for dimension 3, got {}",
            p.dim()
        )));
    }
    p.dual()
}

/// `(d(Θ), d(Θ*))` for every edge of a reflexive polytope.
fn edge_degrees(p: &LatticePolytope, dual: &LatticePolytope) -> Result<Vec<(BigInt, BigInt)>> {
    p.faces(1)
        .iter()
        .map(|e| {
            let de = p.dual_face(dual, e)?;
            Ok((p.degree(e)?, dual.degree(&de)?))
        })
        .collect()
}

/// `Σ_{edges} d(Θ)d(Θ*)` for a reflexive 3-polytope; always 24.
pub fn check_24(p: &LatticePolytope) -> Result<BigInt> {
    let dual = require_dim3(p)?;
    Ok(edge_degrees(p, &dual)?.iter().map(|(a, b)| a * b).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct K3Ranks {
    pub rank_f: i64,
    pub rank_g: i64,
    pub sum: i64,
    /// Every edge has `d = 1` or `d* = 1`.
    pub equality_condition: bool,
    pub within_bound: bool,
}

/// Ranks of the lattices spanned by boundary curves for the K3 families of
/// `Δ` and `Δ*`.
///
/// `rank_f` counts one divisor per vertex of `Δ*` plus `d(Θ)(d(Θ*) − 1)`
/// exceptional curves over each edge, minus 3 relations. Their sum is
/// `20 + Σ (d − 1)(d* − 1)`, so it reaches 20 exactly under the equality
/// condition and exceeds it otherwise.
pub fn k3_edge_rank(p: &LatticePolytope) -> Result<K3Ranks> {
    let dual = require_dim3(p)?;
    let edges = edge_degrees(p, &dual)?;
    let to_i64 = |x: &BigInt| i64::try_from(x).expect("edge degrees of a reflexive 3-polytope are small");
    let sum_d: i64 = edges.iter().map(|(a, _)| to_i64(a)).sum();
    let sum_dual: i64 = edges.iter().map(|(_, b)| to_i64(b)).sum();
    let rank_f = dual.vertices().len() as i64 + 21 - sum_d;
    let rank_g = p.vertices().len() as i64 + 21 - sum_dual;
    let sum = rank_f + rank_g;
    let equality_condition = edges.iter().all(|(a, b)| a.is_one() || b.is_one());
    Ok(K3Ranks {
        rank_f,
        rank_g,
        sum,
        equality_condition,
        within_bound: sum <= 20,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    /// `N / N_{Δ*}`, the group of the pair `(Δ, M)`.
    Pair,
    /// `N^{Δ*} / N_{Δ*}`, independent of the ambient lattice.
    Polytope,
}

/// Invariant factors greater than 1; an empty list is the trivial group.
pub fn fundamental_group(p: &LatticePolytope, kind: GroupKind) -> Result<Vec<u64>> {
    let dual = p.dual()?;
    let factors = match kind {
        GroupKind::Pair => snf(&dual.vertex_matrix()),
        // y ↦ (⟨v, y⟩)_v embeds N^{Δ*} as the saturation of the column span
        // of the pairing matrix, and N_{Δ*} as the span itself.
        GroupKind::Polytope => {
            let pairing: IntMatrix = p.vertex_matrix().mul(&dual.vertex_matrix().transpose());
            snf(&pairing)
        }
    };
    Ok(factors
        .into_iter()
        .filter(|d| !d.is_zero() && !d.is_one())
        .map(|d| u64::try_from(d).expect("group factors fit in 64 bits"))
        .collect())
}

pub fn group_order(factors: &[u64]) -> u64 {
    factors.iter().product()
}

#[derive(Clone, Debug, Serialize)]
pub struct FacetDegreeCheck {
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub volume: BigInt,
    #[serde(serialize_with = "crate::report::bigs_as_strings")]
    pub facet_degrees: Vec<BigInt>,
    /// `Σ offset · d(Θ)`, equal to the volume whenever the origin is interior.
    #[serde(serialize_with = "crate::report::big_as_string")]
    pub weighted_sum: BigInt,
    pub holds: bool,
}

/// `d(Δ) = Σ_{facets} d(Θ)`, the pyramid decomposition over the origin that
/// makes the Euler number of the open part vanish.
///
/// For a non-reflexive polytope with interior origin the pyramids have height
/// `offset`, so `holds` compares the volume with the weighted sum and the
/// unweighted identity is expected to fail.
pub fn euler_open_part_zero(p: &LatticePolytope) -> Result<FacetDegreeCheck> {
    if !p.origin_is_interior() {
        return Err(Error::OriginNotInterior);
    }
    let n = p.dim();
    let volume = p.normalized_volume();
    let facet_degrees: Vec<BigInt> = p
        .faces(n - 1)
        .iter()
        .map(|f| {
            if n == 1 {
                Ok(BigInt::one())
            } else {
                p.degree(f)
            }
        })
        .collect::<Result<_>>()?;
    let weighted_sum: BigInt = p
        .faces(n - 1)
        .iter()
        .zip(&facet_degrees)
        .map(|(f, d)| &p.facets()[f.facet_indices()[0]].offset * d)
        .sum();
    let plain: BigInt = facet_degrees.iter().sum();
    let holds = if p.is_reflexive() {
        plain == volume
    } else {
        weighted_sum == volume
    };
    Ok(FacetDegreeCheck {
        volume,
        facet_degrees,
        weighted_sum,
        holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polytope::standard;

    fn big(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn reflexivity_examples() {
        assert!(is_reflexive(&standard::cube(3)).unwrap().is_reflexive);
        let info = is_reflexive(&standard::fermat(4)).unwrap();
        assert!(info.is_reflexive);
        assert_eq!(info.delta.unwrap().psi, vec![big(1), big(121), big(381), big(121), big(1)]);
        assert_eq!(info.pair_group, Some(vec![]));
        // vertices of Δ₄ span the index-125 sublattice with quotient (Z/5)³
        assert_eq!(info.vertex_index, big(125));
        let mirror = is_reflexive(&standard::simplex(4)).unwrap();
        assert_eq!(mirror.pair_group, Some(vec![5, 5, 5]));

        // x + y ≤ 1, 2x − y ≥ −1 and y − x ≥ −1 are all at distance 1;
        // Pick: area 3 = i + 6/2 − 1 gives a single interior point
        let t = LatticePolytope::from_i64_vertices(&[&[1, 0], &[0, 1], &[-2, -3]]).unwrap();
        let info = is_reflexive(&t).unwrap();
        assert!(info.is_reflexive);
        assert_eq!(info.offsets, vec![big(1); 3]);

        let big_square = standard::cube(2).dilate(2).unwrap();
        let info = is_reflexive(&big_square).unwrap();
        assert!(!info.is_reflexive);
        assert!(info.offsets.iter().all(|o| o == &big(2)));
        assert!(info.reason.unwrap().contains("not reflexive"));

        let off = LatticePolytope::from_i64_vertices(&[&[0, 0], &[1, 0], &[0, 1]]).unwrap();
        let info = is_reflexive(&off).unwrap();
        assert!(!info.is_reflexive && !info.origin_interior);
    }

    #[test]
    fn quintic_hodge_numbers() {
        let d4 = standard::fermat(4);
        assert_eq!(hodge_h_n21(&d4).unwrap(), (big(101), big(101)));
        assert_eq!(hodge_h11(&d4).unwrap(), (big(1), big(1)));
        assert_eq!(euler_cy3(&d4).unwrap(), big(-200));
        let r = hodge_report(&d4).unwrap();
        assert_eq!((r.h11.clone(), r.h_n21.clone(), r.euler.clone()), (big(1), big(101), Some(big(-200))));
        // 10 edges with d = 5, d* = 1
        let edges: Vec<_> = r.faces.iter().filter(|f| f.dim == 1).collect();
        assert_eq!(edges.len(), 10);
        assert!(edges.iter().all(|f| f.degree == big(5) && f.dual_degree == Some(big(1))));

        let mirror = d4.dual().unwrap();
        let r = hodge_report(&mirror).unwrap();
        assert_eq!((r.h11, r.h_n21, r.euler), (big(101), big(1), Some(big(200))));
    }

    #[test]
    fn p2_times_p2_family() {
        let a = standard::p2xp2_fan();
        let r = hodge_report(&a).unwrap();
        assert_eq!(r.h11, big(83));
        assert_eq!(r.h_n21, big(2));
        assert_eq!(hodge_h_n21(&a.dual().unwrap()).unwrap().0, big(83));
        // bidegree (3,3) hypersurfaces: Picard rank 2 from the ambient space
        let r = hodge_report(&a.dual().unwrap()).unwrap();
        assert_eq!((r.h11, r.h_n21, r.picard_ambient), (big(2), big(83), big(2)));
    }

    #[test]
    fn four_cube_mirror_swap() {
        let c = standard::cube(4);
        let d = c.dual().unwrap();
        let rc = hodge_report(&c).unwrap();
        let rd = hodge_report(&d).unwrap();
        assert_eq!(rc.h11, rd.h_n21);
        assert_eq!(rc.h_n21, rd.h11);
        assert_eq!(rc.euler.unwrap(), -rd.euler.unwrap());
        assert!(rc.h_n21_affine <= rc.h_n21);
    }

    #[test]
    fn hodge_needs_dimension_four() {
        assert!(matches!(hodge_h_n21(&standard::cube(3)), Err(Error::Unsupported(_))));
        assert!(matches!(euler_cy3(&standard::cube(3)), Err(Error::Unsupported(_))));
        assert!(matches!(check_24(&standard::cube(4)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn twenty_four() {
        for p in [
            standard::cube(3),
            standard::cross_polytope(3),
            standard::simplex(3),
            standard::fermat(3),
        ] {
            assert_eq!(check_24(&p).unwrap(), big(24));
            assert_eq!(check_24(&p.dual().unwrap()).unwrap(), big(24));
        }
    }

    #[test]
    fn k3_ranks() {
        let cube = standard::cube(3);
        let r = k3_edge_rank(&cube).unwrap();
        assert_eq!((r.rank_f, r.rank_g, r.sum), (3, 17, 20));
        assert!(r.equality_condition && r.within_bound);
        let r = k3_edge_rank(&standard::cross_polytope(3)).unwrap();
        assert_eq!((r.rank_f, r.rank_g), (17, 3));

        // diamond × segment: the four vertical edges have d = d* = 2
        let p = LatticePolytope::from_i64_vertices(&[
            &[1, 0, 1],
            &[-1, 0, 1],
            &[0, 1, 1],
            &[0, -1, 1],
            &[1, 0, -1],
            &[-1, 0, -1],
            &[0, 1, -1],
            &[0, -1, -1],
        ])
        .unwrap();
        let r = k3_edge_rank(&p).unwrap();
        assert!(!r.equality_condition);
        assert_eq!(r.sum, 24);
        assert!(!r.within_bound);
    }

    #[test]
    fn fundamental_groups() {
        let d4 = standard::fermat(4);
        let simplex = standard::simplex(4);
        assert_eq!(fundamental_group(&simplex, GroupKind::Pair).unwrap(), vec![5, 5, 5]);
        assert!(fundamental_group(&d4, GroupKind::Pair).unwrap().is_empty());
        assert_eq!(fundamental_group(&d4, GroupKind::Polytope).unwrap(), vec![5, 5, 5]);
        assert_eq!(fundamental_group(&simplex, GroupKind::Polytope).unwrap(), vec![5, 5, 5]);
        for p in [d4, standard::cube(3), standard::p2xp2_fan(), standard::cube(2)] {
            let q = p.dual().unwrap();
            let a = group_order(&fundamental_group(&p, GroupKind::Pair).unwrap());
            let b = group_order(&fundamental_group(&q, GroupKind::Pair).unwrap());
            let c = group_order(&fundamental_group(&p, GroupKind::Polytope).unwrap());
            assert_eq!(a * b, c);
        }
    }

    #[test]
    fn facet_degree_sums() {
        let sq = standard::cube(2);
        let c = euler_open_part_zero(&sq).unwrap();
        assert_eq!(c.volume, big(8));
        assert_eq!(c.facet_degrees, vec![big(2); 4]);
        assert!(c.holds);

        let c = euler_open_part_zero(&standard::fermat(4)).unwrap();
        assert_eq!(c.volume, big(625));
        assert_eq!(c.facet_degrees, vec![big(125); 5]);
        assert!(c.holds);

        let c = euler_open_part_zero(&standard::segment()).unwrap();
        assert_eq!(c.volume, big(2));
        assert!(c.holds);

        // [−2, 2]²: pyramids of height 2 over edges of degree 4
        let c = euler_open_part_zero(&standard::cube(2).dilate(2).unwrap()).unwrap();
        assert!(c.holds);
        assert_eq!(c.volume, big(32));
        assert_eq!(c.facet_degrees.iter().sum::<BigInt>(), big(16));
    }
}
