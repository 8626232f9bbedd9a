//! One line per criterion: PASS or FAIL with the measured time.
//! Runs as a plain binary so the lines show without `--nocapture`.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use reflex_core::classify::{check_12, classify_polygons, enumerate_weight_systems, simplex_from_weights, WeightSystem};
use reflex_core::ehrhart::{check_reciprocity, delta_vector, ehrhart};
use reflex_core::jacobian::{generic_regular, jacobian_dims, Support};
use reflex_core::lattice::{FieldMode, RankMode};
use reflex_core::periods::{fit_recurrence, multinomial_diagonal, pi0, terms_needed};
use reflex_core::polytope::standard;
use reflex_core::reflexive::{check_24, euler_open_part_zero, fundamental_group, hodge_report, GroupKind};
use reflex_core::{LatticePolytope, LatticeVector, LaurentPolynomial};

type Outcome = Result<(), String>;
type Criterion<'a> = (&'static str, Box<dyn FnOnce() -> Outcome + 'a>);

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn big(x: i64) -> BigInt {
    BigInt::from(x)
}

fn bigs(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| big(x)).collect()
}

fn timed(limit: Duration, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    f()?;
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn hexagon() -> LatticePolytope {
    LatticePolytope::from_i64_vertices(&[&[1, 0], &[0, 1], &[-1, 1], &[-1, 0], &[0, -1], &[1, -1]]).unwrap()
}

/// Seeded random polytopes in dimensions 2 to 4: hulls of a few points in a
/// small box, half of them in `[−1, 1]ⁿ` where reflexive hulls are common.
fn random_corpus(count: usize) -> Vec<LatticePolytope> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut out = Vec::new();
    while out.len() < count {
        let dim = 2 + out.len() % 3;
        let radius = if out.len() % 2 == 0 { 1 } else { 2 };
        let extra = if radius == 2 && dim == 4 { 2 } else { 4 };
        let npts = rng.gen_range(dim + 1..=dim + 1 + extra);
        let pts: Vec<LatticeVector> = (0..npts)
            .map(|_| LatticeVector::from((0..dim).map(|_| rng.gen_range(-radius..=radius)).collect::<Vec<i64>>()))
            .collect();
        if let Ok(p) = LatticePolytope::from_vertices(&pts) {
            out.push(p);
        }
    }
    out
}

fn fixed_corpus() -> Vec<LatticePolytope> {
    vec![
        standard::segment(),
        standard::simplex(2),
        standard::cube(2),
        standard::cross_polytope(2),
        hexagon(),
        standard::fermat(2),
        standard::simplex(3),
        standard::cube(3),
        standard::cross_polytope(3),
        standard::fermat(3),
        standard::simplex(4),
        standard::p2xp2_fan(),
        standard::simplex(2).dilate(2).unwrap(),
        standard::cube(3).translate(&LatticeVector::from(vec![1, 0, 0])).unwrap(),
    ]
}

/// Whether some translate by an interior lattice point is reflexive.
fn reflexive_up_to_translation(p: &LatticePolytope) -> bool {
    p.interior_points().iter().any(|m| p.translate(&-m).unwrap().is_reflexive())
}

fn c1() -> Outcome {
    timed(Duration::from_secs(60), || {
        let c = classify_polygons().map_err(|e| e.to_string())?;
        ensure(c.classes.len() == 16, || format!("{} classes", c.classes.len()))?;
        for (i, k) in c.classes.iter().enumerate() {
            let dual = k.polytope().dual().map_err(|e| e.to_string())?;
            let j = c.find(&dual).ok_or_else(|| format!("dual of class {i} missing"))?;
            ensure(j == k.dual && c.classes[j].dual == i, || format!("duality broken at class {i}"))?;
            ensure(k.boundary + c.classes[j].boundary == 12, || format!("class {i}: k + k* ≠ 12"))?;
        }
        ensure(check_12(&c).holds, || "the 12-check failed".into())
    })
}

fn c2() -> Outcome {
    let bases = [standard::cube(3), standard::cross_polytope(3), standard::simplex(3)];
    for p in bases {
        let q = p.dual().map_err(|e| e.to_string())?;
        for x in [p.clone(), q] {
            timed(Duration::from_secs(1), || {
                let s = check_24(&x).map_err(|e| e.to_string())?;
                ensure(s == big(24), || format!("edge sum {s}"))
            })?;
        }
    }
    Ok(())
}

fn c3() -> Outcome {
    timed(Duration::from_secs(5), || {
        let d4 = standard::fermat(4);
        let delta = delta_vector(&d4).map_err(|e| e.to_string())?;
        ensure(delta.psi == bigs(&[1, 121, 381, 121, 1]), || format!("ψ = {:?}", delta.psi))?;
        ensure(delta.sum() == big(625) && d4.normalized_volume() == big(625), || "Σψ ≠ 625".into())?;
        let r = hodge_report(&d4).map_err(|e| e.to_string())?;
        let m = hodge_report(&d4.dual().map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure((r.h11.clone(), r.h_n21.clone(), r.euler.clone()) == (big(1), big(101), Some(big(-200))), || {
            format!("quintic side {} {} {:?}", r.h11, r.h_n21, r.euler)
        })?;
        ensure((m.h11.clone(), m.h_n21.clone(), m.euler.clone()) == (big(101), big(1), Some(big(200))), || {
            format!("mirror side {} {} {:?}", m.h11, m.h_n21, m.euler)
        })?;
        ensure(r.h11 == m.h_n21 && r.h_n21 == m.h11, || "mirror swap fails".into())
    })
}

fn c4() -> Outcome {
    timed(Duration::from_secs(5), || {
        let r = hodge_report(&standard::p2xp2_fan()).map_err(|e| e.to_string())?;
        ensure(r.h11 == big(83) && r.h_n21 == big(2), || format!("h11 {} h21 {}", r.h11, r.h_n21))
    })
}

fn c5() -> Outcome {
    let counts: Vec<usize> = (1..=3)
        .map(|n| enumerate_weight_systems(n).map(|w| w.len()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let mut four = 0;
    timed(Duration::from_secs(10), || {
        four = enumerate_weight_systems(4).map_err(|e| e.to_string())?.len();
        Ok(())
    })?;
    ensure(counts == [1, 3, 14] && four == 147, || format!("counts {counts:?} {four}"))?;
    let w = WeightSystem::from_d_values(&[2, 3, 7, 42]).map_err(|e| e.to_string())?;
    let p = simplex_from_weights(&w).map_err(|e| e.to_string())?;
    let q = p.dual().map_err(|e| e.to_string())?;
    ensure(p.canonical_form() == q.canonical_form(), || "not self-dual".into())?;
    for x in [&p, &q] {
        for kind in [GroupKind::Pair, GroupKind::Polytope] {
            let g = fundamental_group(x, kind).map_err(|e| e.to_string())?;
            ensure(g.is_empty(), || format!("{kind:?} group {g:?}"))?;
        }
    }
    Ok(())
}

fn c6() -> Outcome {
    let mirror = standard::simplex(4);
    let pair = fundamental_group(&mirror, GroupKind::Pair).map_err(|e| e.to_string())?;
    let poly = fundamental_group(&mirror, GroupKind::Polytope).map_err(|e| e.to_string())?;
    ensure(pair == [5, 5, 5] && poly == [5, 5, 5], || format!("{pair:?} {poly:?}"))
}

fn c7(corpus: &[LatticePolytope]) -> Outcome {
    timed(Duration::from_secs(120), || {
        ensure(corpus.len() >= 50, || "corpus too small".into())?;
        let (mut reflexive, mut other) = (0, 0);
        for (i, p) in corpus.iter().enumerate() {
            let n = p.dim() as u64;
            let rec = check_reciprocity(p, 3).map_err(|e| e.to_string())?;
            ensure(rec.passed(), || format!("#{i}: reciprocity"))?;
            let lambda = ehrhart(p).evaluate(&BigInt::from(n + 1));
            let counted = BigInt::from(p.count_in_dilation(n + 1));
            ensure(lambda.is_integer() && lambda.to_integer() == counted, || format!("#{i}: Λ(n+1)"))?;
            let delta = delta_vector(p).map_err(|e| e.to_string())?;
            ensure(delta.psi.iter().all(|x| !x.is_negative()), || format!("#{i}: ψ = {:?}", delta.psi))?;
            let refl = reflexive_up_to_translation(p);
            ensure(delta.is_symmetric() == refl, || format!("#{i}: symmetric ψ but reflexive = {refl}"))?;
            if refl {
                reflexive += 1;
            } else {
                other += 1;
            }
        }
        ensure(reflexive >= 5 && other >= 5, || format!("{reflexive} reflexive, {other} not"))
    })
}

/// `X + X⁻¹ − λ`.
fn segment_family(lambda: i64) -> LaurentPolynomial {
    LaurentPolynomial::from_i64_terms(1, &[(1, &[1]), (1, &[-1]), (-lambda, &[0])]).unwrap()
}

fn c8() -> Outcome {
    timed(Duration::from_secs(30), || {
        let cases = [
            (standard::fermat(2), Support::Full, 11),
            (standard::fermat(3), Support::VertexLattice, 12),
            (standard::simplex(3), Support::Full, 13),
        ];
        for (p, support, seed) in cases {
            let n = p.dim();
            let (_, ring, _) = generic_regular(&p, support, seed, FieldMode::Exact, 4).map_err(|e| e.to_string())?;
            let r = ring.report();
            let psi = delta_vector(&p).map_err(|e| e.to_string())?.psi;
            ensure(r.regular, || format!("n = {n}: no regular draw"))?;
            for k in 0..=n + 1 {
                let want = psi.get(k).cloned().unwrap_or_else(BigInt::zero);
                ensure(BigInt::from(r.dims_r[k]) == want, || format!("n = {n}: dim R^{k} = {}", r.dims_r[k]))?;
            }
            let total: usize = r.dims_r.iter().sum();
            ensure(BigInt::from(total) == p.normalized_volume(), || format!("n = {n}: Σ = {total}"))?;
            let d = ring.dualizing_dims().map_err(|e| e.to_string())?;
            ensure(d.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>() == r.phi, || format!("n = {n}: D = {d:?}"))?;
            let h = &r.dims_h;
            ensure((0..=n + 1).all(|i| h[i] == h[n + 1 - i]), || format!("n = {n}: H = {h:?}"))?;
        }
        let segment = standard::segment();
        for lambda in [2, -2] {
            let r = jacobian_dims(&segment, &segment_family(lambda), FieldMode::Exact).map_err(|e| e.to_string())?;
            ensure(!r.regular, || format!("λ = {lambda} reported regular"))?;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let mut tried = 0;
        while tried < 5 {
            let lambda: i64 = rng.gen_range(-50..=50);
            if lambda.abs() == 2 {
                continue;
            }
            tried += 1;
            let r = jacobian_dims(&segment, &segment_family(lambda), FieldMode::Exact).map_err(|e| e.to_string())?;
            ensure(r.regular, || format!("λ = {lambda} reported singular"))?;
        }
        Ok(())
    })?;
    timed(Duration::from_secs(120), || {
        let p = standard::fermat(4);
        let mode = FieldMode::from(RankMode::modular(0));
        let (_, ring, _) = generic_regular(&p, Support::VertexLattice, 0, mode, 4).map_err(|e| e.to_string())?;
        let total: usize = ring.report().dims_r.iter().sum();
        ensure(total == 625, || format!("quintic Σ dim R = {total}"))
    })
}

/// Closed walks of length `i` through the boundary points, counted one by one.
fn walk_count(steps: &[Vec<i64>], i: usize, pos: &mut Vec<i64>) -> u64 {
    if i == 0 {
        return pos.iter().all(|&c| c == 0) as u64;
    }
    let mut total = 0;
    for s in steps {
        pos.iter_mut().zip(s).for_each(|(a, b)| *a += b);
        total += walk_count(steps, i - 1, pos);
        pos.iter_mut().zip(s).for_each(|(a, b)| *a -= b);
    }
    total
}

fn c9() -> Outcome {
    timed(Duration::from_secs(60), || {
        let mirror = standard::simplex(4);
        let held_out = 10;
        let fit_len = terms_needed(1, 4);
        let s = pi0(&mirror, 5 * (fit_len + held_out - 1)).map_err(|e| e.to_string())?;
        ensure(s.compression_step == 5, || format!("step {}", s.compression_step))?;
        let c = s.compressed();
        for (k, b) in c.iter().enumerate().take(7) {
            ensure(*b == multinomial_diagonal(5, k as u64), || format!("B_{}", 5 * k))?;
        }
        let r = fit_recurrence(&c[..fit_len], 1, 4)
            .map_err(|e| e.to_string())?
            .ok_or("no recurrence found")?;
        // k⁴ c_k − 5(5k−1)(5k−2)(5k−3)(5k−4) c_{k−1}
        let expected = vec![bigs(&[0, 0, 0, 0, 1]), bigs(&[-120, 1250, -4375, 6250, -3125])];
        ensure((r.order, r.degree) == (1, 4) && r.polys == expected, || format!("{:?}", r.polys))?;
        ensure(r.annihilates(&c, fit_len..fit_len + held_out), || "held-out terms fail".into())?;

        let walkers = [
            standard::segment(),
            standard::simplex(2),
            standard::cube(2),
            standard::cross_polytope(2),
            hexagon(),
            standard::fermat(2),
            standard::simplex(3),
            standard::cross_polytope(3),
            standard::simplex(4),
            standard::p2xp2_fan(),
        ];
        for (j, p) in walkers.iter().enumerate() {
            let s = pi0(p, 8).map_err(|e| e.to_string())?;
            let steps: Vec<Vec<i64>> = p
                .boundary_points()
                .iter()
                .map(|m| m.to_i64().expect("small coordinates"))
                .collect();
            for i in 0..=8 {
                let brute = walk_count(&steps, i, &mut vec![0; p.dim()]);
                ensure(s.coefficients[i] == BigInt::from(brute), || format!("polytope {j}, B_{i}"))?;
            }
        }
        Ok(())
    })
}

fn c10(corpus: &[LatticePolytope]) -> Outcome {
    let (mut reflexive, mut interior) = (0, 0);
    for (i, p) in corpus.iter().enumerate() {
        if p.is_reflexive() {
            reflexive += 1;
            let (l, _) = p.count_points();
            let inner = p.count_interior_in_dilation(2);
            ensure(inner == l, || format!("#{i}: l*(2Δ) = {inner}, l(Δ) = {l}"))?;
        }
        if p.origin_is_interior() {
            interior += 1;
            let check = euler_open_part_zero(p).map_err(|e| e.to_string())?;
            ensure(check.holds, || format!("#{i}: facet degrees"))?;
            if p.is_reflexive() {
                let sum: BigInt = check.facet_degrees.iter().sum();
                ensure(sum == check.volume, || format!("#{i}: Σ d(Θ) = {sum}"))?;
            }
        }
    }
    ensure(reflexive >= 10 && interior > reflexive, || format!("{reflexive} reflexive, {interior} with interior origin"))
}

fn main() {
    let corpus = random_corpus(60);
    let mut everything = fixed_corpus();
    everything.extend(corpus.iter().cloned());

    let criteria: Vec<Criterion> = vec![
        ("1 reflexive polygons", Box::new(c1)),
        ("2 edge sum 24", Box::new(c2)),
        ("3 quintic numbers", Box::new(c3)),
        ("4 P2 x P2", Box::new(c4)),
        ("5 weight systems", Box::new(c5)),
        ("6 mirror group", Box::new(c6)),
        ("7 Ehrhart corpus", Box::new(|| c7(&corpus))),
        ("8 Jacobian rings", Box::new(c8)),
        ("9 period series", Box::new(c9)),
        ("10 reflexive identities", Box::new(|| c10(&everything))),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panic: {msg}"))
        });
        let t = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS  criterion {name:<24} {t:>8.2} s"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name:<24} {t:>8.2} s  {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria pass");
}
