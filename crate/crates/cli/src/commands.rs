use std::path::Path;

use serde_json::{json, Value};

use reflex_core::classify::{
    check_12, classify_polygons_in_box, enumerate_weight_systems, intermediate_lattices, simplex_from_weights,
    simplex_matrix_check, WeightSystem,
};
use reflex_core::ehrhart::{check_reciprocity, delta_vector, ehrhart as ehrhart_polynomial};
use reflex_core::jacobian::{generic_regular, JacobianRing, Support};
use reflex_core::laurent::parse_laurent;
use reflex_core::lattice::{FieldMode, RankMode};
use reflex_core::periods::{fit_recurrence, hasse_constant_term, pi0};
use reflex_core::polytope::{format_polytope, parse_polytope};
use reflex_core::reflexive::{
    check_24, euler_cy3, euler_open_part_zero, fundamental_group, group_order, hodge_report, is_reflexive,
    k3_edge_rank, GroupKind,
};
use reflex_core::{LaurentPolynomial, LatticePolytope};

use crate::render::emit;
use crate::{Failure, Format, Settings};

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {}: {e}", path.display())))
}

fn read_polytope(path: &Path) -> Result<LatticePolytope, Failure> {
    Ok(parse_polytope(&read(path)?)?)
}

fn read_laurent(path: &Path) -> Result<LaurentPolynomial, Failure> {
    Ok(parse_laurent(&read(path)?)?)
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

/// Adds the command name and input path in front of a report object.
fn tagged(command: &str, input: Option<&Path>, body: Value) -> Value {
    let mut out = json!({ "command": command });
    if let Some(p) = input {
        out["input"] = json!(p.display().to_string());
    }
    if let Value::Object(fields) = body {
        for (k, v) in fields {
            out[k] = v;
        }
    }
    out
}

fn strings<T: ToString>(xs: &[T]) -> Vec<String> {
    xs.iter().map(ToString::to_string).collect()
}

fn mode_fields(mode: RankMode) -> Value {
    match mode {
        RankMode::Exact => json!({ "mode": "exact", "prime": null }),
        RankMode::Modular { prime } => json!({ "mode": "modular", "prime": prime }),
    }
}

pub fn dual(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let d = p.dual()?;
    if s.format == Format::Text {
        return Ok(format_polytope(&d));
    }
    let body = json!({ "dim": d.dim(), "vertices": to_value(&d.vertices()) });
    Ok(emit(s.format, &tagged("dual", Some(path), body)))
}

pub fn reflexive(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let info = is_reflexive(&p)?;
    let delta = match info.delta.clone() {
        Some(d) => d,
        None => delta_vector(&p)?,
    };
    let body = json!({
        "reflexive": info.is_reflexive,
        "origin_interior": info.origin_interior,
        "reason": info.reason,
        "offsets": strings(&info.offsets),
        "pair_group": info.pair_group,
        "vertex_index": info.vertex_index.to_string(),
        "psi": strings(&delta.psi),
        "phi": strings(&delta.phi),
    });
    Ok(emit(s.format, &tagged("reflexive", Some(path), body)))
}

pub fn ehrhart(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let lambda = ehrhart_polynomial(&p);
    let delta = delta_vector(&p)?;
    let reciprocity = check_reciprocity(&p, 3)?;
    let (points, interior) = p.count_points();
    let body = json!({
        "dim": p.dim(),
        "points": points,
        "interior_points": interior,
        "volume": p.normalized_volume().to_string(),
        "ehrhart": strings(lambda.coefficients()),
        "psi": strings(&delta.psi),
        "phi": strings(&delta.phi),
        "symmetric": delta.is_symmetric(),
        "reciprocity": to_value(&reciprocity.rows),
        "reciprocity_holds": reciprocity.passed(),
    });
    Ok(emit(s.format, &tagged("ehrhart", Some(path), body)))
}

pub fn faces(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let mut faces = Vec::new();
    for d in 0..p.dim() {
        for face in p.faces(d) {
            let (points, interior) = p.face_points(face);
            let degree = if d == 0 { None } else { Some(p.degree(face)?.to_string()) };
            faces.push(json!({
                "dim": d,
                "vertices": face.vertex_indices(),
                "points": points,
                "interior_points": interior,
                "degree": degree,
            }));
        }
    }
    let body = json!({
        "dim": p.dim(),
        "vertices": to_value(&p.vertices()),
        "f_vector": p.face_lattice().counts(),
        "faces": faces,
    });
    Ok(emit(s.format, &tagged("faces", Some(path), body)))
}

pub fn hodge(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let report = hodge_report(&p)?;
    Ok(emit(s.format, &tagged("hodge", Some(path), to_value(&report))))
}

pub fn euler(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let euler = if p.dim() == 4 { Some(euler_cy3(&p)?.to_string()) } else { None };
    let facets = if p.origin_is_interior() || euler.is_none() {
        Some(euler_open_part_zero(&p)?)
    } else {
        None
    };
    let body = json!({ "euler": euler, "facet_degrees": to_value(&facets) });
    Ok(emit(s.format, &tagged("euler", Some(path), body)))
}

pub fn k3(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let body = json!({
        "edge_sum": check_24(&p)?.to_string(),
        "ranks": to_value(&k3_edge_rank(&p)?),
    });
    Ok(emit(s.format, &tagged("k3", Some(path), body)))
}

pub fn fundgroup(s: &Settings, path: &Path) -> Outcome {
    let p = read_polytope(path)?;
    let pair = fundamental_group(&p, GroupKind::Pair)?;
    let dual_pair = fundamental_group(&p.dual()?, GroupKind::Pair)?;
    let whole = fundamental_group(&p, GroupKind::Polytope)?;
    let body = json!({
        "pair": pair,
        "pair_order": group_order(&pair),
        "dual_pair": dual_pair,
        "dual_pair_order": group_order(&dual_pair),
        "polytope": whole,
        "polytope_order": group_order(&whole),
    });
    Ok(emit(s.format, &tagged("fundgroup", Some(path), body)))
}

pub fn classify2d(s: &Settings, search_box: i64) -> Outcome {
    let catalog = classify_polygons_in_box(search_box)?;
    let twelve = check_12(&catalog);
    if !twelve.holds {
        return Err(Failure::Internal("boundary counts of a class and its dual do not sum to 12".into()));
    }
    match s.format {
        Format::Json => Ok(catalog.to_json_lines()),
        Format::Text => Ok(catalog
            .classes
            .iter()
            .map(|c| {
                format!(
                    "P{:<3} boundary {}  dual P{:<3} dual boundary {}  vertices {:?}\n",
                    c.label,
                    c.boundary,
                    catalog.classes[c.dual].label,
                    catalog.classes[c.dual].boundary,
                    c.vertices
                )
            })
            .collect()),
    }
}

pub fn weights(s: &Settings, n: usize) -> Outcome {
    let systems = enumerate_weight_systems(n)?;
    let body = json!({ "n": n, "count": systems.len(), "systems": to_value(&systems) });
    Ok(emit(s.format, &tagged("weights", None, body)))
}

pub fn simplex(s: &Settings, weights: &[u64]) -> Outcome {
    let w = WeightSystem::from_weights(weights)?;
    let p = simplex_from_weights(&w)?;
    let dual = p.dual()?;
    let matrix = simplex_matrix_check(&p)?;
    let lattices = if w.n <= 3 {
        let found = intermediate_lattices(&w)?;
        let classes: Vec<Value> = found
            .classes
            .iter()
            .map(|c| json!({ "index": c.index, "orbit": c.orbit, "vertices": to_value(&c.polytope.vertices()) }))
            .collect();
        json!({ "group": found.group, "subgroups": found.subgroups, "classes": classes })
    } else {
        Value::Null
    };
    let body = json!({
        "system": to_value(&w),
        "dim": p.dim(),
        "vertices": to_value(&p.vertices()),
        "reflexive": p.is_reflexive(),
        "self_dual": p.canonical_form() == dual.canonical_form(),
        "pair_group": fundamental_group(&p, GroupKind::Pair)?,
        "dual_pair_group": fundamental_group(&dual, GroupKind::Pair)?,
        "matrix": to_value(&matrix),
        "intermediate_lattices": lattices,
    });
    Ok(emit(s.format, &tagged("simplex", None, body)))
}

pub fn jacobian(
    s: &Settings,
    poly: &Path,
    laurent: Option<&Path>,
    support: Support,
    attempts: u32,
    pairing: bool,
) -> Outcome {
    let p = read_polytope(poly)?;
    let mode: FieldMode = s.mode.into();
    let (ring, terms, attempt) = match laurent {
        Some(path) => {
            let f = read_laurent(path)?;
            (JacobianRing::new(&p, &f, mode)?, f.len(), None)
        }
        None => {
            let (f, ring, attempt) = generic_regular(&p, support, s.seed, mode, attempts)?;
            (ring, f.len(), Some(attempt))
        }
    };
    let report = ring.report();
    let mut body = to_value(&report);
    body["seed"] = json!(s.seed);
    body["terms"] = json!(terms);
    body["attempt"] = json!(attempt);
    body["laurent"] = json!(laurent.map(|l| l.display().to_string()));
    if ring.regular {
        body["filtration"] = json!(ring.filtration()?);
        // fails as an internal error when D_f disagrees with φ
        ring.dualizing_dims()?;
        let symmetric = report
            .dims_h
            .iter()
            .zip(report.dims_h.iter().rev())
            .all(|(a, b)| a == b);
        body["h_symmetric"] = json!(symmetric);
        if pairing {
            body["pairing"] = to_value(&ring.pairing_check()?);
        }
    }
    Ok(emit(s.format, &tagged("jacobian", Some(poly), body)))
}

pub fn regularity(s: &Settings, poly: &Path, laurent: &Path) -> Outcome {
    let p = read_polytope(poly)?;
    let f = read_laurent(laurent)?;
    let ring = JacobianRing::new(&p, &f, s.mode.into())?;
    let report = ring.report();
    let mut body = json!({
        "laurent": laurent.display().to_string(),
        "regular": report.regular,
        "dims_r": report.dims_r,
        "psi": strings(&report.psi),
    });
    if let (Value::Object(extra), Value::Object(out)) = (mode_fields(s.mode), &mut body) {
        out.extend(extra);
    }
    Ok(emit(s.format, &tagged("regularity", Some(poly), body)))
}

pub fn periods(s: &Settings, path: &Path, kmax: usize) -> Outcome {
    let p = read_polytope(path)?;
    let series = pi0(&p, kmax)?;
    let mut body = to_value(&series);
    body["recurrence"] = Value::Null;
    Ok(emit(s.format, &tagged("periods", Some(path), body)))
}

pub fn recurrence(
    s: &Settings,
    path: &Path,
    kmax: usize,
    max_order: usize,
    max_degree: usize,
    verify: usize,
) -> Outcome {
    let p = read_polytope(path)?;
    let series = pi0(&p, kmax)?;
    let compressed = series.compressed();
    let fit = fit_recurrence(&compressed, max_order, max_degree)?;
    let verified = match (&fit, verify) {
        (Some(r), v) if v > 0 => {
            let longer = pi0(&p, kmax + v * series.compression_step)?.compressed();
            Some(r.annihilates(&longer, compressed.len()..longer.len()))
        }
        _ => None,
    };
    let mut body = to_value(&series);
    body["compressed"] = json!(strings(&compressed));
    body["recurrence"] = to_value(&fit);
    body["verified_terms"] = json!(if verified.is_some() { verify } else { 0 });
    body["verified"] = json!(verified);
    Ok(emit(s.format, &tagged("recurrence", Some(path), body)))
}

pub fn hasse(s: &Settings, path: &Path, prime: u64) -> Outcome {
    let f = read_laurent(path)?;
    let report = hasse_constant_term(&f, prime)?;
    Ok(emit(s.format, &tagged("hasse", Some(path), to_value(&report))))
}
