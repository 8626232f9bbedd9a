use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use reflex_core::polytope::parse_polytope;
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn reflex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_reflex"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json_of(args: &[&str]) -> Value {
    let o = reflex(args);
    assert!(o.status.success(), "{args:?}: {}", stderr(&o));
    serde_json::from_str(&stdout(&o)).unwrap()
}

fn path(name: &str) -> String {
    data(name).display().to_string()
}

#[test]
fn quintic_reflexive_and_hodge() {
    let r = json_of(&["reflexive", &path("quintic.poly")]);
    assert_eq!(r["reflexive"], true);
    assert_eq!(r["psi"], serde_json::json!(["1", "121", "381", "121", "1"]));

    let h = json_of(&["hodge", &path("quintic.poly")]);
    assert_eq!((h["h11"].as_str(), h["h_n21"].as_str(), h["euler"].as_str()), (Some("1"), Some("101"), Some("-200")));
    let m = json_of(&["hodge", &path("quintic_mirror.poly")]);
    assert_eq!((m["h11"].as_str(), m["h_n21"].as_str(), m["euler"].as_str()), (Some("101"), Some("1"), Some("200")));
}

#[test]
fn sixteen_records() {
    let o = reflex(&["classify2d"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let records: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 16);
    for (i, r) in records.iter().enumerate() {
        let dual = r["dual"].as_u64().unwrap() as usize;
        assert_eq!(records[dual]["dual"].as_u64().unwrap() as usize, i);
        assert_eq!(r["boundary"].as_u64().unwrap() + records[dual]["boundary"].as_u64().unwrap(), 12);
    }
}

#[test]
fn precondition_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.poly");
    std::fs::write(&empty, "").unwrap();
    let o = reflex(&["reflexive", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 1"), "{}", stderr(&o));

    let bad = dir.path().join("bad.poly");
    std::fs::write(&bad, "2 3\n1 0\n0 x\n-1 -1\n").unwrap();
    let o = reflex(&["faces", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let o = reflex(&["dual", &path("square2.poly")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("facet offset 2 ≠ 1: not reflexive"), "{}", stderr(&o));
    assert!(stdout(&o).is_empty());

    let o = reflex(&["hodge", &path("cube3.poly")]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(reflex(&["hasse", &path("fermat_cubic.laurent"), "--prime", "9"]).status.code(), Some(2));
    assert_eq!(reflex(&["reflexive", "/nonexistent/x.poly"]).status.code(), Some(2));
    assert_eq!(reflex(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn dual_twice_is_the_identity() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["quintic.poly", "p2xp2.poly", "hexagon.poly", "simplex3.poly"] {
        let once = reflex(&["--format", "text", "dual", &path(name)]);
        assert!(once.status.success());
        let file = dir.path().join(name);
        std::fs::write(&file, stdout(&once)).unwrap();
        let twice = reflex(&["--format", "text", "dual", file.to_str().unwrap()]);
        let original = parse_polytope(&std::fs::read_to_string(data(name)).unwrap()).unwrap();
        let back = parse_polytope(&stdout(&twice)).unwrap();
        assert_eq!(back.canonical_form(), original.canonical_form(), "{name}");
    }
}

#[test]
fn batch_matches_single_runs() {
    let dir = tempfile::tempdir().unwrap();
    let names = ["cube3.poly", "octahedron.poly", "simplex3.poly", "square2.poly"];
    for name in names {
        std::fs::copy(data(name), dir.path().join(name)).unwrap();
    }
    std::fs::write(dir.path().join("notes.txt"), "ignored").unwrap();
    let batch = reflex(&["fundgroup", dir.path().to_str().unwrap()]);
    // square2 is not reflexive
    assert_eq!(batch.status.code(), Some(2));
    assert!(stderr(&batch).contains("square2.poly"));
    let mut expected = String::new();
    for name in names {
        let single = reflex(&["fundgroup", dir.path().join(name).to_str().unwrap()]);
        expected.push_str(&stdout(&single));
    }
    assert_eq!(stdout(&batch), expected);
    assert_eq!(stdout(&batch).lines().count(), 3);
}

#[test]
fn runs_are_replayable() {
    let args = ["--seed", "7", "jacobian", &path("quartic.poly")];
    let a = reflex(&args);
    let b = reflex(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["mode"], "modular");
    assert!(v["prime"].as_u64().unwrap() > 1 << 60);
    assert_eq!(v["dims_r"], serde_json::json!([1, 31, 31, 1, 0]));

    let threads = Command::new(env!("CARGO_BIN_EXE_reflex"))
        .args(args)
        .env("REFLEX_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(threads.stdout, a.stdout);
}

#[test]
fn quintic_jacobian_modular() {
    let v = json_of(&["jacobian", &path("quintic.poly")]);
    assert_eq!(v["regular"], true);
    let total: u64 = v["dims_r"].as_array().unwrap().iter().map(|x| x.as_u64().unwrap()).sum();
    assert_eq!(total, 625);
    assert_eq!(v["dims_h"], serde_json::json!([0, 1, 101, 101, 1, 0]));
    assert_eq!(v["h_symmetric"], true);
}

#[test]
fn regularity_and_pairing() {
    let yes = json_of(&["--exact", "regularity", &path("segment.poly"), &path("segment_regular.laurent")]);
    assert_eq!((yes["regular"].clone(), yes["mode"].clone()), (Value::Bool(true), Value::from("exact")));
    let no = json_of(&["regularity", &path("segment.poly"), &path("segment_singular.laurent")]);
    assert_eq!(no["regular"], false);

    let v = json_of(&["--exact", "jacobian", &path("cubic.poly"), &path("cubic_regular.laurent"), "--pairing"]);
    assert_eq!(v["pairing"]["passed"], true);
    assert_eq!(v["dims_d"], v["phi"].as_array().unwrap().iter().map(|x| x.as_str().unwrap().parse::<u64>().unwrap()).collect::<Vec<_>>().into_iter().collect::<Value>());
    let v = json_of(&["--exact", "jacobian", &path("cubic.poly"), &path("cubic_singular.laurent")]);
    assert_eq!(v["regular"], false);
    assert!(v.get("filtration").is_none());
}

#[test]
fn series_and_recurrences() {
    let v = json_of(&["periods", &path("segment.poly"), "--kmax", "8"]);
    assert_eq!(v["coefficients"], serde_json::json!(["1", "0", "2", "0", "6", "0", "20", "0", "70"]));
    assert_eq!(v["compression_step"], 2);

    let v = json_of(&["recurrence", &path("segment.poly"), "--kmax", "60"]);
    assert_eq!(v["recurrence"]["order"], 1);
    assert_eq!(v["recurrence"]["degree"], 1);
    assert_eq!(v["verified"], true);

    let o = reflex(&["recurrence", &path("segment.poly"), "--kmax", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("not enough coefficients"));

    let v = json_of(&["hasse", &path("fermat_cubic.laurent"), "--prime", "7"]);
    assert_eq!((v["constant_term"].as_str(), v["residue"].as_u64(), v["vanishes"].as_bool()), (Some("90"), Some(6), Some(false)));
}

#[test]
fn weights_and_simplices() {
    let v = json_of(&["weights", "3"]);
    assert_eq!(v["count"], 14);
    let v = json_of(&["simplex", "--weights", "21,14,6,1"]);
    assert_eq!(v["reflexive"], true);
    assert_eq!(v["self_dual"], true);
    assert_eq!(v["pair_group"], serde_json::json!([]));
    assert_eq!(v["matrix"]["holds"], true);
    assert_eq!(reflex(&["simplex", "--weights", "1,1,3"]).status.code(), Some(2));
}

#[test]
fn other_polytope_reports() {
    let k3 = json_of(&["k3", &path("octahedron.poly")]);
    assert_eq!(k3["edge_sum"], "24");
    let f = json_of(&["faces", &path("cube3.poly")]);
    assert_eq!(f["f_vector"], serde_json::json!([8, 12, 6, 1]));
    let e = json_of(&["ehrhart", &path("square2.poly")]);
    assert_eq!(e["reciprocity_holds"], true);
    assert_eq!(e["symmetric"], false);
    let e = json_of(&["euler", &path("quintic.poly")]);
    assert_eq!(e["euler"], "-200");
    assert_eq!(e["facet_degrees"]["holds"], true);

    let o = reflex(&["--format", "text", "hodge", &path("quintic.poly")]);
    assert!(stdout(&o).lines().any(|l| l == "h_n21: 101"));
}
