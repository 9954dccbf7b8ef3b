use std::path::PathBuf;

use quiver_moduli::cli::run;
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name).display().to_string()
}

fn invoke(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let mut full = vec!["quiver-moduli"];
    full.extend_from_slice(args);
    let code = run(full, &mut out);
    (code, String::from_utf8(out).unwrap())
}

fn records(args: &[&str]) -> (i32, Vec<Value>) {
    let mut a = args.to_vec();
    a.extend_from_slice(&["--format", "json-lines"]);
    let (code, out) = invoke(&a);
    (code, out.lines().map(|l| serde_json::from_str(l).unwrap()).collect())
}

fn find<'a>(recs: &'a [Value], kind: &str) -> &'a Value {
    recs.iter().find(|r| r["kind"] == kind).unwrap_or_else(|| panic!("no {kind} record"))
}

#[test]
fn forms_kronecker_isotropic() {
    let alg = fixture("k2.alg");
    let (code, recs) = records(&["forms", "--algebra", &alg, "--d", "1,1"]);
    assert_eq!(code, 0);
    let t = find(&recs, "tits_form");
    assert_eq!(t["result"]["q"], 0);
    assert_eq!(t["result"]["class"], "isotropic");
}

#[test]
fn stability_kronecker_stable() {
    let alg = fixture("k2.alg");
    let rep = fixture("k2_11.rep");
    let (code, recs) = records(&["stability", "--algebra", &alg, "--rep", &rep, "--theta", "1,-1"]);
    assert_eq!(code, 0);
    assert_eq!(find(&recs, "king_test")["result"]["status"], "stable");
    let zero = fixture("k2_zero.rep");
    let (_, recs) = records(&["stability", "--algebra", &alg, "--rep", &zero, "--theta", "1,-1"]);
    assert_eq!(find(&recs, "king_test")["result"]["status"], "unstable");
}

#[test]
fn si_kronecker_series() {
    let alg = fixture("k2.alg");
    let (code, recs) = records(&["si", "--algebra", &alg, "--d", "2,2", "--theta", "1,-1", "--mmax", "3"]);
    assert_eq!(code, 0);
    let dims: Vec<u64> =
        find(&recs, "hilbert_series")["result"]["dims"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
    assert_eq!(dims, vec![1, 3, 6, 10]);
}

#[test]
fn every_record_carries_provenance() {
    let alg = fixture("a2.alg");
    let p1 = fixture("a2_p1.rep");
    let s1 = fixture("a2_s1.rep");
    let (code, recs) = records(&[
        "tilt",
        "--algebra",
        &alg,
        "--summand",
        &p1,
        "--summand",
        &s1,
        "--theta",
        "1,-1",
        "--transport",
        &p1,
        "--seed",
        "11",
    ]);
    assert_eq!(code, 0);
    assert_eq!(recs.len(), 3);
    for r in &recs {
        assert_eq!(r["tool"], "quiver-moduli");
        assert!(r["version"].is_string());
        assert_eq!(r["seed"], 11);
        assert!(r["caps"].is_object());
        assert!(r["caveats"].is_array());
    }
    assert_eq!(find(&recs, "well_positioned")["result"]["report"]["verdict"], "case1");
    let t = find(&recs, "transport");
    assert_eq!(t["result"]["target_status"], "stable");
    assert_eq!(t["result"]["theta_prime"], serde_json::json!([0, 1]));
}

#[test]
fn identical_runs_are_byte_identical() {
    let alg = fixture("k3.alg");
    let args = ["decomp", "--algebra", alg.as_str(), "--d", "2,3", "--seed", "99", "--samples", "3"];
    let (c1, a) = invoke(&args);
    let (c2, b) = invoke(&args);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(a, b);
    let alg = fixture("k2.alg");
    let args = ["stability", "--algebra", alg.as_str(), "--theta", "1,-1", "--d", "2,2", "--format", "json-lines"];
    assert_eq!(invoke(&args).1, invoke(&args).1);
}

#[test]
fn errors_exit_one_with_record() {
    let (code, recs) = records(&["forms", "--algebra", "/nonexistent/x.alg"]);
    assert_eq!(code, 1);
    assert_eq!(recs[0]["kind"], "error");
    assert_eq!(recs[0]["error"], "io");
    let alg = fixture("k2.alg");
    let (code, recs) = records(&["si", "--algebra", &alg, "--d", "1,1", "--theta", "1,-1", "--degree-cap", "0"]);
    assert_eq!(code, 1);
    assert_eq!(recs[0]["error"], "invalid_input");
    let (code, _) = invoke(&["bogus"]);
    assert_eq!(code, 1);
}

#[test]
fn undecided_exits_two() {
    // θ = (1,1) vanishes on no nonzero dimension vector, so no semistable module is found
    let alg = fixture("a2.alg");
    let p1 = fixture("a2_p1.rep");
    let s1 = fixture("a2_s1.rep");
    let (code, recs) =
        records(&["tilt", "--algebra", &alg, "--summand", &p1, "--summand", &s1, "--theta", "1,1", "--bound", "2"]);
    assert_eq!(code, 2);
    assert_eq!(find(&recs, "well_positioned")["result"]["report"]["verdict"], "undecided");
    let (code, recs) = records(&[
        "tilt",
        "--algebra",
        &alg,
        "--summand",
        &p1,
        "--summand",
        &s1,
        "--theta",
        "1,1",
        "--bound",
        "2",
        "--transport",
        &p1,
    ]);
    assert_eq!(code, 1);
    assert_eq!(recs.last().unwrap()["error"], "not_applicable");
}

#[test]
fn text_output_is_readable() {
    let alg = fixture("a3_ab.alg");
    let (code, out) = invoke(&["forms", "--algebra", &alg, "--d", "1,1,1"]);
    assert_eq!(code, 0);
    assert!(out.contains("== tits_form =="));
    assert!(out.contains("result.q: 2"));
}
