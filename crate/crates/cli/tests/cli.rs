use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn plcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plcover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const BOUNDARY_TETRAHEDRON: &str =
    r#"{"dimension": 2, "facets": [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]}"#;

#[test]
fn verify_boundary_tetrahedron_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tetra.json");
    std::fs::write(&path, BOUNDARY_TETRAHEDRON).unwrap();
    let out = plcover(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["summary"], "closed pseudomanifold, normal");
    assert_eq!(r["tool"], "plcover");
    assert_eq!(r["version"], env!("CARGO_PKG_VERSION"));
    let digest: String = Sha256::digest(BOUNDARY_TETRAHEDRON.as_bytes())
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect();
    assert_eq!(r["inputs"][0]["sha256"], digest);
    assert_eq!(r["parameters"]["mode"], "auto");
}

#[test]
fn rp2_abelianization_is_z2() {
    let out = plcover(&["pi1", "corpus:rp2_6", "--abelianization"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["abelianization"]["torsion"], serde_json::json!([2]));
    assert_eq!(r["result"]["abelianization"]["free_rank"], 0);
}

#[test]
fn octahedron_degree_three_completion() {
    let out = plcover(&["branch-complete", "corpus:octahedron", "--vertices", "0,5", "--degree", "3"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["result"]["riemann_hurwitz_residual"], 0);
    assert_eq!(r["result"]["report"]["valid"], true);

    // the dump's total space is itself a closed pseudomanifold
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("total.json");
    std::fs::write(&path, r["result"]["dump"]["source"].to_string()).unwrap();
    let v = plcover(&["verify", path.to_str().unwrap(), "--mode", "closed"]);
    assert_eq!(code(&v), 0, "{}", String::from_utf8_lossy(&v.stderr));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&plcover(&["verify", "corpus:torus_7", "--bogus"])), 1);
    assert_eq!(code(&plcover(&["verify", "corpus:no_such_complex"])), 1);
    assert_eq!(code(&plcover(&["frobnicate"])), 1);
    let failed = plcover(&["verify", "corpus:solid_simplex_3", "--mode", "closed"]);
    assert_eq!(code(&failed), 2);
    assert_eq!(report(&failed)["passed"], false);
    assert!(!failed.stderr.is_empty());
    assert_eq!(code(&plcover(&["verify", "corpus:solid_simplex_3", "--mode", "boundary"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let group = dir.path().join("z2.json");
    std::fs::write(&group, r#"{"cyclic": 2}"#).unwrap();
    let g = group.to_str().unwrap();
    assert_eq!(code(&plcover(&["descent-count", "corpus:rp2_6", "--group", g, "--budget", "3"])), 3);
    assert_eq!(code(&plcover(&["descent-count", "corpus:rp2_6", "--group", g])), 0);
    std::fs::write(&group, r#"{"table": [[0, 1], [1, 1]]}"#).unwrap();
    assert_eq!(code(&plcover(&["descent-count", "corpus:rp2_6", "--group", g])), 1);
}

#[test]
fn malformed_facet_list_is_invalid_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"dimension": 3, "facets": [[0, 1, 2]]}"#).unwrap();
    let out = plcover(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));
}

#[test]
fn out_flag_and_text_rendering() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nerve.json");
    let out = plcover(&["nerve", "corpus:boundary_simplex_3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["result"]["f_vector"], serde_json::json!([4, 6, 4]));

    let text = plcover(&["cohomology", "corpus:torus_7", "--degree", "1", "--coefficients", "3", "--format", "text"]);
    assert!(String::from_utf8_lossy(&text.stdout).contains("ok: H^1 = Z/3 + Z/3"));
}

#[test]
fn seeded_family_reports_are_byte_identical() {
    let args = ["etale-family", "corpus:octahedron", "--vertices", "0,5", "--members", "3", "--seed", "11"];
    let a = plcover(&args);
    let b = plcover(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["parameters"]["seed"], 11);
    assert_eq!(r["result"]["family"]["members"].as_array().unwrap().len(), 3);
}

#[test]
fn kill_reports_verified_witnesses() {
    let h1 = plcover(&["kill", "corpus:torus_7", "--degree", "1", "--coefficients", "3"]);
    assert_eq!(code(&h1), 0);
    assert_eq!(report(&h1)["result"]["cover_degree"], 3);
    let h2 = plcover(&["kill", "corpus:boundary_simplex_3", "--degree", "2"]);
    assert_eq!(code(&h2), 0);
    assert_eq!(report(&h2)["result"]["members"].as_array().unwrap().len(), 2);
}

#[test]
fn cover_from_a_coset_table() {
    // circle_3 has one edge-path generator; a 3-cycle on it gives the connected triple cover
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.json");
    std::fs::write(&path, r#"{"degree": 3, "action": [[1, 2, 0]]}"#).unwrap();
    let out = plcover(&["cover", "corpus:circle_3", "--table", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["result"]["covers"][0]["report"]["valid"], true);
    assert_eq!(r["result"]["covers"][0]["dump"]["source"]["facets"].as_array().unwrap().len(), 9);

    std::fs::write(&path, r#"{"degree": 2, "action": [[0, 0]]}"#).unwrap();
    assert_eq!(code(&plcover(&["cover", "corpus:circle_3", "--table", path.to_str().unwrap()])), 1);
}

#[test]
fn links_complement_and_neighborhood() {
    let links = plcover(&["links", "corpus:wedge_of_spheres"]);
    assert_eq!(code(&links), 0);
    let c = report(&plcover(&["complement", "corpus:torus_7", "--skeleton", "0"]));
    let k = report(&plcover(&["coskeleton", "corpus:torus_7", "--dim", "1"]));
    assert_eq!(c["result"]["complex"], k["result"]["complex"]);
    let n = plcover(&["neighborhood", "corpus:torus_7", "--vertices", "0"]);
    assert_eq!(code(&n), 0);
}
