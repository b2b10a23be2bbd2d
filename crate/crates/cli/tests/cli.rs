use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn examples() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples")
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linfty")).current_dir(examples()).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = vec!["--report", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    let v = serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&o.stdout), String::from_utf8_lossy(&o.stderr))
    });
    (code(&o), v)
}

fn fixture(name: &str) -> String {
    fixtures().join(name).display().to_string()
}

#[test]
fn solvable_algebra_checks() {
    let (c, v) = json(&["check", "solvable-g.json"]);
    assert_eq!(c, 0);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["schema"], "linfty/report@1");
    assert_eq!(v["results"]["homology"]["0"], 2);
}

#[test]
fn theta_curvature_vanishes_at_one_one() {
    let (c, v) = json(&["mc", "curvature", "mc-theta3.json", "--point", "1,1"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["zero"], true);
    let (_, v) = json(&["mc", "curvature", "theta.json", "theta-cdga.json", "--point", "1,-1"]);
    assert_eq!(v["results"]["zero"], true);
    let (_, v) = json(&["mc", "curvature", "mc-theta3.json"]);
    assert_eq!(v["results"]["curvature"]["et⊗θ^2"], "1/2*x^2 - 1/2*y^2");
}

#[test]
fn identity_classifies_with_every_flag() {
    let (c, v) = json(&["classify", "identity-so3.json", "--degree-cutoff", "3"]);
    assert_eq!(c, 0);
    for flag in ["weak_equivalence", "fibration", "acyclic_fibration", "strict", "isomorphism", "epimorphism"] {
        assert_eq!(v["results"][flag], true, "{flag}");
    }
    assert_eq!(v["results"]["coalgebra_homology_isomorphism"], true);
}

#[test]
fn string_projection_is_a_fibration_but_not_a_weak_equivalence() {
    let (c, v) = json(&["classify", "string-to-so3.json", "--degree-cutoff", "3"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["fibration"], true);
    assert_eq!(v["results"]["weak_equivalence"], false);
    assert_eq!(v["results"]["coalgebra_homology_isomorphism"], false);
}

#[test]
fn jacobi_failure_exits_one_with_witness() {
    let (c, v) = json(&["check", &fixture("bad-jacobi.json")]);
    assert_eq!(c, 1);
    assert_eq!(v["verdict"], "fail");
    assert!(v["witness"].as_str().unwrap().contains("Jacobi"));
    let o = run(&["check", &fixture("bad-morphism.json")]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stdout).contains("witness: "));
}

#[test]
fn malformed_input_exits_two_with_location() {
    let o = run(&["check", &fixture("truncated.json")]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line"), "{err}");
    let o = run(&["check", &fixture("unknown-name.json")]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("brackets[0].inputs[1]") && err.contains("\"q\""), "{err}");
    assert_eq!(code(&run(&["check", "does-not-exist.json"])), 2);
    assert_eq!(code(&run(&["mc", "check", "mc-theta3.json", "--point", "1"])), 2);
}

#[test]
fn arity_bound_rejects_higher_brackets() {
    assert_eq!(code(&run(&["check", "string-so3.json", "--arity-bound", "2"])), 2);
    assert_eq!(code(&run(&["check", "string-so3.json", "--arity-bound", "3"])), 0);
}

#[test]
fn reports_are_byte_identical() {
    for args in [
        vec!["--report", "json", "factor", "so3-cocycle.json", "--mode", "brown"],
        vec!["--report", "json", "pullback", "string-to-so3.json", "identity-so3.json"],
        vec!["--report", "text", "postnikov", "decompose2", "so3-adjoint-to-so3.json", "--m", "1"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stdout));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn seed_reorders_samples_only() {
    let base = ["mc", "pullback", "string-to-so3.json", "identity-so3.json", "torus.json", "--samples", "20"];
    let (c0, v0) = json(&base);
    let mut seeded = base.to_vec();
    seeded.extend(["--seed", "1"]);
    let (c1, v1) = json(&seeded);
    assert_eq!((c0, c1), (0, 0));
    assert_eq!(v0["results"]["verified"], v1["results"]["verified"]);
    let mut p0: Vec<String> = v0["results"]["pairs"].as_array().unwrap().iter().map(|p| p.to_string()).collect();
    let mut p1: Vec<String> = v1["results"]["pairs"].as_array().unwrap().iter().map(|p| p.to_string()).collect();
    p0.sort();
    p1.sort();
    assert_eq!(p0, p1);
}

#[test]
fn normalization_is_idempotent() {
    let tmp = Path::new(env!("CARGO_TARGET_TMPDIR")).join("normalize");
    std::fs::create_dir_all(&tmp).unwrap();
    let mut names: Vec<_> = std::fs::read_dir(examples()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    for name in names {
        let name = name.to_str().unwrap().to_string();
        let once = run(&["normalize", &name]);
        assert_eq!(code(&once), 0, "{name}: {}", String::from_utf8_lossy(&once.stderr));
        let path = tmp.join(&name);
        std::fs::write(&path, &once.stdout).unwrap();
        let twice = run(&["normalize", &path.display().to_string()]);
        assert_eq!(once.stdout, twice.stdout, "{name}");
    }
}

#[test]
fn quasisplit_reports_three_states() {
    let (c, v) = json(&["postnikov", "quasisplit", "string-to-so3.json"]);
    assert_eq!((c, v["results"]["quasi_split"].as_str()), (0, Some("true")));
    let (c, v) = json(&["postnikov", "quasisplit", "solvable-to-line.json"]);
    assert_eq!((c, v["results"]["quasi_split"].as_str()), (1, Some("false")));
    let (c, v) = json(&["postnikov", "quasisplit", "so3xso3-pr2.json"]);
    assert_eq!((c, v["results"]["quasi_split"].as_str()), (1, Some("undetermined")));
    let (c, v) = json(&["postnikov", "quasisplit", "so3xso3-pr2.json", "--witness", "witness-pr2.json"]);
    assert_eq!((c, v["results"]["quasi_split"].as_str()), (0, Some("true")));
}

#[test]
fn adjoint_decomposition_has_mixed_bracket() {
    let (c, v) = json(&["postnikov", "decompose2", "so3-adjoint-to-so3.json", "--m", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["nonzero_mixed_bracket"], true);
    let (_, v) = json(&["postnikov", "decompose2", "string-to-so3.json", "--m", "1"]);
    assert_eq!(v["results"]["nonzero_mixed_bracket"], false);
}

#[test]
fn factorizations_and_pullback_verify() {
    for args in [
        vec!["factor", "solvable-to-line.json"],
        vec!["factor", "string-to-so3.json", "--mode", "brown"],
        vec!["pullback", "string-to-so3.json", "identity-so3.json"],
        vec!["postnikov", "tower", "string-to-so3.json"],
        vec!["postnikov", "decompose1", "string-to-so3.json", "--m", "0"],
        vec!["postnikov", "truncate", "string-so3.json", "--m", "1", "--kind", "lt"],
    ] {
        let (c, v) = json(&args);
        assert_eq!(c, 0, "{args:?}: {v}");
    }
    let (c, _) = json(&["factor", "so3-cocycle.json", "--mode", "strict"]);
    assert_eq!(c, 1);
    assert_eq!(code(&run(&["pullback", "central-inclusion.json", "identity-so3.json"])), 2);
}
