use std::io::Write;
use std::path::Path;

use digitop_cli::run;
use tempfile::NamedTempFile;

fn document(text: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

fn digitop(space: &Path, rest: &[&str]) -> digitop_cli::RunOutput {
    let mut args = vec!["digitop".to_string(), "--space".into(), space.display().to_string()];
    args.extend(rest.iter().map(|s| s.to_string()));
    run(args)
}

const INTERVAL: &str = r#"{
  "dimension": 1,
  "points": [[0], [1], [2], [3]],
  "adjacency": {"type": "cu", "u": 1},
  "metric": {"type": "lp", "p": "2"},
  "maps": [
    {"name": "T", "pairs": [[[0], [0]], [[1], [0]], [[2], [1]], [[3], [2]]]},
    {"name": "S", "pairs": [[[0], [1]], [[1], [0]], [[2], [0]], [[3], [0]]]},
    {"name": "J", "pairs": [[[0], [0]], [[1], [3]], [[2], [0]], [[3], [0]]]},
    {"name": "C", "pairs": [[[0], [0]], [[1], [0]], [[2], [0]], [[3], [0]]]}
  ]
}"#;

#[test]
fn picard_orbit_reports_the_limit() {
    let f = document(INTERVAL);
    let out = digitop(f.path(), &["fix", "--map", "T", "--start", "3", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["orbit"]["orbit"], serde_json::json!(["3", "2", "1", "0", "0"]));
    assert_eq!(v["orbit"]["classification"], "eventually_constant");
    assert_eq!(v["orbit"]["limit"], "0");
}

#[test]
fn classify_reports_minimal_constants() {
    let f = document(INTERVAL);
    let out = digitop(f.path(), &["classify", "--map", "C", "--format", "json"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let rows = v["conditions"].as_array().unwrap();
    let banach = rows.iter().find(|r| r["condition"].as_str().unwrap().starts_with("banach")).unwrap();
    assert_eq!(banach["holds"], true);
    assert_eq!(banach["minimal_constant"], "0");
    let out = digitop(f.path(), &["classify", "--map", "T"]);
    assert!(out.stdout.contains("kannan(a=1/8, b=1/8)               fails  min constant 1/3"), "{}", out.stdout);
}

#[test]
fn expect_pass_turns_failures_into_status_one() {
    let f = document(INTERVAL);
    assert_eq!(digitop(f.path(), &["check-map", "--map", "J"]).code, 0);
    assert_eq!(digitop(f.path(), &["check-map", "--map", "J", "--expect-pass"]).code, 1);
    assert_eq!(digitop(f.path(), &["check-map", "--map", "T", "--expect-pass"]).code, 0);
    assert_eq!(digitop(f.path(), &["fpp", "--expect-pass"]).code, 1);
    assert_eq!(digitop(f.path(), &["fix", "--map", "C", "--expect-pass"]).code, 0);
    let out = run(["digitop", "search", "--assertion", "mishtrip-32", "--params", "0", "--expect-pass"]);
    assert_eq!(out.code, 1, "{}", out.stdout);
    let out = run(["digitop", "search", "--assertion", "gopal-quasi", "--size-bound", "2", "--params", "1/2", "--expect-pass"]);
    assert_eq!(out.code, 0, "{}", out.stdout);
}

#[test]
fn input_errors_exit_with_two() {
    let f = document(INTERVAL);
    assert_eq!(digitop(f.path(), &["check-map", "--map", "missing"]).code, 2);
    assert_eq!(digitop(f.path(), &["check-map"]).code, 2);
    assert_eq!(digitop(f.path(), &["classify", "--map", "T", "--params", "k=1"]).code, 2);
    assert_eq!(digitop(f.path(), &["classify", "--map", "T", "--params", "z=1/2"]).code, 2);
    assert_eq!(digitop(f.path(), &["fix", "--map", "T", "--start", "7"]).code, 2);
    assert_eq!(digitop(f.path(), &["hausdorff", "--set-a", "0", "--set-b", "x"]).code, 2);
    assert_eq!(run(["digitop", "search", "--assertion", "nope"]).code, 2);
    assert_eq!(run(["digitop", "search", "--assertion", "gopal-quasi", "--size-bound", "9", "--params", "1/2"]).code, 2);
    assert_eq!(run(["digitop", "check-map", "--space", "/nonexistent/space.json", "--map", "T"]).code, 2);
    assert_eq!(run(["digitop", "frobnicate"]).code, 2);
    let bad = document("{\"dimension\": 1,");
    let out = digitop(bad.path(), &["check-map", "--map", "T"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("malformed document"), "{}", out.stderr);
}

#[test]
fn affine_documents() {
    let f = document(
        r#"{"dimension":1,"points":"Z","adjacency":{"type":"cu","u":1},"metric":{"type":"lp","p":"1"},
            "maps":[{"name":"G","affine":{"p":1,"q":1}},{"name":"H","affine":{"p":0,"q":0}}]}"#,
    );
    let out = digitop(f.path(), &["classify", "--map", "G", "--map2", "H", "--params", "rho=1/2", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    let holds: Vec<bool> = v["conditions"].as_array().unwrap().iter().map(|r| r["holds"].as_bool().unwrap()).collect();
    assert_eq!(holds, [false, true, true, true]);
    let out = digitop(f.path(), &["fix", "--map", "G"]);
    assert!(out.stdout.contains("fixed points: none"), "{}", out.stdout);
    assert_eq!(digitop(f.path(), &["fpp"]).code, 2);
}

#[test]
fn hausdorff_is_exact_under_l2() {
    let f = document(
        r#"{"dimension":2,"points":[[0,0],[0,1],[1,0],[1,1]],"adjacency":{"type":"cu","u":2},"metric":{"type":"lp","p":"2"}}"#,
    );
    let out = digitop(f.path(), &["hausdorff", "--set-a", "0,0", "--set-b", "(1,1);0,1", "--format", "json"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["distance"], "sqrt(2)");
}

#[test]
fn reports_are_deterministic() {
    let f = document(INTERVAL);
    for args in [&["classify", "--map", "T", "--map2", "S", "--format", "json"][..], &["fix", "--map", "T", "--map2", "S", "--start", "3"]] {
        assert_eq!(digitop(f.path(), args), digitop(f.path(), args));
    }
}
