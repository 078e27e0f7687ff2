use std::path::Path;
use std::process::Command;

use serde_json::Value;

fn crnf(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_crnf")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const CUBES: &str = r#"{"n_vars":2,"degree":6,"terms":[
 {"m":3,"n":0,"monomials":[{"dz":[3,0],"dzb":[0,0],"re":"1","im":"0"},{"dz":[0,3],"dzb":[0,0],"re":"1","im":"0"}]},
 {"m":0,"n":3,"monomials":[{"dz":[0,0],"dzb":[3,0],"re":"1","im":"0"},{"dz":[0,0],"dzb":[0,3],"re":"1","im":"0"}]}]}"#;

#[test]
fn normalize_normal_input_gives_identity() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "in.json", CUBES);
    let out = dir.path().join("out.json");
    let (code, _) = crnf(&["normalize", "--input", &input, "--output", out.to_str().unwrap(), "--verify-after"]);
    assert_eq!(code, 0);
    let r = read(&out);
    let keys: Vec<&str> = r.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    for k in ["status", "invariants", "map", "manifold", "residuals", "solver_log"] {
        assert!(keys.contains(&k), "{k}");
    }
    assert_eq!(r["status"], "normalized");
    assert_eq!(r["map"]["F"], Value::Array(vec![]));
    assert_eq!(r["map"]["G"], Value::Array(vec![]));
    assert_eq!(r["residuals"], Value::Array(vec![]));
    assert_eq!(r["invariants"]["s"], 3);
    let input_doc: Value = serde_json::from_str(CUBES).unwrap();
    assert_eq!(r["manifold"], input_doc);
}

#[test]
fn verify_lists_broken_condition() {
    let dir = tempfile::tempdir().unwrap();
    let broken = CUBES.replace(
        r#"{"dz":[0,3],"dzb":[0,0],"re":"1","im":"0"}]}"#,
        r#"{"dz":[0,3],"dzb":[0,0],"re":"1","im":"0"}]},
 {"m":4,"n":0,"monomials":[{"dz":[4,0],"dzb":[0,0],"re":"1","im":"0"}]},
 {"m":0,"n":4,"monomials":[{"dz":[0,0],"dzb":[4,0],"re":"1","im":"0"}]}"#,
    );
    let input = write(dir.path(), "in.json", &broken);
    let out = dir.path().join("v.json");
    let (code, _) = crnf(&["verify", "--input", &input, "--output", out.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r = read(&out);
    assert_eq!(r["status"], "residuals_nonzero");
    let res = r["residuals"].as_array().unwrap();
    assert_eq!(res.len(), 1);
    assert_eq!(res[0]["condition"], "fischer_even");
    assert_eq!(res[0]["bidegree"], serde_json::json!([4, 0]));
}

#[test]
fn degenerate_exits_2_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let doc = r#"{"n_vars":2,"degree":5,"terms":[
 {"m":3,"n":0,"monomials":[{"dz":[3,0],"dzb":[0,0],"re":"1","im":"0"}]},
 {"m":0,"n":3,"monomials":[{"dz":[0,0],"dzb":[3,0],"re":"1","im":"0"}]}]}"#;
    let input = write(dir.path(), "in.json", doc);
    let out = dir.path().join("d.json");
    let (code, err) = crnf(&["normalize", "--input", &input, "--output", out.to_str().unwrap()]);
    assert_eq!(code, 2, "{err}");
    let r = read(&out);
    assert_eq!(r["status"], "degenerate");
    assert_eq!(r["invariants"]["s"], 3);
    let w = &r["invariants"]["witness"];
    assert_eq!(w[0], Value::Array(vec![]));
    assert_eq!(w[1], serde_json::json!([{"dz":[1,0],"dzb":[0,0],"re":"1","im":"0"}]));
}

#[test]
fn io_and_parse_errors_exit_1_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o.json");
    let o = out.to_str().unwrap();
    assert_eq!(crnf(&["normalize", "--input", "/nonexistent/x.json", "--output", o]).0, 1);
    let bad = write(dir.path(), "bad.json", &CUBES.replacen(r#""re":"1""#, r#""re":"1/0""#, 1));
    let (code, err) = crnf(&["normalize", "--input", &bad, "--output", o]);
    assert_eq!(code, 1);
    assert!(err.contains("terms[0].monomials[0].re"), "{err}");
    let input = write(dir.path(), "in.json", CUBES);
    assert_eq!(crnf(&["normalize", "--input", &input, "--degree", "9", "--output", o]).0, 1);
    assert_eq!(crnf(&["frobnicate"]).0, 1);
    assert!(!out.exists());
}

#[test]
fn random_moser_apply_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let r1 = d.join("r1.json");
    let r2 = d.join("r2.json");
    for r in [&r1, &r2] {
        let (code, _) = crnf(&["random", "--n-vars", "2", "--degree", "5", "--seed", "9", "--output", r.to_str().unwrap()]);
        assert_eq!(code, 0);
    }
    assert_eq!(std::fs::read(&r1).unwrap(), std::fs::read(&r2).unwrap());

    let rep = d.join("m.json");
    let (code, _) = crnf(&["moser", "--input", r1.to_str().unwrap(), "--output", rep.to_str().unwrap(), "--emit-map"]);
    assert_eq!(code, 0);
    let moser = read(&rep);
    assert_eq!(moser["status"], "moser_only");
    assert_eq!(moser["residuals"], Value::Array(vec![]));
    let map = d.join("m.json.map.json");
    assert!(map.exists());

    let applied = d.join("a.json");
    let (code, _) = crnf(&[
        "apply", "--input", r1.to_str().unwrap(), "--map", map.to_str().unwrap(),
        "--output", applied.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    assert_eq!(read(&applied)["manifold"], moser["manifold"]);

    let inv = d.join("i.json");
    assert_eq!(crnf(&["invariants", "--input", r1.to_str().unwrap(), "--output", inv.to_str().unwrap()]).0, 0);
    assert_eq!(read(&inv)["invariants"]["nondegenerate"], true);

    let nf = d.join("n.json");
    let (code, _) = crnf(&["normalize", "--input", r1.to_str().unwrap(), "--output", nf.to_str().unwrap(), "--verify-after"]);
    assert_eq!(code, 0);
    let nf = read(&nf);
    assert_eq!(nf["status"], "normalized");
    assert_eq!(nf["solver_log"].as_array().unwrap().len(), 1);
    assert_eq!(nf["solver_log"][0]["dimension"], 4);

    let mo = d.join("mo.json");
    let (code, _) = crnf(&["normalize", "--moser-only", "--input", r1.to_str().unwrap(), "--output", mo.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(read(&mo)["manifold"], moser["manifold"]);
}
