use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stablespan")).args(args).output().expect("binary runs")
}

fn closure_to(path: &Path) -> Output {
    run(&["closure", "--algebra", "poly:2", "--seed", "z1^2*z2+z1", "--cap", "3", "--out", path.to_str().unwrap()])
}

#[test]
fn closure_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    let out = closure_to(&cert);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = run(&["verify", "--cert", cert.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "ok\n");
}

#[test]
fn certificates_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    closure_to(&a);
    closure_to(&b);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let json = |args: &[&str]| run(args).stdout;
    let sat = ["saturate", "--algebra", "weyl:1", "--seed", "x1", "--cap", "3", "--format", "json"];
    assert_eq!(json(&sat), json(&sat));
}

#[test]
fn tampering_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("c.json");
    closure_to(&cert);
    let mut doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    let step = doc["steps"].as_array_mut().unwrap().iter_mut().find(|s| s["kind"] == "combine").unwrap();
    step["coeffs"][0] = serde_json::Value::String("7/3".into());
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string(&doc).unwrap()).unwrap();
    assert_eq!(run(&["verify", "--cert", bad.to_str().unwrap()]).status.code(), Some(1));

    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run(&["verify", "--cert", bad.to_str().unwrap()]).status.code(), Some(1));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["verify", "--cert", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn reports() {
    let out = run(&["saturate", "--algebra", "poly:1", "--seed", "z1^2", "--pool", "affine", "--cap", "5"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("fixpoint, dim 3"));
    let out = run(&["growth", "--algebra", "poly:1 x weyl:1", "--n", "12"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("GK degree: 3"));
    let out = run(&["gr", "--algebra", "laurent:1", "--weights", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["gr", "--algebra", "weyl:1", "--weights", "bernstein", "--expr", "y1*x1 + x1"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("x1*y1"));
    let out = run(&["parse", "--algebra", "poly:2", "--expr", "(z1+z2)^2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["canonical"], "z1^2 + 2*z1*z2 + z2^2");
}
