use std::path::Path;
use std::process::{Command, Output};

use burnside::{named_group, BurnsideElement, Engine, FiniteGroup};
use serde_json::Value;

fn burnside(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_burnside"))
        .args(args)
        .output()
        .expect("run burnside")
}

fn json(args: &[&str]) -> Value {
    let out = burnside(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn write_element(dir: &Path, name: &str, x: &BurnsideElement) -> String {
    let path = dir.join(name);
    std::fs::write(&path, serde_json::to_string(&x.to_doc()).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn one_p_s3() {
    let v = json(&["one-p", "--group", "S3", "--prime", "2"]);
    let coeffs: Vec<(i64, i64)> = v["coeffs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| (c["num"].as_i64().unwrap(), c["den"].as_i64().unwrap()))
        .collect();
    assert_eq!(coeffs, vec![(1, 1), (-1, 3)]);
    assert_eq!(v["coeffs"][1]["digits_mod_p^8"], "...85");

    let v = json(&["one-p", "--group", "S3", "--prime", "3", "--digits", "4"]);
    assert_eq!(v["coeffs"][0]["num"], 1);
    assert_eq!(v["coeffs"][0]["den"], 2);
    assert_eq!(v["coeffs"][0]["digits_mod_p^4"], "...41");
}

#[test]
fn kernel_c6() {
    let v = json(&["kernel", "--group", "C6", "--target", "C1"]);
    assert_eq!(v["rank"], 1);
    assert_eq!(v["kernel_basis"], serde_json::json!([[1, -2, -3, 6]]));
    let csv = burnside(&["kernel", "--group", "C6", "--format", "csv"]);
    assert_eq!(String::from_utf8(csv.stdout).unwrap(), "class,0,1,2,3\n0,6,3,2,1\n1,0,3,0,1\n2,0,0,2,1\n");
}

#[test]
fn basis_c2_c2() {
    let v = json(&["basis", "--group", "C2", "--target", "C2"]);
    assert_eq!(v["count"], 3);
    let inline = json(&["basis", "--group", r#"{"named": "C2"}"#, "--target", r#"{"table": [[0,1],[1,0]]}"#]);
    assert_eq!(inline["count"], 3);
}

#[test]
fn group_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.json");
    std::fs::write(&path, r#"{"perm": {"degree": 3, "generators": [[1,0,2],[1,2,0]]}}"#).unwrap();
    let v = json(&["basis", "--group", path.to_str().unwrap()]);
    assert_eq!(v["count"], 4);
}

#[test]
fn compose_project_decompose() {
    let dir = tempfile::tempdir().unwrap();
    let e = Engine::new();
    let s3 = named_group("S3").unwrap();
    let one = FiniteGroup::trivial();
    let space = e.space(&s3, &one).unwrap();
    let free = write_element(dir.path(), "free.json", &BurnsideElement::basis(&space, 0));
    let v = json(&["project", "--group", "S3", "--prime", "2", "--element", &free]);
    assert_eq!(v["result"], v["input"]);

    let top = write_element(dir.path(), "top.json", &BurnsideElement::basis(&space, space.len() - 1));
    let v = json(&["decompose", "--group", "S3", "--element", &top]);
    let blocks = v["components"].as_array().unwrap();
    assert_eq!(blocks.iter().map(|b| b["p"].as_u64().unwrap()).collect::<Vec<_>>(), vec![2, 3]);

    let id = write_element(dir.path(), "id.json", &e.identity(&s3).unwrap());
    let v = json(&["compose", "--group", "S3", "--via", "S3", "--target", "C1", "--element", &top, "--element", &id]);
    assert_eq!(v["element"], serde_json::to_value(BurnsideElement::basis(&space, space.len() - 1).to_doc()).unwrap());
}

#[test]
fn exit_codes() {
    assert_eq!(burnside(&["one-p", "--group", "S3"]).status.code(), Some(2));
    assert_eq!(burnside(&["basis", "--group", "nonsense"]).status.code(), Some(2));
    assert_eq!(burnside(&["one-p", "--group", "S3", "--prime", "4"]).status.code(), Some(2));
    assert_eq!(burnside(&["basis", "--group", "C(200)"]).status.code(), Some(3));
    let dir = tempfile::tempdir().unwrap();
    let e = Engine::new();
    let c2 = named_group("C2").unwrap();
    let x = write_element(dir.path(), "x.json", &BurnsideElement::basis(&e.space(&c2, &c2).unwrap(), 0));
    let out = burnside(&["project", "--group", "S3", "--prime", "2", "--element", &x]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cache_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["marks", "--group", "D8", "--target", "C2", "--variant", "withW"];
    let cold = burnside(&args).stdout;
    let mut cached: Vec<&str> = args.to_vec();
    cached.extend(["--cache", cache]);
    let fill = burnside(&cached).stdout;
    let warm = burnside(&cached).stdout;
    assert_eq!(cold, fill);
    assert_eq!(cold, warm);
    assert!(std::fs::read_dir(dir.path()).unwrap().count() > 0);
    let mut off = args.to_vec();
    off.push("--no-cache");
    assert_eq!(burnside(&off).stdout, cold);
}

#[test]
fn selftest_corpus() {
    let v = json(&["selftest", "--corpus", "1,C2,C4,D8"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);
}
