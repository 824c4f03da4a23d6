use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn spinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .output()
        .expect("spawn spinlab")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spinlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn suites_are_deterministic() {
    for args in [
        &["verify", "coroots", "--seed", "3"][..],
        &["verify", "clifford", "--seed", "3", "--dim", "6"],
        &["verify", "tori", "--seed", "3"],
        &["verify", "steinberg", "--seed", "3"],
    ] {
        let a = spinlab(args);
        let b = spinlab(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(json(&a)["passed"], Value::Bool(true));
    }
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "coroots", "--dim", "4"][..],
        &["verify", "coroots", "--dim", "7"],
        &["verify", "tori", "--dim", "4"],
        &["verify", "steinberg", "--dim", "8"],
        &["approx", "unit", "3", "15"],
        &["approx", "unit", "2", "14"],
        &["approx", "pair", "2", "x", "15"],
        &["width", "fs", "15"],
        &["width", "fa", "3", "--element", "e19"],
        &["width", "fa", "3", "--dim", "10"],
        &["verify"],
    ] {
        assert_eq!(spinlab(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn certificates_round_trip_through_files() {
    let path = scratch("pair.json");
    let p = path.to_str().unwrap();
    let out = spinlab(&["approx", "pair", "2", "7", "15", "--out", p]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v = spinlab(&["verify", "--file", p]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["kind"], "pair");

    let text = std::fs::read_to_string(&path)
        .unwrap()
        .replace("\"7/1\"", "\"8/1\"");
    std::fs::write(&path, text).unwrap();
    let v = spinlab(&["verify", "--file", p]);
    assert_eq!(v.status.code(), Some(1));
    assert_eq!(json(&v)["passed"], Value::Bool(false));

    std::fs::write(&path, "{").unwrap();
    assert_eq!(spinlab(&["verify", "--file", p]).status.code(), Some(2));
}

#[test]
fn spin_pair_round_trip() {
    let path = scratch("spinpair.json");
    let p = path.to_str().unwrap();
    assert_eq!(
        spinlab(&["approx", "spinpair", "2", "7", "15", "--out", p])
            .status
            .code(),
        Some(0)
    );
    let v = spinlab(&["verify", "--file", p]);
    assert_eq!(v.status.code(), Some(0));
    assert_eq!(json(&v)["kind"], "spinpair");
}

#[test]
fn width_modes_and_exit_codes() {
    let exact = spinlab(&["width", "fs", "3", "--element", "gen0"]);
    assert_eq!(exact.status.code(), Some(0));
    let r = json(&exact);
    assert_eq!(r["mode"], "exact");
    assert_eq!(r["group_order"], 288);

    let cover = json(&spinlab(&["width", "fs", "3", "--convention", "cover"]));
    assert_eq!(cover["group_order"], 576);

    let sampled = spinlab(&["width", "fs", "9", "--group-cap", "1000"]);
    assert_eq!(sampled.status.code(), Some(3));
    assert_eq!(json(&sampled)["mode"], "sampled");

    let id = json(&spinlab(&["width", "fa", "5", "--element", "id"]));
    assert_eq!(id["width"], 0);
    let short = json(&spinlab(&["width", "fa", "5", "--cap", "1"]));
    assert_eq!(short["width"], Value::Null);
}
