//! End-to-end checks of the `ecdlog` binary: exit codes, JSON output,
//! model round trips, reproducibility and certificate replay.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ecdlog(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecdlog"))
        .args(args)
        .env_remove("ECDLP_POLICY")
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn model_defaults_for_p2_n5() {
    let out = ecdlog(&["model", "--p", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["r"], 8);
    assert_eq!(doc["report"]["ok"], true);
    assert!(doc["report"]["checks"].as_array().unwrap().iter().all(|c| c["ok"] == true));
    assert_eq!(doc["schema_version"], 1);
}

#[test]
fn model_rejects_n_one() {
    let out = ecdlog(&["model", "--p", "3", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
}

#[test]
fn bad_policy_and_missing_parameters_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("policy.json");
    std::fs::write(&bad, r#"{"no_such_knob": 1}"#).unwrap();
    let out = ecdlog(&["dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "1", "--policy-file", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_ecdlog"))
        .args(["dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "1"])
        .env("ECDLP_POLICY", &bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(ecdlog(&["dlog", "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn non_generator_is_rejected() {
    // 1 ∈ F_{3^5} has order 1.
    let out = ecdlog(&["dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "1", "--generator", "0100000000"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dlog_round_trip_reproducibility_and_replay() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("model.json");
    let cert1 = dir.path().join("c1.json");
    let out = ecdlog(&["model", "--p", "3", "--n", "5", "--r", "1", "--out", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // Certificate from the model file, checked against the oracle.
    let out = ecdlog(&[
        "dlog", "--model-file", model.to_str().unwrap(), "--seed", "11", "--oracle-check", "--out", cert1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = json(&out);
    assert_eq!(summary["oracle"], summary["answer"]);

    // The model document is carried over bit-exactly.
    let m = read_json(&model);
    let c = read_json(&cert1);
    for (k, v) in c["model"].as_object().unwrap() {
        assert_eq!(&m[k], v, "model field {k}");
    }
    assert_eq!(m["model_digest"], c["model_digest"]);

    // Same seed from parameters, on stdout and with more threads: identical bytes.
    let out = ecdlog(&["dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let text1 = std::fs::read_to_string(&cert1).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text1);
    let out = ecdlog(&["--threads", "2", "dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "11"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), text1);

    // Replay passes.
    let out = ecdlog(&["verify", cert1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["ok"], true);
    let out = ecdlog(&["verify", cert1.to_str().unwrap(), "--model-file", model.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));

    // A perturbed exponent in a descent node fails and names the node.
    let mut bad = c.clone();
    let nodes = bad["nodes"].as_array_mut().unwrap();
    let i = nodes.len() / 2;
    let v: u128 = nodes[i]["log"].as_str().unwrap().parse().unwrap();
    nodes[i]["log"] = Value::String(((v + 1) % 242).to_string());
    let bad_path = dir.path().join("bad.json");
    std::fs::write(&bad_path, serde_json::to_string(&bad).unwrap()).unwrap();
    let out = ecdlog(&["verify", bad_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let err = json(&out)["error"].as_str().unwrap().to_string();
    assert!(err.contains(&format!("nodes[{i}]")), "{err}");

    // Garbage is a verification failure too.
    std::fs::write(&bad_path, "not json").unwrap();
    assert_eq!(ecdlog(&["verify", bad_path.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn explicit_target_and_generator() {
    let out = ecdlog(&["dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "3", "--target", "0102000000", "--oracle-check"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cert = json(&out);
    assert_eq!(cert["target"], "0102000000");
    let out = ecdlog(&["dlog", "--p", "3", "--n", "5", "--r", "1", "--seed", "3", "--target", "zz"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn stats_modes_emit_bands() {
    for mode in ["split32", "split43", "traps"] {
        let out = ecdlog(&["stats", mode, "--p", "5", "--n", "5", "--r", "1", "--seed", "2", "--samples", "4", "--level", "2"]);
        assert_eq!(out.status.code(), Some(0), "{mode}: {}", String::from_utf8_lossy(&out.stderr));
        let doc = json(&out);
        assert_eq!(doc["mode"], mode);
        assert_eq!(doc["schema_version"], 1);
        let s = &doc["stats"];
        let band = match mode {
            "split32" => &s["split_found"],
            "split43" => &s["cprime_degree"],
            _ => &s["non_trap3"],
        };
        let (lo, rate, hi) = (band["lo"].as_f64().unwrap(), band["rate"].as_f64().unwrap(), band["hi"].as_f64().unwrap());
        assert!(lo <= rate && rate <= hi);
    }
}
