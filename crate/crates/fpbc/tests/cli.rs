use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fpbc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fpbc"))
        .args(args)
        .env("FPBC_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn example(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("examples")
        .join(name)
        .display()
        .to_string()
}

fn tmp(dir: &tempfile::TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn stdout_json<T: serde::de::DeserializeOwned>(o: &Output) -> T {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

#[test]
fn compiled_samples_match_the_dense_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let prog = tmp(&dir, "prog.json");
    for circuit in ["single_t2.json", "two_qubit.json", "three_qubit.json"] {
        let c = example(circuit);
        let o = fpbc(&["compile", "--circuit", &c, "-o", prog.to_str().unwrap()]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let counts: BTreeMap<String, u64> = stdout_json(&fpbc(&[
            "run",
            "--program",
            prog.to_str().unwrap(),
            "--shots",
            "20000",
            "--seed",
            "5",
        ]));
        let exact: BTreeMap<String, f64> = stdout_json(&fpbc(&["oracle", "--circuit", &c, "--exact"]));
        let total: u64 = counts.values().sum();
        assert_eq!(total, 20000);
        let mut keys: Vec<&String> = counts.keys().chain(exact.keys()).collect();
        keys.dedup();
        let tv: f64 = keys
            .iter()
            .map(|k| {
                (counts.get(*k).copied().unwrap_or(0) as f64 / total as f64 - exact.get(*k).copied().unwrap_or(0.0))
                    .abs()
            })
            .sum::<f64>()
            / 2.0;
        assert!(tv < 0.05, "{circuit}: TV {tv}");
    }
}

#[test]
fn exact_run_equals_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let prog = tmp(&dir, "prog.json");
    let c = example("three_qubit.json");
    assert!(fpbc(&["compile", "--circuit", &c, "-o", prog.to_str().unwrap()])
        .status
        .success());
    let run: BTreeMap<String, f64> = stdout_json(&fpbc(&["run", "--program", prog.to_str().unwrap(), "--exact"]));
    let oracle: BTreeMap<String, f64> = stdout_json(&fpbc(&["oracle", "--circuit", &c, "--exact"]));
    for (k, p) in &oracle {
        assert!((run.get(k).copied().unwrap_or(0.0) - p).abs() < 1e-10, "{k}");
    }
}

#[test]
fn runs_are_reproducible_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let prog = tmp(&dir, "prog.json");
    assert!(fpbc(&[
        "compile",
        "--circuit",
        &example("two_qubit.json"),
        "-o",
        prog.to_str().unwrap()
    ])
    .status
    .success());
    let args = [
        "run",
        "--program",
        prog.to_str().unwrap(),
        "--shots",
        "3000",
        "--seed",
        "9",
    ];
    let a = fpbc(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_fpbc"))
        .args(args)
        .env("FPBC_THREADS", "1")
        .output()
        .unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn manifest_records_inputs_and_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let prog = tmp(&dir, "prog.json");
    let c = example("single_t2.json");
    assert!(fpbc(&["compile", "--circuit", &c, "-o", prog.to_str().unwrap()])
        .status
        .success());
    let first = std::fs::read(&prog).unwrap();
    let manifest: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("prog.json.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "compile");
    assert_eq!(manifest["inputs"][0]["path"], c.as_str());
    assert_eq!(manifest["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(manifest["seed"].is_null());
    assert!(fpbc(&["compile", "--circuit", &c, "-o", prog.to_str().unwrap()])
        .status
        .success());
    assert_eq!(
        first,
        std::fs::read(&prog).unwrap(),
        "compilation output is byte-stable"
    );
}

#[test]
fn malformed_circuit_reports_the_json_path() {
    let dir = tempfile::tempdir().unwrap();
    let bad = tmp(&dir, "bad.json");
    std::fs::write(&bad, r#"{"n": 1, "t": 1, "gates": [{"kind": "t2", "a": 1}]}"#).unwrap();
    let o = fpbc(&["compile", "--circuit", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("gates[0]") && err.contains("missing field `b`"), "{err}");

    std::fs::write(&bad, r#"{"n": 1, "t": 1, "gates": [{"kind": "t2", "a": 2, "b": 2}]}"#).unwrap();
    let o = fpbc(&["compile", "--circuit", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("gates[0]"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(fpbc(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fpbc(&["run"]).status.code(), Some(1));
    assert_eq!(fpbc(&["--help"]).status.code(), Some(0));
}

#[test]
fn tampered_program_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let prog = tmp(&dir, "prog.json");
    assert!(fpbc(&[
        "compile",
        "--circuit",
        &example("two_qubit.json"),
        "-o",
        prog.to_str().unwrap()
    ])
    .status
    .success());
    let mut v: serde_json::Value = serde_json::from_slice(&std::fs::read(&prog).unwrap()).unwrap();
    v["quantum_measurements"] = serde_json::json!(0);
    std::fs::write(&prog, serde_json::to_vec(&v).unwrap()).unwrap();
    let o = fpbc(&["run", "--program", prog.to_str().unwrap(), "--shots", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn layout_then_shift() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = tmp(&dir, "config.json");
    let o = fpbc(&[
        "layout",
        "--mzms",
        "1,4,7,10",
        "--columns",
        "8",
        "-o",
        cfg.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let shift: serde_json::Value = stdout_json(&fpbc(&[
        "shift",
        "--config",
        cfg.to_str().unwrap(),
        "--device",
        &example("device.json"),
    ]));
    // four junctions at A = (1,1,1) contribute (1/√3)^2 each once the bus legs are folded in
    let f = shift["factor"].as_f64().unwrap();
    assert!((f.abs() - 1.0 / 27.0).abs() < 1e-12, "{f}");
    assert!(shift["relative_error"].as_f64().unwrap() < 0.01);

    let odd = fpbc(&["layout", "--mzms", "1,4,7", "--columns", "8"]);
    assert_eq!(odd.status.code(), Some(1));
}

#[test]
fn csv_output() {
    let o = fpbc(&[
        "oracle",
        "--circuit",
        &example("two_qubit.json"),
        "--exact",
        "--format",
        "csv",
    ]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.starts_with("bitstring,probability\n"), "{text}");
    let o = fpbc(&["compile", "--circuit", &example("two_qubit.json"), "--format", "csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn braid_cost_reports_estimate_and_bound() {
    let v: serde_json::Value = stdout_json(&fpbc(&[
        "braid-cost",
        "--m",
        "8",
        "--d",
        "1",
        "--c",
        "2",
        "--r",
        "1",
        "--R",
        "2",
        "--trials",
        "20000",
        "--seed",
        "1",
    ]));
    let (p, se, bound) = (
        v["estimate"].as_f64().unwrap(),
        v["stderr"].as_f64().unwrap(),
        v["bound"].as_f64().unwrap(),
    );
    assert!(p <= bound + 3.0 * se);
    let exhaustive: serde_json::Value = stdout_json(&fpbc(&[
        "braid-cost",
        "--m",
        "8",
        "--d",
        "1",
        "--c",
        "2",
        "--r",
        "1",
        "--R",
        "2",
        "--exhaustive",
    ]));
    assert!((exhaustive["estimate"].as_f64().unwrap() - p).abs() < 4.0 * se);
}

#[test]
fn synthesize_round_trips_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let w = tmp(&dir, "w.json");
    let o = fpbc(&[
        "synthesize",
        "--random-length",
        "8",
        "--modes",
        "10",
        "--seed",
        "3",
        "--w4",
        "-o",
        w.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let records: Vec<serde_json::Value> = serde_json::from_slice(&std::fs::read(&w).unwrap()).unwrap();
    assert!(records
        .iter()
        .all(|r| r["string"].as_str().unwrap().matches('g').count() <= 4));
    let o = fpbc(&["synthesize", "--word", w.to_str().unwrap(), "--modes", "10"]);
    assert!(o.status.success());
}

#[test]
fn selftest_passes() {
    let o = fpbc(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}
