use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn daqc(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_daqc")).args(args).current_dir(dir).output().unwrap()
}

const SOURCE: &str = "n_qubits=3\n0 1 z z 1.0\n0 2 z z 2.0\n";
const PROBLEM: &str = "n_qubits=3\n0 1 z z 0.5\n0 2 z z -1.0\n";
const DEFECTS: &str = "n_qubits=3\n0 1 z z 0\n0 2 z z 0\n1 2 z z 0\n";

fn workspace() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("source.txt"), SOURCE).unwrap();
    fs::write(dir.path().join("problem.txt"), PROBLEM).unwrap();
    fs::write(dir.path().join("defects.txt"), DEFECTS).unwrap();
    dir
}

#[test]
fn synth_then_analyze() {
    let dir = workspace();
    let synth = daqc(
        &["synth", "--problem", "problem.txt", "--source", "source.txt", "--defects", "defects.txt", "--time", "1", "--mode", "mitigate", "--out", "s.txt"],
        dir.path(),
    );
    assert!(synth.status.success(), "{}", String::from_utf8_lossy(&synth.stderr));
    let schedule = fs::read_to_string(dir.path().join("s.txt")).unwrap();
    assert!(schedule.contains("mode=mitigate"));

    let analyze = daqc(&["analyze", "--schedule", "s.txt", "--source", "source.txt", "--delta", "0.01", "--seed", "3", "--state", "plus", "--json"], dir.path());
    assert!(analyze.status.success(), "{}", String::from_utf8_lossy(&analyze.stderr));
    let report: serde_json::Value = serde_json::from_slice(&analyze.stdout).unwrap();
    assert_eq!(report["mode"], "mitigate");
    assert_eq!(report["e_ds"], 0);
    assert_eq!(report["defect_edges"], 3);
    assert!((report["t_a"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(report["exact_op_norm"].as_f64().unwrap() <= report["op_norm_bound"].as_f64().unwrap());
    assert!(report["exact_delta_o"].is_f64());

    let text = daqc(&["analyze", "--schedule", "s.txt", "--source", "source.txt", "--delta", "0.01"], dir.path());
    assert!(String::from_utf8_lossy(&text.stdout).contains("op_norm_bound: "));
}

#[test]
fn sweep_then_summarize() {
    let dir = workspace();
    let sweep = daqc(&["sweep", "--topology", "nn", "--n-min", "3", "--n-max", "4", "--trials", "5", "--out", "r.csv"], dir.path());
    assert!(sweep.status.success());
    let summary = daqc(&["summarize", "--in", "r.csv"], dir.path());
    assert!(summary.status.success());
    let text = String::from_utf8(summary.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.lines().nth(1).unwrap().starts_with("3,nn,remove,5,"));
}

#[test]
fn exit_codes() {
    let dir = workspace();
    fs::write(dir.path().join("bad.txt"), "n_qubits=3\n1 2 z z 1.0\n").unwrap();
    let violation = daqc(
        &["synth", "--problem", "bad.txt", "--source", "source.txt", "--defects", "defects.txt", "--time", "1"],
        dir.path(),
    );
    assert_eq!(violation.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&violation.stderr).contains("simulability"));

    let missing = daqc(&["summarize", "--in", "nope.csv"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    let bad_flag = daqc(&["sweep", "--topology", "ring"], dir.path());
    assert_eq!(bad_flag.status.code(), Some(2));
    let reversed = daqc(&["sweep", "--topology", "nn", "--n-min", "5", "--n-max", "3"], dir.path());
    assert_eq!(reversed.status.code(), Some(2));
}
