//! End-to-end runs of the binary over the documented example files, pinning
//! exit codes and output determinism.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_termlab"))
}

fn example(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/examples")
        .join(name)
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = bin().args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

#[test]
fn groupoid_example_exit_codes() {
    let file = example("groupoid.tl");
    let f = file.to_str().unwrap();
    let (code, _, _) = run(&["check", f, "--structure", "WalkingIso", "--theory", "Groupoid"]);
    assert_eq!(code, 0);
    let (code, out, _) =
        run(&["check", f, "--structure", "WalkingArrow", "--theory", "Groupoid"]);
    assert_eq!(code, 1);
    assert!(out.contains("not_interpretable"));
}

#[test]
fn discrete_example_exit_codes() {
    let file = example("discrete.tl");
    let f = file.to_str().unwrap();
    let (code, _, _) = run(&["check", f, "--structure", "TwoPoints", "--theory", "Discrete"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["check", f, "--structure", "WalkingArrow", "--theory", "Discrete"]);
    assert_eq!(code, 1);
}

#[test]
fn chosen_limits_example_holds() {
    let file = example("chosen_limits.tl");
    let f = file.to_str().unwrap();
    let (code, out, err) =
        run(&["check", f, "--structure", "ChainMeet", "--theory", "ChosenProducts"]);
    assert_eq!(code, 0, "stdout: {out}\nstderr: {err}");
}

#[test]
fn pos_example_exit_codes() {
    let file = example("pos_min.tl");
    let f = file.to_str().unwrap();
    let (code, _, _) = run(&["check", f, "--structure", "Chain", "--theory", "MinLeq"]);
    assert_eq!(code, 0);
    let (code, out, _) = run(&["check", f, "--structure", "Chain", "--theory", "MinGeq"]);
    assert_eq!(code, 1);
    assert!(out.contains("witness"));
}

#[test]
fn met_example_exit_codes() {
    let file = example("met_epsilon.tl");
    let f = file.to_str().unwrap();
    let (code, _, _) = run(&["check", f, "--structure", "P", "--theory", "Close"]);
    assert_eq!(code, 0);
    let (code, _, _) = run(&["check", f, "--structure", "P", "--theory", "TooClose"]);
    assert_eq!(code, 1);
}

#[test]
fn factor_example() {
    let file = example("factor.tl");
    let f = file.to_str().unwrap();
    let (code, out, _) = run(&["factor", f, "--functor", "Quot"]);
    assert_eq!(code, 0);
    assert!(out.contains("epi part is epi: true"));
}

#[test]
fn parse_error_exit_code_and_span() {
    let dir = std::env::temp_dir().join("termlab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.tl");
    std::fs::write(&bad, "category C {\n  objects a b\n}\n").unwrap();
    let (code, _, err) = run(&[
        "check",
        bad.to_str().unwrap(),
        "--structure",
        "x",
        "--theory",
        "y",
    ]);
    assert_eq!(code, 2);
    // Diagnostic carries a line:column position.
    assert!(err.contains(':'), "stderr: {err}");
}

#[test]
fn budget_exhaustion_exit_code() {
    let file = example("groupoid.tl");
    let f = file.to_str().unwrap();
    let (code, _, err) = run(&[
        "free",
        f,
        "--lang",
        "Empty",
        "--shape",
        "Two",
        "--depth",
        "2",
        "--max-terms",
        "2",
    ]);
    assert_eq!(code, 3, "stderr: {err}");
}

#[test]
fn json_output_is_deterministic() {
    let file = example("groupoid.tl");
    let f = file.to_str().unwrap();
    let args = ["check", f, "--structure", "WalkingIso", "--theory", "Groupoid", "--json"];
    let (c1, out1, _) = run(&args);
    let (c2, out2, _) = run(&args);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(out1, out2, "identical runs must be byte-identical");
    let v: serde_json::Value = serde_json::from_str(&out1).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["holds"], true);
}

#[test]
fn json_closure_schema() {
    let file = example("groupoid.tl");
    let f = file.to_str().unwrap();
    let (code, out, _) = run(&[
        "closure",
        f,
        "--theory",
        "Groupoid",
        "--corpus",
        "WalkingIso,WalkingArrow",
        "--json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).expect("valid JSON");
    assert_eq!(v["schema"], 1);
    assert_eq!(v["all_pass"], true);
    let entries = v["entries"].as_array().unwrap();
    assert!(entries
        .iter()
        .any(|e| e["property"] == "filtered colimits"
            && e["status"]["Skipped"]["reason"] == "not finitely testable"));
}
