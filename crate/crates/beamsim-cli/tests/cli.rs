//! End-to-end checks of the compiled binary: output schema, exit codes,
//! reproducibility, and the preparation grammar at the process boundary.

use std::path::Path;
use std::process::{Command, Output};

fn beamsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_beamsim"))
        .args(args)
        .env_remove("BEAMSIM_FORMAT")
        .output()
        .expect("binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON on stdout")
}

#[test]
fn moments_example() {
    let output = beamsim(&["moments", "--prep", "random:z", "--n", "9"]);
    let value = stdout_json(&output);
    let results = &value["results"];
    assert!(results["mean"].as_f64().unwrap().abs() < 1e-10);
    assert!((results["dispersion"].as_f64().unwrap() - 3.0).abs() < 1e-10);
}

#[test]
fn json_envelope_is_schema_stable() {
    let output = beamsim(&["moments", "--prep", "alternating:x", "--n", "3"]);
    let value = stdout_json(&output);
    let object = value.as_object().unwrap();
    let keys: Vec<&String> = object.keys().collect();
    assert_eq!(keys, ["command", "inputs", "library_version", "results"]);
    assert_eq!(value["command"], "moments");
    assert_eq!(value["inputs"]["prep"], "alternating:x");
    assert_eq!(value["inputs"]["n"], 3);

    // floats carry 17 significant digits
    let raw = String::from_utf8_lossy(&output.stdout);
    assert!(raw.contains("e0") || raw.contains("e-"), "{raw}");
}

#[test]
fn compare_example() {
    let output = beamsim(&[
        "compare",
        "--prep-a",
        "alternating:z",
        "--prep-b",
        "alternating:x",
        "--n",
        "2",
    ]);
    let value = stdout_json(&output);
    let distance = value["results"]["trace_distance"].as_f64().unwrap();
    assert!((distance - 0.8660254037844386).abs() < 1e-10);
    assert_eq!(value["results"]["distinguishable"], true);
}

#[test]
fn validation_failure_names_the_invariant() {
    let output = beamsim(&["moments", "--prep", "fixedm:z:5", "--n", "4"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("out of range"), "stderr: {stderr}");

    let output = beamsim(&["moments", "--prep", "random:q", "--n", "2"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("position 7"), "stderr: {stderr}");
}

#[test]
fn sample_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let output = beamsim(&[
            "sample",
            "--prep",
            "random:x",
            "--n",
            "5",
            "--beams",
            "2000",
            "--seed",
            "42",
            "--output",
            path.to_str().unwrap(),
        ]);
        assert!(output.status.success());
        std::fs::read(&path).unwrap()
    };
    assert_eq!(run("first.json"), run("second.json"));
}

#[test]
fn seed_is_required_for_sampling_commands() {
    let output = beamsim(&["sample", "--prep", "random:z", "--n", "3", "--beams", "10"]);
    assert_eq!(output.status.code(), Some(1));
    let output = beamsim(&[
        "nosignal", "--prep-a", "random:z", "--prep-b", "random:x", "--n", "2",
    ]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn nosignal_agrees_with_operator_comparison() {
    let equal = beamsim(&[
        "nosignal", "--prep-a", "random:z", "--prep-b", "random:x", "--n", "4", "--seed", "7",
    ]);
    let value = stdout_json(&equal);
    assert_eq!(value["results"]["pass"], true);
    assert_eq!(value["results"]["consistent"], true);

    let different = beamsim(&[
        "nosignal",
        "--prep-a",
        "alternating:z",
        "--prep-b",
        "alternating:x",
        "--n",
        "2",
        "--seed",
        "7",
    ]);
    let value = stdout_json(&different);
    assert_eq!(value["results"]["pass"], false);
    assert_eq!(value["results"]["consistent"], true);
    assert!(value["results"]["max_deviation"].as_f64().unwrap() > 0.1);
}

#[test]
fn explicit_mixture_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("mixture.json");
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let file = serde_json::json!({
        "terms": [
            { "weight": 0.5, "states": [[1.0, 0.0, 0.0, 0.0], [s, 0.0, s, 0.0]] },
            { "weight": 0.5, "states": [[0.0, 0.0, 1.0, 0.0], [s, 0.0, -s, 0.0]] },
        ]
    });
    std::fs::write(&path, serde_json::to_vec(&file).unwrap()).unwrap();

    let spec = format!("explicit:@{}", path.display());
    let output = beamsim(&["moments", "--prep", &spec, "--n", "2"]);
    let value = stdout_json(&output);
    assert!(value["results"]["mean"].as_f64().unwrap().abs() < 1e-10);

    // bad weights are a validation error naming the invariant
    let bad = serde_json::json!({
        "terms": [ { "weight": 0.4, "states": [[1.0, 0.0, 0.0, 0.0]] } ]
    });
    std::fs::write(&path, serde_json::to_vec(&bad).unwrap()).unwrap();
    let output = beamsim(&["moments", "--prep", &spec, "--n", "1"]);
    assert_eq!(output.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&output.stderr).contains("weights"));
}

#[test]
fn env_var_sets_default_format_only() {
    let from_env = Command::new(env!("CARGO_BIN_EXE_beamsim"))
        .args(["moments", "--prep", "random:z", "--n", "2"])
        .env("BEAMSIM_FORMAT", "pretty")
        .output()
        .unwrap();
    let text = String::from_utf8_lossy(&from_env.stdout);
    assert!(text.starts_with("collective z spin"), "{text}");

    // an explicit flag wins over the environment
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_beamsim"))
        .args([
            "moments", "--prep", "random:z", "--n", "2", "--format", "json",
        ])
        .env("BEAMSIM_FORMAT", "pretty")
        .output()
        .unwrap();
    assert!(flag_wins.stdout.starts_with(b"{"));
}

#[test]
fn output_file_writing() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = beamsim(&[
        "moments",
        "--prep",
        "random:z",
        "--n",
        "3",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let written: serde_json::Value =
        serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "moments");

    // unwritable paths report the path itself
    let bad = beamsim(&[
        "moments",
        "--prep",
        "random:z",
        "--n",
        "3",
        "--output",
        "/no/such/dir/out.json",
    ]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("/no/such/dir/out.json"));
}

#[test]
fn density_reports_structure() {
    let output = beamsim(&["density", "--prep", "alternating:z", "--n", "3"]);
    let value = stdout_json(&output);
    assert_eq!(value["results"]["structure"], "diagonal");
    let diagonal = value["results"]["diagonal"].as_array().unwrap();
    assert_eq!(diagonal.len(), 8);
    assert!((diagonal[2][0].as_f64().unwrap() - 0.5).abs() < 1e-15);

    let output = beamsim(&[
        "density",
        "--prep",
        "alternating:bloch(0.5,0.25)",
        "--n",
        "2",
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["results"]["structure"], "dense");
    assert_eq!(value["results"]["matrix"].as_array().unwrap().len(), 4);
}

#[test]
fn reproduce_csv_has_pinned_columns() {
    let output = beamsim(&["reproduce", "--max-n", "4", "--format", "csv"]);
    assert!(output.status.success());
    let text = String::from_utf8_lossy(&output.stdout);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "claim_id,n,method,quantity,paper_value,computed_value,abs_error,source"
    );
    assert_eq!(text.lines().count() - 1, 48, "4 * 5 + 2 * 2 + 24 rows");
}

#[test]
fn help_and_version_succeed() {
    assert!(beamsim(&["--help"]).status.success());
    assert!(beamsim(&["--version"]).status.success());
    assert_eq!(beamsim(&["unknown-subcommand"]).status.code(), Some(1));
}

#[test]
fn explicit_path_survives_spec_round_trip() {
    // the CLI prints specs in inputs; make sure they re-parse identically
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    let file = serde_json::json!({
        "terms": [ { "weight": 1.0, "states": [[1.0, 0.0, 0.0, 0.0]] } ]
    });
    std::fs::write(&path, serde_json::to_vec(&file).unwrap()).unwrap();
    let spec_text = format!("explicit:@{}", path.display());
    let output = beamsim(&["moments", "--prep", &spec_text, "--n", "1"]);
    let value = stdout_json(&output);
    assert_eq!(value["inputs"]["prep"].as_str().unwrap(), spec_text);
    assert!(Path::new(
        value["inputs"]["prep"]
            .as_str()
            .unwrap()
            .strip_prefix("explicit:@")
            .unwrap()
    )
    .exists());
}
