//! Acceptance suite for the command-line contract: document round-trip
//! stability, the documented exit codes on the worked example invocations,
//! and well-formed, byte-deterministic SVG output for planar instances.

use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};
use tempfile::TempDir;
use tropic::doc::parse_problem;

fn conclude(criterion: &str, ok: bool, detail: &str) {
    if ok {
        println!("PASS {criterion}");
    } else {
        println!("FAIL {criterion}: {detail}");
    }
    assert!(ok, "{criterion}: {detail}");
}

fn write(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

fn tropic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropic"))
        .args(args)
        .env_remove("TROPIC_CAP")
        .output()
        .expect("the binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON document")
}

#[test]
fn criterion_11_round_trip_exit_codes_and_svg() {
    let dir = TempDir::new().unwrap();
    let mut failures: Vec<String> = Vec::new();

    // Round-trip stability of problem documents through serialization.
    let text = r#"{
        "semifield": "max-times",
        "A": [[1, 0.5], [0, 2]],
        "d": [1, "+inf"],
        "C": [[1, 1]],
        "b": [4],
        "options": {"tolerance": 1e-7, "cap": 12, "check_uniqueness": true}
    }"#;
    let doc = parse_problem(text).unwrap();
    match parse_problem(&doc.to_json().to_string()) {
        Ok(round) if round == doc => {}
        Ok(_) => failures.push("document changed across a serialize/parse cycle".into()),
        Err(e) => failures.push(format!("serialized document failed to parse: {e}")),
    }

    // Worked invocation 1: a solvable equation, exit 0.
    let solve = write(
        dir.path(),
        "solve.json",
        r#"{"semifield":"max-plus","A":[[1,3],[2,1]],"d":[4,5]}"#,
    );
    let out = tropic(&["solve", "--input", &solve]);
    if out.status.code() != Some(0) {
        failures.push(format!("solve exited {:?}, expected 0", out.status.code()));
    } else {
        let v = stdout_json(&out);
        if v["solvable"] != Value::Bool(true)
            || v["delta"] != 0
            || v["maximal"] != serde_json::json!([3, 1])
        {
            failures.push(format!("solve output unexpected: {v}"));
        }
    }

    // Worked invocation 2: a distance query, exit 0.
    let dist = write(
        dir.path(),
        "dist.json",
        r#"{"semifield":"max-plus","A":[[0],[0]],"d":[3,5]}"#,
    );
    let out = tropic(&["distance", "--input", &dist]);
    if out.status.code() != Some(0) {
        failures.push(format!(
            "distance exited {:?}, expected 0",
            out.status.code()
        ));
    } else {
        let v = stdout_json(&out);
        if v["delta"] != 1
            || v["x"] != serde_json::json!([4])
            || v["y"] != serde_json::json!([4, 4])
        {
            failures.push(format!("distance output unexpected: {v}"));
        }
    }

    // Worked invocation 3: an infeasible extended equation, exit 1.
    let ext = write(
        dir.path(),
        "ext.json",
        r#"{"semifield":"max-plus","A":[[0],[0]],"b":[4,6],"d":[3,5]}"#,
    );
    let out = tropic(&["extended", "--input", &ext]);
    if out.status.code() != Some(1) {
        failures.push(format!(
            "infeasible extended exited {:?}, expected 1",
            out.status.code()
        ));
    } else {
        let v = stdout_json(&out);
        if v["solvable"] != Value::Bool(false) || v["reason"] != "b not ≤ d" {
            failures.push(format!("extended output unexpected: {v}"));
        }
    }

    // SVG: well-formed XML and identical bytes across repeated runs, for
    // both a distance plot and an extended-equation plot.
    let ext_ok = write(
        dir.path(),
        "ext_ok.json",
        r#"{"semifield":"max-plus","A":[[0],[0]],"b":[1,5],"d":[3,5]}"#,
    );
    let cases = [
        ("distance", &dist, "d1.svg", "d2.svg"),
        ("extended", &ext_ok, "e1.svg", "e2.svg"),
    ];
    for (cmd, input, first, second) in cases {
        let p1 = dir.path().join(first);
        let p2 = dir.path().join(second);
        let out1 = tropic(&[cmd, "--input", input, "--svg", p1.to_str().unwrap()]);
        let out2 = tropic(&[cmd, "--input", input, "--svg", p2.to_str().unwrap()]);
        if !out1.status.success() || !out2.status.success() {
            failures.push(format!("{cmd} with --svg failed"));
            continue;
        }
        let svg1 = std::fs::read(&p1).unwrap();
        let svg2 = std::fs::read(&p2).unwrap();
        if svg1 != svg2 {
            failures.push(format!("{cmd} SVG output is not byte-deterministic"));
        }
        let text = String::from_utf8(svg1).expect("SVG is UTF-8");
        if let Err(e) = roxmltree::Document::parse(&text) {
            failures.push(format!("{cmd} SVG is not well-formed XML: {e}"));
        } else if !text.contains("<svg") || !text.contains("</svg>") {
            failures.push(format!("{cmd} SVG lacks an svg root"));
        }
    }

    conclude(
        "criterion 11: CLI round-trip, documented exit codes, deterministic well-formed SVG",
        failures.is_empty(),
        &format!("{} failures: {:?}", failures.len(), failures.first()),
    );
}

#[test]
fn exit_codes_cover_the_documented_error_classes() {
    let dir = TempDir::new().unwrap();
    let checks: Vec<(&str, Vec<String>, i32)> = vec![
        (
            "malformed json",
            vec![
                "solve".into(),
                "--input".into(),
                write(dir.path(), "bad.json", "not json"),
            ],
            2,
        ),
        (
            "wrong token glyph",
            vec![
                "solve".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "glyph.json",
                    "{\"semifield\":\"max-plus\",\"A\":[[1],[\"\u{2212}inf\"]],\"d\":[3,5]}",
                ),
            ],
            2,
        ),
        (
            "dimension mismatch",
            vec![
                "solve".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "dim.json",
                    r#"{"semifield":"max-plus","A":[[1,2]],"d":[1,2]}"#,
                ),
            ],
            3,
        ),
        (
            "unknown semifield",
            vec![
                "solve".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "sf.json",
                    r#"{"semifield":"max-min","A":[[1]],"d":[1]}"#,
                ),
            ],
            4,
        ),
        (
            "carrier violation",
            vec![
                "solve".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "car.json",
                    r#"{"semifield":"max-times","A":[[-2]],"d":[1]}"#,
                ),
            ],
            5,
        ),
        (
            "missing field",
            vec![
                "system".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "nof.json",
                    r#"{"semifield":"max-plus","A":[[1]],"d":[1]}"#,
                ),
            ],
            6,
        ),
        (
            "capacity",
            vec![
                "solve-all".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "cap.json",
                    r#"{"semifield":"max-plus","A":[[1,3],[2,1]],"d":[4,5]}"#,
                ),
                "--cap".into(),
                "1".into(),
            ],
            7,
        ),
        (
            "unsupported plot",
            vec![
                "solve".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "tall.json",
                    r#"{"semifield":"max-plus","A":[[1],[2],[3]],"d":[1,2,3]}"#,
                ),
                "--svg".into(),
                dir.path().join("x.svg").to_string_lossy().into_owned(),
            ],
            8,
        ),
        (
            "missing file",
            vec![
                "solve".into(),
                "--input".into(),
                dir.path()
                    .join("absent.json")
                    .to_string_lossy()
                    .into_owned(),
            ],
            9,
        ),
        (
            "precondition",
            vec![
                "membership".into(),
                "--input".into(),
                write(
                    dir.path(),
                    "zd.json",
                    r#"{"semifield":"max-plus","A":[[1],[2]],"d":["-inf","-inf"]}"#,
                ),
            ],
            11,
        ),
    ];
    for (label, args, expected) in checks {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = tropic(&argv);
        assert_eq!(out.status.code(), Some(expected), "{label}: {:?}", out);
    }

    // the invalid-option class comes through the environment override
    let solvable = write(
        dir.path(),
        "ok.json",
        r#"{"semifield":"max-plus","A":[[1,3],[2,1]],"d":[4,5]}"#,
    );
    let out = Command::new(env!("CARGO_BIN_EXE_tropic"))
        .args(["solve-all", "--input", &solvable])
        .env("TROPIC_CAP", "zzz")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(10), "invalid TROPIC_CAP: {out:?}");
}

#[test]
fn environment_cap_applies_and_flag_wins() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "two.json",
        r#"{"semifield":"max-plus","A":[[1,3],[2,1]],"d":[4,5]}"#,
    );
    let tight = Command::new(env!("CARGO_BIN_EXE_tropic"))
        .args(["solve-all", "--input", &input])
        .env("TROPIC_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(tight.status.code(), Some(7));
    let widened = Command::new(env!("CARGO_BIN_EXE_tropic"))
        .args(["solve-all", "--input", &input, "--cap", "4"])
        .env("TROPIC_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(widened.status.code(), Some(0), "{widened:?}");
}

#[test]
fn outputs_are_written_to_files_on_request() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "sys.json",
        r#"{"semifield":"max-plus","A":[[0,2],[2,0]],"d":[2,2],"C":[[0,0]],"b":[1]}"#,
    );
    let outfile = dir.path().join("result.json");
    let out = tropic(&[
        "system",
        "--input",
        &input,
        "--output",
        outfile.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&outfile).unwrap()).unwrap();
    assert_eq!(v["solvable"], Value::Bool(true));
    assert_eq!(v["family"][0]["fixed"]["1"], Value::from(0));
    assert_eq!(v["family"][0]["fixed"]["2"], Value::from(0));

    // the infeasible variant of the same system exits 1
    let tight = write(
        dir.path(),
        "sys2.json",
        r#"{"semifield":"max-plus","A":[[0,2],[2,0]],"d":[2,2],"C":[[0,0]],"b":[-1]}"#,
    );
    let out = tropic(&["system", "--input", &tight]);
    assert_eq!(out.status.code(), Some(1), "{out:?}");
}

#[test]
fn extended_command_reports_the_solving_family() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "ext.json",
        r#"{"semifield":"max-plus","A":[[0],[0]],"b":[1,5],"d":[3,5]}"#,
    );
    let out = tropic(&["extended", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{out:?}");
    let v = stdout_json(&out);
    assert_eq!(v["solvable"], Value::Bool(true));
    assert_eq!(v["family"][0]["I"], serde_json::json!([1]));
    assert_eq!(v["family"][0]["fixed"]["1"], Value::from(3));
}

#[test]
fn tolerance_flag_loosens_comparisons() {
    let dir = TempDir::new().unwrap();
    // the residual of this instance is 1 in the additive scale
    let input = write(
        dir.path(),
        "near.json",
        r#"{"semifield":"max-plus","A":[[0],[0]],"d":[3,5]}"#,
    );
    let out = tropic(&["membership", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["member"], Value::Bool(false));

    let out = tropic(&["membership", "--input", &input, "--tolerance", "1.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["member"], Value::Bool(true));
}

#[test]
fn uniqueness_check_is_opt_in() {
    let dir = TempDir::new().unwrap();
    let unique = write(
        dir.path(),
        "unique.json",
        r#"{"semifield":"max-plus","A":[[0,2],[2,0]],"d":[2,2]}"#,
    );
    let out = tropic(&["solve", "--input", &unique]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out).get("unique").is_none());

    let out = tropic(&["solve", "--input", &unique, "--check-uniqueness"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["unique"], Value::Bool(true));

    let loose = write(
        dir.path(),
        "loose.json",
        r#"{"semifield":"max-plus","A":[[1,3],[2,1]],"d":[4,5],"options":{"check_uniqueness":true}}"#,
    );
    let out = tropic(&["solve", "--input", &loose]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["unique"], Value::Bool(false));
}

#[test]
fn remaining_commands_answer_with_exit_zero() {
    let dir = TempDir::new().unwrap();
    let input = write(
        dir.path(),
        "cols.json",
        r#"{"semifield":"max-plus","A":[[0,1,0],[0,1,2]],"d":[1,1]}"#,
    );
    let out = tropic(&["basis", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["kept"], serde_json::json!([2, 3]));

    let out = tropic(&["independent", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out)["independent"], Value::Bool(false));

    let out = tropic(&["membership", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["member"], Value::Bool(true));

    let out = tropic(&["inequality", "--input", &input]);
    assert_eq!(out.status.code(), Some(0));
}
