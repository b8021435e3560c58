use std::path::PathBuf;
use std::process::{Command, Output};

use idl::report::Report;
use idl::Rational;
use serde_json::{json, Value};

fn idl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idl"))
        .args(args)
        .env_remove("IDL_BUDGET")
        .output()
        .unwrap()
}

fn write_map(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("idl-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn tent_file() -> PathBuf {
    write_map(
        "tent.json",
        r#"{"domain": ["0", "1"], "nodes": [["0", "0"], ["1/2", "1"], ["1", "0"]]}"#,
    )
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

/// Every string in the document that looks numeric must be a canonical rational.
fn check_rationals(v: &Value) {
    match v {
        Value::String(s)
            if s.starts_with(|c: char| c.is_ascii_digit() || c == '-')
                && !s.contains(['/', '.']) =>
        {
            assert!(s.parse::<Rational>().is_ok(), "{s}")
        }
        Value::String(s)
            if s.contains('/') && !s.contains('.') && !s.contains(char::is_alphabetic) =>
        {
            let r: Rational = s.parse().unwrap_or_else(|e| panic!("{s}: {e}"));
            assert_eq!(&r.to_string(), s);
        }
        Value::Array(a) => a.iter().for_each(check_rationals),
        Value::Object(o) => o.values().for_each(check_rationals),
        _ => {}
    }
}

#[test]
fn order_commands_print_bare_payloads() {
    let out = idl(&["order", "compare", "3", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout_json(&out), json!({"precedes": true}));
    let out = idl(&["order", "compare", "2", "4"]);
    assert_eq!(stdout_json(&out), json!({"precedes": false}));
    let out = idl(&["order", "tail", "5", "--bound", "12"]);
    assert_eq!(
        stdout_json(&out),
        json!([1, 2, 4, 5, 6, 7, 8, 9, 10, 11, 12])
    );
    assert_eq!(idl(&["order", "compare", "0", "5"]).status.code(), Some(2));
}

#[test]
fn analyze_tent_and_identity() {
    let out = idl(&[
        "analyze",
        "--map",
        tent_file().to_str().unwrap(),
        "--max-period",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report: Report = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.command, "analyze");
    assert_eq!(
        report.results["periods"],
        json!((1..=10).collect::<Vec<_>>())
    );
    assert_eq!(report.results["is_tail"], true);
    assert_eq!(report.budget.laps_used, Some(1024));

    let id = write_map(
        "identity.json",
        r#"{"domain": ["0", "1"], "nodes": [["0", "0"], ["1", "1"]]}"#,
    );
    let out = idl(&[
        "analyze",
        "--map",
        id.to_str().unwrap(),
        "--max-period",
        "5",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["periods"], json!([1]));
    assert_eq!(v["results"]["is_tail"], true);
}

#[test]
fn witnesses_report_round_trips() {
    let map = tent_file();
    for cmd in [&["witnesses"][..], &["force", "witnesses"][..]] {
        let mut args = cmd.to_vec();
        args.extend([
            "--map",
            map.to_str().unwrap(),
            "--orbit",
            "2/7,4/7,6/7",
            "--max",
            "3",
        ]);
        let out = idl(&args);
        assert_eq!(
            out.status.code(),
            Some(0),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        let v = stdout_json(&out);
        check_rationals(&v["results"]);
        assert_eq!(v["results"]["context"]["v"], "4/7");
        assert_eq!(v["results"]["unified"]["p_m2"]["period"], 5);
        let report: Report = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(serde_json::to_value(&report).unwrap(), v);
    }
}

#[test]
fn orbits_and_constructions() {
    let out = idl(&[
        "orbits",
        "--map",
        tent_file().to_str().unwrap(),
        "--period",
        "4",
    ]);
    let v = stdout_json(&out);
    check_rationals(&v["results"]);
    assert_eq!(v["results"]["orbits"].as_array().unwrap().len(), 3);

    let out = idl(&["construct", "tn", "--n", "5"]);
    let v = stdout_json(&out);
    check_rationals(&v["results"]);
    assert_eq!(v["results"]["provenance"]["orbit"]["period"], 5);
    let map_text = serde_json::to_string(&v["results"]["map"]).unwrap();
    let t5 = write_map("t5.json", &map_text);
    let out = idl(&[
        "analyze",
        "--map",
        t5.to_str().unwrap(),
        "--max-period",
        "8",
    ]);
    assert_eq!(
        stdout_json(&out)["results"]["periods"],
        json!([1, 2, 4, 5, 6, 7, 8])
    );

    let out = idl(&["construct", "tinf", "--depth", "1"]);
    let v = stdout_json(&out);
    assert_eq!(
        v["results"]["provenance"]["chain"]
            .as_array()
            .unwrap()
            .len(),
        2
    );
    assert_eq!(
        stdout_json(&idl(&["construct", "tent"]))["results"]["map"]["nodes"][1],
        json!(["1/2", "1"])
    );
}

#[test]
fn graph_from_orbit_or_pattern() {
    let a = stdout_json(&idl(&["graph", "--orbit", "2/9,4/9,8/9"]));
    let b = stdout_json(&idl(&["force", "graph", "--orbit-pattern", "1>2,2>3,3>1"]));
    assert_eq!(a["results"]["adjacency"], json!([[1], [0, 1]]));
    assert_eq!(a["results"]["adjacency"], b["results"]["adjacency"]);
    assert_eq!(idl(&["graph", "--orbit", "1/3,2/3"]).status.code(), Some(2));
}

#[test]
fn exit_codes_follow_error_class() {
    let tent = tent_file();
    let tent = tent.to_str().unwrap();
    let budget = idl(&["orbits", "--map", tent, "--period", "12", "--budget", "100"]);
    assert_eq!(budget.status.code(), Some(3));
    assert_eq!(stdout_json(&budget)["error"]["class"], "budget-exceeded");

    let env = Command::new(env!("CARGO_BIN_EXE_idl"))
        .args(["analyze", "--map", tent, "--max-period", "12"])
        .env("IDL_BUDGET", "64")
        .output()
        .unwrap();
    assert_eq!(env.status.code(), Some(3));
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_idl"))
        .args([
            "analyze",
            "--map",
            tent,
            "--max-period",
            "6",
            "--budget",
            "1000",
        ])
        .env("IDL_BUDGET", "64")
        .output()
        .unwrap();
    assert_eq!(flag_wins.status.code(), Some(0));

    let bad = write_map(
        "bad.json",
        r#"{"domain": ["0", "1"], "nodes": [["0", "0"], ["1/2", "2/4"], ["1", "0"]]}"#,
    );
    let out = idl(&[
        "analyze",
        "--map",
        bad.to_str().unwrap(),
        "--max-period",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stdout_json(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .to_owned();
    assert!(
        msg.contains("line 1, column 58") && msg.contains("lowest terms"),
        "{msg}"
    );

    let gap = write_map(
        "gap.json",
        r#"{"domain": ["0", "1"], "nodes": [["0", "0"], ["1/2", "3/2"], ["1", "0"]]}"#,
    );
    let out = idl(&[
        "analyze",
        "--map",
        gap.to_str().unwrap(),
        "--max-period",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout_json(&out)["error"]["message"]
        .as_str()
        .unwrap()
        .contains("nodes[1]"));

    let not_orbit = idl(&["witnesses", "--map", tent, "--orbit", "1/7,2/7,3/7"]);
    assert_eq!(not_orbit.status.code(), Some(2));
    assert_eq!(idl(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        idl(&["analyze", "--map", "/nonexistent.json", "--max-period", "3"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn verbose_summary_goes_to_stderr() {
    let out = idl(&["--verbose", "order", "tail", "3", "--bound", "5"]);
    assert!(!out.stderr.is_empty());
    assert_eq!(stdout_json(&out), json!([1, 2, 3, 4, 5]));
    assert!(idl(&["order", "tail", "3", "--bound", "5"])
        .stderr
        .is_empty());
}

#[test]
fn run_is_callable_in_process() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = idl::cli::run(["idl", "order", "compare", "6", "12"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(
        serde_json::from_slice::<Value>(&out).unwrap(),
        json!({"precedes": true})
    );
}
