use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn padicfeas(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_padicfeas"))
        .args(args)
        .env_remove("PADICFEAS_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

const UNSAT: &str = "c every sign pattern over one triple\np cnf 3 8\n\
    1 2 3 0\n-1 2 3 0\n1 -2 3 0\n-1 -2 3 0\n1 2 -3 0\n-1 2 -3 0\n1 -2 -3 0\n-1 -2 -3 0\n";

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn decide_binomial_examples() {
    let out = padicfeas(&["decide-binomial", "1", "2", "-7", "0", "--prime", "7"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["rule"], "valuation-mismatch");

    let out = padicfeas(&["decide-binomial", "1", "2", "-2", "0", "--prime", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["feasible"], true);

    let out = padicfeas(&["decide-binomial", "1", "2", "-17", "0", "--prime", "2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["rule"], "two-adic");
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(
        code(&padicfeas(&[
            "decide-binomial",
            "1",
            "2",
            "x",
            "0",
            "--prime",
            "7"
        ])),
        2
    );
    assert_eq!(
        code(&padicfeas(&[
            "decide-binomial",
            "1",
            "2",
            "-2",
            "0",
            "--prime",
            "8"
        ])),
        2
    );
    assert_eq!(
        code(&padicfeas(&["decide", "--expr", "x^^2", "--prime", "7"])),
        2
    );
    assert_eq!(code(&padicfeas(&["reduce", "/nonexistent.cnf"])), 2);
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cnf", "p cnf 3 1\n1 2 3 4 0\n");
    assert_eq!(code(&padicfeas(&["reduce", &bad])), 2);
}

#[test]
fn caps_exit_3() {
    let out = padicfeas(&[
        "decide",
        "--expr",
        "x^3 + x + 1",
        "--prime",
        "3",
        "--max-degree",
        "2",
    ]);
    assert_eq!(code(&out), 3);
    let out = padicfeas(&["find-prime", "6", "--strategy", "scan", "--k-max", "1"]);
    assert_eq!(code(&out), 3);
    let out = padicfeas(&["density", "1:1000", "--sieve-cap", "100"]);
    assert_eq!(code(&out), 3);
    let dir = tempfile::tempdir().unwrap();
    let big = write(dir.path(), "big.cnf", "p cnf 7 1\n1 2 7 0\n");
    assert_eq!(code(&padicfeas(&["reduce", &big])), 3);
}

#[test]
fn decide_from_file_and_expression() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "f.json", r#"{"terms":[["-2","0"],["1","2"]]}"#);
    let out = padicfeas(&["decide", &file, "--prime", "7"]);
    assert_eq!(code(&out), 0);
    let out = padicfeas(&["decide", "--expr", "x^2 - 3", "--prime", "7"]);
    assert_eq!(code(&out), 1);
    let out = padicfeas(&["decide", "--expr", "x^3 - x - 1", "--prime", "3"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn degenerate_roots() {
    let out = padicfeas(&["degenerate", "--expr", "x^4 - 4x^2 + 4", "--prime", "7"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["degenerate_root"], true);
    let out = padicfeas(&["degenerate", "--expr", "x^2 - 2", "--prime", "7"]);
    assert_eq!(code(&out), 1);
    let out = padicfeas(&[
        "degenerate",
        "--expr",
        "x^2 - 2",
        "--prime",
        "7",
        "--square",
    ]);
    assert_eq!(code(&out), 0);
    let out = padicfeas(&[
        "degenerate",
        "--expr",
        "x^2 - 3",
        "--prime",
        "7",
        "--square",
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn find_prime_and_density() {
    let out = padicfeas(&["find-prime", "3", "--strategy", "scan"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["p"], "31");
    let a = padicfeas(&["--seed", "4", "find-prime", "5"]);
    let b = padicfeas(&["find-prime", "5", "--seed", "4"]);
    assert_eq!(a.stdout, b.stdout);

    let out = padicfeas(&["density", "1:10000", "2:10000"]);
    assert_eq!(code(&out), 0);
    let reports = json(&out);
    assert_eq!(reports[0]["count"], 1229);
    assert_eq!(reports[1]["count"], 1228);
}

#[test]
fn reduce_satisfiable_and_unsatisfiable() {
    let dir = tempfile::tempdir().unwrap();
    let sat = write(dir.path(), "sat.cnf", "p cnf 3 2\n1 -2 3 0\n-1 2 0\n");
    let out = padicfeas(&["reduce", &sat]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    assert_eq!(report["verdict"], true);
    let witness = report["transcripts"][0]["witness"]["bits"]
        .as_array()
        .unwrap();
    let bits: Vec<bool> = witness.iter().map(|b| b.as_bool().unwrap()).collect();
    // Truth-table check of the decoded assignment.
    assert!((bits[0] || !bits[1] || bits[2]) && (!bits[0] || bits[1]));
    assert!(String::from_utf8_lossy(&out.stderr).contains("satisfies the formula"));

    let unsat = write(dir.path(), "unsat.cnf", UNSAT);
    for mode in ["randomized", "deterministic"] {
        let out = padicfeas(&["reduce", &unsat, "--mode", mode]);
        assert_eq!(code(&out), 1, "{mode}");
    }
}

#[test]
fn reduce_is_reproducible_and_verifiable() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(
        dir.path(),
        "b.cnf",
        "p cnf 4 4\n1 -2 3 0\n-1 4 0\n2 3 -4 0\n-3 0\n",
    );
    let t1 = dir.path().join("t1.json");
    let t2 = dir.path().join("t2.json");
    let first = padicfeas(&["--seed", "9", "reduce", &cnf, "--out", t1.to_str().unwrap()]);
    let second = Command::new(env!("CARGO_BIN_EXE_padicfeas"))
        .args(["reduce", &cnf, "--out", t2.to_str().unwrap()])
        .env("PADICFEAS_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(&t1).unwrap(), fs::read(&t2).unwrap());

    let ok = padicfeas(&["verify-transcript", t1.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    assert_eq!(json(&ok)["ok"], true);

    let single = dir.path().join("single.json");
    let out = padicfeas(&[
        "reduce",
        &cnf,
        "--repeats",
        "1",
        "--out",
        single.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        code(&padicfeas(&["verify-transcript", single.to_str().unwrap()])),
        0
    );

    let mut report: Value = serde_json::from_slice(&fs::read(&t1).unwrap()).unwrap();
    report["transcripts"][0]["verdict"] = Value::Bool(false);
    let tampered = write(dir.path(), "tampered.json", &report.to_string());
    let out = padicfeas(&["verify-transcript", &tampered]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["ok"], false);

    let mut report: Value = serde_json::from_slice(&fs::read(&single).unwrap()).unwrap();
    report["combination"]["a"][0] = Value::String("1".into());
    let tampered = write(dir.path(), "tampered2.json", &report.to_string());
    assert_eq!(code(&padicfeas(&["verify-transcript", &tampered])), 1);

    let garbage = write(dir.path(), "garbage.json", "{\"hello\": 1}");
    assert_eq!(code(&padicfeas(&["verify-transcript", &garbage])), 2);
}

#[test]
fn threads_do_not_change_results() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = write(
        dir.path(),
        "b.cnf",
        "p cnf 5 5\n1 -2 3 0\n-1 4 5 0\n2 -5 0\n-3 -4 0\n1 5 0\n",
    );
    let one = padicfeas(&["reduce", &cnf, "--threads", "1"]);
    let four = padicfeas(&["reduce", &cnf, "--threads", "4"]);
    assert_eq!(one.stdout, four.stdout);
}
