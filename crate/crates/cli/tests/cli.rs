use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ballotmat"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(args: &[&str], stdin: &str) -> String {
    let out = run(args, stdin);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str], stdin: &str) -> Value {
    serde_json::from_str(&stdout(args, stdin)).unwrap()
}

const RHO_BEFORE: &str =
    r#"{"m":4,"rows":[[[[2],[6]],[],[],[]],[[[3]],[],[[4]]],[[],[[1]]],[[[5]]]]}"#;
const RHO_AFTER: &str =
    r#"{"m":5,"rows":[[[[2],[6]],[],[],[],[]],[[],[],[],[[4]]],[[[3]],[],[]],[[],[[1]]],[[[5]]]]}"#;

#[test]
fn counts() {
    assert_eq!(stdout(&["count", "lio", "--n", "3"], ""), "19\n");
    assert_eq!(
        stdout(&["count", "kappa", "--n", "8", "--set", "3,5,6,7"], ""),
        "240\n"
    );
    assert_eq!(
        stdout(&["count", "lio", "--n", "5", "--json"], ""),
        "{\"value\":\"3451\"}\n"
    );
    assert_eq!(stdout(&["count", "alpha", "--n", "4"], ""), "1\n");
    assert_eq!(
        stdout(&["count", "beta", "--n", "4", "--set", "2"], ""),
        "5\n"
    );
    assert_eq!(
        stdout(&["count", "lambda", "--n", "3", "--set", "1,2"], ""),
        "1\n"
    );
}

#[test]
fn cross_checked_methods() {
    let text = stdout(
        &[
            "count",
            "lio",
            "--n",
            "4",
            "--method",
            "formula,pairs,oracle,fixed-points",
        ],
        "",
    );
    assert_eq!(
        text,
        "formula: 207\npairs: 207\noracle: 207\nfixed-points: 207\nagree\n"
    );
    let v = json(
        &[
            "count",
            "lio",
            "--n",
            "3",
            "--method",
            "formula-alt,pairs-alt",
            "--json",
        ],
        "",
    );
    assert_eq!(v["agree"], true);
    assert_eq!(v["values"]["formula-alt"], "19");
}

#[test]
fn jobs_do_not_change_output() {
    let one = stdout(&["count", "lio", "--n", "16"], "");
    let many = stdout(&["count", "lio", "--n", "16", "--jobs", "5"], "");
    assert_eq!(one, many);
}

#[test]
fn enumerate_streams_one_object_per_line() {
    let fixed = stdout(&["enumerate", "fixed-points", "--n", "3", "--json"], "");
    assert_eq!(fixed.lines().count(), 19);
    for line in fixed.lines() {
        let v: Value = serde_json::from_str(line).unwrap();
        assert!(v["m"].is_u64());
    }
    assert_eq!(
        stdout(&["enumerate", "interval-orders", "--n", "4", "--json"], "")
            .lines()
            .count(),
        207
    );
    let matrices = stdout(&["enumerate", "ballot-matrices", "--n", "2", "--json"], "");
    assert_eq!(matrices.lines().count(), 7);
    assert_eq!(
        stdout(&["enumerate", "interval-orders", "--n", "2"], ""),
        "1, 2\n1<2\n2<1\n"
    );
}

#[test]
fn output_is_deterministic() {
    let args = ["enumerate", "ballot-matrices", "--n", "3", "--json"];
    assert_eq!(stdout(&args, ""), stdout(&args, ""));
}

#[test]
fn construction_choice_maps() {
    let cc = r#"{"n":8,"S":[3,5,6,7],"digits":[4,2,0,0,1,0,0,0]}"#;
    assert_eq!(
        stdout(&["map", "cc-to-perm"], cc),
        "{\"perm\":[6,5,7,8,3,4,2,1]}\n"
    );
    assert_eq!(
        stdout(&["map", "cc-to-invtab"], cc),
        "{\"invtab\":[7,5,0,0,3,0,0,0]}\n"
    );
    assert_eq!(
        stdout(&["map", "cc-to-invtab", "--missing"], cc),
        "{\"invtab\":[7,6,4,2,3,0,0,0]}\n"
    );
    assert_eq!(
        stdout(&["map", "cc-to-ballot"], cc),
        "{\"ballot\":[[6],[1,2,3,5],[7],[4],[8]]}\n"
    );
}

#[test]
fn matrix_maps() {
    assert_eq!(stdout(&["map", "rho"], RHO_BEFORE).trim_end(), RHO_AFTER);
    assert_eq!(
        stdout(&["map", "rho-inverse"], RHO_AFTER).trim_end(),
        RHO_BEFORE
    );
    let mut got: Vec<String> = stdout(&["enumerate", "fixed-points", "--n", "2", "--json"], "")
        .lines()
        .map(|line| stdout(&["map", "decompose"], line).trim_end().to_string())
        .collect();
    let expected = [
        r#"{"perm":[1,2],"invtab":[1,0]}"#,
        r#"{"perm":[2,1],"invtab":[0,0]}"#,
        r#"{"perm":[2,1],"invtab":[1,0]}"#,
    ];
    got.sort();
    assert_eq!(got, expected);
    for line in stdout(&["enumerate", "ballot-matrices", "--n", "2", "--json"], "").lines() {
        let once = stdout(&["map", "eta"], line);
        assert_eq!(stdout(&["map", "eta"], &once).trim_end(), line);
        assert_eq!(
            json(&["map", "matrix-to-poset"], line),
            json(&["map", "matrix-to-poset"], &once)
        );
    }
    let poset = json(
        &["map", "matrix-to-poset"],
        r#"{"m":2,"rows":[[[[1]],[]],[[[2]]]]}"#,
    );
    assert_eq!(poset.to_string(), r#"{"elements":[1,2],"less":[[1,2]]}"#);
}

#[test]
fn verify_suites_pass() {
    for suite in ["involution", "preservation"] {
        let text = stdout(&["verify", suite, "--n", "3"], "");
        assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    }
    for suite in ["bijections", "counts"] {
        let text = stdout(&["verify", suite, "--n", "5", "--jobs", "2"], "");
        assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
    }
}

#[test]
fn exit_codes() {
    let code = |args: &[&str], stdin: &str| run(args, stdin).status.code();
    assert_eq!(code(&["map", "eta"], "{\"m\":"), Some(2));
    assert_eq!(
        code(
            &["map", "cc-to-perm"],
            r#"{"n":3,"S":[5],"digits":[0,0,0]}"#
        ),
        Some(2)
    );
    assert_eq!(code(&["map", "decompose"], RHO_BEFORE), Some(2));
    assert_eq!(
        code(&["map", "rho"], r#"{"m":1,"rows":[[[[1]]]]}"#),
        Some(2)
    );
    assert_eq!(code(&["count", "lio", "--n", "3", "--bogus"], ""), Some(2));
    assert_eq!(
        code(&["count", "kappa", "--n", "3", "--set", "x"], ""),
        Some(2)
    );
    assert_eq!(
        code(&["enumerate", "ballot-matrices", "--n", "9"], ""),
        Some(3)
    );
    assert_eq!(code(&["count", "lio", "--n", "40"], ""), Some(3));
    assert_eq!(code(&["verify", "involution", "--n", "6"], ""), Some(3));
    let out = run(&["map", "eta"], "not json");
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid JSON"));
}
