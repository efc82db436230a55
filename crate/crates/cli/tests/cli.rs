use std::fs;
use std::process::{Command, Output};

use ocgen_core::OrderConditionSystem;

fn ocgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ocgen"))
        .args(args)
        .env_remove("OCGEN_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn lyndon_lists_one_word_per_line() {
    let out = stdout(&ocgen(&["lyndon", "--alphabet", "2", "--degree", "5"]));
    assert_eq!(out, "AAAAB\nAAABB\nAABAB\nAABBB\nABABB\nABBBB\n");
    let bracketed = stdout(&ocgen(&["lyndon", "--degree", "3", "--bracket"]));
    assert_eq!(
        bracketed.lines().next().unwrap(),
        "AAB\t[A,[A,B]]\t+1*AAB -2*ABA +1*BAA"
    );
    let three = stdout(&ocgen(&["lyndon", "--alphabet", "3", "--degree", "2"]));
    assert_eq!(three, "AB\nAC\nBC\n");
}

#[test]
fn gen_with_leading_block() {
    let out = stdout(&ocgen(&[
        "gen",
        "--stages",
        "2",
        "--order",
        "2",
        "--leading",
    ]));
    assert!(out.contains("OC[2]\n  [2*a[2]*b[1]-1]\n"), "{out}");
    assert!(
        out.contains("LEAD[3]\n  [3*a[2]^2*b[1]-1,\n   3*a[2]*b[1]^2-1]\n"),
        "{out}"
    );
}

#[test]
fn workers_do_not_change_bytes() {
    let base = ["gen", "--stages", "5", "--order", "5", "--format", "json"];
    let serial = stdout(&ocgen(&[&base[..], &["--workers", "1"]].concat()));
    for w in ["2", "3", "7"] {
        assert_eq!(
            serial,
            stdout(&ocgen(&[&base[..], &["--workers", w]].concat())),
            "workers {w}"
        );
    }
    let env = Command::new(env!("CARGO_BIN_EXE_ocgen"))
        .args(base)
        .env("OCGEN_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(serial, stdout(&env));
}

#[test]
fn json_output_round_trips_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sys.json");
    let out = ocgen(&[
        "gen",
        "--stages",
        "3",
        "--order",
        "3",
        "--ansatz",
        "sym-b",
        "--fix",
        "a1=1/3",
        "--format",
        "json",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success() && out.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    let system = OrderConditionSystem::from_json(&text).unwrap();
    assert_eq!(system.to_json(), text);
    let value: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(value["spec"]["ansatz"], "sym-b");
    assert_eq!(value["spec"]["fixed"]["a[1]"], "1/3");
}

#[test]
fn verify_reports_exact_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let sys = dir.path().join("sys.json");
    let strang = dir.path().join("strang.json");
    let lt = dir.path().join("lt.json");
    assert!(ocgen(&[
        "gen",
        "--stages",
        "2",
        "--order",
        "2",
        "--format",
        "json",
        "--output",
        sys.to_str().unwrap()
    ])
    .status
    .success());
    fs::write(&strang, r#"{"a":["1/2","1/2"],"b":["1","0"]}"#).unwrap();
    fs::write(&lt, r#"{"a":["1","0"],"b":["1","0"]}"#).unwrap();

    let ok = stdout(&ocgen(&[
        "verify",
        "--system",
        sys.to_str().unwrap(),
        "--coeffs",
        strang.to_str().unwrap(),
    ]));
    assert!(
        ok.ends_with("status: pass (max |residual| 0.000e0, tol 0e0)\n"),
        "{ok}"
    );
    let bad = stdout(&ocgen(&[
        "verify",
        "--system",
        sys.to_str().unwrap(),
        "--coeffs",
        lt.to_str().unwrap(),
    ]));
    assert!(bad.contains("q=2 AB -1 FAIL"), "{bad}");
    assert!(bad.contains("status: fail"));
}

#[test]
fn estimate_order_prints_the_fit() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("strang.json");
    fs::write(&coeffs, r#"{"a":["1/2","1/2"],"b":["1","0"]}"#).unwrap();
    let out = stdout(&ocgen(&[
        "estimate-order",
        "--coeffs",
        coeffs.to_str().unwrap(),
        "--seed",
        "3",
    ]));
    let slope: f64 = out
        .lines()
        .find_map(|l| l.strip_prefix("slope: "))
        .unwrap()
        .parse()
        .unwrap();
    assert!((slope - 3.0).abs() < 0.2, "{out}");
    assert_eq!(out.lines().filter(|l| l.starts_with("h=")).count(), 8);
}

#[test]
fn usage_errors_exit_2_and_name_the_flag() {
    let cases: [(&[&str], &str); 7] = [
        (
            &["gen", "--stages", "2", "--order", "2", "--ansatz", "wobbly"],
            "--ansatz",
        ),
        (
            &[
                "gen",
                "--stages",
                "2",
                "--order",
                "2",
                "--operators",
                "3",
                "--ansatz",
                "palindromic",
            ],
            "--ansatz",
        ),
        (
            &["gen", "--stages", "2", "--order", "2", "--fix", "z9=1"],
            "--fix",
        ),
        (
            &[
                "gen", "--stages", "2", "--order", "2", "--fix", "a1=1", "--fix", "a1=2",
            ],
            "--fix",
        ),
        (&["gen", "--stages", "0", "--order", "2"], "--stages"),
        (
            &["gen", "--stages", "2", "--order", "2", "--workers", "0"],
            "--workers",
        ),
        (
            &[
                "verify",
                "--system",
                "/nonexistent/sys.json",
                "--coeffs",
                "x.json",
            ],
            "--system",
        ),
    ];
    for (args, flag) in cases {
        let out = ocgen(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = stderr(&out);
        assert_eq!(err.lines().count(), 1, "{err}");
        assert!(err.contains(flag), "{args:?}: {err}");
    }
    let unknown = ocgen(&["gen", "--stages", "2", "--order", "2", "--frobnicate"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(stderr(&unknown).contains("--frobnicate"));
}

#[test]
fn contradicting_ansatz_and_fixed_value_is_rejected() {
    // sym-b forces b2 = 0 for two stages
    let out = ocgen(&[
        "gen", "--stages", "2", "--order", "2", "--ansatz", "sym-b", "--fix", "b2=1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--fix"));
}
