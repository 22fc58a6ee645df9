use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_globrep"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn finite_spectrum_is_three_discrete_points() {
    for fam in ["cyclic_p(2,2)", "cyclic_p(3,2)", "elementary_abelian(2,2)"] {
        let o = run(&["spectrum", "--family", fam]);
        assert_eq!(code(&o), 0, "{fam}");
        assert!(
            stdout(&o).starts_with("3 points, discrete"),
            "{}",
            stdout(&o)
        );
    }
}

#[test]
fn unbounded_spectrum_is_one_point_compactification() {
    for fam in ["cyclic_p(2)", "elementary_abelian(2)"] {
        let o = run(&["spectrum", "--family", fam]);
        assert_eq!(code(&o), 0);
        assert!(stdout(&o).contains("ℕ* (one-point compactification)"));
    }
    let o = run(&[
        "spectrum",
        "--family",
        "abelian_p(2,16)",
        "--truncation",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn member_prints_verdict_and_writes_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let o = run(&[
        "member",
        "--family",
        "cyclic_p(2,2)",
        "--object",
        "chi:C4",
        "--ideal",
        "e:C2",
        "--out",
        cert.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("true"));
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cert).unwrap()).unwrap();
    assert!(written.is_object());

    let o = run(&[
        "member",
        "--family",
        "cyclic_p(2,2)",
        "--object",
        "chi:C2",
        "--ideal",
        "e:C4",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().next(), Some("false"));
}

#[test]
fn symbolic_membership_over_unbounded_family() {
    let o = run(&[
        "member",
        "--family",
        "cyclic_p(2)",
        "--object",
        "chi_3",
        "--ideal",
        "gamma_1",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["member"], true);
    let o = run(&[
        "member",
        "--family",
        "cyclic_p(2)",
        "--object",
        "chi_1",
        "--ideal",
        "gamma_1",
        "--format",
        "json",
    ]);
    assert_eq!(json(&o)["member"], false);
    let o = run(&[
        "member",
        "--family",
        "cyclic_p(2)",
        "--object",
        "chi:C2",
        "--ideal",
        "gamma_1",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(
        code(&run(&[
            "support",
            "--family",
            "cyclic_p(2,2)",
            "--object",
            "chi:C8"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "support",
            "--family",
            "cyclic_q(2)",
            "--object",
            "unit"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "support",
            "--family",
            "cyclic_p(2,2)",
            "--object",
            "bogus"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "decompose",
            "--family",
            "cyclic_p(2)",
            "--object",
            "chi_1"
        ])),
        2
    );
    assert_eq!(
        code(&run(&[
            "support",
            "--family",
            "/nonexistent/family.json",
            "--object",
            "unit"
        ])),
        2
    );
}

#[test]
fn guard_exhaustion_exits_three() {
    let o = run(&["spectrum", "--family", "abelian_p(2,8)", "--budget", "2"]);
    assert_eq!(code(&o), 3);
}

#[test]
fn json_output_is_deterministic() {
    let args = [
        "check",
        "--family",
        "cyclic_p(2,2)",
        "--seed",
        "7",
        "--format",
        "json",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 7);
}

#[test]
fn object_file_round_trips_through_validate_and_support() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.json");
    let path = file.to_str().unwrap();
    let o = run(&[
        "report",
        "--family",
        "elementary_abelian(2,2)",
        "--object",
        "e:C2xC2+chi:C2",
        "--out",
        path,
    ]);
    assert_eq!(code(&o), 0);
    let o = run(&["validate", "--object", path]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = run(&["support", "--object", path, "--format", "json"]);
    assert_eq!(
        json(&o)["supports"][0]["support"],
        serde_json::json!(["C2", "C2xC2"])
    );
    let o = run(&["support", "--family", "cyclic_p(2,2)", "--object", path]);
    assert_eq!(code(&o), 2);
}

#[test]
fn validate_reports_broken_object_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("x.json");
    let path = file.to_str().unwrap();
    run(&[
        "report",
        "--family",
        "cyclic_p(2,2)",
        "--object",
        "unit",
        "--out",
        path,
    ]);
    let mut v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    // Zero out every transition: identities then fail.
    for (_, m) in v["transitions"].as_object_mut().unwrap().iter_mut() {
        for row in m.as_array_mut().unwrap() {
            for entry in row.as_array_mut().unwrap() {
                *entry = serde_json::json!("0");
            }
        }
    }
    std::fs::write(&file, v.to_string()).unwrap();
    let o = run(&["validate", "--object", path, "--format", "json"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let report = json(&o);
    assert_eq!(report["objects"][0]["valid"], false);
    assert!(!report["objects"][0]["violations"]
        .as_array()
        .unwrap()
        .is_empty());
}

#[test]
fn family_file_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("fam.json");
    std::fs::write(&file, r#"{"kind":"cyclic_p","p":3,"max_exponent":1}"#).unwrap();
    let o = run(&[
        "spectrum",
        "--family",
        file.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert_eq!(json(&o)["summary"], "2 points, discrete");
    assert!(Path::new(&file).exists());
}

#[test]
fn kan_and_decompose_succeed() {
    let o = run(&[
        "kan",
        "--family",
        "cyclic_p(3,2)",
        "--object",
        "e:C3+unit",
        "--truncation",
        "3",
    ]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("exact true"));
    let o = run(&[
        "decompose",
        "--family",
        "cyclic_p(2,2)",
        "--object",
        "unit+e:C4",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verified"], true);
}
