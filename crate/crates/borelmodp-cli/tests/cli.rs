use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_borelmodp")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["verify", "lucas", "--p", "2,3"]).status.code(), Some(0));
    // a window too small for the generator fails the point, not the run
    let small = run(&["verify", "theoremD", "--p", "2", "--n", "2", "--window", "2,1,1"]);
    assert_eq!(small.status.code(), Some(1));
    assert!(stdout(&small).contains("rerun: borelmodp verify theoremD --p 2 --n 2 --window 2,1,1"));
    assert_eq!(run(&["verify", "lucas", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nosuchsuite"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "del", "--window", "1,2"]).status.code(), Some(2));
}

#[test]
fn list_names_every_suite() {
    let out = stdout(&run(&["verify", "--list"]));
    for s in ["lucas", "nultheta", "acbormu", "theoremD", "reduce", "all"] {
        assert!(out.lines().any(|l| l == s), "{s} missing");
    }
}

#[test]
fn json_report_is_reproducible() {
    let args = ["verify", "cosets", "--p", "2,3", "--trials", "5", "--seed", "7", "--json", "-"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["seed"], 7);
    assert_eq!(v["summary"]["pass"], 2);
    assert_eq!(v["records"][0]["params"]["p"], "2");
    assert!(v["records"][0].get("elapsed_ms").is_none());
    // the text lines went to stderr
    assert!(String::from_utf8_lossy(&a.stderr).contains("PASS cosets p=2"));
}

#[test]
fn json_report_to_a_file_with_timings() {
    let dir = std::env::temp_dir().join(format!("borelmodp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let o = run(&["verify", "prbin", "--p", "2", "--n", "2", "--json", path.to_str().unwrap(), "--timings"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(v["records"][0]["elapsed_ms"].is_number());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn skipped_exponents_are_reported() {
    // h = 3 is a multiple of p^n - 1 for p = 2, n = 2
    let o = run(&["verify", "psiomeg", "--p", "2", "--n", "2", "--h", "1,3", "--json", "-"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let verdicts: Vec<&str> = v["records"].as_array().unwrap().iter().map(|r| r["verdict"].as_str().unwrap()).collect();
    assert!(verdicts.contains(&"skipped"), "{verdicts:?}");
    assert!(verdicts.contains(&"pass"), "{verdicts:?}");
}

#[test]
fn show_objects() {
    assert_eq!(stdout(&run(&["show", "v_kn", "--p", "2", "--n", "2", "--k", "1"])).trim(), "(0,1,0,1)");
    assert_eq!(stdout(&run(&["show", "digit_profile", "--p", "3", "--n", "2", "--h", "2"])).trim(), "i=(1,1), hk=(0,1,4)");
    let m = stdout(&run(&["show", "pg_matrices", "--p", "3", "--n", "2", "--h", "2"]));
    assert!(m.contains("phi(e_1) = 2 * X^-4 * e_0"), "{m}");
    let j = run(&["show", "digit_profile", "--p", "3", "--n", "2", "--h", "2", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&j.stdout).unwrap();
    assert_eq!(v["object"], "digit_profile");
    assert_eq!(v["lines"][0], "i=(1,1), hk=(0,1,4)");
    assert_eq!(run(&["show", "v_kn", "--p", "2", "--n", "2", "--k", "9"]).status.code(), Some(2));
}
