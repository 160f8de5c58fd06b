use std::process::{Command, Output};

use serde_json::Value;

use weyl_commute::curve::SpectralCurve;
use weyl_commute::poly::{Poly, Var};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weyl-commute"))
        .args(args)
        .env_remove("WEYL_COMMUTE_MAX_TERMS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn curve_json(genus: u32, f: Poly) -> Value {
    serde_json::to_value(SpectralCurve::from_poly(genus, &f).unwrap()).unwrap()
}

#[test]
fn construct_genus_two_slice() {
    let out = run(&["construct", "--genus", "2", "--alpha", "a0=sym,a1=0,a2=0,a3=1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let z = Poly::z();
    let f = z.pow(5) + Poly::int(27) * Poly::var(Var::A0) * z.pow(2) + Poly::int(81);
    assert_eq!(v["F"], curve_json(2, f));
    for key in ["Q", "deltas", "L4", "M"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert!(v.get("timings_ms").is_none());
}

#[test]
fn construct_numeric_genus_one() {
    let out = run(&["construct", "--genus", "1", "--alpha", "a0=1,a1=0,a2=0,a3=1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["F"], curve_json(1, Poly::z().pow(3) - Poly::one()));
}

#[test]
fn construct_is_byte_deterministic_and_timings_are_opt_in() {
    let a = run(&["construct", "--genus", "3"]);
    let b = run(&["construct", "--genus", "3"]);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["construct", "--genus", "1", "--timings"]);
    assert!(json(&t).get("timings_ms").is_some());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["construct", "--genus", "0"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--genus", "1", "--alpha", "a3=0"]).status.code(), Some(2));
    assert_eq!(run(&["construct", "--genus", "1", "--alpha", "b=1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--genus", "1", "--inject-fault", "nope"]).status.code(), Some(2));
}

#[test]
fn term_limit_is_an_internal_error() {
    let out = Command::new(env!("CARGO_BIN_EXE_weyl-commute"))
        .args(["construct", "--genus", "2"])
        .env("WEYL_COMMUTE_MAX_TERMS", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn verify_slices_pass() {
    for g in ["2", "3"] {
        let out = run(&["verify", "--genus", g]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
        let v = json(&out);
        assert_eq!(v["failed"], 0);
        assert!(v["checks"].as_array().unwrap().len() > 10);
    }
}

#[test]
fn verify_numeric_runs_float_checks() {
    let out = run(&["verify", "--genus", "2", "--alpha", "a0=1,a1=0,a2=0,a3=1", "--samples", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let numeric = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["kind"] == "numeric")
        .count();
    assert_eq!(numeric, 14);
}

#[test]
fn injected_fault_fails_the_q_equation() {
    let out = run(&["verify", "--genus", "2", "--inject-fault", "q"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let flagged = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["name"] == "Q ode" && c["pass"] == false);
    assert!(flagged);
}

#[test]
fn examples_report_is_deterministic() {
    let a = run(&["examples"]);
    let b = run(&["examples"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v[1]["g"], 3);
    assert_eq!(v[1]["operator_matches"], true);
    assert_eq!(v[0]["curve_matches"], true);
}

#[test]
fn out_flag_writes_a_file() {
    let dir = std::env::temp_dir().join(format!("weyl-commute-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("pair.json");
    let out = run(&["construct", "--genus", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["g"], 1);
    std::fs::remove_dir_all(&dir).ok();
}
