use std::process::{Command, Output};

use serde_json::Value;

fn mtstar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtstar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn eval_star_value() {
    let o = mtstar(&["--format", "json", "eval", "--index", "3", "--terms", "1000000"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert!(v["value"]["estimate"].as_str().unwrap().starts_with("1.05179979"));
    assert_eq!(v["value"]["bound_kind"], "rigorous");
    assert_eq!(v["engine"], "direct");
    assert_eq!(v["K"], 1_000_000);
}

#[test]
fn eval_blocks_closed_and_alternating() {
    let o = mtstar(&["--format", "json", "eval", "--blocks", "1:3:0", "--mode", "closed"]);
    assert!(o.status.success());
    let est = json_lines(&o)[0]["value"]["estimate"].as_str().unwrap().to_string();
    assert!(est.starts_with("1.2437"), "{est}");

    let o = mtstar(&["--format", "json", "eval", "--index", "~1"]);
    let est = json_lines(&o)[0]["value"]["estimate"].as_str().unwrap().to_string();
    assert!(est.starts_with("-0.78539816"), "{est}");
}

#[test]
fn eval_finite_is_exact() {
    let o = mtstar(&["--format", "json", "eval", "--index", "2,1", "--n", "2"]);
    assert!(o.status.success());
    // t★_2(2,1) = 1 + (1/9)(1 + 1/3)
    assert_eq!(json_lines(&o)[0]["value"]["exact"], "31/27");
}

#[test]
fn gen_modes() {
    let o = mtstar(&["--format", "json", "gen", "--z", "1/2", "--terms", "20000"]);
    assert!(o.status.success());
    let est: f64 = json_lines(&o)[0]["value"]["estimate"].as_str().unwrap().parse().unwrap();
    assert!((est - 2f64.sqrt()).abs() < 1e-8);

    let closed = mtstar(&["--format", "json", "gen", "--n", "3", "--c", "3", "--z", "1/2,1/3"]);
    let series = mtstar(&["--format", "json", "gen", "--n", "3", "--c", "3", "--z", "1/2,1/3", "--mode", "series"]);
    assert!(closed.status.success() && series.status.success());
    let c = &json_lines(&closed)[0]["value"];
    let s = &json_lines(&series)[0]["value"];
    assert!(s["tail_certificate"].is_string());
    assert_ne!(c["exact"], s["exact"]);
    assert_eq!(
        c["decimal"].as_str().unwrap()[..12],
        s["decimal"].as_str().unwrap()[..12]
    );
}

#[test]
fn verify_suites_exit_zero_and_emit_records() {
    for suite in ["lemmas", "finite-exact", "bounds", "recurrence"] {
        let o = mtstar(&["--format", "json", "verify", "--suite", suite]);
        assert!(o.status.success(), "{suite}");
        let recs = json_lines(&o);
        assert!(!recs.is_empty());
        for key in ["id", "formula", "inputs", "lhs", "rhs", "abs_error", "bound", "pass", "engine", "K", "precision"] {
            assert!(recs[0].get(key).is_some(), "{suite} {key}");
        }
        assert!(recs.iter().all(|r| r["pass"] == true));
    }
}

#[test]
fn verify_is_deterministic() {
    let a = mtstar(&["--format", "csv", "verify", "--suite", "recurrence"]);
    let b = mtstar(&["--format", "csv", "verify", "--suite", "recurrence"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn tables() {
    let o = mtstar(&["--format", "json", "table", "--family", "thm41", "--range", "a=0..4"]);
    assert!(o.status.success());
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["closed_values"][1]["estimate"], "1");

    let o = mtstar(&["--format", "json", "table", "--family", "thm48", "--range", "d=0..2"]);
    assert!(o.status.success());
    let rows = json_lines(&o);
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r["pass"] == true));
}

#[test]
fn invalid_input_exits_nonzero() {
    for args in [
        &["eval", "--index", "1,2"][..],
        &["eval", "--index", "3,x"],
        &["eval", "--blocks", "0:2:0"],
        &["--precision", "5", "eval", "--index", "2"],
        &["verify", "--suite", "nope"],
        &["table", "--family", "thm44", "--range", "a=0..0"],
        &["gen", "--c", "1", "--z", "0.5,0.5"],
        &["gen", "--z", "1"],
        &["eval", "--formula", "thm99", "--params", "a=1"],
    ] {
        let o = mtstar(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains("error"), "{args:?}");
    }
}
