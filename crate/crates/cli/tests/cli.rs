use std::process::{Command, Output};

use raney_core::search::SearchReport;
use raney_core::transducer::TransducerJson;
use raney_core::verify::{TransformReport, VerifyReport};

fn raney(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raney"))
        .args(args)
        .env_remove("CFM_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn bound_text() {
    let o = raney(&["bound", "7"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "S_7 = 24\n"));
    let o = raney(&["bound", "9"]);
    assert_eq!(stdout(&o), "S_9 = 36\n");
    assert!(stdout(&raney(&["bound", "14", "--breakdown"])).contains("t = 7:"));
}

#[test]
fn bound_json() {
    let o = raney(&["bound", "81", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["s_n"], 538);
    let o = raney(&["bound", "12", "--breakdown", "--format", "json"]);
    let b: raney_core::bounds::BoundBreakdown = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(b.total, 68);
}

#[test]
fn input_errors_exit_2() {
    for args in [
        &["bound", "0"][..],
        &["bound", "x"],
        &["verify", "1"],
        &["transform", "--matrix", "1,2,2,4", "--cf", "[;3]"],
        &["transform", "--matrix", "1,2,3", "--cf", "[;3]"],
        &["transform", "--matrix", "1,0,0,1", "--cf", "[;0]"],
        &["search", "0", "--cf", "[;1]"],
        &["nonsense"],
        &[],
    ] {
        let o = raney(args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn transducer_formats() {
    let table = stdout(&raney(&["transducer", "2", "--format", "table"]));
    assert_eq!(table.lines().count(), 6);
    let csv = stdout(&raney(&["transducer", "3", "--format", "csv"]));
    assert_eq!(csv.lines().count(), 11);
    assert!(csv.contains("\"3,0,0,1\",L^2R,RL^2,\"1,0,0,3\""));
    let dot = stdout(&raney(&["transducer", "1", "--format", "dot"]));
    assert_eq!(dot.matches(" -> ").count(), 2);
    assert_eq!(dot.matches("\"1,0,0,1\" -> \"1,0,0,1\"").count(), 2);
    let o = raney(&["transducer", "14", "--format", "json"]);
    let t: TransducerJson = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(t.n, 14);
    assert_eq!(serde_json::from_str::<TransducerJson>(&serde_json::to_string(&t).unwrap()).unwrap(), t);
}

#[test]
fn transducer_to_file() {
    let path = std::env::temp_dir().join(format!("raney-t2-{}.dot", std::process::id()));
    let o = raney(&["transducer", "2", "--format", "dot", "--output", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(o.stdout.is_empty());
    let s = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(s.starts_with("digraph T2"));
}

fn transform_json(m: &str, x: &str) -> TransformReport {
    let o = raney(&["transform", "--matrix", m, "--cf", x, "--format", "json"]);
    assert_eq!(code(&o), 0);
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn transform_examples() {
    let r = transform_json("12,1,17,2", "[;3]");
    assert_eq!((r.per_hx, r.oracle_per, r.s_n), (6, 6, 24));
    assert_eq!(r.verdict, raney_core::bounds::Verdict::Holds);
    assert_eq!(transform_json("12,1,17,2", "[;200]").per_hx, 24);
    let r = transform_json("1,0,0,1", "[;5,2]");
    assert_eq!((r.per_hx, r.per_x), (2, 2));
    let r = transform_json("-3,1,2,-5", "[-4;1,1,2]");
    assert_eq!(r.per_hx, r.oracle_per);
    let text = stdout(&raney(&["transform", "--matrix", "12,1,17,2", "--cf", "[;3]"]));
    assert!(text.contains("per(h(x)) = 6"));
    assert!(text.contains("verdict: holds"));
}

fn verify_json(args: &[&str]) -> VerifyReport {
    let mut all = vec!["verify"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--format", "json"]);
    let o = raney(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn verify_examples() {
    let r = verify_json(&["7", "--samples", "1000", "--seed", "42"]);
    assert!(r.failures.is_empty());
    let r = verify_json(&["2", "--samples", "100", "--seed", "1"]);
    assert!(r.failures.is_empty());
    assert_eq!(r.s_n, 5);
}

#[test]
fn verify_is_reproducible() {
    let mut a = verify_json(&["5", "--samples", "300", "--seed", "9", "--jobs", "1"]);
    let mut b = verify_json(&["5", "--samples", "300", "--seed", "9", "--jobs", "3"]);
    a.elapsed_ms = 0;
    b.elapsed_ms = 0;
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
}

#[test]
fn seed_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_raney"))
        .args(["verify", "3", "--samples", "10", "--format", "json"])
        .env("CFM_SEED", "77")
        .output()
        .unwrap();
    let r: VerifyReport = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r.seed, 77);
    assert!(String::from_utf8_lossy(&o.stderr).contains("verify: 10/10"));
}

fn search_json(n: &str, x: &str) -> SearchReport {
    let o = raney(&["search", n, "--cf", x, "--format", "json"]);
    assert_eq!(code(&o), 0);
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn search_examples() {
    let r = search_json("7", "[;4390]");
    assert_eq!(r.best_ratio, 24.0);
    assert_eq!(r.witness_image.per(), 24);
    assert_eq!(search_json("9", "[;4696]").best_ratio, 36.0);
    assert!(search_json("2", "[;1]").best_ratio <= 5.0);
}
