use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn carpet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carpet")).args(args).env_remove("CARPET_WORKERS").output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = carpet(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn json_err(args: &[&str]) -> Value {
    let out = carpet(args);
    assert!(!out.status.success(), "{args:?} should fail");
    serde_json::from_slice(&out.stdout).unwrap()
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

#[test]
fn help_exits_zero() {
    let out = carpet(&["--help"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Usage"));
    for sub in ["tree", "hurwitz", "family", "symbolic", "moduli", "render", "reproduce"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
    assert!(carpet(&["render", "dynamical", "--help"]).status.success());
}

#[test]
fn tree_check_on_the_period_four_tree() {
    let v = json_ok(&["tree", "check", "--kind", "HP", "--weights", "1,2,2,1"]);
    assert!((v["leading_eigenvalue"].as_f64().unwrap() - 0.918).abs() < 1e-3);
    assert_eq!(v["unobstructed"], true);
    assert_eq!(v["h1"], true);
    assert_eq!(v["dhat"], 2);
}

#[test]
fn tree_check_from_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.json");
    std::fs::write(&path, r#"{"edges":2,"images":[[0,1],[0,1]],"weights":[3,3]}"#).unwrap();
    let v = json_ok(&["tree", "check", "--tree", path.to_str().unwrap()]);
    assert!((v["leading_eigenvalue"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["h1"], Value::Null);
}

#[test]
fn family_derive_reports_the_free_critical_point() {
    let v = json_ok(&["family", "derive", "--lambda", "1e-3"]);
    let lam = 1e-3f64;
    let quartic = 1.0 - 6.0 * lam + 11.0 * lam.powi(2) - 10.0 * lam.powi(3) + 5.0 * lam.powi(4);
    let want = -lam * quartic / ((1.0 - lam - lam * lam) * (1.0 - 4.0 * lam + 6.0 * lam * lam - lam.powi(3)));
    let (re, im) = complex(&v["lambda_prime"]);
    assert!((re - want).abs() <= 1e-15 * want.abs() && im == 0.0, "{re} vs {want}");
    assert_eq!(v["degree"], 3);
    assert_eq!(v["ladder_report"]["all_hold"], true);
    assert!(v["cycle_residuals"]["zero_to_parameter"].as_f64().unwrap() < 1e-12);
}

#[test]
fn family_pcf_and_ladder() {
    let v = json_ok(&["family", "pcf", "--period", "4"]);
    assert_eq!(v["count"], 6);
    let (re, im) = complex(&v["c"]);
    assert!((re + 0.157).abs() < 5e-4 && (im - 1.032).abs() < 5e-4);
    let v = json_ok(&["family", "ladder", "--lambda", "0.3"]);
    assert_eq!(v["all_hold"], false);
    assert_eq!(json_err(&["family", "ladder", "--lambda", "0"])["error"]["kind"], "argument");
}

#[test]
fn family_orbit_csv() {
    let out = carpet(&["family", "orbit", "--lambda", "1e-3", "--start", "0", "--steps", "4"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,re,im,chart");
    assert_eq!(lines.len(), 6);
    assert!(lines[4].ends_with(",inverted"), "{}", lines[4]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("o.csv");
    let v = json_ok(&["family", "orbit", "--lambda", "1e-3", "--steps", "10", "--out", path.to_str().unwrap()]);
    assert_eq!(v["steps"], 10);
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 12);
}

#[test]
fn hurwitz_check_verdicts() {
    let v = json_ok(&["hurwitz", "check", "--degree", "3", "--rows", "3;2,1;2,1"]);
    assert_eq!(v["realizable"], true);
    assert_eq!(v["witnesses"].as_array().unwrap().len(), 3);
    let v = json_ok(&["hurwitz", "check", "--degree", "4", "--rows", "2,1,1;2,1,1;2,1,1"]);
    assert_eq!(v["realizable"], false);
    let v = json_ok(&["hurwitz", "check", "--degree", "4", "--rows", "3,1;3,1;2,2"]);
    assert_eq!((v["method"].as_str(), v["realizable"].as_bool()), (Some("search"), Some(true)));
    let v = json_ok(&["hurwitz", "check", "--degree", "4", "--rows", "2,2;2,2;3,1"]);
    assert_eq!((v["realizable"].as_bool(), &v["witnesses"]), (Some(false), &Value::Null));
    assert_eq!(json_err(&["hurwitz", "check", "--degree", "3", "--rows", "3;2"])["error"]["kind"], "argument");
}

#[test]
fn symbolic_words_are_the_allowed_pairs() {
    let out = carpet(&["symbolic", "words", "--depth", "2"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "01\n12\n20\n23\n30\n31\n");
    let out = carpet(&["symbolic", "words", "--depth", "1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "0\n1\n2\n3\n");
    assert_eq!(json_err(&["symbolic", "words", "--depth", "31"])["error"]["kind"], "argument");
}

#[test]
fn symbolic_quotient_witness() {
    let v = json_ok(&["symbolic", "quotient", "--s", "3(012)", "--sp", "3(120)"]);
    assert_eq!((v["related"].as_bool(), v["witness"].as_u64()), (Some(true), Some(1)));
    let v = json_ok(&["symbolic", "quotient", "--s", "(3012)", "--sp", "(012)"]);
    assert_eq!(v["related"], false);
    assert_eq!(json_err(&["symbolic", "quotient", "--s", "02(1)", "--sp", "(012)"])["error"]["kind"], "config");
}

#[test]
fn moduli_solve_margins() {
    let v = json_ok(&["moduli", "solve", "--weights", "1,2,2,1", "--c", "1.0"]);
    assert!(v["margins"].as_array().unwrap().iter().all(|m| m.as_f64().unwrap() > 0.0));
    let levels = &v["levels"];
    let b0 = levels["beta0"].as_f64().unwrap();
    assert!(0.0 < b0 && b0 < 1.0);
    let e = json_err(&["moduli", "solve", "--weights", "1,1,1,1"]);
    assert_eq!(e["error"]["kind"], "domain");
}

#[test]
fn missing_parameters_are_config_errors() {
    let e = json_err(&["family", "derive"]);
    assert_eq!(e["error"]["kind"], "config");
    assert!(e["error"]["message"].as_str().unwrap().contains("lambda"));
    assert_eq!(json_err(&[])["error"]["kind"], "config");
    assert_eq!(json_err(&["reproduce", "fig9"])["error"]["kind"], "config");
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap()
}

#[test]
fn render_artifacts_are_idempotent_across_worker_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |workers: &str, name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_carpet"))
            .args(["render", "dynamical", "--lambda", "1e-3", "--px", "96", "--samples", "50", "--seed", "3"])
            .args(["--out", out.to_str().unwrap()])
            .env("CARPET_WORKERS", workers)
            .output()
            .unwrap();
        assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stdout));
        serde_json::from_slice::<Value>(&status.stdout).unwrap()
    };
    let a = run("1", "a.ppm");
    let b = run("3", "b.ppm");
    assert_eq!(read(dir.path(), "a.ppm"), read(dir.path(), "b.ppm"));
    assert_eq!(a["histogram"], b["histogram"]);
    assert_eq!(a["components"], b["components"]);
    assert_eq!(a["lock_order"]["violations"], 0);
    let ppm = read(dir.path(), "a.ppm");
    assert!(ppm.starts_with(b"P6\n96 96\n255\n"));
    assert_eq!(ppm.len(), 13 + 96 * 96 * 3);
    let meta: Value = serde_json::from_slice(&read(dir.path(), "a.json")).unwrap();
    assert_eq!(meta, a);
    let first = read(dir.path(), "a.json");
    run("2", "a.ppm");
    assert_eq!(first, read(dir.path(), "a.json"));
}

#[test]
fn bad_worker_count_is_reported() {
    let out = Command::new(env!("CARGO_BIN_EXE_carpet"))
        .args(["render", "dynamical", "--px", "8"])
        .env("CARPET_WORKERS", "zero")
        .output()
        .unwrap();
    assert!(!out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["error"]["message"].as_str().unwrap().contains("CARPET_WORKERS"));
}

#[test]
fn render_writes_only_declared_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("img.png");
    json_ok(&["render", "dynamical", "--lambda", "0", "--px", "32", "--out", out.to_str().unwrap()]);
    let mut names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    names.sort();
    assert_eq!(names, ["img.json", "img.png"]);
    assert!(read(dir.path(), "img.png").starts_with(b"\x89PNG"));
}

#[test]
fn parameter_render_marks_degenerate_pixels() {
    let v = json_ok(&["render", "parameter", "--center", "0.6180339887498949,0", "--width", "1e-6", "--px", "3"]);
    assert!(v["histogram"]["degenerate"].as_u64().unwrap() >= 1);
    let v = json_ok(&["render", "parameter", "--center", "-5e-3,5e-3", "--width", "2e-3", "--px", "16"]);
    assert_eq!(v["histogram"]["undecided"], 0);
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.toml");
    std::fs::write(&path, "command = \"tree check\"\nkind = \"HP\"\nweights = [1, 1, 1, 1]\n").unwrap();
    let cfg = path.to_str().unwrap();
    let v = json_ok(&["--config", cfg]);
    assert_eq!(v["unobstructed"], false);
    let v = json_ok(&["--config", cfg, "tree", "check", "--weights", "1,2,2,1"]);
    assert_eq!(v["unobstructed"], true);
    let e = json_err(&["--config", cfg, "moduli", "solve"]);
    assert!(e["error"]["message"].as_str().unwrap().contains("tree check"));
    std::fs::write(&path, "command = \"tree check\"\ncolour = 1\n").unwrap();
    assert_eq!(json_err(&["--config", cfg])["error"]["kind"], "config");
}

#[test]
fn printed_config_runs_the_same_job() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["family", "derive", "--lambda", "1e-3,2e-4", "--ladder-constant", "25"];
    let mut with_print = vec!["--print-config"];
    with_print.extend(args);
    let printed = carpet(&with_print);
    assert!(printed.status.success());
    let path = dir.path().join("job.toml");
    std::fs::write(&path, &printed.stdout).unwrap();
    assert_eq!(json_ok(&["--config", path.to_str().unwrap()]), json_ok(&args));
}
