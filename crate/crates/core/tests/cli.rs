use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn aolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_aolab"))
        .args(args)
        .env_remove("AOLAB_SEED")
        .output()
        .expect("run aolab")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn dft4_json() -> String {
    aolab::report::to_json(&aolab::fixtures::dft4())
}

const JORDAN: &str = r#"{"dim": 2, "entries": [[1, 0], [1, 0], [0, 0], [1, 0]]}"#;

fn analyze(path: &Path) -> (Option<i32>, Value) {
    let out = aolab(&["analyze", "--input", path.to_str().unwrap()]);
    let report = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code(), report)
}

#[test]
fn analyze_dft4_is_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = analyze(&write(dir.path(), "dft4.json", &dft4_json()));
    assert_eq!(code, Some(0));
    assert_eq!(r["criteria"]["unitary"], true);
    assert_eq!(r["criteria"]["orbits_convergent"], true);
    assert_eq!(r["minimal_polynomial"]["degree"], 3);
    assert_eq!(r["consistent"], true);
}

#[test]
fn analyze_jordan_fails_every_condition_with_a_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r) = analyze(&write(dir.path(), "j.json", JORDAN));
    assert_eq!(code, Some(0));
    let c = &r["criteria"];
    for key in ["unitary", "normaloid", "contraction", "orbits_convergent", "power_bounded"] {
        assert_eq!(c[key], false, "{key}");
    }
    assert_eq!(c["witness"]["dim"], 2);
    assert_eq!(c["orbits_certification"], "certified via probes");
    assert_eq!(r["growth_bound"]["kappa"], 1);
}

#[test]
fn analyze_writes_out_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "j.json", JORDAN);
    let out = dir.path().join("report.json");
    let csv = dir.path().join("powers.csv");
    let o = aolab(&[
        "analyze",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["dim"], 2);
    let table = std::fs::read_to_string(csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("n,power_norm,bound"));
    assert_eq!(lines.count(), 1000);
}

#[test]
fn malformed_input_exits_1_naming_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let truncated = write(dir.path(), "t.json", r#"{"dim": 2, "entries": [[1, 0],"#);
    let o = aolab(&["analyze", "--input", truncated.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let missing = write(dir.path(), "m.json", r#"{"dim": 2}"#);
    let o = aolab(&["analyze", "--input", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("entries"));

    let short = write(dir.path(), "s.json", r#"{"dim": 2, "entries": [[1, 0]]}"#);
    assert_eq!(aolab(&["analyze", "--input", short.to_str().unwrap()]).status.code(), Some(1));

    let o = aolab(&["analyze", "--input", dir.path().join("absent.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn oversized_input_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let big = aolab::report::to_json(&aolab::CMatrix::identity(65));
    let o = aolab(&["analyze", "--input", write(dir.path(), "big.json", &big).to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn unresolvable_spectrum_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "close.json", r#"{"dim": 2, "entries": [[1, 0], [0, 0], [0, 0], [1.000000015, 0]]}"#);
    let (code, r) = analyze(&p);
    assert_eq!(code, Some(2));
    assert_eq!(r["consistent"], false);
}

#[test]
fn bad_run_config_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "j.json", JORDAN);
    for extra in [["--window", "3000"], ["--tol-conv", "0"], ["--tol-rank", "-1"]] {
        let mut args = vec!["analyze", "--input", p.to_str().unwrap()];
        args.extend(extra);
        assert_eq!(aolab(&args).status.code(), Some(1), "{extra:?}");
    }
}

fn entries(out: &Output) -> Vec<[f64; 2]> {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    serde_json::from_value(v["entries"].clone()).unwrap()
}

#[test]
fn generate_examples() {
    let e = entries(&aolab(&["generate", "--kind", "rotation", "--theta", "0.25", "--dim", "1"]));
    assert_eq!(e, vec![[0.0, 1.0]]);

    let e = entries(&aolab(&["generate", "--kind", "oblique", "--dim", "2", "--eigenvalues", "1,-1", "--seed", "0"]));
    assert_eq!(e, vec![[1.0, 0.0], [-2.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]);

    assert_eq!(aolab(&["generate", "--kind", "bogus"]).status.code(), Some(1));
    assert_eq!(aolab(&["generate", "--kind", "unitary", "--dim", "3", "--eigenvalues", "2"]).status.code(), Some(1));
    assert_eq!(aolab(&["generate", "--kind", "oblique", "--dim", "2", "--cond-cap", "0.5"]).status.code(), Some(1));
}

#[test]
fn generate_is_deterministic_and_honours_the_seed_variable() {
    let args = ["generate", "--kind", "planted", "--dim", "4", "--seed", "9"];
    assert_eq!(aolab(&args).stdout, aolab(&args).stdout);
    let from_env = Command::new(env!("CARGO_BIN_EXE_aolab"))
        .args(["generate", "--kind", "planted", "--dim", "4"])
        .env("AOLAB_SEED", "9")
        .output()
        .unwrap();
    assert_eq!(from_env.stdout, aolab(&args).stdout);
    assert_ne!(aolab(&["generate", "--kind", "planted", "--dim", "4"]).stdout, aolab(&args).stdout);
}

#[test]
fn verify_reports_pass_counts() {
    let o = aolab(&["verify", "--suite", "theorem", "--trials", "5", "--seed", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8_lossy(&o.stdout);
    assert!(text.contains("theorem-unitary: 5/5 passed"), "{text}");
    assert!(text.contains("theorem-oblique: 5/5 passed"), "{text}");
    assert!(text.contains("suite theorem: PASS"));

    let o = aolab(&["verify", "--suite", "scalar", "--trials", "5"]);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(aolab(&["verify", "--suite", "nope"]).status.code(), Some(1));
}
