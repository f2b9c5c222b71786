use std::path::PathBuf;
use std::process::{Command, Output};

use wirtinger_cli::{ReportDocument, ResultEntry};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_wirtinger"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("UTF-8 output")
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).expect("UTF-8 output")
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(path).expect("golden file exists")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

fn doc(o: &Output) -> ReportDocument {
    serde_json::from_str(&stdout(o)).expect("JSON report")
}

const EXTREMAL: &str = r#"{"type":"extremal","n":2,"k":1}"#;

#[test]
fn golden_constant_json() {
    let o = run(&["constant", "--id", "brink_K", "--p", "2", "--q", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("constant_brink_K.json"));
    assert!(stdout(&o).contains("0.3183098861"));
}

#[test]
fn golden_norm_csv() {
    let o = run(&[
        "norm",
        "--space",
        r#"{"type":"lebesgue","p":2}"#,
        "--space",
        r#"{"type":"orlicz","p":2}"#,
        "--function",
        EXTREMAL,
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("norm_extremal.csv"));
}

#[test]
fn golden_core_interval_text() {
    let o = run(&["constant", "--id", "gnk_core_min", "--n", "3", "--k", "1", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("gnk_core_min.txt"));
}

#[test]
fn norm_example_value() {
    let d = doc(&run(&["norm", "--space", r#"{"type":"lebesgue","p":2}"#, "--function", EXTREMAL]));
    let ResultEntry::Norm(n) = &d.results[0] else { panic!("expected a norm entry") };
    assert!((n.value.value - (1.0f64 / 30.0).sqrt()).abs() < 1e-12);
}

#[test]
fn verify_example_is_satisfied() {
    let o = run(&["verify", "--theorem", "thm41", "--n", "2", "--k", "1", "--psi", "constant", "--nu", "constant"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let d = doc(&o);
    let ResultEntry::Verdict(v) = &d.results[0] else { panic!("expected a verdict") };
    assert!(v.satisfied);
    assert!((v.bound - 1.0 / 54.0).abs() < 1e-15);
}

#[test]
fn violated_verdict_exits_one() {
    let o = run(&["verify", "--theorem", "thm31", "--cap", "1e-6", "--format", "text"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("wirtinger "));
    assert!(stdout(&o).contains("FAIL thm31"));
}

#[test]
fn config_file_schema_errors_are_line_numbered() {
    let path = scratch("bad.json");
    std::fs::write(
        &path,
        "{\n  \"command\": \"norm\",\n  \"function_spec\": {\"type\": \"extremal\", \"n\": 2, \"k\": 1},\n  \"space_specs\": [{\"type\": \"hardy\"}],\n  \"verbose\": true\n}\n",
    )
    .unwrap();
    let o = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("line 4: space_specs[0].type"), "{err}");
    assert!(err.contains("line 5: verbose"), "{err}");
    assert!(o.stdout.is_empty());
}

#[test]
fn malformed_config_reports_byte_offset() {
    let path = scratch("malformed.json");
    std::fs::write(&path, "{\"command\": \"norm\" \"x\": 1}").unwrap();
    let o = run(&["--config", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("malformed JSON at byte 19"), "{}", stderr(&o));
}

#[test]
fn numerical_failure_names_the_operation() {
    let o = run(&["fundamental", "--space", r#"{"type":"lebesgue","p":2}"#, "--delta", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("fundamental failed"), "{}", stderr(&o));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(run(&["verify", "--theorem", "thm99"]).status.code(), Some(2));
    assert_eq!(run(&["norm", "--function", "{not json"]).status.code(), Some(2));
    assert_eq!(run(&["constant"]).status.code(), Some(2));
    assert_eq!(run(&[]).status.code(), Some(2));
    let o = bin().args(["constant", "--id", "beesack"]).env("WIRTINGER_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_run_echoes_grids_and_writes_out() {
    let cfg = scratch("ank.json");
    let out = scratch("ank-report.json");
    std::fs::write(
        &cfg,
        r#"{"command":"verify","theorem_id":"ank","params":{"n":2,"k":1},"grids":{"p_grid":[2,3,5],"q_grid":[2]}}"#,
    )
    .unwrap();
    let o = run(&["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--timing"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let d: ReportDocument = serde_json::from_str(&text).unwrap();
    assert_eq!(d.config_echo.grids.p_grid, Some(vec![2.0, 3.0, 5.0]));
    assert!(d.timing_ms > 0);
    let compact: String = text.split_whitespace().collect();
    assert!(compact.contains(r#""p_grid":[2.0,3.0,5.0]"#));
}

#[test]
fn seeded_sweep_is_byte_identical_across_thread_counts() {
    let args = [
        "sweep",
        "--functional",
        "zygmund_wo",
        "--family",
        "random",
        "--seed",
        "11",
        "--count",
        "5",
        "--delta-grid",
        "1e-4,0.5,2,1e4",
    ];
    let one = bin().args(args).env("WIRTINGER_THREADS", "1").output().unwrap();
    let many = bin().args(args).env("WIRTINGER_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0), "{}", stderr(&one));
    assert_eq!(one.stdout, many.stdout);
    let d = doc(&one);
    assert_eq!(d.results.len(), 4);
    assert!(d.results.iter().all(|r| matches!(r, ResultEntry::Sample(s) if s.value.is_finite())));
}

#[test]
fn warnings_follow_code_paths() {
    let cases: [(&[&str], &str); 5] = [
        (&["verify", "--theorem", "beesack"], "[0, pi/2]"),
        (&["constant", "--id", "gnk_core_min"], "core interval"),
        (&["fundamental", "--space", r#"{"type":"zygmund","q":2,"gamma":1}"#, "--delta", "0.5"], "Zygmund"),
        (&["verify", "--theorem", "thm61"], "dilation"),
        (&["verify", "--theorem", "thm71"], "K(q,p)"),
    ];
    for (args, needle) in cases {
        let d = doc(&run(args));
        assert!(d.warnings.iter().any(|w| w.contains(needle)), "{args:?}: {:?}", d.warnings);
    }
    let d = doc(&run(&["constant", "--id", "ank_lb_gls"]));
    assert!(d.warnings.is_empty());
}

#[test]
fn zygmund_exponent_option() {
    let base = ["fundamental", "--space", r#"{"type":"zygmund","q":2,"gamma":1}"#, "--delta", "0.25"];
    let pos = doc(&run(&base));
    let mut neg_args = base.to_vec();
    neg_args.extend(["--exponent", "negative"]);
    let neg = doc(&run(&neg_args));
    let (ResultEntry::Norm(a), ResultEntry::Norm(b)) = (&pos.results[0], &neg.results[0]) else { panic!() };
    assert!((a.value.value * 16.0f64.sqrt() - b.value.value).abs() < 1e-12);
}

#[test]
fn every_theorem_runs_from_the_cli() {
    for t in ["wirtinger", "beesack", "ank", "thm31", "thm41", "thm51", "thm61", "thm71"] {
        let o = run(&["verify", "--theorem", t]);
        assert_eq!(o.status.code(), Some(0), "{t}: {}", stderr(&o));
    }
    let o = run(&["verify", "--theorem", "thm71", "--psi", "natural"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}
