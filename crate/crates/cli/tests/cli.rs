use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multispinal")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    std::io::Write::write_all(&mut f, contents.as_bytes()).unwrap();
    f
}

#[test]
fn analyze_grigorchuk_json() {
    let out = run(&["analyze", &fixture("grigorchuk.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"], "Simple");
    assert_eq!(v["scaled_determinant"], "896");
    assert_eq!(v["scale"], "7");
    assert_eq!(v["kirchberg"], true);
    assert_eq!(v["witness"]["agent"], "d");
    assert_eq!(v["witness_bounds"]["max_period"], 3);
    assert!(v.get("timing").is_none());
}

#[test]
fn analyze_nonsimple_variant_text() {
    let out = run(&["analyze", &fixture("nonsimple-variant.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("verdict      NotSimple"), "{text}");
    assert!(text.contains("det (scaled) 0"), "{text}");
    assert!(!text.contains("Gram matrix ="), "matrix only with --emit-matrix");
}

#[test]
fn analyze_flags_are_honoured() {
    let out = run(&[
        "analyze",
        &fixture("z3-squared.json"),
        "--format",
        "json",
        "--truncation-depth",
        "5",
        "--witness-bound",
        "2,1",
        "--timings",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["scaled_determinant"], "634894848");
    assert_eq!(v["truncation"][0]["depth"], 5);
    assert_eq!(v["witness_bounds"]["max_period"], 2);
    assert_eq!(v["witness_bounds"]["max_preperiod"], 1);
    assert!(v["timing"]["total_micros"].is_u64());

    let text = String::from_utf8(run(&["analyze", &fixture("z3-squared.json"), "--emit-matrix"]).stdout).unwrap();
    assert!(text.contains("Gram matrix = (1/14)"), "{text}");
}

#[test]
fn check_reports_a_summary() {
    let out = run(&["check", &fixture("grigorchuk.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["valid"], true);
    assert_eq!(v["instance"]["hom_letters"], serde_json::json!(["0"]));
    assert_eq!(v["instance"]["nucleus"].as_array().unwrap().len(), 5);
}

#[test]
fn validation_errors_exit_1_with_payload() {
    let text = std::fs::read_to_string(fixture("grigorchuk.json")).unwrap();
    let broken = text.replace(r#""a": ["1", "0"]"#, r#""a": ["0", "1"]"#);
    assert_ne!(broken, text);
    let f = write_temp(&broken);
    let out = run(&["analyze", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["error"]["kind"], "ValidationError");
    assert_eq!(v["error"]["exit_code"], 1);
    assert!(!out.stderr.is_empty());

    let out = run(&["check", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty(), "text mode keeps errors off stdout");
    assert!(String::from_utf8_lossy(&out.stderr).contains("not free"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn parse_and_io_errors_exit_1() {
    let f = write_temp("{ not json");
    let out = run(&["analyze", f.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "ParseError");

    let out = run(&["check", "/definitely/not/here.json", "--format", "json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["error"]["kind"], "IoError");
}

#[test]
fn usage_errors_exit_1() {
    assert_eq!(run(&["analyze"]).status.code(), Some(1));
    assert_eq!(run(&["analyze", &fixture("grigorchuk.json"), "--witness-bound", "3"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&run(&["selftest", "--format", "json"]));
    assert_eq!(v["failed"], 0);
    assert!(v["checks"].as_array().unwrap().len() >= 30);
}

#[test]
fn properties_sweep_is_seeded() {
    let a = run(&["properties", "--seed", "5", "--count", "25", "--format", "json"]);
    let b = run(&["properties", "--seed", "5", "--count", "25", "--format", "json"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["instances"], 25);
}
