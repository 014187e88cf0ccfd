use std::path::Path;
use std::process::Command;

use s3tori::VerificationReport;
use s3tori_cli::*;

fn run(args: &[&str]) -> Outcome {
    run_args(std::iter::once("s3tori").chain(args.iter().copied()))
}

fn binary(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_s3tori")).args(args).output().unwrap()
}

#[test]
fn verify_clifford_exits_zero() {
    let o = run(&["verify", "--family", "clifford"]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.starts_with("verify clifford grid=16x16\n"));
    assert!(o.stdout.ends_with("result: PASS\n"));
}

#[test]
fn negative_alpha_is_a_usage_error() {
    let o = run(&["verify", "--family", "lawson", "--alpha", "-1"]);
    assert_eq!(o.code, EXIT_USAGE);
    assert!(o.stderr.contains("alpha"), "{}", o.stderr);
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors() {
    for args in [
        &["verify"][..],
        &["verify", "--family", "torus"],
        &["verify", "--family", "sphere", "--grid", "4x4"],
        &["verify", "--family", "sphere", "--grid", "16"],
        &["verify", "--family", "sphere", "--tol", "nonsense=1e-3"],
        &["verify", "--family", "sphere", "--tol", "minimality"],
        &["verify", "--family", "sphere", "--alpha", "2"],
        &["verify", "--family", "second-type", "--s", "0", "--t", "0"],
        &["verify", "--family", "lawson-iso", "--alpha", "1"],
        &["export", "--family", "sphere"],
        &["export", "--family", "sphere", "--out", "x.obj", "--pole", "1,1,0,0"],
        &["hypersurface", "--family", "lawson"],
        &["hypersurface", "--family", "second-type", "--t", "0.5"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).code, EXIT_USAGE, "{args:?}");
    }
}

#[test]
fn failing_check_exits_one() {
    let o = run(&["verify", "--family", "second-type", "--tol", "minimality=1e-30"]);
    assert_eq!(o.code, EXIT_FAILURE);
    assert!(o.stdout.ends_with("result: FAIL\n"));
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("verify"));
}

#[test]
fn tolerance_flags_parse() {
    assert_eq!(parse_tol("minimality=1e-7").unwrap(), ("minimality".to_string(), 1e-7));
    assert!(parse_tol("minimality=abc").is_err());
    assert_eq!(parse_grid("33x17").unwrap(), (33, 17));
    assert!(parse_pole("0,0,1").is_err());
    let o = run(&["verify", "--family", "sphere", "--tol", "default=1e-6", "--tol", "unit_norm=1e-12"]);
    assert_eq!(o.code, EXIT_OK);
    assert!(o.stdout.contains("unit_norm"));
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"family": "lawson-iso", "alpha": 3.0, "grid": "9x9", "tolerances": {"minimality": 1e-7}}"#,
    );
    let o = run(&["verify", "--config", &cfg]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("grid=9x9"));
    let o = run(&["verify", "--config", &cfg, "--grid", "10x10", "--alpha", "2"]);
    assert!(o.stdout.contains("grid=10x10"));
    let plain = write(dir.path(), "p.json", r#"{"family": "lawson", "alpha": 3.0}"#);
    let o = run(&["construct", "--config", &plain, "--alpha", "2"]);
    assert!(o.stdout.contains("alpha 2\n"), "{}", o.stdout);

    let args = ["verify".to_string(), "--config".into(), cfg.clone(), "--tol".into(), "minimality=1e-3".into()];
    let cli = <Cli as clap::Parser>::try_parse_from(std::iter::once("s3tori".to_string()).chain(args)).unwrap();
    let (name, common) = cli.command.split();
    let rc = RunConfig::resolve(name, common).unwrap();
    assert_eq!(rc.family, Family::LawsonIso);
    assert_eq!(rc.alpha, Some(3.0));
    assert_eq!(rc.tolerances.get("minimality"), Some(&1e-3));

    let bad = write(dir.path(), "bad.json", r#"{"famly": "sphere"}"#);
    assert_eq!(run(&["verify", "--config", &bad]).code, EXIT_USAGE);
    let other = write(dir.path(), "other.json", r#"{"command": "scan", "family": "sphere"}"#);
    assert_eq!(run(&["verify", "--config", &other]).code, EXIT_USAGE);
    assert_eq!(run(&["verify", "--config", "/nonexistent/c.json"]).code, EXIT_USAGE);
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let o = run(&["verify", "--family", "second-type", "--s", "1", "--t", "0.5", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let text = std::fs::read_to_string(&out).unwrap();
    assert_eq!(text, o.stdout);
    let report = VerificationReport::from_json(&text).unwrap();
    assert!(report.all_pass());
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let entry = &v["minimality"];
    assert!(entry["max_residual"].is_f64() && entry["tol"].is_f64() && entry["pass"].is_boolean());
}

#[test]
fn export_and_construct_write_files() {
    let dir = tempfile::tempdir().unwrap();
    let obj = dir.path().join("t.obj");
    let o = run(&["export", "--family", "clifford", "--grid", "8x8", "--out", obj.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    let text = std::fs::read_to_string(&obj).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 64);

    let csv = dir.path().join("t.csv");
    let o = run(&["construct", "--family", "second-type", "--grid", "8x8", "--out", csv.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stderr);
    assert!(o.stdout.contains("beta "));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some(s3tori::export::MESH_CSV_HEADER));

    let json = dir.path().join("t.json");
    let o = run(&["export", "--family", "sphere", "--format", "json", "--out", json.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert!(v["vertices"].is_array());

    let patch = dir.path().join("h.csv");
    let o = run(&["hypersurface", "--family", "sphere", "--grid", "8x8", "--out", patch.to_str().unwrap()]);
    assert_eq!(o.code, EXIT_OK, "{}", o.stdout);
    let text = std::fs::read_to_string(&patch).unwrap();
    assert_eq!(text.lines().next(), Some(s3tori::export::PATCH_CSV_HEADER));
}

#[test]
fn scan_reports_circle_angles() {
    let o = run(&["scan", "--family", "second-type"]);
    assert_eq!(o.code, EXIT_OK);
    let flags: Vec<&str> = o.stdout.lines().skip(2).map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(flags, ["no", "no", "no", "no", "yes"]);
    let o = run(&["scan", "--family", "lawson-iso", "--alpha", "2"]);
    let flags: Vec<&str> = o.stdout.lines().skip(2).map(|l| l.split(' ').nth(1).unwrap()).collect();
    assert_eq!(flags, ["no", "no", "yes", "no", "no"]);
}

#[test]
fn binary_exit_codes_and_output() {
    let ok = binary(&["verify", "--family", "sphere"]);
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert_eq!(String::from_utf8(ok.stdout).unwrap(), run(&["verify", "--family", "sphere"]).stdout);
    let bad = binary(&["verify", "--family", "lawson", "--alpha", "-1"]);
    assert_eq!(bad.status.code(), Some(EXIT_USAGE));
    assert!(!bad.stderr.is_empty());
    let fail = binary(&["verify", "--family", "second-type", "--tol", "minimality=1e-300"]);
    assert_eq!(fail.status.code(), Some(EXIT_FAILURE));
}
