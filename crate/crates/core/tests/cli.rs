use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn germlin(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_germlin"));
    cmd.args(args).env_remove("GERMLIN_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn run(sub: &str, config: &str, extra: &[&str]) -> (i32, String, serde_json::Value) {
    let cfg = fixture(config);
    let mut args = vec![sub, "--config", cfg.to_str().unwrap()];
    args.extend_from_slice(extra);
    let out = germlin(&args, &[]);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let json = serde_json::from_str(&stdout).unwrap_or(serde_json::Value::Null);
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap(), json)
}

#[test]
fn exit_codes_per_command() {
    let cases = [
        ("toroidal-validate", "toroidal.toml", 0),
        ("toroidal-validate", "toroidal_rational.toml", 1),
        ("dioph-scan", "resonant_scan.toml", 1),
        ("linearize", "linear.toml", 0),
        ("linearize", "coboundary.toml", 0),
        ("certify", "certify.toml", 0),
        ("hopf-classify", "classify.toml", 0),
        ("hopf-precheck", "precheck_fail.toml", 1),
        ("hopf-precheck", "precheck_pass.toml", 0),
        ("hopf-cover", "cover.toml", 0),
        ("hopf-cover", "cover_thin.toml", 1),
        ("hopf-cover", "cover_unit.toml", 1),
        ("shilov", "shilov.toml", 0),
        ("shilov", "shilov_piece.toml", 0),
        ("dioph-scan", "bad_key.toml", 2),
        ("dioph-scan", "missing.toml", 2),
        ("hopf-precheck", "classify.toml", 2),
    ];
    for (sub, cfg, want) in cases {
        let (code, err, _) = run(sub, cfg, &[]);
        assert_eq!(code, want, "{sub} {cfg}: {err}");
    }
}

#[test]
fn unknown_subcommand_is_input_error() {
    let out = germlin(&["frobnicate"], &[]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn linear_decks_have_zero_residuals() {
    let (code, err, json) = run("linearize", "linear.toml", &[]);
    assert_eq!(code, 0);
    assert!(err.contains("residuals 0 through degree 5"), "{err}");
    let res = &json["stages"]["linearization"]["residual_per_degree"];
    assert!(res.as_array().unwrap().iter().all(|x| x.as_f64() == Some(0.0)));
}

#[test]
fn resonance_witness_is_printed() {
    let (_, err, json) = run("dioph-scan", "resonant_scan.toml", &[]);
    assert!(err.contains("FAIL nonresonant: resonance at (P, Q) = ([1], [2])"), "{err}");
    assert_eq!(json["status"], "fail");
}

#[test]
fn precheck_failure_carries_witness() {
    let (_, err, json) = run("hopf-precheck", "precheck_fail.toml", &[]);
    assert!(err.contains("FAIL beta*alpha_1 not in Delta: witness v = [0, 1]"), "{err}");
    assert_eq!(json["stages"]["checklist"]["pass"], false);
}

#[test]
fn exact_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let cfg = fixture("coboundary.toml");
    let c = cfg.to_str().unwrap();
    let o1 = germlin(&["linearize", "--config", c, "--out", a.to_str().unwrap(), "--threads", "1"], &[]);
    let o2 = germlin(&["linearize", "--config", c, "--out", b.to_str().unwrap(), "--threads", "3"], &[]);
    assert_eq!(o1.status.code(), Some(0));
    assert_eq!(o2.status.code(), Some(0));
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let json: serde_json::Value = serde_json::from_slice(&ta).unwrap();
    assert!(json.get("elapsed_ms").is_none());
    assert_eq!(json["input_digest"].as_str().unwrap().len(), 64);
}

#[test]
fn echoed_config_reproduces_report() {
    let dir = tempfile::tempdir().unwrap();
    let (_, _, first) = run("hopf-cover", "cover.toml", &[]);
    let echo = dir.path().join("echo.toml");
    std::fs::write(&echo, first["config"].as_str().unwrap()).unwrap();
    let out = germlin(&["hopf-cover", "--config", echo.to_str().unwrap()], &[]);
    let second: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(first["stages"], second["stages"]);
    assert_eq!(first["checks"], second["checks"]);
}

#[test]
fn float_mode_reports_timing() {
    let (code, _, json) = run("linearize", "coboundary.toml", &["--mode", "float"]);
    assert_eq!(code, 0);
    assert_eq!(json["mode"], "float");
    assert!(json["elapsed_ms"].is_u64());
}

#[test]
fn seed_flag_overrides_config() {
    let (_, _, a) = run("linearize", "coboundary.toml", &[]);
    let (_, _, b) = run("linearize", "coboundary.toml", &["--seed", "12"]);
    assert_ne!(a["stages"]["linearization"]["phi"], b["stages"]["linearization"]["phi"]);
    assert!(b["config"].as_str().unwrap().contains("seed = \"12\""));
}

#[test]
fn thread_env_overrides_flag() {
    let cfg = fixture("linear.toml");
    let c = cfg.to_str().unwrap();
    let bad = germlin(&["linearize", "--config", c, "--threads", "2"], &[("GERMLIN_THREADS", "zero")]);
    assert_eq!(bad.status.code(), Some(2));
    let ok = germlin(&["linearize", "--config", c, "--threads", "0"], &[("GERMLIN_THREADS", "2")]);
    assert_eq!(ok.status.code(), Some(0));
}
