use std::path::Path;
use std::process::{Command, Output};

fn slowdiff(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slowdiff"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .unwrap()
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn zero_series_growth_is_bounded() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("zero.toml");
    std::fs::write(&cfg, "[map]\nF = \"zero\"\nalpha = \"golden\"\n").unwrap();
    let o = slowdiff(dir.path(), &["--config", cfg.to_str().unwrap(), "growth", "--schedule", "dyadic:1024"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(dir.path().join("growth.csv")).unwrap();
    for line in csv.lines().skip(1) {
        let gamma: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(gamma, 1.0);
    }
    assert_eq!(json(&dir.path().join("growth.json"))["verdict"], "bounded");
}

#[test]
fn example2_flux_vanishes() {
    let dir = tempfile::tempdir().unwrap();
    let o = slowdiff(dir.path(), &["flux", "--variant", "example2"]);
    assert!(o.status.success());
    let v = json(&dir.path().join("flux_example2.json"));
    assert!(v["value_mod1"].as_f64().unwrap().abs() < 1e-8);
}

#[test]
fn bad_config_exits_with_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    std::fs::write(&cfg, "[map]\nalpha = \n").unwrap();
    let o = slowdiff(dir.path(), &["--config", cfg.to_str().unwrap(), "check"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line"));
}

#[test]
fn check_passes_on_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let o = slowdiff(dir.path(), &["check"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&dir.path().join("check.json"))["passed"], true);
}
