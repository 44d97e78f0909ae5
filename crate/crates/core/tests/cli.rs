//! The `przi` binary over the shipped configs.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use przi::experiment::ExperimentConfig;

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn przi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_przi")).args(args).output().expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn every_shipped_config_loads() {
    let mut n = 0;
    for entry in fs::read_dir(configs()).unwrap() {
        let p = entry.unwrap().path();
        if p.extension().is_some_and(|e| e == "toml") {
            ExperimentConfig::load(&p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
            n += 1;
        }
    }
    assert!(n >= 6);
}

#[test]
fn session_then_rqa() {
    let out = tempfile::tempdir().unwrap();
    let session_dir = out.path().join("session");
    let run = przi(&["--seed", "3", "session", path(&configs().join("box_zic_hour.toml")), path(&session_dir)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    for f in ["trades.csv", "profit.csv", "strategies.csv", "smoothed.csv", "terminal.csv", "summary.txt"] {
        assert!(session_dir.join(f).exists(), "missing {f}");
    }
    let profit = fs::read_to_string(session_dir.join("profit.csv")).unwrap();
    assert!(profit.starts_with("time_s,trades,pi_b,pi_s,pi_t,alpha"));
    assert_eq!(profit.lines().count(), 61);

    let rqa_config = out.path().join("rqa.toml");
    fs::write(&rqa_config, "[rqa]\ninput = \"session/strategies.csv\"\ntolerance = 0.05\n").unwrap();
    let rqa_dir = out.path().join("rqa");
    let run = przi(&["rqa", path(&rqa_config), path(&rqa_dir)]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let stats = String::from_utf8_lossy(&run.stdout);
    assert!(stats.contains("samples=60"), "{stats}");
    let pgm = fs::read(rqa_dir.join("rp.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n60 60\n255\n"));
}

#[test]
fn impact_and_landscape() {
    let out = tempfile::tempdir().unwrap();
    let run = przi(&["impact-scenario", path(&configs().join("impact.toml")), path(out.path())]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("injection at 10s"));

    let config = out.path().join("land.toml");
    let text = fs::read_to_string(configs().join("landscape_gvwy.toml")).unwrap();
    fs::write(&config, text.replace("seeds = 5", "seeds = 1")).unwrap();
    let run = przi(&["landscape", path(&config), path(out.path())]);
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    let csv = fs::read_to_string(out.path().join("landscape.csv")).unwrap();
    assert_eq!(csv.lines().count(), 22);
    assert!(csv.lines().nth(1).unwrap().starts_with("-1.0000,"));
}

#[test]
fn bad_config_is_reported() {
    let out = tempfile::tempdir().unwrap();
    let config = out.path().join("bad.toml");
    fs::write(&config, "[market]\nmax_price = 0\n").unwrap();
    let run = przi(&["session", path(&config), path(out.path())]);
    assert!(!run.status.success());
    assert!(!run.stderr.is_empty());
    let run = przi(&["session", "/no/such/file.toml", path(out.path())]);
    assert!(!run.status.success());
}
