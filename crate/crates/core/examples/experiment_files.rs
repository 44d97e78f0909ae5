// Runs a config-driven session and lists the files it writes.

use przi::experiment::output::session_command;
use przi::experiment::ExperimentConfig;

const CONFIG: &str = r#"
seed = 11

[market]
duration_s = 1800
sample_interval_s = 300
smoothing_window_s = 900

[session]
repetitions = 2
p0 = 80.0

[[population]]
side = "sell"
count = 10
strategy = { kind = "prsh", eval_period_s = 30.0, sigma = 0.05 }

[[population]]
side = "buy"
count = 10
strategy = { kind = "zic" }
"#;

fn run_example() -> przi::Result<()> {
    let config = ExperimentConfig::parse(CONFIG)?;
    let out = tempfile::tempdir()?;
    let report = session_command(&config, out.path())?;
    print!("{}", report.summary);
    let mut files: Vec<_> = walk(out.path())?;
    files.sort();
    for f in files {
        println!("wrote {}", f.strip_prefix(out.path()).unwrap_or(&f).display());
    }
    Ok(())
}

fn walk(dir: &std::path::Path) -> std::io::Result<Vec<std::path::PathBuf>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.is_dir() {
            out.extend(walk(&path)?);
        } else {
            out.push(path);
        }
    }
    Ok(out)
}

fn main() -> przi::Result<()> {
    run_example()
}
