use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use przi::experiment::output::{impact_command, landscape_command, rqa_command, session_command};
use przi::experiment::ExperimentConfig;

#[derive(Parser)]
#[command(name = "przi", version, about = "Run market experiments and recurrence analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Override the seed in the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Worker threads for parallel sessions.
    #[arg(long, global = true, env = "PRZI_WORKERS")]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Profit-per-second landscape of one hill climber over a strategy grid.
    Landscape { config: PathBuf, out: PathBuf },
    /// One or more market sessions with full time-series output.
    Session { config: PathBuf, out: PathBuf },
    /// Recurrence plot and trapping time of a strategy trajectory.
    Rqa { config: PathBuf, out: PathBuf },
    /// Imbalance-sensitive buyer against a scripted top of book.
    ImpactScenario { config: PathBuf, out: PathBuf },
}

fn run(cli: Cli) -> przi::Result<()> {
    if let Some(n) = cli.workers {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| przi::Error::Config(e.to_string()))?;
    }
    let (config_path, out) = match &cli.command {
        Command::Landscape { config, out }
        | Command::Session { config, out }
        | Command::Rqa { config, out }
        | Command::ImpactScenario { config, out } => (config, out),
    };
    let mut config = ExperimentConfig::load(config_path)?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    match cli.command {
        Command::Landscape { .. } => {
            let land = landscape_command(&config, out)?;
            let best = land
                .mean_pps()
                .iter()
                .zip(&land.strategies)
                .max_by(|a, b| a.0.total_cmp(b.0))
                .map(|(p, s)| (*s, *p));
            if let Some((s, p)) = best {
                println!("best s={s:+.2} pps={p:.5}");
            }
        }
        Command::Session { .. } => {
            let report = session_command(&config, out)?;
            print!("{}", report.summary);
        }
        Command::Rqa { .. } => {
            let stats = rqa_command(&config, out)?;
            stats.write_text(std::io::stdout())?;
        }
        Command::ImpactScenario { .. } => {
            let report = impact_command(&config, out)?;
            if let Some((t, df)) = report.welch {
                println!("injection at {}s: t={t:.3} df={df:.1}", report.injection_time);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
