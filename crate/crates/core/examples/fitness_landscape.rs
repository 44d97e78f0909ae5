// A coarse profit landscape for one adaptive seller in an all-GVWY market.

use przi::experiment::ExperimentConfig;
use przi::experiment::run_landscape;

const CONFIG: &str = r#"
seed = 5

[landscape]
delta_s = 0.25
eval_period_s = 300
seeds = 2

[[population]]
side = "sell"
count = 1
strategy = { kind = "prsh" }

[[population]]
side = "sell"
count = 9
strategy = { kind = "gvwy" }

[[population]]
side = "buy"
count = 10
strategy = { kind = "gvwy" }
"#;

fn run_example() -> przi::Result<()> {
    let config = ExperimentConfig::parse(CONFIG)?;
    let landscape = run_landscape(&config)?;
    let (mean, sd) = (landscape.mean_pps(), landscape.std_pps());
    for (i, s) in landscape.strategies.iter().enumerate() {
        let bar = "#".repeat((mean[i] / 2.0).max(0.0) as usize);
        println!("s {s:+.2}  pps {:>6.2} +- {:>5.2}  {bar}", mean[i], sd[i]);
    }
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
