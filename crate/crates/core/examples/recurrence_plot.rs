// Recurrence analysis of a synthetic strategy trajectory that revisits old states.

use przi::rqa::{build_rp, epsilon_for_tolerance, write_pgm, RqaStats, StrategyTrajectory};

fn run_example() -> przi::Result<()> {
    let dim = 8;
    let mut traj = StrategyTrajectory::new();
    for t in 0..48 {
        // a slow loop that comes back to its start every 24 samples
        let phase = std::f64::consts::TAU * f64::from(t) / 24.0;
        let sample = (0..dim).map(|d| 0.5 * (phase + d as f64).sin()).collect();
        traj.push(f64::from(t) * 3600.0, sample)?;
    }

    let eps = epsilon_for_tolerance(dim, 0.1);
    let rp = build_rp(&traj, eps)?;
    let stats = RqaStats::compute(&rp, dim, 2);
    let mut text = Vec::new();
    stats.write_text(&mut text)?;
    print!("{}", String::from_utf8_lossy(&text));

    for r in (0..rp.n()).rev().step_by(2) {
        let row: String = (0..rp.n()).map(|c| if rp.get(c, r) { '#' } else { '.' }).collect();
        println!("{row}");
    }

    let mut pgm = Vec::new();
    write_pgm(&rp, 2, &mut pgm)?;
    println!("PGM at half resolution: {} bytes", pgm.len());
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
