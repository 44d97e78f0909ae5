//! File outputs and the four experiment commands.

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use super::config::ExperimentConfig;
use super::metrics::{linear_regression, mean, welch_t, Histogram, Regression};
use super::runner::{
    default_script, parse_script, regression_rows, rep_dir, run_impact, run_landscape, run_repetitions, split_at_time,
    Landscape, ProbeQuote, RegressionRow, SessionRecord,
};
use crate::error::Result;
use crate::exchange::Side;
use crate::rqa::{build_rp, epsilon_for_tolerance, vertical_line_distribution, write_pgm, write_sparse_csv, RqaStats, StrategyTrajectory};

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn vector_header(n: usize) -> String {
    let mut h = String::from("time_hours");
    for i in 0..n {
        write!(h, ",s_{i}").unwrap();
    }
    h
}

fn write_vectors<W: Write>(mut out: W, times: impl Iterator<Item = f64>, rows: &[Vec<f64>], n: usize) -> Result<()> {
    writeln!(out, "{}", vector_header(n))?;
    for (t, row) in times.zip(rows) {
        write!(out, "{}", t / 3600.0)?;
        for v in row {
            write!(out, ",{v}")?;
        }
        writeln!(out)?;
    }
    out.flush()?;
    Ok(())
}

/// `strategies.csv`, `smoothed.csv`, `profit.csv` and `strategy_log.csv`.
pub fn write_record(record: &SessionRecord, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let n = record.traders.len();
    let raw: Vec<Vec<f64>> = record.samples.iter().map(|s| s.strategies.clone()).collect();
    let times = || record.samples.iter().map(|s| s.time_s);
    write_vectors(create(&dir.join("strategies.csv"))?, times(), &raw, n)?;
    write_vectors(create(&dir.join("smoothed.csv"))?, times(), &record.smoothed, n)?;

    let mut out = create(&dir.join("profit.csv"))?;
    writeln!(out, "time_s,trades,pi_b,pi_s,pi_t,alpha")?;
    for s in &record.samples {
        let alpha = s.alpha.map_or(String::new(), |a| a.to_string());
        writeln!(
            out,
            "{},{},{},{},{},{}",
            s.time_s,
            s.trades,
            s.buyer_profit,
            s.seller_profit,
            s.total_profit(),
            alpha
        )?;
    }
    out.flush()?;

    let mut out = create(&dir.join("strategy_log.csv"))?;
    writeln!(out, "time_s,trader_id,active_s,elite_s,pps")?;
    for row in &record.strategy_log {
        let pps = row.pps.map_or(String::new(), |p| p.to_string());
        writeln!(out, "{},{},{},{},{}", row.time_s, row.trader, row.active, row.elite, pps)?;
    }
    out.flush()?;
    Ok(())
}

/// Outcome of the `session` command.
#[derive(Clone, Debug)]
pub struct SessionReport {
    pub records: Vec<SessionRecord>,
    pub regression_rows: Vec<RegressionRow>,
    pub regression: Regression,
    pub summary: String,
}

impl SessionReport {
    /// Terminal strategies of all runs for one side.
    pub fn terminal(&self, side: Side) -> Vec<f64> {
        self.records
            .iter()
            .flat_map(|r| r.terminal_strategies())
            .filter(|(t, _)| t.side == side)
            .map(|(_, s)| s)
            .collect()
    }
}

/// Runs a session experiment and writes all of its files into `out`.
pub fn session_command(config: &ExperimentConfig, out: &Path) -> Result<SessionReport> {
    fs::create_dir_all(out)?;
    let records = run_repetitions(config, Some(out))?;
    let reps = config.session.repetitions;
    for (i, record) in records.iter().enumerate() {
        write_record(record, &rep_dir(out, reps, i as u32))?;
    }

    let mut w = create(&out.join("terminal.csv"))?;
    writeln!(w, "repetition,trader_id,side,s_hat")?;
    for (i, record) in records.iter().enumerate() {
        for (t, s) in record.terminal_strategies() {
            writeln!(w, "{i},{},{},{s}", t.id, t.side.label())?;
        }
    }
    w.flush()?;

    let rows = regression_rows(&records, config.session.profit_window_s);
    let xs: Vec<f64> = rows.iter().map(|r| r.relaxed_fraction).collect();
    let ys: Vec<f64> = rows.iter().map(|r| r.mean_profit).collect();
    let regression = linear_regression(&xs, &ys);
    let mut w = create(&out.join("regression.csv"))?;
    writeln!(w, "run,relaxed_fraction,mean_profit,std_profit")?;
    for r in &rows {
        writeln!(w, "{},{},{},{}", r.run, r.relaxed_fraction, r.mean_profit, r.std_profit)?;
    }
    match regression {
        Regression::Fit {
            slope,
            intercept,
            r_squared,
        } => writeln!(w, "# slope={slope} intercept={intercept} r_squared={r_squared}")?,
        Regression::Degenerate => writeln!(w, "# regression degenerate")?,
    }
    w.flush()?;

    let mut report = SessionReport {
        records,
        regression_rows: rows,
        regression,
        summary: String::new(),
    };
    report.summary = session_summary(config, &report);
    fs::write(out.join("summary.txt"), &report.summary)?;
    Ok(report)
}

fn session_summary(config: &ExperimentConfig, report: &SessionReport) -> String {
    let mut s = String::new();
    writeln!(s, "repetitions={}", report.records.len()).unwrap();
    writeln!(s, "duration_s={}", config.market.duration_s).unwrap();
    for (i, r) in report.records.iter().enumerate() {
        let alpha = r.alpha.map_or("undefined".to_string(), |a| format!("{a:.4}"));
        writeln!(
            s,
            "run{i}: seed={} trades={} pi_b={} pi_s={} pi_t={} alpha={alpha}",
            r.seed,
            r.trade_count,
            r.buyer_profit,
            r.seller_profit,
            r.total_profit()
        )
        .unwrap();
    }
    for side in [Side::Sell, Side::Buy] {
        let values = report.terminal(side);
        if values.is_empty() {
            continue;
        }
        let hist = Histogram::new(&values, config.session.histogram_bin_width);
        let m = hist.modality();
        writeln!(
            s,
            "{} terminal: n={} mean={:.4} clusters={} dominant_share={:.3} unimodal={}",
            side.label(),
            values.len(),
            mean(&values).unwrap(),
            m.clusters,
            m.dominant_share,
            m.unimodal
        )
        .unwrap();
        s.push_str(&hist.to_string());
    }
    match report.regression {
        Regression::Fit {
            slope,
            intercept,
            r_squared,
        } => writeln!(s, "regression: slope={slope:.4} intercept={intercept:.4} r_squared={r_squared:.4}").unwrap(),
        Regression::Degenerate => writeln!(s, "regression: degenerate").unwrap(),
    }
    s
}

/// Runs the landscape experiment and writes `landscape.csv`.
pub fn landscape_command(config: &ExperimentConfig, out: &Path) -> Result<Landscape> {
    fs::create_dir_all(out)?;
    let land = run_landscape(config)?;
    let mut w = create(&out.join("landscape.csv"))?;
    write!(w, "s,pps_mean,pps_std")?;
    for i in 0..land.pps.len() {
        write!(w, ",pps_seed{i}")?;
    }
    writeln!(w)?;
    let (m, sd) = (land.mean_pps(), land.std_pps());
    for (j, s) in land.strategies.iter().enumerate() {
        write!(w, "{s:.4},{},{}", m[j], sd[j])?;
        for row in &land.pps {
            write!(w, ",{}", row[j])?;
        }
        writeln!(w)?;
    }
    w.flush()?;
    Ok(land)
}

/// Outcome of the scripted imbalance scenario.
#[derive(Clone, Debug)]
pub struct ImpactReport {
    pub quotes: Vec<ProbeQuote>,
    pub injection_time: f64,
    pub pre: Vec<f64>,
    pub post: Vec<f64>,
    pub welch: Option<(f64, f64)>,
}

/// Runs the imbalance scenario, writing `impact_quotes.csv` and `summary.txt`.
pub fn impact_command(config: &ExperimentConfig, out: &Path) -> Result<ImpactReport> {
    fs::create_dir_all(out)?;
    let cfg = config.impact.clone().unwrap_or_default();
    let events = match &cfg.script {
        Some(path) => parse_script(&fs::read_to_string(path)?, path)?,
        None => default_script(),
    };
    let quotes = run_impact(&cfg, &events, config.seed)?;
    let injection_time = events.first().map_or(cfg.duration_s / 2.0, |e| e.time_s);
    let window = (injection_time / cfg.quote_interval_s).round() as usize;
    let (pre, post) = split_at_time(&quotes, injection_time, window);
    let welch = welch_t(&pre, &post);

    let mut w = create(&out.join("impact_quotes.csv"))?;
    writeln!(w, "time_s,delta_m,s,price")?;
    for q in &quotes {
        let d = q.imbalance.map_or(String::new(), |d| d.to_string());
        writeln!(w, "{},{d},{},{}", q.time_s, q.strategy, q.price)?;
    }
    w.flush()?;
    let mut s = String::new();
    writeln!(s, "injection_time_s={injection_time}").unwrap();
    writeln!(s, "pre_quotes={} pre_mean={:.4}", pre.len(), mean(&pre).unwrap_or(f64::NAN)).unwrap();
    writeln!(s, "post_quotes={} post_mean={:.4}", post.len(), mean(&post).unwrap_or(f64::NAN)).unwrap();
    if let Some((t, df)) = welch {
        writeln!(s, "welch_t={t:.4} welch_df={df:.1}").unwrap();
    }
    fs::write(out.join("summary.txt"), s)?;
    Ok(ImpactReport {
        quotes,
        injection_time,
        pre,
        post,
        welch,
    })
}

/// Builds the recurrence plot of a trajectory file and writes `rp.pgm`,
/// `lines.csv`, `stats.txt` and optionally `rp_cells.csv`.
pub fn rqa_command(config: &ExperimentConfig, out: &Path) -> Result<RqaStats> {
    fs::create_dir_all(out)?;
    let cfg = config.rqa.clone().unwrap_or_default();
    let file = BufReader::new(File::open(&cfg.input)?);
    let traj = StrategyTrajectory::read_csv(file, &cfg.input)?;
    let epsilon = cfg.epsilon.unwrap_or_else(|| epsilon_for_tolerance(traj.dim(), cfg.tolerance));
    let rp = build_rp(&traj, epsilon)?;
    let mut w = create(&out.join("rp.pgm"))?;
    write_pgm(&rp, cfg.downsample, &mut w)?;
    w.flush()?;
    let lines = vertical_line_distribution(&rp);
    let mut w = create(&out.join("lines.csv"))?;
    lines.write_csv(&mut w)?;
    w.flush()?;
    if cfg.sparse_csv {
        let mut w = create(&out.join("rp_cells.csv"))?;
        write_sparse_csv(&rp, &mut w)?;
        w.flush()?;
    }
    let stats = RqaStats::compute(&rp, traj.dim(), cfg.v_min);
    let mut w = create(&out.join("stats.txt"))?;
    stats.write_text(&mut w)?;
    w.flush()?;
    Ok(stats)
}
