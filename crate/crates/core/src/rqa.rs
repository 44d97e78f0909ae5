//! Recurrence plots and trapping time of strategy-vector trajectories.

use std::io::{BufRead, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};

/// Uniformly sampled trajectory of strategy vectors.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct StrategyTrajectory {
    times: Vec<f64>,
    samples: Vec<Vec<f64>>,
}

impl StrategyTrajectory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_samples(times: Vec<f64>, samples: Vec<Vec<f64>>) -> Result<Self> {
        if times.len() != samples.len() {
            return Err(Error::Config(format!(
                "{} timestamps for {} samples",
                times.len(),
                samples.len()
            )));
        }
        let mut traj = Self::new();
        for (t, s) in times.into_iter().zip(samples) {
            traj.push(t, s)?;
        }
        Ok(traj)
    }

    /// Appends a sample; every sample must share the first one's dimension.
    pub fn push(&mut self, time: f64, sample: Vec<f64>) -> Result<()> {
        if let Some(first) = self.samples.first() {
            if first.len() != sample.len() {
                return Err(Error::DimensionMismatch {
                    index: self.samples.len(),
                    expected: first.len(),
                    found: sample.len(),
                });
            }
        }
        self.times.push(time);
        self.samples.push(sample);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn samples(&self) -> &[Vec<f64>] {
        &self.samples
    }

    /// Reads `time, s_0, ..., s_{n-1}` rows after a header line.
    pub fn read_csv<R: BufRead>(reader: R, path: &Path) -> Result<Self> {
        let mut traj = Self::new();
        for (i, line) in reader.lines().enumerate() {
            let line = line?;
            if i == 0 || line.trim().is_empty() {
                continue;
            }
            let parse_err = |msg: String| Error::Parse {
                path: path.display().to_string(),
                line: i + 1,
                msg,
            };
            let mut fields = line.split(',').map(|f| f.trim().parse::<f64>());
            let time = fields
                .next()
                .ok_or_else(|| parse_err("empty row".into()))?
                .map_err(|e| parse_err(e.to_string()))?;
            let sample = fields
                .collect::<std::result::Result<Vec<f64>, _>>()
                .map_err(|e| parse_err(e.to_string()))?;
            traj.push(time, sample)?;
        }
        Ok(traj)
    }
}

/// Recurrence radius for a per-component tolerance: `sqrt(dim * tol^2)`.
pub fn epsilon_for_tolerance(dim: usize, tolerance: f64) -> f64 {
    (dim as f64 * tolerance * tolerance).sqrt()
}

/// Largest distance in `[-1, 1]^dim`.
pub fn phase_space_diameter(dim: usize) -> f64 {
    (dim as f64 * 4.0).sqrt()
}

/// Square binary matrix, bit-packed by row.
///
/// Cell `(c, r)` is column `c`, row `r`; for a recurrence plot it is set
/// when samples `c` and `r` are closer than the radius.
#[derive(Clone, Debug, PartialEq)]
pub struct RecurrencePlot {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    epsilon: f64,
}

impl RecurrencePlot {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64);
        Self {
            n,
            words,
            bits: vec![0; n * words],
            epsilon: 0.0,
        }
    }

    /// Arbitrary binary matrix, indexed `cells[r][c]`.
    pub fn from_rows(cells: &[Vec<bool>]) -> Self {
        let mut rp = Self::empty(cells.len());
        for (r, row) in cells.iter().enumerate() {
            assert_eq!(row.len(), cells.len(), "matrix must be square");
            for (c, &v) in row.iter().enumerate() {
                if v {
                    rp.set(c, r);
                }
            }
        }
        rp
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn get(&self, c: usize, r: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, c: usize, r: usize) {
        self.bits[r * self.words + c / 64] |= 1 << (c % 64);
    }

    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    /// Fraction of shaded cells.
    pub fn recurrence_rate(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            self.count() as f64 / (self.n * self.n) as f64
        }
    }
}

/// Shades `(c, r)` iff the Euclidean distance between samples `c` and `r`
/// is strictly below `epsilon`. Rows are computed in parallel.
pub fn build_rp(traj: &StrategyTrajectory, epsilon: f64) -> Result<RecurrencePlot> {
    if traj.len() < 2 {
        return Err(Error::Config("a recurrence plot needs at least two samples".into()));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Config(format!("recurrence radius must be positive, got {epsilon}")));
    }
    let mut rp = RecurrencePlot::empty(traj.len());
    rp.epsilon = epsilon;
    let eps2 = epsilon * epsilon;
    let samples = traj.samples();
    let words = rp.words;
    rp.bits.par_chunks_mut(words).enumerate().for_each(|(r, row)| {
        let a = &samples[r];
        for (c, b) in samples.iter().enumerate() {
            let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
            if d2 < eps2 {
                row[c / 64] |= 1 << (c % 64);
            }
        }
    });
    Ok(rp)
}

/// Histogram of maximal line lengths: `counts[v]` lines of length `v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LineDistribution {
    counts: Vec<u64>,
}

impl LineDistribution {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    fn add(&mut self, len: usize) {
        if len == 0 {
            return;
        }
        if self.counts.len() <= len {
            self.counts.resize(len + 1, 0);
        }
        self.counts[len] += 1;
    }

    pub fn count(&self, v: usize) -> u64 {
        self.counts.get(v).copied().unwrap_or(0)
    }

    /// `(length, count)` for every length that occurs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().enumerate().filter(|(_, &n)| n > 0).map(|(v, &n)| (v, n))
    }

    /// Total lines at least `v_min` long.
    pub fn lines_at_least(&self, v_min: usize) -> u64 {
        self.iter().filter(|&(v, _)| v >= v_min).map(|(_, n)| n).sum()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "length,count")?;
        for (v, n) in self.iter() {
            writeln!(out, "{v},{n}")?;
        }
        Ok(())
    }
}

/// Maximal runs of shaded cells down every column, line of identity included.
pub fn vertical_line_distribution(rp: &RecurrencePlot) -> LineDistribution {
    let per_column: Vec<LineDistribution> = (0..rp.n)
        .into_par_iter()
        .map(|c| {
            let mut d = LineDistribution::default();
            let mut run = 0;
            for r in 0..rp.n {
                if rp.get(c, r) {
                    run += 1;
                } else {
                    d.add(run);
                    run = 0;
                }
            }
            d.add(run);
            d
        })
        .collect();
    merge(per_column)
}

/// Maximal runs along every diagonal `r - c = k`.
pub fn diagonal_line_distribution(rp: &RecurrencePlot) -> LineDistribution {
    let n = rp.n as isize;
    let per_diag: Vec<LineDistribution> = (-(n - 1)..n)
        .into_par_iter()
        .map(|k| {
            let mut d = LineDistribution::default();
            let mut run = 0;
            let (mut c, mut r) = if k >= 0 { (0, k) } else { (-k, 0) };
            while c < n && r < n {
                if rp.get(c as usize, r as usize) {
                    run += 1;
                } else {
                    d.add(run);
                    run = 0;
                }
                c += 1;
                r += 1;
            }
            d.add(run);
            d
        })
        .collect();
    merge(per_diag)
}

fn merge(parts: Vec<LineDistribution>) -> LineDistribution {
    let mut out = LineDistribution::default();
    for part in parts {
        if out.counts.len() < part.counts.len() {
            out.counts.resize(part.counts.len(), 0);
        }
        for (v, n) in part.counts.iter().enumerate() {
            out.counts[v] += n;
        }
    }
    out
}

/// Mean length of lines at least `v_min` long, in sample intervals.
/// `None` when there are no such lines.
pub fn trapping_time(dist: &LineDistribution, v_min: usize) -> Option<f64> {
    let (num, den) = dist
        .iter()
        .filter(|&(v, _)| v >= v_min)
        .fold((0u64, 0u64), |(a, b), (v, n)| (a + v as u64 * n, b + n));
    (den > 0).then(|| num as f64 / den as f64)
}

/// Fraction of shaded cells lying on diagonal lines at least `l_min` long.
pub fn determinism(rp: &RecurrencePlot, l_min: usize) -> Option<f64> {
    let d = diagonal_line_distribution(rp);
    let total: u64 = d.iter().map(|(v, n)| v as u64 * n).sum();
    let on_lines: u64 = d.iter().filter(|&(v, _)| v >= l_min).map(|(v, n)| v as u64 * n).sum();
    (total > 0).then(|| on_lines as f64 / total as f64)
}

/// Summary written next to the plot.
#[derive(Clone, Debug, PartialEq)]
pub struct RqaStats {
    pub n: usize,
    pub dim: usize,
    pub epsilon: f64,
    pub diameter: f64,
    pub recurrence_rate: f64,
    pub v_min: usize,
    pub trapping_time: Option<f64>,
    pub determinism: Option<f64>,
}

impl RqaStats {
    pub fn compute(rp: &RecurrencePlot, dim: usize, v_min: usize) -> Self {
        Self {
            n: rp.n,
            dim,
            epsilon: rp.epsilon,
            diameter: phase_space_diameter(dim),
            recurrence_rate: rp.recurrence_rate(),
            v_min,
            trapping_time: trapping_time(&vertical_line_distribution(rp), v_min),
            determinism: determinism(rp, v_min),
        }
    }

    /// `key=value` lines; undefined statistics are written as `undefined`.
    pub fn write_text<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let opt = |v: Option<f64>| v.map_or_else(|| "undefined".to_string(), |x| format!("{x:.6}"));
        writeln!(out, "samples={}", self.n)?;
        writeln!(out, "dimension={}", self.dim)?;
        writeln!(out, "epsilon={:.6}", self.epsilon)?;
        writeln!(out, "diameter={:.6}", self.diameter)?;
        writeln!(out, "recurrence_rate={:.6}", self.recurrence_rate)?;
        writeln!(out, "v_min={}", self.v_min)?;
        writeln!(out, "trapping_time={}", opt(self.trapping_time))?;
        writeln!(out, "determinism={}", opt(self.determinism))?;
        Ok(())
    }
}

/// Side length of the plot after max-pooling by `factor`.
pub fn downsampled_size(n: usize, factor: usize) -> usize {
    n.div_ceil(factor)
}

/// Binary PGM, shaded cells black, origin at the lower left. Each output
/// pixel covers a `factor` x `factor` block and is shaded if any cell is.
pub fn write_pgm<W: Write>(rp: &RecurrencePlot, factor: usize, mut out: W) -> Result<()> {
    if factor == 0 {
        return Err(Error::Config("downsample factor must be at least 1".into()));
    }
    let m = downsampled_size(rp.n, factor);
    let mut pooled = vec![false; m * m];
    for r in 0..rp.n {
        for c in 0..rp.n {
            if rp.get(c, r) {
                pooled[(r / factor) * m + c / factor] = true;
            }
        }
    }
    write!(out, "P5\n{m} {m}\n255\n")?;
    let mut line = vec![0u8; m];
    for y in 0..m {
        let br = m - 1 - y;
        for (bc, px) in line.iter_mut().enumerate() {
            *px = if pooled[br * m + bc] { 0 } else { 255 };
        }
        out.write_all(&line)?;
    }
    Ok(())
}

/// `c,r` for every shaded cell.
pub fn write_sparse_csv<W: Write>(rp: &RecurrencePlot, mut out: W) -> std::io::Result<()> {
    writeln!(out, "c,r")?;
    for r in 0..rp.n {
        for c in 0..rp.n {
            if rp.get(c, r) {
                writeln!(out, "{c},{r}")?;
            }
        }
    }
    Ok(())
}
