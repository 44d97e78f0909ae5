//! Summary statistics over session outputs.

use std::fmt;

/// Trailing mean over at most `window` samples, using all history while
/// fewer are available.
pub fn moving_average(series: &[f64], window: usize) -> Vec<f64> {
    assert!(window >= 1, "window must hold at least one sample");
    let mut out = Vec::with_capacity(series.len());
    let mut sum = 0.0;
    for (i, &x) in series.iter().enumerate() {
        sum += x;
        if i >= window {
            sum -= series[i - window];
        }
        out.push(sum / (i + 1).min(window) as f64);
    }
    out
}

/// Smith's alpha: `100 * rms(price - p0) / p0`. `None` without trades.
pub fn smith_alpha(prices: &[f64], p0: f64) -> Option<f64> {
    if prices.is_empty() {
        return None;
    }
    let ms = prices.iter().map(|p| (p - p0) * (p - p0)).sum::<f64>() / prices.len() as f64;
    Some(100.0 * ms.sqrt() / p0)
}

pub fn mean(xs: &[f64]) -> Option<f64> {
    (!xs.is_empty()).then(|| xs.iter().sum::<f64>() / xs.len() as f64)
}

/// Sample standard deviation; zero for a single value.
pub fn std_dev(xs: &[f64]) -> Option<f64> {
    let m = mean(xs)?;
    if xs.len() < 2 {
        return Some(0.0);
    }
    let var = xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64;
    Some(var.sqrt())
}

/// Welch's two-sample t statistic for `mean(b) - mean(a)` and its
/// Welch-Satterthwaite degrees of freedom.
pub fn welch_t(a: &[f64], b: &[f64]) -> Option<(f64, f64)> {
    if a.len() < 2 || b.len() < 2 {
        return None;
    }
    let (ma, mb) = (mean(a)?, mean(b)?);
    let va = std_dev(a)?.powi(2) / a.len() as f64;
    let vb = std_dev(b)?.powi(2) / b.len() as f64;
    let se2 = va + vb;
    if se2 == 0.0 {
        return None;
    }
    let df = se2 * se2 / (va * va / (a.len() - 1) as f64 + vb * vb / (b.len() - 1) as f64);
    Some(((mb - ma) / se2.sqrt(), df))
}

/// Indices of local maxima: points at least as high as every neighbour,
/// with plateaus reported at their first index.
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    let n = values.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j + 1 < n && values[j + 1] == values[i] {
            j += 1;
        }
        let left_ok = i == 0 || values[i - 1] < values[i];
        let right_ok = j == n - 1 || values[j + 1] < values[i];
        if left_ok && right_ok {
            out.push(i);
        }
        i = j + 1;
    }
    out
}

/// Least-squares line through `(x, y)` pairs.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Regression {
    Fit { slope: f64, intercept: f64, r_squared: f64 },
    /// Fewer than two points, or all `x` equal.
    Degenerate,
}

pub fn linear_regression(xs: &[f64], ys: &[f64]) -> Regression {
    assert_eq!(xs.len(), ys.len());
    if xs.len() < 2 {
        return Regression::Degenerate;
    }
    let mx = mean(xs).unwrap();
    let my = mean(ys).unwrap();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Regression::Degenerate;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Regression::Fit {
        slope,
        intercept: my - slope * mx,
        r_squared,
    }
}

/// Fixed-width histogram over `[-1, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Histogram {
    pub bin_width: f64,
    pub counts: Vec<usize>,
}

impl Histogram {
    pub fn new(values: &[f64], bin_width: f64) -> Self {
        assert!(bin_width > 0.0);
        let bins = (2.0 / bin_width).round().max(1.0) as usize;
        let mut counts = vec![0; bins];
        for &v in values {
            let idx = ((v + 1.0) / bin_width).floor() as isize;
            counts[idx.clamp(0, bins as isize - 1) as usize] += 1;
        }
        Self { bin_width, counts }
    }

    pub fn lower_edge(&self, bin: usize) -> f64 {
        -1.0 + bin as f64 * self.bin_width
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Runs of adjacent non-empty bins as `(first_bin, last_bin, count)`.
    pub fn clusters(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        let mut start = None;
        let mut acc = 0;
        for (i, &n) in self.counts.iter().enumerate() {
            match (n > 0, start) {
                (true, None) => {
                    start = Some(i);
                    acc = n;
                }
                (true, Some(_)) => acc += n,
                (false, Some(s)) => {
                    out.push((s, i - 1, acc));
                    start = None;
                }
                (false, None) => {}
            }
        }
        if let Some(s) = start {
            out.push((s, self.counts.len() - 1, acc));
        }
        out
    }

    pub fn modality(&self) -> Modality {
        let clusters = self.clusters();
        let total = self.total();
        let dominant = clusters.iter().map(|c| c.2).max().unwrap_or(0);
        let share = if total == 0 { 0.0 } else { dominant as f64 / total as f64 };
        Modality {
            clusters: clusters.len(),
            dominant_share: share,
            unimodal: total > 0 && share >= UNIMODAL_SHARE,
        }
    }
}

/// Share of values the largest cluster needs for the set to count as unimodal.
pub const UNIMODAL_SHARE: f64 = 0.9;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Modality {
    pub clusters: usize,
    pub dominant_share: f64,
    pub unimodal: bool,
}

impl fmt::Display for Histogram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &n) in self.counts.iter().enumerate() {
            if n > 0 {
                writeln!(f, "[{:+.2}, {:+.2}) {:>4} {}", self.lower_edge(i), self.lower_edge(i + 1), n, "#".repeat(n.min(60)))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn moving_average_examples() {
        assert!(moving_average(&[0.4; 5], 3).iter().all(|v| (v - 0.4).abs() < 1e-12));
        let step: Vec<f64> = (0..30).map(|h| if h < 13 { 0.0 } else { 1.0 }).collect();
        let ma = moving_average(&step, 12);
        assert_eq!(ma[12], 0.0);
        for k in 1..=12 {
            assert!((ma[12 + k] - k as f64 / 12.0).abs() < 1e-12);
        }
        assert_eq!(moving_average(&[1.0, 3.0], 12), vec![1.0, 2.0]);
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(smith_alpha(&[100.0, 100.0], 100.0), Some(0.0));
        assert!((smith_alpha(&[90.0, 110.0], 100.0).unwrap() - 10.0).abs() < 1e-12);
        assert!((smith_alpha(&[80.0], 100.0).unwrap() - 20.0).abs() < 1e-12);
        assert_eq!(smith_alpha(&[], 100.0), None);
    }

    #[test]
    fn regression_examples() {
        assert_eq!(linear_regression(&[0.0, 0.0, 0.0], &[1.0, 2.0, 3.0]), Regression::Degenerate);
        assert_eq!(linear_regression(&[0.5], &[1.0]), Regression::Degenerate);
        match linear_regression(&[0.1, 0.4], &[94.0, 88.0]) {
            Regression::Fit { slope, r_squared, .. } => {
                assert!((slope + 20.0).abs() < 1e-9);
                assert!((r_squared - 1.0).abs() < 1e-12);
            }
            Regression::Degenerate => panic!("two distinct points fit a line"),
        }
    }

    #[test]
    fn histogram_modality() {
        let one = Histogram::new(&[0.61, 0.65, 0.72, 0.74, 0.78], 0.1);
        assert_eq!(one.total(), 5);
        assert!(one.modality().unimodal);
        let two = Histogram::new(&[-0.95, -0.9, 0.9, 0.95, 1.0], 0.1);
        let m = two.modality();
        assert_eq!(m.clusters, 2);
        assert!(!m.unimodal);
        assert_eq!(Histogram::new(&[1.0], 0.1).counts[19], 1);
    }

    #[test]
    fn maxima() {
        assert_eq!(local_maxima(&[3.0, 1.0, 2.0, 5.0, 4.0]), vec![0, 3]);
        assert_eq!(local_maxima(&[1.0, 2.0, 2.0, 1.0]), vec![1]);
        assert_eq!(local_maxima(&[1.0]), vec![0]);
    }

    #[test]
    fn welch() {
        let a = [1.0, 2.0, 3.0, 4.0];
        let b = [3.0, 4.0, 5.0, 6.0];
        let (t, df) = welch_t(&a, &b).unwrap();
        assert!((t - 2.0 / (2.0 * 5.0 / 3.0 / 4.0f64).sqrt()).abs() < 1e-12);
        assert!((df - 6.0).abs() < 1e-12);
        assert_eq!(welch_t(&[1.0], &b), None);
    }

    #[test]
    fn spread() {
        assert_eq!(std_dev(&[2.0]), Some(0.0));
        assert!((std_dev(&[1.0, 3.0]).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(mean(&[]), None);
    }
}
