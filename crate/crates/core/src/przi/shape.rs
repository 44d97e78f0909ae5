use std::f64::consts::PI;

use super::StrategyValue;

/// Gain `m` applied to the tangent in [`c_of_s`].
pub const SHAPE_GAIN: f64 = 4.0;

/// Symmetric linear rectifier with a clipped dead zone around zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rectifier {
    /// Output is clamped to `[-cutoff, cutoff]`.
    pub cutoff: f64,
    /// Inputs with magnitude below this are pushed out to `±epsilon`.
    pub epsilon: f64,
}

impl Default for Rectifier {
    fn default() -> Self {
        Self {
            cutoff: 100.0,
            epsilon: 1e-6,
        }
    }
}

impl Rectifier {
    pub fn apply(&self, x: f64) -> f64 {
        if x.abs() > self.epsilon {
            x.clamp(-self.cutoff, self.cutoff)
        } else if x < 0.0 {
            -self.epsilon
        } else {
            // exact zero lands on +epsilon
            self.epsilon
        }
    }
}

/// [`Rectifier::apply`] with the default constants (cutoff 100, epsilon 1e-6).
pub fn rectifier_theta(x: f64) -> f64 {
    Rectifier::default().apply(x)
}

/// Curvature of the envelope for strategy `s`: `theta(m * tan(pi * (s + 1/2)))`.
///
/// Only meaningful for `s != 0`; the uniform case never consults it.
pub fn c_of_s(s: StrategyValue) -> f64 {
    let mut t = (PI * (s.get() + 0.5)).tan();
    // tan at a multiple of pi leaves a ~1e-16 residue from rounding pi; it is zero
    if t.abs() < 1e-12 {
        t = 0.0;
    }
    rectifier_theta(SHAPE_GAIN * t)
}

/// `(e^{cx} - 1) / (e^c - 1)`, the rising exponential profile on `[0, 1]`.
fn rising(x: f64, c: f64) -> f64 {
    (c * x).exp_m1() / c.exp_m1()
}

/// Unnormalised PMF envelope at normalised price `x` for strategy `s` over a
/// range of `r` ticks.
pub fn pmf_envelope(x: f64, s: StrategyValue, r: u32) -> f64 {
    envelope_with_c(x, s, c_of_s(s), r)
}

pub(crate) fn envelope_with_c(x: f64, s: StrategyValue, c: f64, r: u32) -> f64 {
    let s = s.get();
    if s > 0.0 {
        rising(x, c)
    } else if s < 0.0 {
        1.0 - rising(x, c)
    } else {
        1.0 / f64::from(r.max(1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(s: f64) -> StrategyValue {
        StrategyValue::new(s).unwrap()
    }

    #[test]
    fn rectifier_examples() {
        assert_eq!(rectifier_theta(500.0), 100.0);
        assert_eq!(rectifier_theta(-500.0), -100.0);
        assert_eq!(rectifier_theta(5e-7), 1e-6);
        assert_eq!(rectifier_theta(-5e-7), -1e-6);
        assert_eq!(rectifier_theta(0.0), 1e-6);
        assert_eq!(rectifier_theta(-50.0), -50.0);
    }

    #[test]
    fn c_of_s_examples() {
        // tan(0.75 pi) = -1
        assert!((c_of_s(sv(0.25)) + 4.0).abs() < 1e-12);
        // tan(pi) is ~1e-16, inside the clipped dead zone
        assert_eq!(c_of_s(sv(0.5)), 1e-6);
        assert_eq!(c_of_s(sv(1.0 - 1e-9)), 100.0);
        assert_eq!(c_of_s(sv(1.0)), 100.0);
        assert_eq!(c_of_s(sv(-1.0)), -100.0);
        assert!((c_of_s(sv(-0.25)) - 4.0).abs() < 1e-12);
    }

    #[test]
    fn envelope_examples() {
        assert_eq!(pmf_envelope(0.3, sv(0.0), 40), 0.025);
        assert!((pmf_envelope(0.5, sv(0.5), 40) - 0.5).abs() < 1e-6);
        assert_eq!(pmf_envelope(0.0, sv(0.5), 40), 0.0);
        assert!((pmf_envelope(1.0, sv(0.7), 40) - 1.0).abs() < 1e-12);
        assert!((pmf_envelope(0.0, sv(-0.7), 40) - 1.0).abs() < 1e-12);
        assert!(pmf_envelope(1.0, sv(-0.7), 40).abs() < 1e-12);
    }

    #[test]
    fn envelope_is_monotone_in_x() {
        for i in 1..=10 {
            let up = sv(f64::from(i) / 10.0);
            let down = sv(-f64::from(i) / 10.0);
            let mut prev_up = -1.0;
            let mut prev_down = 2.0;
            for j in 0..=100 {
                let x = f64::from(j) / 100.0;
                let a = pmf_envelope(x, up, 100);
                let b = pmf_envelope(x, down, 100);
                assert!(a >= prev_up - 1e-15 && b <= prev_down + 1e-15);
                prev_up = a;
                prev_down = b;
            }
        }
    }
}
