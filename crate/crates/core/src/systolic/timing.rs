//! Analytical execution-time model and the measured hardware times it is
//! compared against.

use std::time::Duration;

use crate::error::{Error, Result};

/// Array cycles per window, `2 l_p + K - 1`.
pub fn steps_per_window(pattern_len: usize, k: usize) -> usize {
    2 * pattern_len + k - 1
}

/// Duration of one window evaluation at clock period `t_clk`.
pub fn step_search(pattern_len: usize, k: usize, t_clk: Duration) -> Result<Duration> {
    if pattern_len == 0 {
        return Err(Error::EmptyPattern);
    }
    Ok(t_clk * steps_per_window(pattern_len, k) as u32)
}

/// `(2 l_p + K - 1) T_clk l_t`. Valid for `K < 2 (l_p - 1)`; the single-symbol
/// pattern with `K = 0` is accepted as well.
pub fn exec_time_model(pattern_len: usize, k: usize, text_len: usize, t_clk: Duration) -> Result<Duration> {
    let degenerate = pattern_len == 1 && k == 0;
    if pattern_len == 0 || !(degenerate || k + 2 < 2 * pattern_len) {
        return Err(Error::Domain(format!(
            "model requires K < 2 (l_p - 1), got l_p = {pattern_len}, K = {k}"
        )));
    }
    let steps = steps_per_window(pattern_len, k) as u128 * text_len as u128;
    Ok(Duration::from_nanos((steps * t_clk.as_nanos()) as u64))
}

/// A measured hardware run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HwMeasurement {
    pub pattern_len: usize,
    pub k: usize,
    pub text_len: usize,
    pub seconds: f64,
}

const fn hw(pattern_len: usize, k: usize, seconds: f64) -> HwMeasurement {
    HwMeasurement {
        pattern_len,
        k,
        text_len: 3104,
        seconds,
    }
}

/// Varying pattern length at `K = 3`.
pub const HW_BY_LENGTH: [HwMeasurement; 4] = [hw(5, 3, 0.0039), hw(7, 3, 0.0051), hw(10, 3, 0.0069), hw(15, 3, 0.0099)];

/// Varying threshold. The source labels these runs `l_p = 5`; the `K = 3`
/// entry repeats the `l_p = 15` time of [`HW_BY_LENGTH`], so `l_p = 15` is used.
pub const HW_BY_THRESHOLD: [HwMeasurement; 4] = [hw(15, 2, 0.0096), hw(15, 3, 0.0099), hw(15, 4, 0.0102), hw(15, 5, 0.0105)];

/// Same runs with the length as labelled in the source.
pub const HW_BY_THRESHOLD_AS_LABELLED: [HwMeasurement; 4] = [hw(5, 2, 0.0096), hw(5, 3, 0.0099), hw(5, 4, 0.0102), hw(5, 5, 0.0105)];

/// Least-squares fit of `y = c x` through the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionalFit {
    pub constant: f64,
    /// `(y_fit - y) / y` per point.
    pub residuals: Vec<f64>,
}

impl ProportionalFit {
    pub fn fit(points: &[(f64, f64)]) -> Self {
        let sxy: f64 = points.iter().map(|(x, y)| x * y).sum();
        let sxx: f64 = points.iter().map(|(x, _)| x * x).sum();
        let constant = sxy / sxx;
        let residuals = points.iter().map(|(x, y)| (constant * x - y) / y).collect();
        ProportionalFit { constant, residuals }
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.abs()))
    }
}

/// Fits measured seconds against `(2 l_p + K - 1) l_t`. The constant is the
/// effective time per window step and symbol.
pub fn fit_measurements(rows: &[HwMeasurement]) -> ProportionalFit {
    let points: Vec<_> = rows
        .iter()
        .map(|m| ((steps_per_window(m.pattern_len, m.k) * m.text_len) as f64, m.seconds))
        .collect();
    ProportionalFit::fit(&points)
}
