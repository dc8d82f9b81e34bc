use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::error::{Error, Result};

/// Posterior summary of one scalar parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParameterSummary {
    pub mean: f64,
    pub sd: f64,
    pub median: f64,
    /// Lower end of the central 95% interval.
    pub lower: f64,
    /// Upper end of the central 95% interval.
    pub upper: f64,
}

impl ParameterSummary {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }
}

/// Linear-interpolation quantile of sorted data (the usual "type 7" rule).
pub fn quantile_sorted(sorted: &[f64], p: f64) -> Result<f64> {
    if sorted.is_empty() {
        return Err(Error::Empty);
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidProbability(p));
    }
    let h = p * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

pub fn mean_and_sd(values: &[f64]) -> Result<(f64, f64)> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = if values.len() > 1 {
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    Ok((mean, var.sqrt()))
}

/// Mean, sd, median and central 95% interval.
pub fn summarize(values: &[f64]) -> Result<ParameterSummary> {
    let (mean, sd) = mean_and_sd(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(ParameterSummary {
        mean,
        sd,
        median: quantile_sorted(&sorted, 0.5)?,
        lower: quantile_sorted(&sorted, 0.025)?,
        upper: quantile_sorted(&sorted, 0.975)?,
    })
}

/// Summary of an angle in `[0, 2π)`.
///
/// Values are first unrolled onto the window of width 2π centred on their
/// circular mean, so a posterior straddling 0 gets a contiguous interval.
/// The reported bounds may then fall outside `[0, 2π)`; use
/// [`circular_contains`] to test membership.
pub fn summarize_circular(values: &[f64]) -> Result<ParameterSummary> {
    if values.is_empty() {
        return Err(Error::Empty);
    }
    let (s, c) = values.iter().fold((0.0, 0.0), |(s, c), v| (s + v.sin(), c + v.cos()));
    let centre = s.atan2(c);
    let unrolled: Vec<f64> = values.iter().map(|v| unroll(*v, centre)).collect();
    summarize(&unrolled)
}

fn unroll(value: f64, centre: f64) -> f64 {
    let mut d = crate::signal::modulo(value - centre, 2.0 * PI);
    if d > PI {
        d -= 2.0 * PI;
    }
    centre + d
}

/// Whether an angle lies in a circular summary's interval.
pub fn circular_contains(summary: &ParameterSummary, value: f64) -> bool {
    summary.contains(unroll(value, 0.5 * (summary.lower + summary.upper)))
}
