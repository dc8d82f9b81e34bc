use num_traits::Float;
use alloc::vec::Vec;

use rand::Rng;

use super::sampling::SpectrumSampler;
use super::summary::quantile_sorted;
use crate::error::{Error, Result};
use crate::spectrum::{AutocovarianceKernel, SpectrumPrior};

/// Monte Carlo summary of `γ` at one lag.
#[derive(Debug, Clone, PartialEq)]
pub struct LagSummary {
    pub lag: usize,
    pub mean: f64,
    /// Sample variance across draws.
    pub variance: f64,
    /// Standard error of `mean`.
    pub mean_se: f64,
    /// Standard error of `variance`, from the empirical fourth central moment.
    pub variance_se: f64,
    /// Values at the requested probabilities, in order.
    pub quantiles: Vec<f64>,
}

impl LagSummary {
    pub fn sd(&self) -> f64 {
        self.variance.sqrt()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AutocovarianceSummary {
    pub dt: f64,
    pub draws: usize,
    pub probabilities: Vec<f64>,
    pub lags: Vec<LagSummary>,
}

/// Propagates a proper spectrum posterior to the autocovariance by drawing
/// `draws` spectra and mapping each through `γ(kΔt)`.
///
/// Moments are accumulated in a single pass. Quantiles need every draw of
/// every lag in memory; pass no probabilities to skip them.
pub fn monte_carlo_autocovariance<R: Rng + ?Sized>(
    posterior: &SpectrumPrior,
    draws: usize,
    probabilities: &[f64],
    rng: &mut R,
) -> Result<AutocovarianceSummary> {
    if draws < 2 {
        return Err(Error::InvalidParameter { name: "draw count", value: draws as f64 });
    }
    if let Some(p) = probabilities.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidProbability(*p));
    }
    let sampler = SpectrumSampler::new(posterior)?;
    let grid = *posterior.grid();
    let n = grid.n();
    let kernel = AutocovarianceKernel::new(grid);
    let keep = !probabilities.is_empty();
    let mut stored: Vec<Vec<f64>> = if keep { (0..n).map(|_| Vec::with_capacity(draws)).collect() } else { Vec::new() };
    let mut moments: Vec<Moments> = (0..n).map(|_| Moments::default()).collect();
    let mut sigma2 = Vec::with_capacity(grid.bins());
    let mut gamma = Vec::with_capacity(n);
    for _ in 0..draws {
        sampler.sample_into(rng, &mut sigma2);
        kernel.evaluate_into(&sigma2, &mut gamma);
        for (k, g) in gamma.iter().enumerate() {
            moments[k].push(*g);
            if keep {
                stored[k].push(*g);
            }
        }
    }
    let mut lags = Vec::with_capacity(n);
    for (k, m) in moments.iter().enumerate() {
        let quantiles = if keep {
            let values = &mut stored[k];
            values.sort_by(f64::total_cmp);
            probabilities.iter().map(|p| quantile_sorted(values, *p)).collect::<Result<Vec<_>>>()?
        } else {
            Vec::new()
        };
        let (variance, variance_se) = m.variance_with_se();
        lags.push(LagSummary {
            lag: k,
            mean: m.mean,
            variance,
            mean_se: (variance / m.count as f64).sqrt(),
            variance_se,
            quantiles,
        });
    }
    Ok(AutocovarianceSummary { dt: grid.dt(), draws, probabilities: probabilities.to_vec(), lags })
}

/// Streaming central moments up to order four.
#[derive(Debug, Default, Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
    m3: f64,
    m4: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        let n1 = self.count as f64;
        self.count += 1;
        let n = self.count as f64;
        let delta = x - self.mean;
        let delta_n = delta / n;
        let delta_n2 = delta_n * delta_n;
        let term1 = delta * delta_n * n1;
        self.mean += delta_n;
        self.m4 += term1 * delta_n2 * (n * n - 3.0 * n + 3.0) + 6.0 * delta_n2 * self.m2 - 4.0 * delta_n * self.m3;
        self.m3 += term1 * delta_n * (n - 2.0) - 3.0 * delta_n * self.m2;
        self.m2 += term1;
    }

    /// Unbiased variance and the large-sample standard error
    /// `√((μ₄ - σ⁴)/n)` of the sample variance.
    fn variance_with_se(&self) -> (f64, f64) {
        let n = self.count as f64;
        let variance = self.m2 / (n - 1.0);
        let mu2 = self.m2 / n;
        let mu4 = self.m4 / n;
        (variance, ((mu4 - mu2 * mu2).max(0.0) / n).sqrt())
    }
}
