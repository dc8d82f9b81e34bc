//! Discretized noise spectrum: per-bin variances, their conjugate prior and
//! derived quantities (integrated power, autocovariance).

mod elicit;
mod invchisq;

use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;


use crate::error::{Error, Result};
use crate::fourier::{FourierCoefficients, FourierGrid};

pub use elicit::{
    elicit_band_prior, elicit_white_prior, integrated_spectrum_moments, variation_coeff_equal_dof,
    variation_coeff_equal_params, variation_coeff_full_band, variation_coeff_interior,
    white_prior_with_dof, BandMoments, BandTarget, WhitePriorTarget,
};
pub use invchisq::{elicit_from_moments, InvChiSqParams, Moment};

/// Independent inverse-χ² parameters for every bin of a grid.
///
/// Used both for priors and for the posteriors they update into.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumPrior {
    bins: Vec<InvChiSqParams>,
    grid: FourierGrid,
}

impl SpectrumPrior {
    pub fn new(bins: Vec<InvChiSqParams>, grid: FourierGrid) -> Result<Self> {
        if bins.len() != grid.bins() {
            return Err(Error::LengthMismatch { expected: grid.bins(), actual: bins.len() });
        }
        Ok(Self { bins, grid })
    }

    /// The same parameters in every bin.
    pub fn uniform(params: InvChiSqParams, grid: FourierGrid) -> Self {
        Self { bins: alloc::vec![params; grid.bins()], grid }
    }

    pub fn jeffreys(grid: FourierGrid) -> Self {
        Self::uniform(InvChiSqParams::jeffreys(), grid)
    }

    pub fn bins(&self) -> &[InvChiSqParams] {
        &self.bins
    }

    pub fn bin(&self, j: usize) -> &InvChiSqParams {
        &self.bins[j]
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    pub fn is_proper(&self) -> bool {
        self.bins.iter().all(|b| !b.is_improper())
    }

    pub(crate) fn ensure_proper(&self) -> Result<()> {
        match self.bins.iter().find(|b| b.is_improper()) {
            Some(b) => Err(Error::Improper { nu: b.nu(), s2: b.s2() }),
            None => Ok(()),
        }
    }

    /// If all bins share the same parameters, returns them.
    pub fn common_params(&self) -> Option<InvChiSqParams> {
        let first = self.bins[0];
        self.bins.iter().all(|b| *b == first).then_some(first)
    }

    /// Conjugate posterior given the coefficients of the noise residual:
    /// `ν'_j = ν_j + κ_j`, `s²'_j = (ν_j s_j² + a_j² + b_j²)/(ν_j + κ_j)`.
    pub fn posterior_update(&self, residual: &FourierCoefficients) -> Result<Self> {
        self.grid.ensure_same(residual.grid())?;
        self.posterior_from_powers(residual.powers())
    }

    pub(crate) fn posterior_from_powers(&self, powers: impl Iterator<Item = f64>) -> Result<Self> {
        let bins = self
            .bins
            .iter()
            .zip(powers)
            .enumerate()
            .map(|(j, (b, p))| b.update(self.grid.kappa(j), p))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { bins, grid: self.grid })
    }

    /// Per-bin `(mean, variance)`.
    pub fn moments(&self) -> Result<Vec<(Moment, Moment)>> {
        self.bins.iter().map(InvChiSqParams::moments).collect()
    }
}

/// One realization of the discretized spectrum, `σ_j² = S₁*(f_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDraw {
    sigma2: Vec<f64>,
    grid: FourierGrid,
}

impl SpectrumDraw {
    pub fn new(sigma2: Vec<f64>, grid: FourierGrid) -> Result<Self> {
        if sigma2.len() != grid.bins() {
            return Err(Error::LengthMismatch { expected: grid.bins(), actual: sigma2.len() });
        }
        if let Some((bin, &value)) =
            sigma2.iter().enumerate().find(|(_, v)| !(**v > 0.0 && v.is_finite()))
        {
            return Err(Error::NonPositiveVariance { bin, value });
        }
        Ok(Self { sigma2, grid })
    }

    /// The same variance in every bin.
    pub fn flat(sigma2: f64, grid: FourierGrid) -> Result<Self> {
        Self::new(alloc::vec![sigma2; grid.bins()], grid)
    }

    pub fn sigma2(&self) -> &[f64] {
        &self.sigma2
    }

    pub fn grid(&self) -> &FourierGrid {
        &self.grid
    }

    /// One-sided discretized spectrum `S₁*(f_j) = σ_j²`.
    pub fn one_sided(&self, j: usize) -> f64 {
        self.sigma2[j]
    }

    /// Two-sided discretized spectrum `S₂*(f_j) = σ_j²/κ_j`.
    pub fn two_sided(&self, j: usize) -> f64 {
        self.sigma2[j] / self.grid.kappa(j) as f64
    }
}

/// Frequency range `(lower, upper]` over Fourier frequencies.
///
/// The lower bound is exclusive. `include_dc` pulls bin 0 in when
/// `lower == 0`, which is what full-band quantities such as `I_[0, f_{N/2}]`
/// need; a negative lower bound includes it as well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyBand {
    pub lower: f64,
    pub upper: f64,
    pub include_dc: bool,
}

impl FrequencyBand {
    pub fn new(lower: f64, upper: f64) -> Self {
        Self { lower, upper, include_dc: false }
    }

    pub fn with_dc(mut self) -> Self {
        self.include_dc = true;
        self
    }

    /// `[0, f_{⌊N/2⌋}]`, every bin of the grid.
    pub fn full(grid: &FourierGrid) -> Self {
        Self { lower: 0.0, upper: grid.frequency(grid.last_bin()), include_dc: true }
    }

    /// Inclusive bin range `j1..=j2` with `j1 = min{k : f_k > lower}` and
    /// `j2 = max{k : f_k ≤ upper}`.
    pub fn bin_range(&self, grid: &FourierGrid) -> Result<(usize, usize)> {
        let df = grid.df();
        if !(self.lower.is_finite() && self.upper.is_finite())
            || self.upper - self.lower < df * (1.0 - 1e-9)
        {
            return Err(Error::BandTooNarrow { lower: self.lower, upper: self.upper });
        }
        // frequencies are compared in units of Δf with a small slack for rounding
        const SLACK: f64 = 1e-9;
        let lo = self.lower / df;
        let j1 = if self.lower < 0.0 || (self.lower == 0.0 && self.include_dc) {
            0
        } else {
            (lo + SLACK).floor() as usize + 1
        };
        let hi = self.upper / df + SLACK;
        if hi < 0.0 {
            return Err(Error::EmptyBand { lower: self.lower, upper: self.upper });
        }
        let j2 = (hi.floor() as usize).min(grid.last_bin());
        if j1 > j2 {
            return Err(Error::EmptyBand { lower: self.lower, upper: self.upper });
        }
        Ok((j1, j2))
    }
}

/// Integrated spectrum `Δf Σ_{j1..=j2} (κ_j/2) σ_j²`.
pub fn integrated_spectrum(draw: &SpectrumDraw, band: &FrequencyBand) -> Result<f64> {
    let grid = draw.grid;
    let (j1, j2) = band.bin_range(&grid)?;
    Ok(grid.df()
        * (j1..=j2).map(|j| 0.5 * grid.kappa(j) as f64 * draw.sigma2[j]).sum::<f64>())
}

/// Cosine table `cos(2π m/N)`, `m = 0..N`.
fn cosines(n: usize) -> Vec<f64> {
    (0..n).map(|m| (2.0 * PI * m as f64 / n as f64).cos()).collect()
}

/// Autocovariance at lags `0, Δt, …, (N-1)Δt`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocovarianceFn {
    pub gamma: Vec<f64>,
    pub dt: f64,
}

impl AutocovarianceFn {
    /// `γ(0)`, the process variance.
    pub fn variance(&self) -> f64 {
        self.gamma[0]
    }

    pub fn lag(&self, k: usize) -> f64 {
        self.gamma[k]
    }
}

/// Reusable evaluator of `γ(kΔt) = 1/(NΔt) Σ_j σ_j² (κ_j/2) cos(2π jk/N)`.
#[derive(Debug, Clone)]
pub struct AutocovarianceKernel {
    grid: FourierGrid,
    cos: Vec<f64>,
}

impl AutocovarianceKernel {
    pub fn new(grid: FourierGrid) -> Self {
        Self { grid, cos: cosines(grid.n()) }
    }

    /// Writes `γ` for the given variances into `out`.
    pub fn evaluate_into(&self, sigma2: &[f64], out: &mut Vec<f64>) {
        let n = self.grid.n();
        let scale = 1.0 / (n as f64 * self.grid.dt());
        let weights: Vec<f64> = sigma2
            .iter()
            .enumerate()
            .map(|(j, s)| 0.5 * self.grid.kappa(j) as f64 * s * scale)
            .collect();
        out.clear();
        for k in 0..n {
            // γ(N - k) = γ(k); mirroring keeps the sequence exactly symmetric
            if k > n / 2 {
                out.push(out[n - k]);
                continue;
            }
            let mut acc = 0.0;
            let mut idx = 0usize;
            for w in &weights {
                acc += w * self.cos[idx];
                idx += k;
                if idx >= n {
                    idx -= n;
                }
            }
            out.push(acc);
        }
    }
}

pub fn autocovariance(draw: &SpectrumDraw) -> AutocovarianceFn {
    let kernel = AutocovarianceKernel::new(draw.grid);
    let mut gamma = Vec::with_capacity(draw.grid.n());
    kernel.evaluate_into(&draw.sigma2, &mut gamma);
    AutocovarianceFn { gamma, dt: draw.grid.dt() }
}

/// Dense symmetric `N × N` matrix in row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl CovarianceMatrix {
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Circulant covariance `Σ[m][n] = γ(((n - m) mod N) Δt)` of the time samples.
pub fn covariance_matrix(draw: &SpectrumDraw) -> CovarianceMatrix {
    let gamma = autocovariance(draw).gamma;
    let n = gamma.len();
    let mut data = Vec::with_capacity(n * n);
    for m in 0..n {
        for k in 0..n {
            data.push(gamma[(k + n - m) % n]);
        }
    }
    CovarianceMatrix { n, data }
}

/// Mean and variance of `γ` at one lag under the spectrum distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagMoments {
    pub mean: Moment,
    pub variance: Moment,
}

/// `E[γ(τ)]` and `Var(γ(τ))` per lag, from the per-bin moments.
pub fn autocovariance_moments(prior: &SpectrumPrior) -> Result<Vec<LagMoments>> {
    prior.ensure_proper()?;
    let grid = prior.grid;
    let n = grid.n();
    let scale = 1.0 / (n as f64 * grid.dt());
    let moments = prior.moments()?;
    let means: Option<Vec<f64>> = moments.iter().map(|(m, _)| m.finite()).collect();
    let vars: Option<Vec<f64>> = moments.iter().map(|(_, v)| v.finite()).collect();
    let cos = cosines(n);
    Ok((0..n)
        .map(|k| {
            let mean = means.as_ref().map_or(Moment::Infinite, |means| {
                Moment::Finite(
                    scale
                        * means
                            .iter()
                            .enumerate()
                            .map(|(j, m)| m * 0.5 * grid.kappa(j) as f64 * cos[(j * k) % n])
                            .sum::<f64>(),
                )
            });
            let variance = vars.as_ref().map_or(Moment::Infinite, |vars| {
                Moment::Finite(
                    scale
                        * scale
                        * vars
                            .iter()
                            .enumerate()
                            .map(|(j, v)| {
                                let kappa = grid.kappa(j) as f64;
                                let c = cos[(j * k) % n];
                                v * 0.25 * kappa * kappa * c * c
                            })
                            .sum::<f64>(),
                )
            });
            LagMoments { mean, variance }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn grid100() -> FourierGrid {
        FourierGrid::new(100, 0.01).unwrap()
    }

    #[test]
    fn flat_full_band_integral() {
        let draw = SpectrumDraw::flat(0.3, grid100()).unwrap();
        let full = integrated_spectrum(&draw, &FrequencyBand::full(draw.grid())).unwrap();
        assert!((full - 50.0 * 0.3).abs() < 1e-12);
        let gamma = autocovariance(&draw);
        assert!((gamma.variance() - full).abs() < 1e-12);
    }

    #[test]
    fn band_edges_follow_half_open_rule() {
        let grid = grid100();
        // Δf = 1: f_k = k
        assert_eq!(FrequencyBand::new(9.0, 19.0).bin_range(&grid), Ok((10, 19)));
        assert_eq!(FrequencyBand::new(0.0, 5.0).bin_range(&grid), Ok((1, 5)));
        assert_eq!(FrequencyBand::new(0.0, 5.0).with_dc().bin_range(&grid), Ok((0, 5)));
        assert_eq!(FrequencyBand::new(-1.0, 5.0).bin_range(&grid), Ok((0, 5)));
        assert_eq!(FrequencyBand::new(40.0, 80.0).bin_range(&grid), Ok((41, 50)));
        assert!(matches!(
            FrequencyBand::new(3.0, 3.5).bin_range(&grid),
            Err(Error::BandTooNarrow { .. })
        ));
        assert!(matches!(
            FrequencyBand::new(50.0, 60.0).bin_range(&grid),
            Err(Error::EmptyBand { .. })
        ));
    }

    #[test]
    fn band_additivity() {
        let grid = grid100();
        let sigma2: Vec<f64> = (0..51).map(|j| 0.01 + 0.002 * j as f64).collect();
        let draw = SpectrumDraw::new(sigma2, grid).unwrap();
        let whole = integrated_spectrum(&draw, &FrequencyBand::new(3.0, 40.0)).unwrap();
        let left = integrated_spectrum(&draw, &FrequencyBand::new(3.0, 17.0)).unwrap();
        let right = integrated_spectrum(&draw, &FrequencyBand::new(17.0, 40.0)).unwrap();
        assert!((whole - left - right).abs() < 1e-14);
    }

    #[test]
    fn white_autocovariance_vanishes_off_zero() {
        for n in [7usize, 8, 100, 101] {
            let grid = FourierGrid::new(n, 0.5).unwrap();
            let draw = SpectrumDraw::flat(2.0, grid).unwrap();
            let gamma = autocovariance(&draw);
            let expected = 2.0 * n as f64 / 2.0 / (n as f64 * 0.5);
            assert!((gamma.variance() - expected).abs() < 1e-12);
            for k in 1..n {
                assert!(gamma.lag(k).abs() < 1e-10 * gamma.variance(), "n {n} lag {k}");
                assert!((gamma.lag(k) - gamma.lag(n - k)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn covariance_matrix_structure() {
        let grid = FourierGrid::new(6, 1.0).unwrap();
        let draw = SpectrumDraw::new(vec![1.0, 2.0, 0.5, 3.0], grid).unwrap();
        let gamma = autocovariance(&draw).gamma;
        let cov = covariance_matrix(&draw);
        assert_eq!(cov.row(0), &gamma[..]);
        for i in 0..6 {
            assert_eq!(cov.get(i, i), gamma[0]);
            for j in 0..6 {
                assert_eq!(cov.get(i, j), cov.get(j, i));
            }
        }
    }

    #[test]
    fn autocovariance_moment_existence() {
        let grid = grid100();
        let prior = SpectrumPrior::uniform(InvChiSqParams::new(3.0, 1.0 / 60.0).unwrap(), grid);
        let m = autocovariance_moments(&prior).unwrap();
        assert!(m.iter().all(|l| l.mean.is_finite() && l.variance == Moment::Infinite));

        let s = 0.02;
        let prior = SpectrumPrior::uniform(InvChiSqParams::new(6.0, s).unwrap(), grid);
        let m = autocovariance_moments(&prior).unwrap();
        let expected = 3.0 * s / (4.0 * 0.01);
        assert!((m[0].mean.finite().unwrap() - expected).abs() < 1e-12);
        assert!(autocovariance_moments(&SpectrumPrior::jeffreys(grid)).is_err());
    }

    #[test]
    fn posterior_update_counts_degrees_of_freedom() {
        let grid = grid100();
        let fc = FourierCoefficients::zeros(grid);
        let post = SpectrumPrior::jeffreys(grid).posterior_update(&fc).unwrap();
        // zero data leaves a degenerate scale
        assert!(!post.is_proper());
        let other = FourierCoefficients::zeros(FourierGrid::new(10, 0.01).unwrap());
        assert_eq!(
            SpectrumPrior::jeffreys(grid).posterior_update(&other),
            Err(Error::GridMismatch)
        );
    }

    #[test]
    fn draw_validation() {
        let grid = FourierGrid::new(4, 1.0).unwrap();
        assert_eq!(
            SpectrumDraw::new(vec![1.0, 0.0, 1.0], grid),
            Err(Error::NonPositiveVariance { bin: 1, value: 0.0 })
        );
        let draw = SpectrumDraw::new(vec![1.0, 2.0, 3.0], grid).unwrap();
        assert_eq!(draw.two_sided(1), 1.0);
        assert_eq!(draw.two_sided(2), 3.0);
    }
}
