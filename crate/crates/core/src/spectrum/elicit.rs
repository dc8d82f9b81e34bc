//! Prior settings derived from targets on the integrated spectrum.

use num_traits::Float;
use alloc::vec::Vec;


use super::{FrequencyBand, InvChiSqParams, Moment, SpectrumPrior};
use crate::error::{Error, Result};
use crate::fourier::FourierGrid;

/// Prior mean `ς²` and variation coefficient `c` of the full-band power.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WhitePriorTarget {
    pub var_expectation: f64,
    pub variation_coeff: f64,
}

impl WhitePriorTarget {
    pub fn new(var_expectation: f64, variation_coeff: f64) -> Result<Self> {
        if !(var_expectation > 0.0 && var_expectation.is_finite()) {
            return Err(Error::InvalidParameter { name: "variance expectation", value: var_expectation });
        }
        if !(variation_coeff > 0.0 && variation_coeff.is_finite()) {
            return Err(Error::InvalidParameter { name: "variation coefficient", value: variation_coeff });
        }
        Ok(Self { var_expectation, variation_coeff })
    }
}

/// `(Σ κ_j/2, Σ κ_j²/4)` over an inclusive bin range.
fn kappa_sums(grid: &FourierGrid, j1: usize, j2: usize) -> (f64, f64) {
    (j1..=j2).fold((0.0, 0.0), |(s1, s2), j| {
        let k = grid.kappa(j) as f64;
        (s1 + 0.5 * k, s2 + 0.25 * k * k)
    })
}

/// Degrees of freedom giving variation coefficient `c` to a band whose bins
/// share `ν` and `s²`: inverts `c = √(2/(ν-4)) √(Σκ²/4) / Σ(κ/2)`.
fn dof_for_variation(c: f64, half_kappa_sum: f64, quarter_kappa_sq_sum: f64) -> f64 {
    4.0 + 2.0 * quarter_kappa_sq_sum / (half_kappa_sum * half_kappa_sum * c * c)
}

/// White prior (`ν`, `s²` shared by all bins) whose full-band power has
/// prior mean `ς²` and variation coefficient `c`.
///
/// `s² = 2Δt (ν-2)/ν · ς²` fixes the mean exactly for any `N`. The degrees of
/// freedom invert the equal-parameter variation coefficient over all bins,
/// which for even `N` reads `ν = 4 + 4(N-1)/(N² c²)`.
pub fn elicit_white_prior(target: &WhitePriorTarget, grid: &FourierGrid) -> Result<SpectrumPrior> {
    let (s1, s2) = kappa_sums(grid, 0, grid.last_bin());
    let nu = dof_for_variation(target.variation_coeff, s1, s2);
    white_prior_with_dof(target.var_expectation, nu, grid)
}

/// White prior with chosen `ν > 2` and full-band prior mean `ς²`.
pub fn white_prior_with_dof(var_expectation: f64, nu: f64, grid: &FourierGrid) -> Result<SpectrumPrior> {
    if !(nu > 2.0 && nu.is_finite()) {
        return Err(Error::InvalidParameter { name: "degrees of freedom", value: nu });
    }
    if !(var_expectation > 0.0 && var_expectation.is_finite()) {
        return Err(Error::InvalidParameter { name: "variance expectation", value: var_expectation });
    }
    let s2 = 2.0 * grid.dt() * (nu - 2.0) / nu * var_expectation;
    Ok(SpectrumPrior::uniform(InvChiSqParams::new(nu, s2)?, *grid))
}

/// Target moments of the integrated power over one band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandTarget {
    pub band: FrequencyBand,
    pub mean: f64,
    pub variance: f64,
}

/// Piecewise-constant prior meeting per-band power targets.
///
/// Bands must cover every bin exactly once. A band starting at 0 includes the
/// DC bin. Within a band `ν` inverts the variation coefficient (for interior
/// bins `ν = 4 + 2/(j2 - j1 + 1) · E²/Var`) and `s²` solves the mean.
pub fn elicit_band_prior(targets: &[BandTarget], grid: &FourierGrid) -> Result<SpectrumPrior> {
    let mut bins: Vec<Option<InvChiSqParams>> = alloc::vec![None; grid.bins()];
    for target in targets {
        let mut band = target.band;
        if band.lower == 0.0 {
            band.include_dc = true;
        }
        if !(target.mean > 0.0 && target.mean.is_finite()) {
            return Err(Error::InvalidParameter { name: "band mean", value: target.mean });
        }
        if !(target.variance > 0.0 && target.variance.is_finite()) {
            return Err(Error::InvalidParameter { name: "band variance", value: target.variance });
        }
        let (j1, j2) = band.bin_range(grid)?;
        let (s1, s2) = kappa_sums(grid, j1, j2);
        let c = target.variance.sqrt() / target.mean;
        let nu = dof_for_variation(c, s1, s2);
        let scale = target.mean * (nu - 2.0) / (nu * grid.df() * s1);
        let params = InvChiSqParams::new(nu, scale)?;
        for (j, slot) in bins.iter_mut().enumerate().take(j2 + 1).skip(j1) {
            if slot.is_some() {
                return Err(Error::BandPartition { bin: j, problem: "covered twice" });
            }
            *slot = Some(params);
        }
    }
    let bins = bins
        .into_iter()
        .enumerate()
        .map(|(bin, p)| p.ok_or(Error::BandPartition { bin, problem: "not covered" }))
        .collect::<Result<Vec<_>>>()?;
    SpectrumPrior::new(bins, *grid)
}

/// Prior moments of `I_[f1, f2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandMoments {
    pub mean: Moment,
    pub variance: Moment,
    pub variation_coeff: Moment,
}

/// `E[I] = Δf Σ (κ/2) E[σ²]`, `Var(I) = Δf² Σ (κ²/4) Var(σ²)` and their ratio.
pub fn integrated_spectrum_moments(prior: &SpectrumPrior, band: &FrequencyBand) -> Result<BandMoments> {
    prior.ensure_proper()?;
    let grid = prior.grid();
    let (j1, j2) = band.bin_range(grid)?;
    let df = grid.df();
    let mut mean = Some(0.0);
    let mut variance = Some(0.0);
    for j in j1..=j2 {
        let k = grid.kappa(j) as f64;
        let (m, v) = prior.bin(j).moments()?;
        mean = mean.zip(m.finite()).map(|(acc, m)| acc + 0.5 * k * m);
        variance = variance.zip(v.finite()).map(|(acc, v)| acc + 0.25 * k * k * v);
    }
    let mean = mean.map(|m| m * df);
    let variance = variance.map(|v| v * df * df);
    let to_moment = |v: Option<f64>| v.map_or(Moment::Infinite, Moment::Finite);
    Ok(BandMoments {
        mean: to_moment(mean),
        variance: to_moment(variance),
        variation_coeff: to_moment(mean.zip(variance).map(|(m, v)| v.sqrt() / m)),
    })
}

/// Variation coefficient when every bin in the range shares `ν > 4`.
pub fn variation_coeff_equal_dof(nu: f64, s2: &[f64], grid: &FourierGrid, j1: usize) -> f64 {
    let (num, den) = s2.iter().enumerate().fold((0.0, 0.0), |(num, den), (i, s)| {
        let k = grid.kappa(j1 + i) as f64;
        (num + 0.25 * k * k * s * s, den + 0.5 * k * s)
    });
    (2.0 / (nu - 4.0)).sqrt() * num.sqrt() / den
}

/// Variation coefficient when `ν` and `s²` are shared over `j1..=j2`.
pub fn variation_coeff_equal_params(nu: f64, grid: &FourierGrid, j1: usize, j2: usize) -> f64 {
    let (s1, s2) = kappa_sums(grid, j1, j2);
    (2.0 / (nu - 4.0)).sqrt() * s2.sqrt() / s1
}

/// Shared-parameter variation coefficient of an interior band of `bins` bins.
pub fn variation_coeff_interior(nu: f64, bins: usize) -> f64 {
    (2.0 / (nu - 4.0)).sqrt() / (bins as f64).sqrt()
}

/// Shared-parameter variation coefficient of the full band, even `N`.
pub fn variation_coeff_full_band(nu: f64, n: usize) -> f64 {
    let n = n as f64;
    (2.0 / (nu - 4.0)).sqrt() * ((n - 1.0) / 2.0).sqrt() / (n / 2.0)
}
