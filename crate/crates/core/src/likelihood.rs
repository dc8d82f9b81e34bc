//! Log-likelihoods of Fourier coefficients under known, uncertain and
//! uninformative spectra.

use num_traits::Float;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fourier::FourierCoefficients;
use crate::special::ln_gamma;
use crate::spectrum::{SpectrumDraw, SpectrumPrior};

/// Whether constant terms are part of a log-likelihood value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// The full log density of the data.
    Normalized,
    /// Only terms depending on the parameters under study.
    Proportional,
}

/// A natural-log likelihood tagged with its normalization.
///
/// Values with different tags never combine; see [`LogLikelihood::checked_add`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogLikelihood {
    pub value: f64,
    pub normalization: Normalization,
}

impl LogLikelihood {
    pub fn normalized(value: f64) -> Self {
        Self { value, normalization: Normalization::Normalized }
    }

    pub fn proportional(value: f64) -> Self {
        Self { value, normalization: Normalization::Proportional }
    }

    pub fn is_normalized(&self) -> bool {
        self.normalization == Normalization::Normalized
    }

    pub fn checked_add(self, other: Self) -> Result<Self> {
        if self.normalization != other.normalization {
            return Err(Error::MixedNormalization);
        }
        Ok(Self { value: self.value + other.value, normalization: self.normalization })
    }

    /// `self - other`, e.g. a log Bayes factor or a Metropolis log ratio.
    pub fn difference(&self, other: &Self) -> Result<f64> {
        if self.normalization != other.normalization {
            return Err(Error::MixedNormalization);
        }
        Ok(self.value - other.value)
    }
}

fn check_draw(fc: &FourierCoefficients, draw: &SpectrumDraw) -> Result<()> {
    fc.grid().ensure_same(draw.grid())
}

/// Exact normal likelihood of the coefficients given per-bin variances,
/// `-(N/2) log 2π - Σ_j [κ_j log σ_j + (a_j² + b_j²)/(2σ_j²)]`.
///
/// The proportional form drops only `-(N/2) log 2π`.
pub fn log_normal_likelihood(
    fc: &FourierCoefficients,
    draw: &SpectrumDraw,
    normalization: Normalization,
) -> Result<LogLikelihood> {
    check_draw(fc, draw)?;
    let grid = fc.grid();
    let mut value: f64 = fc
        .powers()
        .zip(draw.sigma2())
        .enumerate()
        .map(|(j, (p, s2))| -0.5 * grid.kappa(j) as f64 * s2.ln() - p / (2.0 * s2))
        .sum();
    if normalization == Normalization::Normalized {
        value -= 0.5 * grid.n() as f64 * (2.0 * PI).ln();
    }
    Ok(LogLikelihood { value, normalization })
}

/// Known-spectrum (matched filter) form `-Σ_j (a_j² + b_j²)/(2σ_j²)`.
pub fn log_known_spectrum_likelihood(fc: &FourierCoefficients, draw: &SpectrumDraw) -> Result<LogLikelihood> {
    check_draw(fc, draw)?;
    Ok(LogLikelihood::proportional(known_spectrum_sum(fc.powers(), draw.sigma2())))
}

pub(crate) fn known_spectrum_sum(powers: impl Iterator<Item = f64>, sigma2: &[f64]) -> f64 {
    -0.5 * powers.zip(sigma2).map(|(p, s2)| p / s2).sum::<f64>()
}

/// Known-spectrum form evaluated from the complex transform,
/// `-Σ_j κ_j² (Δt/N) |x̃_j|² / (2σ_j²)` over `j = 0..=⌊N/2⌋`.
pub fn log_known_spectrum_likelihood_dft(transform: &[Complex64], draw: &SpectrumDraw) -> Result<LogLikelihood> {
    let grid = draw.grid();
    if transform.len() != grid.n() {
        return Err(Error::LengthMismatch { expected: grid.n(), actual: transform.len() });
    }
    let factor = grid.dt() / grid.n() as f64;
    let value = -0.5
        * draw
            .sigma2()
            .iter()
            .enumerate()
            .map(|(j, s2)| {
                let k = grid.kappa(j) as f64;
                k * k * factor * transform[j].norm_sqr() / s2
            })
            .sum::<f64>();
    Ok(LogLikelihood::proportional(value))
}

/// One bin of the Student-t marginal.
///
/// Normalized:
/// `-(κ/2) log 2π + log Γ((ν+κ)/2) - log Γ(ν/2) - (κ/2) log(νs²/2) - ((ν+κ)/2) log1p(q/(νs²))`,
/// which is the log of `(2π)^{-κ/2} (νs²/2)^{ν/2} Γ((ν+κ)/2) / [((νs²+q)/2)^{(ν+κ)/2} Γ(ν/2)]`.
pub fn studentt_bin_term(nu: f64, s2: f64, kappa: u32, power: f64, normalization: Normalization) -> f64 {
    let k = kappa as f64;
    let half_total = 0.5 * (nu + k);
    let tail = -half_total * (power / (nu * s2)).ln_1p();
    match normalization {
        Normalization::Proportional => tail,
        Normalization::Normalized => {
            -0.5 * k * (2.0 * PI).ln() + ln_gamma(half_total) - ln_gamma(0.5 * nu)
                - 0.5 * k * (0.5 * nu * s2).ln()
                + tail
        }
    }
}

/// Marginal likelihood with each `σ_j²` integrated against its
/// inverse-χ² prior: a product of Student-t terms.
pub fn log_studentt_marginal(
    fc: &FourierCoefficients,
    prior: &SpectrumPrior,
    normalization: Normalization,
) -> Result<LogLikelihood> {
    fc.grid().ensure_same(prior.grid())?;
    if let Some((bin, p)) = prior.bins().iter().enumerate().find(|(_, p)| p.is_improper()) {
        return Err(Error::UnsupportedImproper { bin, nu: p.nu() });
    }
    let grid = fc.grid();
    let value = fc
        .powers()
        .zip(prior.bins())
        .enumerate()
        .map(|(j, (q, p))| studentt_bin_term(p.nu(), p.s2(), grid.kappa(j), q, normalization))
        .sum();
    Ok(LogLikelihood { value, normalization })
}

/// Marginal under the Jeffreys prior, `-Σ_j (κ_j/2) log(a_j² + b_j²)`.
///
/// Improper, so always proportional. A bin with zero power makes the value
/// `-∞`; [`jeffreys_singular_bin`] reports which.
pub fn log_jeffreys_marginal(fc: &FourierCoefficients) -> LogLikelihood {
    let grid = fc.grid();
    let value = fc
        .powers()
        .enumerate()
        .map(|(j, q)| jeffreys_bin_term(grid.kappa(j), q))
        .sum();
    LogLikelihood::proportional(value)
}

fn jeffreys_bin_term(kappa: u32, power: f64) -> f64 {
    if power > 0.0 {
        -0.5 * kappa as f64 * power.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// First bin whose zero power makes the Jeffreys marginal singular.
pub fn jeffreys_singular_bin(fc: &FourierCoefficients) -> Option<usize> {
    fc.powers().position(|q| q <= 0.0)
}

/// Per-bin mixture: proper bins contribute Student-t terms, Jeffreys bins
/// the Jeffreys term. Other improper records are rejected.
pub fn log_mixed_marginal(fc: &FourierCoefficients, prior: &SpectrumPrior) -> Result<LogLikelihood> {
    fc.grid().ensure_same(prior.grid())?;
    let grid = fc.grid();
    let mut value = 0.0;
    for (j, (q, p)) in fc.powers().zip(prior.bins()).enumerate() {
        let kappa = grid.kappa(j);
        value += if !p.is_improper() {
            studentt_bin_term(p.nu(), p.s2(), kappa, q, Normalization::Proportional)
        } else if p.is_jeffreys() {
            jeffreys_bin_term(kappa, q)
        } else {
            return Err(Error::UnsupportedImproper { bin: j, nu: p.nu() });
        };
    }
    Ok(LogLikelihood::proportional(value))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fourier::FourierGrid;
    use crate::spectrum::InvChiSqParams;
    use alloc::vec;

    #[test]
    fn zero_data_unit_variance() {
        let grid = FourierGrid::new(4, 1.0).unwrap();
        let fc = FourierCoefficients::zeros(grid);
        let draw = SpectrumDraw::flat(1.0, grid).unwrap();
        let ll = log_normal_likelihood(&fc, &draw, Normalization::Normalized).unwrap();
        assert!((ll.value + 2.0 * (2.0 * PI).ln()).abs() < 1e-14);
        assert_eq!(log_known_spectrum_likelihood(&fc, &draw).unwrap().value, 0.0);
    }

    #[test]
    fn normalization_tags_do_not_mix() {
        let a = LogLikelihood::normalized(-1.0);
        let b = LogLikelihood::proportional(-2.0);
        assert_eq!(a.checked_add(b), Err(Error::MixedNormalization));
        assert_eq!(a.difference(&b), Err(Error::MixedNormalization));
        assert_eq!(b.checked_add(b).unwrap().value, -4.0);
    }

    #[test]
    fn studentt_zero_residual_and_improper_rejection() {
        let grid = FourierGrid::new(8, 0.1).unwrap();
        let fc = FourierCoefficients::zeros(grid);
        let prior = SpectrumPrior::uniform(InvChiSqParams::new(3.0, 0.2).unwrap(), grid);
        let ll = log_studentt_marginal(&fc, &prior, Normalization::Proportional).unwrap();
        assert_eq!(ll.value, 0.0);
        let jeff = SpectrumPrior::jeffreys(grid);
        assert_eq!(
            log_studentt_marginal(&fc, &jeff, Normalization::Proportional),
            Err(Error::UnsupportedImproper { bin: 0, nu: 0.0 })
        );
    }

    #[test]
    fn jeffreys_unit_power_and_singularity() {
        let grid = FourierGrid::new(4, 1.0).unwrap();
        let fc = FourierCoefficients::new(vec![0.5, 0.6, 0.7], vec![0.0, 0.8, 0.0], grid).unwrap();
        let ll = log_jeffreys_marginal(&fc);
        let expected = -0.5 * (0.25f64).ln() - 0.5 * (0.49f64).ln();
        assert!((ll.value - expected).abs() < 1e-14);
        assert!(!ll.is_normalized());
        assert_eq!(jeffreys_singular_bin(&fc), None);
        let zero = FourierCoefficients::zeros(grid);
        assert_eq!(log_jeffreys_marginal(&zero).value, f64::NEG_INFINITY);
        assert_eq!(jeffreys_singular_bin(&zero), Some(0));
    }

    #[test]
    fn mixed_rejects_non_jeffreys_improper() {
        let grid = FourierGrid::new(4, 1.0).unwrap();
        let fc = FourierCoefficients::new(vec![0.5, 0.6, 0.7], vec![0.0, 0.8, 0.0], grid).unwrap();
        let bins = vec![
            InvChiSqParams::new(3.0, 1.0).unwrap(),
            InvChiSqParams::power_law(0.0).unwrap(),
            InvChiSqParams::jeffreys(),
        ];
        let prior = SpectrumPrior::new(bins, grid).unwrap();
        assert_eq!(
            log_mixed_marginal(&fc, &prior),
            Err(Error::UnsupportedImproper { bin: 1, nu: -2.0 })
        );
    }
}
