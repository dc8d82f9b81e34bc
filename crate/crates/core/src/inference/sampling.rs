use alloc::vec::Vec;

use rand::Rng;
use rand_distr::{Distribution, Gamma};

use crate::error::{Error, Result};
use crate::fourier::FourierCoefficients;
use crate::spectrum::{InvChiSqParams, SpectrumDraw, SpectrumPrior};

/// Draws from one proper inverse-χ² distribution as `(νs²/2)/G`, `G ~ Gamma(ν/2, 1)`,
/// which is `νs²/X` for `X ~ χ²_ν`.
#[derive(Debug, Clone, Copy)]
pub struct InvChiSqSampler {
    gamma: Gamma<f64>,
    rate: f64,
}

impl InvChiSqSampler {
    pub fn new(params: &InvChiSqParams) -> Result<Self> {
        params.ensure_proper()?;
        let gamma = Gamma::new(0.5 * params.nu(), 1.0)
            .map_err(|_| Error::InvalidParameter { name: "degrees of freedom", value: params.nu() })?;
        Ok(Self { gamma, rate: 0.5 * params.nu() * params.s2() })
    }
}

impl Distribution<f64> for InvChiSqSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        loop {
            let g = self.gamma.sample(rng);
            // Gamma underflows to zero for tiny shapes; redraw instead of returning infinity
            if g > 0.0 {
                let x = self.rate / g;
                if x.is_finite() {
                    return x;
                }
            }
        }
    }
}

pub fn sample_inv_chisq<R: Rng + ?Sized>(params: &InvChiSqParams, rng: &mut R) -> Result<f64> {
    Ok(InvChiSqSampler::new(params)?.sample(rng))
}

/// Independent per-bin sampler for a proper [`SpectrumPrior`].
#[derive(Debug, Clone)]
pub struct SpectrumSampler {
    bins: Vec<InvChiSqSampler>,
    prior: SpectrumPrior,
}

impl SpectrumSampler {
    pub fn new(prior: &SpectrumPrior) -> Result<Self> {
        let bins = prior.bins().iter().map(InvChiSqSampler::new).collect::<Result<Vec<_>>>()?;
        Ok(Self { bins, prior: prior.clone() })
    }

    pub fn prior(&self) -> &SpectrumPrior {
        &self.prior
    }

    pub fn sample_into<R: Rng + ?Sized>(&self, rng: &mut R, out: &mut Vec<f64>) {
        out.clear();
        out.extend(self.bins.iter().map(|b| b.sample(rng)));
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> SpectrumDraw {
        let mut sigma2 = Vec::with_capacity(self.bins.len());
        self.sample_into(rng, &mut sigma2);
        SpectrumDraw::new(sigma2, *self.prior.grid()).expect("inverse-χ² draws are positive and finite")
    }
}

/// One spectrum drawn from a proper prior or posterior.
pub fn draw_spectrum<R: Rng + ?Sized>(prior: &SpectrumPrior, rng: &mut R) -> Result<SpectrumDraw> {
    Ok(SpectrumSampler::new(prior)?.draw(rng))
}

/// Spectrum drawn from the conjugate posterior given the noise residual.
pub fn conditional_noise_draw<R: Rng + ?Sized>(
    prior: &SpectrumPrior,
    residual: &FourierCoefficients,
    rng: &mut R,
) -> Result<SpectrumDraw> {
    draw_spectrum(&prior.posterior_update(residual)?, rng)
}

/// As [`conditional_noise_draw`], with the residual given by its per-bin powers.
pub fn conditional_noise_draw_from_powers<R: Rng + ?Sized>(
    prior: &SpectrumPrior,
    powers: &[f64],
    rng: &mut R,
) -> Result<SpectrumDraw> {
    let grid = prior.grid();
    if powers.len() != grid.bins() {
        return Err(Error::LengthMismatch { expected: grid.bins(), actual: powers.len() });
    }
    draw_spectrum(&prior.posterior_from_powers(powers.iter().copied())?, rng)
}

/// `σ²` for a white spectrum given total residual power `Σ_j (a_j² + b_j²)`:
/// draw from `Inv-χ²(ν + N, (νs² + total)/(ν + N))`.
pub fn pooled_white_posterior(prior: &InvChiSqParams, n: usize, total_power: f64) -> Result<InvChiSqParams> {
    if !(total_power >= 0.0 && total_power.is_finite()) {
        return Err(Error::InvalidParameter { name: "residual power", value: total_power });
    }
    let nu = prior.nu() + n as f64;
    let s2 = (prior.nu() * prior.s2() + total_power) / nu;
    InvChiSqParams::from_update(nu, s2)
}
