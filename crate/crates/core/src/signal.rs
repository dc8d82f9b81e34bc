//! Example generators: AR(1) coloured noise and the linear chirp.

use num_traits::Float;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Uniform};

use crate::error::{Error, Result};
use crate::fourier::{to_coefficients, FourierGrid, TimeSeries};
use crate::spectrum::SpectrumDraw;

/// Pre-samples discarded so the AR(1) recursion starts near stationarity.
pub const AR1_BURN_IN: usize = 1000;

/// `n_k = coefficient · n_{k-1} + x_k` with `x_k ~ U[-h, h]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ar1Config {
    pub coefficient: f64,
    pub innovation_half_width: f64,
    pub n: usize,
    pub dt: f64,
}

impl Ar1Config {
    pub fn new(coefficient: f64, innovation_half_width: f64, n: usize, dt: f64) -> Result<Self> {
        if !(coefficient.abs() < 1.0) {
            return Err(Error::InvalidParameter { name: "AR coefficient", value: coefficient });
        }
        if !(innovation_half_width > 0.0 && innovation_half_width.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "innovation half width",
                value: innovation_half_width,
            });
        }
        FourierGrid::new(n, dt)?;
        Ok(Self { coefficient, innovation_half_width, n, dt })
    }

    /// `h²/3`.
    pub fn innovation_variance(&self) -> f64 {
        self.innovation_half_width * self.innovation_half_width / 3.0
    }

    /// `σ_x² / (1 - ρ²)`.
    pub fn stationary_variance(&self) -> f64 {
        self.innovation_variance() / (1.0 - self.coefficient * self.coefficient)
    }

    pub fn grid(&self) -> FourierGrid {
        FourierGrid::new(self.n, self.dt).expect("validated on construction")
    }
}

pub fn generate_ar1<R: Rng + ?Sized>(config: &Ar1Config, rng: &mut R) -> TimeSeries {
    let h = config.innovation_half_width;
    let innovation = Uniform::new_inclusive(-h, h).expect("half width is positive");
    let mut state = 0.0;
    for _ in 0..AR1_BURN_IN {
        state = config.coefficient * state + innovation.sample(rng);
    }
    let samples: Vec<f64> = (0..config.n)
        .map(|_| {
            state = config.coefficient * state + innovation.sample(rng);
            state
        })
        .collect();
    TimeSeries::new(samples, config.dt).expect("AR(1) output is finite")
}

/// Continuous two-sided PSD `σ_x² Δt / |1 - ρ exp(-2πi f Δt)|²` at each bin.
pub fn ar1_theoretical_psd(config: &Ar1Config, grid: &FourierGrid) -> Vec<f64> {
    let rho = config.coefficient;
    (0..grid.bins())
        .map(|j| {
            let w = 2.0 * PI * grid.frequency(j) * grid.dt();
            config.innovation_variance() * grid.dt() / (1.0 - 2.0 * rho * w.cos() + rho * rho)
        })
        .collect()
}

/// Per-bin variances `σ_j² = κ_j S₂(f_j)` implied by the theoretical PSD.
pub fn ar1_spectrum_draw(config: &Ar1Config, grid: &FourierGrid) -> SpectrumDraw {
    let sigma2 = ar1_theoretical_psd(config, grid)
        .into_iter()
        .enumerate()
        .map(|(j, s)| grid.kappa(j) as f64 * s)
        .collect();
    SpectrumDraw::new(sigma2, *grid).expect("AR(1) PSD is positive")
}

/// Chirp `g(t) = a sin(2π(f + ḟt)t + φ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChirpParams {
    pub f: f64,
    pub fdot: f64,
    pub a: f64,
    pub phi: f64,
}

impl ChirpParams {
    /// Validates `a ≥ 0` and reduces `φ` to `[0, 2π)`.
    pub fn new(f: f64, fdot: f64, a: f64, phi: f64) -> Result<Self> {
        for (name, value) in [("frequency", f), ("frequency derivative", fdot), ("phase", phi)] {
            if !value.is_finite() {
                return Err(Error::InvalidParameter { name, value });
            }
        }
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter { name: "amplitude", value: a });
        }
        Ok(Self { f, fdot, a, phi: wrap_phase(phi) })
    }

    pub fn with_amplitude(self, a: f64) -> Self {
        Self { a, ..self }
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.f, self.fdot, self.a, self.phi]
    }

    pub fn value_at(&self, t: f64) -> f64 {
        self.a * (2.0 * PI * (self.f + self.fdot * t) * t + self.phi).sin()
    }
}

/// Reduces an angle to `[0, 2π)`.
pub fn wrap_phase(phi: f64) -> f64 {
    let wrapped = modulo(phi, 2.0 * PI);
    if wrapped >= 2.0 * PI {
        0.0
    } else {
        wrapped
    }
}

/// `x mod period` in `[0, period]`; the upper end only through rounding.
pub(crate) fn modulo(x: f64, period: f64) -> f64 {
    let r = x % period;
    if r < 0.0 {
        r + period
    } else {
        r
    }
}

/// Chirp samples at `t_k = k·dt`, `k = 0..n`.
pub fn chirp(params: &ChirpParams, n: usize, dt: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n);
    chirp_into(params, n, dt, &mut out);
    out
}

pub fn chirp_into(params: &ChirpParams, n: usize, dt: f64, out: &mut Vec<f64>) {
    out.clear();
    out.extend((0..n).map(|k| params.value_at(k as f64 * dt)));
}

/// Noise-weighted signal norm `ϱ`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct SnrValue(pub f64);

impl SnrValue {
    pub fn rho(&self) -> f64 {
        self.0
    }
}

/// `ϱ² = Σ_j (a_{g,j}² + b_{g,j}²)/σ_j²`.
///
/// For interior bins this equals `4 Σ (Δt/N)|g̃_j|²/S₁*(f_j)`.
pub fn snr(signal: &TimeSeries, draw: &SpectrumDraw) -> Result<SnrValue> {
    signal.grid().ensure_same(draw.grid())?;
    let fc = to_coefficients(signal);
    let rho2: f64 = fc.powers().zip(draw.sigma2()).map(|(p, s)| p / s).sum();
    Ok(SnrValue(rho2.sqrt()))
}

/// Amplitude at which the chirp reaches the requested `ϱ` on `draw`'s grid.
pub fn amplitude_for_snr(params: &ChirpParams, draw: &SpectrumDraw, target: f64) -> Result<f64> {
    if !(target >= 0.0 && target.is_finite()) {
        return Err(Error::InvalidParameter { name: "target SNR", value: target });
    }
    let grid = draw.grid();
    let unit = TimeSeries::new(chirp(&params.with_amplitude(1.0), grid.n(), grid.dt()), grid.dt())?;
    let rho = snr(&unit, draw)?.rho();
    if rho == 0.0 {
        return Err(Error::InvalidParameter { name: "unit-amplitude SNR", value: rho });
    }
    Ok(target / rho)
}
