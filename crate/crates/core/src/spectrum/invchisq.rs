
use num_traits::Float;
use crate::error::{Error, Result};
use crate::special::{chi_squared_upper_quantile, gamma_q, ln_gamma};

/// A moment that may fail to exist.
///
/// Inverse-χ² means need `ν > 2` and variances `ν > 4`; below those bounds
/// the moment diverges, which is reported as [`Moment::Infinite`] rather than
/// a sentinel float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Moment {
    Finite(f64),
    Infinite,
}

impl Moment {
    pub fn finite(self) -> Option<f64> {
        match self {
            Moment::Finite(v) => Some(v),
            Moment::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, Moment::Finite(_))
    }
}

/// Parameters `(ν, s²)` of a scaled inverse-χ² distribution.
///
/// Records with `ν ≤ 0` (or a zero scale) stand for the improper limits of
/// the family: Jeffreys `(0, 0)`, uniform on `σ` `(-1, 0)`, uniform on `σ²`
/// `(-2, 0)`. They can be updated with data and used in marginal
/// likelihoods, but density, moments, quantiles and sampling refuse them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvChiSqParams {
    nu: f64,
    s2: f64,
    improper: bool,
}

impl InvChiSqParams {
    /// A proper distribution; requires `ν > 0` and `s² > 0`.
    pub fn new(nu: f64, s2: f64) -> Result<Self> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::InvalidParameter { name: "degrees of freedom", value: nu });
        }
        if !(s2 > 0.0 && s2.is_finite()) {
            return Err(Error::InvalidParameter { name: "scale", value: s2 });
        }
        Ok(Self { nu, s2, improper: false })
    }

    /// The Jeffreys prior `p(σ²) ∝ 1/σ²`.
    pub fn jeffreys() -> Self {
        Self { nu: 0.0, s2: 0.0, improper: true }
    }

    /// The improper prior `p(σ²) ∝ (σ²)^{-k}`, i.e. `ν = 2(k - 1)`, `s² = 0`.
    pub fn power_law(k: f64) -> Result<Self> {
        if !(k >= 0.0 && k.is_finite()) {
            return Err(Error::InvalidParameter { name: "power-law exponent", value: k });
        }
        let nu = 2.0 * (k - 1.0);
        if nu > 0.0 {
            return Err(Error::InvalidParameter { name: "power-law exponent", value: k });
        }
        Ok(Self { nu: nu + 0.0, s2: 0.0, improper: true })
    }

    /// Rebuilds a record from its three stored fields, checking that the
    /// flag agrees with the parameters.
    pub fn from_parts(nu: f64, s2: f64, improper: bool) -> Result<Self> {
        let params = Self::from_update(nu, s2)?;
        if params.improper != improper {
            return Err(Error::InvalidParameter { name: "improper flag", value: nu });
        }
        Ok(params)
    }

    /// Any finite `(ν, s² ≥ 0)`; proper exactly when both are positive.
    pub(crate) fn from_update(nu: f64, s2: f64) -> Result<Self> {
        if !nu.is_finite() {
            return Err(Error::InvalidParameter { name: "degrees of freedom", value: nu });
        }
        if !(s2 >= 0.0 && s2.is_finite()) {
            return Err(Error::InvalidParameter { name: "scale", value: s2 });
        }
        Ok(Self { nu, s2, improper: !(nu > 0.0 && s2 > 0.0) })
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn s2(&self) -> f64 {
        self.s2
    }

    pub fn is_improper(&self) -> bool {
        self.improper
    }

    /// The Jeffreys record `(0, 0)`.
    pub fn is_jeffreys(&self) -> bool {
        self.improper && self.nu == 0.0
    }

    pub(crate) fn ensure_proper(&self) -> Result<()> {
        if self.improper {
            Err(Error::Improper { nu: self.nu, s2: self.s2 })
        } else {
            Ok(())
        }
    }

    /// Conjugate update with one bin's `κ` coefficients of total power `a² + b²`.
    pub fn update(&self, kappa: u32, power: f64) -> Result<Self> {
        let nu = self.nu + kappa as f64;
        let s2 = (self.nu * self.s2 + power) / nu;
        Self::from_update(nu, s2)
    }

    /// Log density at `sigma2`.
    pub fn log_density(&self, sigma2: f64) -> Result<f64> {
        self.ensure_proper()?;
        if !(sigma2 > 0.0) {
            return Err(Error::InvalidParameter { name: "variance", value: sigma2 });
        }
        let half_nu = 0.5 * self.nu;
        let rate = half_nu * self.s2;
        Ok(half_nu * rate.ln() - ln_gamma(half_nu) - (1.0 + half_nu) * sigma2.ln() - rate / sigma2)
    }

    pub fn density(&self, sigma2: f64) -> Result<f64> {
        self.log_density(sigma2).map(Float::exp)
    }

    /// `P(σ² ≤ x) = Q(ν/2, νs²/(2x))`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        self.ensure_proper()?;
        if x <= 0.0 {
            return Ok(0.0);
        }
        Ok(gamma_q(0.5 * self.nu, 0.5 * self.nu * self.s2 / x))
    }

    pub fn mean(&self) -> Result<Moment> {
        self.ensure_proper()?;
        Ok(if self.nu > 2.0 {
            Moment::Finite(self.nu / (self.nu - 2.0) * self.s2)
        } else {
            Moment::Infinite
        })
    }

    pub fn variance(&self) -> Result<Moment> {
        self.ensure_proper()?;
        Ok(if self.nu > 4.0 {
            let nu = self.nu;
            Moment::Finite(
                2.0 * nu * nu / ((nu - 2.0) * (nu - 2.0) * (nu - 4.0)) * self.s2 * self.s2,
            )
        } else {
            Moment::Infinite
        })
    }

    /// `(mean, variance)`.
    pub fn moments(&self) -> Result<(Moment, Moment)> {
        Ok((self.mean()?, self.variance()?))
    }

    /// The density maximum, `νs²/(ν + 2)`.
    pub fn mode(&self) -> Result<f64> {
        self.ensure_proper()?;
        Ok(self.nu * self.s2 / (self.nu + 2.0))
    }

    /// `p`-quantile `νs² / χ²_{ν; 1-p}`.
    pub fn quantile(&self, p: f64) -> Result<f64> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidProbability(p));
        }
        self.ensure_proper()?;
        Ok(self.nu * self.s2 / chi_squared_upper_quantile(self.nu, p)?)
    }
}

/// Moment-matched parameters: `ν = 4 + 2 m²/v`, `s² = (ν - 2)/ν · m`.
pub fn elicit_from_moments(mean: f64, variance: f64) -> Result<InvChiSqParams> {
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(Error::InvalidParameter { name: "prior mean", value: mean });
    }
    if !(variance > 0.0 && variance.is_finite()) {
        return Err(Error::InvalidParameter { name: "prior variance", value: variance });
    }
    let nu = 4.0 + 2.0 * mean * mean / variance;
    InvChiSqParams::new(nu, (nu - 2.0) / nu * mean)
}
