mod common;

use colnoise_core::fourier::to_coefficients;
use colnoise_core::inference::draw_spectrum;
use colnoise_core::special::{chi_squared_quantile, chi_squared_upper_quantile};
use colnoise_core::spectrum::{
    autocovariance, autocovariance_moments, covariance_matrix, elicit_band_prior, elicit_from_moments,
    elicit_white_prior, integrated_spectrum, integrated_spectrum_moments, variation_coeff_equal_dof,
    variation_coeff_equal_params, variation_coeff_full_band, variation_coeff_interior,
    white_prior_with_dof, BandTarget,
};
use colnoise_core::{
    Error, FourierCoefficients, FourierGrid, FrequencyBand, InvChiSqParams, Moment, SpectrumDraw,
    SpectrumPrior, TimeSeries, WhitePriorTarget,
};
use common::{integrate, integrate_positive, inv_chisq_pdf, mean_var, rng};
use proptest::prelude::*;
use rand::Rng;

fn grid100() -> FourierGrid {
    FourierGrid::new(100, 0.01).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Numerical `P(σ² ≤ x)` from the density written out in test code.
fn quadrature_cdf(nu: f64, s2: f64, x: f64) -> f64 {
    let mode = nu * s2 / (nu + 2.0);
    if x <= mode {
        integrate(|u| inv_chisq_pdf(nu, s2, u.exp()) * u.exp(), x.ln() - 60.0, x.ln(), 1e-12)
    } else {
        let below = integrate(|u| inv_chisq_pdf(nu, s2, u.exp()) * u.exp(), mode.ln() - 60.0, mode.ln(), 1e-12);
        below + integrate(|y| inv_chisq_pdf(nu, s2, y), mode, x, 1e-12)
    }
}

#[test]
fn density_examples() {
    let p = InvChiSqParams::new(2.0, 1.0).unwrap();
    assert!((p.density(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-15);
    for (nu, s2, x) in [(3.0, 1.0 / 60.0, 0.02), (7.5, 2.0, 0.3), (0.7, 4.0, 11.0)] {
        let p = InvChiSqParams::new(nu, s2).unwrap();
        assert!(rel(p.density(x).unwrap(), inv_chisq_pdf(nu, s2, x)) < 1e-12);
    }
}

#[test]
fn density_normalizes() {
    for (nu, s2) in [(3.0, 0.0166), (1.0, 1.0), (10.0, 0.2), (400.0, 3.0)] {
        let p = InvChiSqParams::new(nu, s2).unwrap();
        let total = integrate_positive(|x| p.density(x).unwrap(), s2, 40.0, 80.0, 1e-12);
        assert!((total - 1.0).abs() < 1e-6, "nu {nu}: {total}");
    }
}

#[test]
fn density_peaks_at_mode() {
    let p = InvChiSqParams::new(3.0, 0.0166).unwrap();
    let mode = p.mode().unwrap();
    assert!((mode - 3.0 * 0.0166 / 5.0).abs() < 1e-15);
    // ternary search on the density as an independent maximizer
    let (mut lo, mut hi) = (1e-4, 1.0);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if p.density(m1).unwrap() < p.density(m2).unwrap() {
            lo = m1;
        } else {
            hi = m2;
        }
    }
    assert!(rel(0.5 * (lo + hi), mode) < 1e-6);
}

#[test]
fn moment_examples() {
    let p = InvChiSqParams::new(3.0, 1.0 / 60.0).unwrap();
    assert!((p.mean().unwrap().finite().unwrap() - 0.05).abs() < 1e-15);
    assert_eq!(p.variance().unwrap(), Moment::Infinite);
    let p = InvChiSqParams::new(6.0, 2.0).unwrap();
    assert!((p.mean().unwrap().finite().unwrap() - 3.0).abs() < 1e-15);
    assert!((p.variance().unwrap().finite().unwrap() - 9.0).abs() < 1e-14);
    assert_eq!(InvChiSqParams::new(2.0, 5.0).unwrap().mean().unwrap(), Moment::Infinite);
}

#[test]
fn moments_match_quadrature() {
    let p = InvChiSqParams::new(9.0, 0.7).unwrap();
    let m1 = integrate_positive(|x| x * p.density(x).unwrap(), 0.7, 40.0, 80.0, 1e-12);
    let m2 = integrate_positive(|x| x * x * p.density(x).unwrap(), 0.7, 40.0, 80.0, 1e-12);
    assert!(rel(m1, p.mean().unwrap().finite().unwrap()) < 1e-8);
    assert!(rel(m2 - m1 * m1, p.variance().unwrap().finite().unwrap()) < 1e-7);
}

#[test]
fn quantile_examples() {
    let p = InvChiSqParams::new(2.0, 1.0).unwrap();
    assert!(rel(p.quantile(0.5).unwrap(), 1.0 / 2f64.ln()) < 1e-12);
    let p = InvChiSqParams::new(3.0, 1.0 / 60.0).unwrap();
    let grid: Vec<f64> = (1..=19).map(|i| i as f64 * 0.05).collect();
    let q: Vec<f64> = grid.iter().map(|pr| p.quantile(*pr).unwrap()).collect();
    assert!(q.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn quantile_inverts_quadrature_cdf() {
    for (nu, s2) in [(3.0, 1.0 / 60.0), (0.5, 1.0), (5.0, 0.03), (40.0, 2.0), (1.0, 7.0)] {
        let p = InvChiSqParams::new(nu, s2).unwrap();
        for pr in [0.01, 0.05, 0.25, 0.5, 0.75, 0.95, 0.99] {
            let x = p.quantile(pr).unwrap();
            let mass = quadrature_cdf(nu, s2, x);
            assert!((mass - pr).abs() < 1e-6, "nu {nu} p {pr}: {mass}");
        }
    }
}

#[test]
fn chi_squared_quantiles_against_reference_gamma() {
    use statrs::function::gamma::{gamma_lr, gamma_ur};
    for dof in [0.5, 1.0, 2.0, 3.0, 7.5, 30.0, 100.0, 1000.0, 1e4] {
        for q in [1e-6, 0.01, 0.1, 0.5, 0.9, 0.99] {
            let x = chi_squared_quantile(dof, q).unwrap();
            // propagate a 1e-9 relative error in x into probability units
            let pdf = (-(0.5 * x) + (0.5 * dof - 1.0) * (0.5 * x).ln() - statrs::function::gamma::ln_gamma(0.5 * dof)).exp();
            let slack = 1e-9 * 0.5 * x * pdf + 1e-14;
            assert!((gamma_lr(0.5 * dof, 0.5 * x) - q).abs() < slack, "dof {dof} q {q}");
            let y = chi_squared_upper_quantile(dof, q).unwrap();
            let pdf = (-(0.5 * y) + (0.5 * dof - 1.0) * (0.5 * y).ln() - statrs::function::gamma::ln_gamma(0.5 * dof)).exp();
            let slack = 1e-9 * 0.5 * y * pdf + 1e-14;
            assert!((gamma_ur(0.5 * dof, 0.5 * y) - q).abs() < slack, "dof {dof} upper {q}");
        }
    }
    assert!(rel(chi_squared_quantile(2.0, 0.5).unwrap(), 2.0 * 2f64.ln()) < 1e-12);
}

#[test]
fn improper_records_are_refused() {
    let j = InvChiSqParams::jeffreys();
    assert!(j.is_improper() && j.is_jeffreys());
    assert!(j.density(1.0).is_err());
    assert!(j.mean().is_err());
    assert!(j.quantile(0.5).is_err());
    assert!(draw_spectrum(&SpectrumPrior::jeffreys(grid100()), &mut rng(1)).is_err());
    for (k, nu) in [(1.0, 0.0), (0.5, -1.0), (0.0, -2.0)] {
        let p = InvChiSqParams::power_law(k).unwrap();
        assert_eq!(p.nu(), nu);
        assert!(p.is_improper());
    }
    assert!(InvChiSqParams::new(0.0, 1.0).is_err());
    assert!(InvChiSqParams::from_parts(3.0, 1.0, true).is_err());
    // updates of improper records stay representable
    let post = j.update(2, 0.4).unwrap();
    assert!(!post.is_improper());
    assert_eq!((post.nu(), post.s2()), (2.0, 0.2));
}

#[test]
fn posterior_update_examples() {
    let p = InvChiSqParams::new(3.0, 1.0 / 60.0).unwrap().update(2, 0.1).unwrap();
    assert_eq!(p.nu(), 5.0);
    assert!((p.s2() - 0.03).abs() < 1e-15);
    let z = InvChiSqParams::new(3.0, 0.6).unwrap().update(1, 0.0).unwrap();
    assert_eq!(z.nu(), 4.0);
    assert!((z.s2() - 3.0 * 0.6 / 4.0).abs() < 1e-15);
}

#[test]
fn posterior_on_four_samples_by_hand() {
    // x = (1, 2, 0, -1), Δt = 0.5: x̃ = (2, 1-3i, 0, 1+3i)
    // a_0 = √(Δt/N)·2 = 0.7071, a_1 = 2√(1/8) = 0.7071, b_1 = 6√(1/8), a_2 = 0
    let ts = TimeSeries::new(vec![1.0, 2.0, 0.0, -1.0], 0.5).unwrap();
    let prior = SpectrumPrior::uniform(InvChiSqParams::new(3.0, 0.5).unwrap(), ts.grid());
    let post = prior.posterior_update(&to_coefficients(&ts)).unwrap();
    let powers = [4.0 / 8.0, 4.0 / 8.0 + 36.0 / 8.0, 0.0];
    let kappas = [1.0, 2.0, 1.0];
    for j in 0..3 {
        let nu = 3.0 + kappas[j];
        assert_eq!(post.bin(j).nu(), nu);
        assert!((post.bin(j).s2() - (1.5 + powers[j]) / nu).abs() < 1e-12);
    }
}

#[test]
fn jeffreys_posterior_counts() {
    let grid = grid100();
    let ts = TimeSeries::new(common::random_series(&mut rng(4), 100, 1.0), 0.01).unwrap();
    let fc = to_coefficients(&ts);
    let post = SpectrumPrior::jeffreys(grid).posterior_update(&fc).unwrap();
    for j in 0..=50 {
        let expected = if j == 0 || j == 50 { 1.0 } else { 2.0 };
        assert_eq!(post.bin(j).nu(), expected);
        assert!((post.bin(j).s2() - fc.power(j) / expected).abs() < 1e-15);
    }
    assert_eq!(post.bin(7).mean().unwrap(), Moment::Infinite);
}

#[test]
fn moment_elicitation_examples() {
    let p = elicit_from_moments(1.0, 2.0).unwrap();
    assert!((p.nu() - 5.0).abs() < 1e-15 && (p.s2() - 0.6).abs() < 1e-15);
    let vague = elicit_from_moments(1.0, 1e12).unwrap();
    assert!(vague.nu() > 4.0 && vague.nu() < 4.0 + 1e-11);
}

#[test]
fn white_prior_settings() {
    let grid = grid100();
    let prior = white_prior_with_dof(2.5, 3.0, &grid).unwrap();
    let p = prior.common_params().unwrap();
    assert!((p.s2() - 1.0 / 60.0).abs() < 1e-12);
    assert!((p.mean().unwrap().finite().unwrap() - 0.05).abs() < 1e-12);

    let target = WhitePriorTarget::new(2.5, 0.5).unwrap();
    let prior = elicit_white_prior(&target, &grid).unwrap();
    let p = prior.common_params().unwrap();
    // direct evaluation of E[I] = Δf Σ (κ/2) E[σ²] over every bin
    let mean_sigma2 = p.nu() * p.s2() / (p.nu() - 2.0);
    let direct: f64 = (0..=50).map(|j| grid.df() * 0.5 * common::kappa_oracle(j, 100) * mean_sigma2).sum();
    assert!((direct - 2.5).abs() < 1e-10);
    let var_sigma2 = 2.0 * p.nu() * p.nu() * p.s2() * p.s2() / ((p.nu() - 2.0).powi(2) * (p.nu() - 4.0));
    let var: f64 =
        (0..=50).map(|j| (grid.df() * 0.5 * common::kappa_oracle(j, 100)).powi(2) * var_sigma2).sum();
    assert!((var.sqrt() / direct - 0.5).abs() < 1e-10);

    let huge = elicit_white_prior(&WhitePriorTarget::new(1.0, 1e5).unwrap(), &grid).unwrap();
    assert!(huge.bin(0).nu() - 4.0 < 1e-8);
}

/// The closed form `ν = 4 + (N-1)/N² · 2/c²` with a halved offset gives a
/// full-band variation coefficient √2 times the target; the κ-weighted sums
/// need `ν = 4 + 4(N-1)/(N² c²)`.
#[test]
fn halved_dof_offset_misses_the_target() {
    let grid = grid100();
    let c = 0.5;
    let nu_halved = 4.0 + 99.0 / 1e4 * 2.0 / (c * c);
    let nu_full = 4.0 + 4.0 * 99.0 / (1e4 * c * c);
    assert!(rel(variation_coeff_full_band(nu_halved, 100), 2f64.sqrt() * c) < 1e-12);
    assert!(rel(variation_coeff_full_band(nu_full, 100), c) < 1e-12);
    let elicited = elicit_white_prior(&WhitePriorTarget::new(2.5, c).unwrap(), &grid).unwrap();
    assert!(rel(elicited.bin(10).nu(), nu_full) < 1e-14);
}

#[test]
fn band_prior_examples() {
    let grid = grid100();
    let targets = [
        BandTarget { band: FrequencyBand::new(0.0, 9.0), mean: 0.8, variance: 0.3 },
        BandTarget { band: FrequencyBand::new(9.0, 19.0), mean: 1.0, variance: 0.02 },
        BandTarget { band: FrequencyBand::new(19.0, 50.0), mean: 1.4, variance: 0.5 },
    ];
    let prior = elicit_band_prior(&targets, &grid).unwrap();
    for j in 10..=19 {
        assert!((prior.bin(j).nu() - 14.0).abs() < 1e-12);
    }
    for t in &targets {
        let band = if t.band.lower == 0.0 { t.band.with_dc() } else { t.band };
        let (j1, j2) = band.bin_range(&grid).unwrap();
        let mut mean = 0.0;
        let mut var = 0.0;
        for j in j1..=j2 {
            let p = prior.bin(j);
            let w = grid.df() * 0.5 * common::kappa_oracle(j, 100);
            mean += w * p.nu() * p.s2() / (p.nu() - 2.0);
            var += w * w * 2.0 * p.nu().powi(2) * p.s2().powi(2) / ((p.nu() - 2.0).powi(2) * (p.nu() - 4.0));
        }
        assert!(rel(mean, t.mean) < 1e-8 && rel(var, t.variance) < 1e-8);
    }

    let twin = [
        BandTarget { band: FrequencyBand::new(0.0, 5.0), mean: 0.3, variance: 0.1 },
        BandTarget { band: FrequencyBand::new(5.0, 25.0), mean: 1.0, variance: 0.1 },
        BandTarget { band: FrequencyBand::new(25.0, 45.0), mean: 1.0, variance: 0.1 },
        BandTarget { band: FrequencyBand::new(45.0, 50.0), mean: 0.3, variance: 0.1 },
    ];
    let prior = elicit_band_prior(&twin, &grid).unwrap();
    assert_eq!(prior.bin(10), prior.bin(30));
}

#[test]
fn variation_coefficient_closed_forms() {
    let grid = grid100();
    let prior = SpectrumPrior::uniform(InvChiSqParams::new(6.0, 0.4).unwrap(), grid);
    let band = FrequencyBand::new(9.0, 19.0);
    let m = integrated_spectrum_moments(&prior, &band).unwrap();
    let c = m.variation_coeff.finite().unwrap();
    assert!((c - 10f64.sqrt() / 10.0).abs() < 1e-12);
    assert!((variation_coeff_interior(6.0, 10) - c).abs() < 1e-12);
    assert!((variation_coeff_equal_params(6.0, &grid, 10, 19) - c).abs() < 1e-12);
    assert!((variation_coeff_equal_dof(6.0, &[0.4; 10], &grid, 10) - c).abs() < 1e-12);

    for nu in [4.5, 6.0, 20.0] {
        let prior = SpectrumPrior::uniform(InvChiSqParams::new(nu, 1.3).unwrap(), grid);
        let full = integrated_spectrum_moments(&prior, &FrequencyBand::full(&grid)).unwrap();
        let c = full.variation_coeff.finite().unwrap();
        assert!(rel(variation_coeff_full_band(nu, 100), c) < 1e-12);
        assert!(rel(variation_coeff_equal_params(nu, &grid, 0, 50), c) < 1e-12);
    }
    let heavy = SpectrumPrior::uniform(InvChiSqParams::new(3.0, 1.0).unwrap(), grid);
    let m = integrated_spectrum_moments(&heavy, &FrequencyBand::full(&grid)).unwrap();
    assert!(m.mean.is_finite() && !m.variance.is_finite() && !m.variation_coeff.is_finite());
}

#[test]
fn integrated_spectrum_examples() {
    let grid = grid100();
    let s = 0.37;
    let flat = SpectrumDraw::flat(s, grid).unwrap();
    let full = integrated_spectrum(&flat, &FrequencyBand::full(&grid)).unwrap();
    assert!(rel(full, 50.0 * s) < 1e-14);
    assert!(rel(full, autocovariance(&flat).variance()) < 1e-12);

    let sigma2: Vec<f64> = (0..=50).map(|j| 0.1 + 0.02 * j as f64).collect();
    let draw = SpectrumDraw::new(sigma2, grid).unwrap();
    let whole = integrated_spectrum(&draw, &FrequencyBand::new(0.0, 50.0).with_dc()).unwrap();
    let parts = integrated_spectrum(&draw, &FrequencyBand::new(0.0, 20.0).with_dc()).unwrap()
        + integrated_spectrum(&draw, &FrequencyBand::new(20.0, 50.0)).unwrap();
    assert!(rel(parts, whole) < 1e-14);
    assert!(rel(whole, autocovariance(&draw).variance()) < 1e-12);
    let no_dc = integrated_spectrum(&draw, &FrequencyBand::new(0.0, 50.0)).unwrap();
    assert!(rel(whole - no_dc, grid.df() * 0.5 * 0.1) < 1e-10);
    assert!(matches!(
        integrated_spectrum(&draw, &FrequencyBand::new(3.2, 3.7)),
        Err(Error::BandTooNarrow { .. })
    ));
}

#[test]
fn white_spectrum_is_uncorrelated() {
    for n in [100, 64, 37] {
        let grid = FourierGrid::new(n, 0.01).unwrap();
        let s = 0.3;
        let gamma = autocovariance(&SpectrumDraw::flat(s, grid).unwrap()).gamma;
        // γ(0) = (1/(NΔt)) s Σ κ_j/2 = s/(2Δt)
        assert!(rel(gamma[0], s / (2.0 * 0.01)) < 1e-12);
        for g in &gamma[1..] {
            assert!(g.abs() < 1e-10 * gamma[0], "n {n}");
        }
    }
}

#[test]
fn autocovariance_matches_direct_trig_sum() {
    let grid = FourierGrid::new(30, 0.2).unwrap();
    let sigma2: Vec<f64> = (0..=15).map(|j| 1.0 / (1.0 + j as f64)).collect();
    let gamma = autocovariance(&SpectrumDraw::new(sigma2.clone(), grid).unwrap()).gamma;
    for (k, g) in gamma.iter().enumerate() {
        let direct: f64 = (0..=15)
            .map(|j| {
                sigma2[j] * 0.5 * common::kappa_oracle(j, 30)
                    * (2.0 * std::f64::consts::PI * (j * k) as f64 / 30.0).cos()
            })
            .sum::<f64>()
            / (30.0 * 0.2);
        assert!((g - direct).abs() < 1e-13);
    }
    for k in 1..30 {
        assert_eq!(gamma[k], gamma[30 - k]);
    }
}

#[test]
fn autocovariance_moment_examples() {
    let grid = grid100();
    let heavy = SpectrumPrior::uniform(InvChiSqParams::new(3.0, 1.0 / 60.0).unwrap(), grid);
    let m = autocovariance_moments(&heavy).unwrap();
    assert!(m.iter().all(|l| l.mean.is_finite() && !l.variance.is_finite()));
    let s = 0.2;
    let six = SpectrumPrior::uniform(InvChiSqParams::new(6.0, s).unwrap(), grid);
    let m = autocovariance_moments(&six).unwrap();
    assert!(rel(m[0].mean.finite().unwrap(), 3.0 * s / (4.0 * 0.01)) < 1e-12);
    assert!(autocovariance_moments(&SpectrumPrior::jeffreys(grid)).is_err());
}

/// 10⁵ prior draws at ν = 8: Monte Carlo mean and variance of `γ(0)`,
/// `γ(3Δt)` and of a band's integrated power agree with the analytic values.
#[test]
fn analytic_moments_match_monte_carlo() {
    let grid = FourierGrid::new(40, 0.05).unwrap();
    let bins: Vec<InvChiSqParams> =
        (0..=20).map(|j| InvChiSqParams::new(8.0, 0.5 + 0.05 * j as f64).unwrap()).collect();
    let prior = SpectrumPrior::new(bins, grid).unwrap();
    let band = FrequencyBand::new(2.0, 6.0);
    let analytic = autocovariance_moments(&prior).unwrap();
    let band_moments = integrated_spectrum_moments(&prior, &band).unwrap();
    let mut r = rng(11);
    let draws = 100_000;
    let mut lag0 = Vec::with_capacity(draws);
    let mut lag3 = Vec::with_capacity(draws);
    let mut power = Vec::with_capacity(draws);
    for _ in 0..draws {
        let d = draw_spectrum(&prior, &mut r).unwrap();
        let g = autocovariance(&d);
        lag0.push(g.lag(0));
        lag3.push(g.lag(3));
        power.push(integrated_spectrum(&d, &band).unwrap());
    }
    let check = |values: &[f64], mean: f64, var: f64| {
        let n = values.len() as f64;
        let (m, v) = mean_var(values);
        let m4 = values.iter().map(|x| (x - m).powi(4)).sum::<f64>() / n;
        assert!((m - mean).abs() < 3.0 * (v / n).sqrt(), "mean {m} vs {mean}");
        let var_se = ((m4 - v * v) / n).sqrt();
        assert!((v - var).abs() < 3.0 * var_se, "var {v} vs {var}");
    };
    check(&lag0, analytic[0].mean.finite().unwrap(), analytic[0].variance.finite().unwrap());
    check(&lag3, analytic[3].mean.finite().unwrap(), analytic[3].variance.finite().unwrap());
    check(&power, band_moments.mean.finite().unwrap(), band_moments.variance.finite().unwrap());
}

#[test]
fn covariance_matrix_structure() {
    let grid = FourierGrid::new(12, 0.1).unwrap();
    let sigma2: Vec<f64> = (0..=6).map(|j| 2.0 - 0.25 * j as f64).collect();
    let draw = SpectrumDraw::new(sigma2, grid).unwrap();
    let gamma = autocovariance(&draw).gamma;
    let cov = covariance_matrix(&draw);
    assert_eq!(cov.row(0), gamma.as_slice());
    for i in 0..12 {
        assert_eq!(cov.get(i, i), gamma[0]);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn covariance_is_positive_semidefinite(n in 2usize..48, seed: u64) {
        let grid = FourierGrid::new(n, 0.1).unwrap();
        let mut r = rng(seed);
        let sigma2: Vec<f64> = (0..grid.bins()).map(|_| (r.random::<f64>() * 8.0 - 4.0).exp()).collect();
        let draw = SpectrumDraw::new(sigma2, grid).unwrap();
        let cov = covariance_matrix(&draw);
        let m = nalgebra::DMatrix::from_row_slice(n, n, cov.as_slice());
        let g0 = cov.get(0, 0);
        let eig = m.symmetric_eigenvalues();
        prop_assert!(eig.iter().all(|e| *e >= -1e-10 * g0));
    }

    #[test]
    fn conjugate_update_is_associative(
        nu in 0.1f64..20.0, s2 in 1e-3f64..10.0,
        p1 in 0.0f64..5.0, p2 in 0.0f64..5.0, k1 in 1u32..=2, k2 in 1u32..=2,
    ) {
        let prior = InvChiSqParams::new(nu, s2).unwrap();
        let seq = prior.update(k1, p1).unwrap().update(k2, p2).unwrap();
        let once = prior.update(k1 + k2, p1 + p2).unwrap();
        prop_assert!((seq.nu() - once.nu()).abs() < 1e-12);
        prop_assert!((seq.s2() - once.s2()).abs() <= 1e-12 * once.s2());
    }

    #[test]
    fn moment_elicitation_round_trips(nu in 4.01f64..200.0, s2 in 1e-4f64..1e3) {
        let p = InvChiSqParams::new(nu, s2).unwrap();
        let (m, v) = (p.mean().unwrap().finite().unwrap(), p.variance().unwrap().finite().unwrap());
        let back = elicit_from_moments(m, v).unwrap();
        prop_assert!(rel(back.nu(), nu) < 1e-9);
        prop_assert!(rel(back.s2(), s2) < 1e-9);
        let again = elicit_from_moments(m, v).unwrap();
        prop_assert!(rel(again.mean().unwrap().finite().unwrap(), m) < 1e-12);
        prop_assert!(rel(again.variance().unwrap().finite().unwrap(), v) < 1e-9);
    }

    #[test]
    fn quantiles_increase(nu in 0.5f64..100.0, s2 in 1e-3f64..1e3, a in 0.001f64..0.998, gap in 1e-3f64..0.5) {
        let p = InvChiSqParams::new(nu, s2).unwrap();
        let b = (a + gap).min(0.999);
        prop_assume!(b > a);
        prop_assert!(p.quantile(a).unwrap() < p.quantile(b).unwrap());
    }

    #[test]
    fn positive_spectra_give_positive_variance(n in 2usize..64, seed: u64) {
        let grid = FourierGrid::new(n, 0.3).unwrap();
        let mut r = rng(seed);
        let sigma2: Vec<f64> = (0..grid.bins()).map(|_| r.random::<f64>() + 0.01).collect();
        let draw = SpectrumDraw::new(sigma2, grid).unwrap();
        let full = integrated_spectrum(&draw, &FrequencyBand::full(&grid)).unwrap();
        prop_assert!(rel(full, autocovariance(&draw).variance()) < 1e-12);
        let fc = FourierCoefficients::zeros(grid);
        let prior = SpectrumPrior::uniform(InvChiSqParams::new(3.0, 1.0).unwrap(), grid);
        let post = prior.posterior_update(&fc).unwrap();
        for j in 0..grid.bins() {
            let k = grid.kappa(j) as f64;
            prop_assert!((post.bin(j).s2() - 3.0 / (3.0 + k)).abs() < 1e-15);
        }
    }
}
