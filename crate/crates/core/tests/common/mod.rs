//! Independent oracles shared by the integration tests: direct-sum DFT,
//! adaptive Gauss-Kronrod quadrature and closed-form densities written
//! without the library.

#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

pub fn random_series(rng: &mut impl Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect()
}

/// `Σ_k x_k exp(-2πi jk/N)` evaluated term by term with fresh `sin`/`cos`.
pub fn naive_dft(x: &[f64]) -> Vec<Complex64> {
    let n = x.len();
    (0..n)
        .map(|j| {
            x.iter().enumerate().fold(Complex64::new(0.0, 0.0), |acc, (k, v)| {
                let angle = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
                acc + Complex64::new(v * angle.cos(), v * angle.sin())
            })
        })
        .collect()
}

pub fn kappa_oracle(j: usize, n: usize) -> f64 {
    if j == 0 || 2 * j == n {
        1.0
    } else {
        2.0
    }
}

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let pair = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * h, ((kronrod - gauss) * h).abs())
}

/// Adaptive Gauss-Kronrod 7/15 on `[a, b]` to relative accuracy `rel`.
///
/// Starts from 64 equal panels so that a narrow peak is not missed entirely.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, rel: f64) -> f64 {
    let w = (b - a) / 64.0;
    let mut pieces: Vec<_> = (0..64)
        .map(|i| {
            let (lo, hi) = (a + i as f64 * w, if i == 63 { b } else { a + (i + 1) as f64 * w });
            (lo, hi, gk15(&f, lo, hi))
        })
        .collect();
    for _ in 0..5000 {
        let total: f64 = pieces.iter().map(|p| p.2 .0).sum();
        let error: f64 = pieces.iter().map(|p| p.2 .1).sum();
        if error <= rel * total.abs() || error < 1e-300 {
            return total;
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .2 .1.total_cmp(&y.1 .2 .1))
            .unwrap();
        let (lo, hi, _) = pieces.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        pieces.push((lo, mid, gk15(&f, lo, mid)));
        pieces.push((mid, hi, gk15(&f, mid, hi)));
    }
    panic!("quadrature did not converge on [{a}, {b}]");
}

/// `∫_0^∞ f(x) dx` through `x = exp(u)` over `u ∈ ln(centre) + [-below, above]`.
pub fn integrate_positive(f: impl Fn(f64) -> f64, centre: f64, below: f64, above: f64, rel: f64) -> f64 {
    let c = centre.ln();
    integrate(
        |u| {
            let x = u.exp();
            f(x) * x
        },
        c - below,
        c + above,
        rel,
    )
}

/// Scaled inverse-χ² density written out directly, with `ln Γ` from statrs.
pub fn inv_chisq_pdf(nu: f64, s2: f64, x: f64) -> f64 {
    let half = 0.5 * nu;
    (half * (half * s2).ln() - statrs::function::gamma::ln_gamma(half) - (1.0 + half) * x.ln() - half * s2 / x).exp()
}

/// Product of `kappa` zero-mean normal densities of variance `sigma2` whose
/// squares sum to `power`.
pub fn normal_block_pdf(kappa: u32, power: f64, sigma2: f64) -> f64 {
    (2.0 * PI * sigma2).powf(-0.5 * kappa as f64) * (-power / (2.0 * sigma2)).exp()
}

pub fn normal_pdf(x: f64, sigma2: f64) -> f64 {
    (-(x * x) / (2.0 * sigma2)).exp() / (2.0 * PI * sigma2).sqrt()
}

pub fn mean_var(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

/// Two-sided Kolmogorov-Smirnov distance between a sample and a CDF.
pub fn ks_distance(values: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let f = cdf(*x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}
