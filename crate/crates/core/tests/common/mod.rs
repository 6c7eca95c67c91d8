//! Reference computations that share no numerics with the library.
#![allow(dead_code)]

use rand::Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use std::f64::consts::PI;

/// `ln K_ν(x)` from `K_ν(x) = ½∫_{−∞}^{∞} e^{−x cosh u} cosh(νu) du` by the
/// trapezoidal rule, which converges geometrically for this analytic integrand.
pub fn log_bessel_k_trapezoid(nu: f64, x: f64) -> f64 {
    let nu = nu.abs();
    let h = 0.002;
    // log of e^{-x cosh u} cosh(νu), shifted by x so the peak stays near 0
    let log_f = |u: f64| -x * (u.cosh() - 1.0) + nu * u + (0.5 * (1.0 + (-2.0 * nu * u).exp())).ln();
    let peak = (nu / x).asinh();
    let top = log_f(peak);
    let mut sum = 0.0;
    let mut k = 0usize;
    loop {
        let u = k as f64 * h;
        let v = (log_f(u) - top).exp();
        sum += if k == 0 { 0.5 * v } else { v };
        if u > peak && v < 1e-18 {
            break;
        }
        k += 1;
    }
    (sum * h).ln() + top - x
}

/// Log density of IG(γ, δ): `δ/√(2π) e^{δγ} g^{−3/2} exp(−(δ²/g + γ²g)/2)`.
pub fn ig_log_pdf(g: f64, gamma: f64, delta: f64) -> f64 {
    delta.ln() - 0.5 * (2.0 * PI).ln() + delta * gamma - 1.5 * g.ln() - 0.5 * (delta * delta / g + gamma * gamma * g)
}

pub struct PosteriorOracle {
    pub s: f64,
    pub w: f64,
    pub log_marginal: f64,
}

/// Posterior moments of the mixing variable given `ε` and the marginal
/// density of `ε`, by integrating prior × Gaussian likelihood in `ln g`.
pub fn posterior_oracle(eps: f64, alpha: f64, beta: f64, mu: f64, delta: f64) -> PosteriorOracle {
    let gamma = (alpha * alpha - beta * beta).sqrt();
    let log_joint = |t: f64| {
        let g = t.exp();
        let m = mu + beta * g;
        ig_log_pdf(g, gamma, delta) - 0.5 * (2.0 * PI * g).ln() - (eps - m).powi(2) / (2.0 * g) + t
    };
    // locate the mode on a coarse grid, then sweep outwards
    let (mut t0, mut best) = (0.0, f64::NEG_INFINITY);
    let mut t = -60.0;
    while t < 60.0 {
        let v = log_joint(t);
        if v > best {
            best = v;
            t0 = t;
        }
        t += 0.01;
    }
    let h = 0.001;
    let (mut z, mut zg, mut zinv) = (0.0, 0.0, 0.0);
    for dir in [1.0, -1.0] {
        let mut k = if dir > 0.0 { 0 } else { 1 };
        loop {
            let t = t0 + dir * k as f64 * h;
            let v = (log_joint(t) - best).exp();
            let g = t.exp();
            z += v;
            zg += v * g;
            zinv += v / g;
            if v < 1e-20 {
                break;
            }
            k += 1;
        }
    }
    PosteriorOracle { s: zg / z, w: zinv / z, log_marginal: (z * h).ln() + best }
}

/// Closed-form IG CDF with mean `m` and shape `λ`.
pub fn ig_cdf(x: f64, m: f64, lambda: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let n = Normal::standard();
    let r = (lambda / x).sqrt();
    let a = n.cdf(r * (x / m - 1.0));
    // e^{2λ/m} Φ(−r(x/m + 1)) evaluated in log space
    let b = (2.0 * lambda / m + ln_phi(-r * (x / m + 1.0))).exp();
    a + b
}

/// `ln Φ(z)` accurate in the far left tail.
pub fn ln_phi(z: f64) -> f64 {
    if z > -30.0 {
        Normal::standard().cdf(z).ln()
    } else {
        // Mills ratio asymptotics
        let z2 = z * z;
        -0.5 * z2 - (-z).ln() - 0.5 * (2.0 * PI).ln() + (1.0 - 1.0 / z2 + 3.0 / (z2 * z2)).ln()
    }
}

/// Stationary AR(p) coefficients from partial autocorrelations drawn in
/// `(−0.9, 0.9)` (Durbin-Levinson step-up).
pub fn random_stationary<R: Rng>(p: usize, rng: &mut R) -> Vec<f64> {
    let mut phi: Vec<f64> = Vec::new();
    for _ in 0..p {
        let k: f64 = rng.random_range(-0.9..0.9);
        let prev = phi.clone();
        for j in 0..prev.len() {
            phi[j] = prev[j] - k * prev[prev.len() - 1 - j];
        }
        phi.push(k);
    }
    phi
}

/// Autocovariances `γ₀ … γ_max` of a stationary AR(p) from the MA(∞) weights.
pub fn autocov_by_psi_weights(rho: &[f64], sigma2: f64, max_lag: usize) -> Vec<f64> {
    let len = 20_000;
    let mut psi = vec![0.0; len];
    psi[0] = 1.0;
    for j in 1..len {
        psi[j] = rho.iter().enumerate().filter(|(i, _)| *i < j).map(|(i, r)| r * psi[j - 1 - i]).sum();
    }
    (0..=max_lag).map(|h| sigma2 * psi.iter().zip(&psi[h..]).map(|(a, b)| a * b).sum::<f64>()).collect()
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

pub fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    (m, xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0))
}
