//! Normal inverse Gaussian (NIG) and inverse Gaussian (IG) distributions.
//!
//! `X ~ NIG(α, β, μ, δ)` has density
//!
//! ```text
//! f(x) = (α/π) exp(δγ − βμ) φ(x)^{-1/2} K₁(δα √φ(x)) exp(βx),
//! φ(x) = 1 + ((x − μ)/δ)²,   γ = √(α² − β²),
//! ```
//!
//! and is the variance-mean mixture `X = μ + βG + √G Z` with
//! `G ~ IG(γ, δ)` and `Z ~ N(0, 1)` independent.

mod cdf;
mod gig;
mod sampling;

pub use cdf::NigCdf;
pub use gig::{gig_posterior_moments, GigPosterior};
pub(crate) use gig::posterior_terms;
pub use sampling::{sample_ig, sample_nig};

use crate::error::{Error, Result};
use crate::special_fn::log_bessel_k_unchecked;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// NIG parameters `(α, β, μ, δ)` with `0 ≤ |β| < α` and `δ > 0`.
///
/// `γ = √(α² − β²)` is always derived, never stored. The boundary `|β| = α`
/// is rejected: it sends `γ` to zero, which every moment and the IG mixing law
/// divide by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawNigParams")]
pub struct NigParams {
    alpha: f64,
    beta: f64,
    mu: f64,
    delta: f64,
}

#[derive(Deserialize)]
struct RawNigParams {
    alpha: f64,
    beta: f64,
    mu: f64,
    delta: f64,
}

impl TryFrom<RawNigParams> for NigParams {
    type Error = Error;

    fn try_from(raw: RawNigParams) -> Result<Self> {
        NigParams::new(raw.alpha, raw.beta, raw.mu, raw.delta)
    }
}

/// Mean, variance, skewness and (excess) kurtosis of an NIG law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NigMoments {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
}

impl NigParams {
    pub fn new(alpha: f64, beta: f64, mu: f64, delta: f64) -> Result<Self> {
        if ![alpha, beta, mu, delta].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "NIG parameters must be finite: α={alpha}, β={beta}, μ={mu}, δ={delta}"
            )));
        }
        if alpha <= 0.0 || beta.abs() >= alpha {
            return Err(Error::InvalidParams(format!(
                "NIG requires 0 ≤ |β| < α, got α={alpha}, β={beta}"
            )));
        }
        if delta <= 0.0 {
            return Err(Error::InvalidParams(format!("NIG requires δ > 0, got δ={delta}")));
        }
        Ok(Self { alpha, beta, mu, delta })
    }

    /// Symmetric, zero-location law `NIG(α, 0, 0, δ)`.
    pub fn symmetric(alpha: f64, delta: f64) -> Result<Self> {
        Self::new(alpha, 0.0, 0.0, delta)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn mu(&self) -> f64 {
        self.mu
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn gamma(&self) -> f64 {
        ((self.alpha - self.beta) * (self.alpha + self.beta)).sqrt()
    }

    /// Law of the mixing variable `G` in `X = μ + βG + √G Z`.
    pub fn mixing_law(&self) -> IgParams {
        IgParams { gamma: self.gamma(), delta: self.delta }
    }

    pub fn log_pdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x.is_infinite() {
            return f64::NEG_INFINITY;
        }
        let z = (x - self.mu) / self.delta;
        let root_phi = z.hypot(1.0);
        (self.alpha / PI).ln() + self.delta * self.gamma() - self.beta * self.mu - root_phi.ln()
            + log_bessel_k_unchecked(1.0, self.delta * self.alpha * root_phi)
            + self.beta * x
    }

    pub fn pdf(&self, x: f64) -> f64 {
        self.log_pdf(x).exp()
    }

    pub fn mean(&self) -> f64 {
        self.mu + self.delta * self.beta / self.gamma()
    }

    pub fn variance(&self) -> f64 {
        self.delta * self.alpha * self.alpha / self.gamma().powi(3)
    }

    pub fn moments(&self) -> NigMoments {
        let g = self.gamma();
        let dg = self.delta * g;
        let b_over_a = self.beta / self.alpha;
        NigMoments {
            mean: self.mean(),
            variance: self.variance(),
            skewness: 3.0 * self.beta / (self.alpha * dg.sqrt()),
            kurtosis: 3.0 * (1.0 + 4.0 * b_over_a * b_over_a) / dg,
        }
    }

    /// Moment generating function `E e^{uX}`, defined for `|β + u| < α`.
    pub fn mgf(&self, u: f64) -> Option<f64> {
        let b = self.beta + u;
        if b.abs() >= self.alpha {
            return None;
        }
        let inner = ((self.alpha - b) * (self.alpha + b)).sqrt();
        Some((self.mu * u + self.delta * (self.gamma() - inner)).exp())
    }

    /// Constant `c` of the right tail `P(X > x) ~ c x^{-3/2} e^{-(α-β)x}`.
    pub fn right_tail_constant(&self) -> f64 {
        (self.alpha / (2.0 * PI)).sqrt() * self.delta / (self.alpha - self.beta)
            * (self.delta * self.gamma() - self.beta * self.mu).exp()
    }

    /// Law of `X + c`.
    pub fn shift(&self, c: f64) -> Result<Self> {
        Self::new(self.alpha, self.beta, self.mu + c, self.delta)
    }

    /// Law of `cX` for `c > 0`.
    pub fn scale(&self, c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::Domain(format!("scale factor must be positive, got {c}")));
        }
        Self::new(self.alpha / c, self.beta / c, c * self.mu, c * self.delta)
    }

    /// Law of `X₁ + X₂` for independent summands sharing `(α, β)`.
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        if self.alpha != other.alpha || self.beta != other.beta {
            return Err(Error::Domain(format!(
                "convolution needs equal (α, β): ({}, {}) vs ({}, {})",
                self.alpha, self.beta, other.alpha, other.beta
            )));
        }
        Self::new(self.alpha, self.beta, self.mu + other.mu, self.delta + other.delta)
    }

    /// Law of `(X − μ)/δ`.
    pub fn standardize(&self) -> Self {
        Self {
            alpha: self.alpha * self.delta,
            beta: self.beta * self.delta,
            mu: 0.0,
            delta: 1.0,
        }
    }

    pub fn cdf(&self) -> NigCdf {
        NigCdf::new(*self)
    }
}

/// Inverse Gaussian law `IG(γ, δ)` with density
/// `g(x) = δ/√(2π) e^{δγ} x^{-3/2} exp(−(δ²/x + γ²x)/2)`.
///
/// The alternative `(μ₁, λ₁)` parametrisation used by the sampler is
/// `μ₁ = δ/γ`, `λ₁ = δ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IgParams {
    gamma: f64,
    delta: f64,
}

impl IgParams {
    pub fn new(gamma: f64, delta: f64) -> Result<Self> {
        if !(gamma > 0.0 && delta > 0.0 && gamma.is_finite() && delta.is_finite()) {
            return Err(Error::InvalidParams(format!(
                "IG requires γ > 0 and δ > 0, got γ={gamma}, δ={delta}"
            )));
        }
        Ok(Self { gamma, delta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn mu1(&self) -> f64 {
        self.delta / self.gamma
    }
    pub fn lambda1(&self) -> f64 {
        self.delta * self.delta
    }
    pub fn mean(&self) -> f64 {
        self.mu1()
    }
    pub fn variance(&self) -> f64 {
        self.delta / self.gamma.powi(3)
    }

    pub fn log_pdf(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) {
            return Err(Error::Domain(format!("IG density is defined for x > 0, got {x}")));
        }
        let (g, d) = (self.gamma, self.delta);
        Ok(d.ln() - 0.5 * (2.0 * PI).ln() + d * g - 1.5 * x.ln() - 0.5 * (d * d / x + g * g * x))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.log_pdf(x).map(f64::exp)
    }
}
