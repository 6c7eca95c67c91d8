//! Posterior of the latent mixing variable.
//!
//! Given an innovation `ε`, the mixing variable `G` of `ε = μ + βG + √G Z`
//! is generalised inverse Gaussian `GIG(−1, δ√φ(ε), α)`, written here with
//! `χ = δ√φ(ε)` and `ψ = α` so that the density is proportional to
//! `g^{-2} exp(−(χ²/g + ψ²g)/2)`.

use super::NigParams;
use crate::special_fn::{log_k_pair, ratio_unchecked};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GigPosterior {
    chi: f64,
    psi: f64,
}

impl GigPosterior {
    pub fn new(epsilon: f64, params: &NigParams) -> Self {
        let z = (epsilon - params.mu()) / params.delta();
        Self { chi: params.delta() * z.hypot(1.0), psi: params.alpha() }
    }

    pub fn order(&self) -> f64 {
        -1.0
    }
    pub fn chi(&self) -> f64 {
        self.chi
    }
    pub fn psi(&self) -> f64 {
        self.psi
    }

    /// `E(G | ε) = (χ/ψ) K₀(χψ)/K₁(χψ)`.
    pub fn mean(&self) -> f64 {
        self.chi / self.psi * ratio_unchecked(0.0, 1.0, self.chi * self.psi)
    }

    /// `E(1/G | ε) = (ψ/χ) K₋₂(χψ)/K₋₁(χψ)`.
    pub fn inverse_mean(&self) -> f64 {
        self.psi / self.chi * ratio_unchecked(-2.0, -1.0, self.chi * self.psi)
    }
}

/// `(s, w) = (E(G | ε), E(1/G | ε))` under the given innovation law.
pub fn gig_posterior_moments(epsilon: f64, params: &NigParams) -> (f64, f64) {
    let post = GigPosterior::new(epsilon, params);
    (post.mean(), post.inverse_mean())
}

/// Everything the E-step needs for one residual, from a single Bessel sweep.
#[derive(Debug, Clone, Copy)]
pub(crate) struct PosteriorTerms {
    pub s: f64,
    pub w: f64,
    pub log_pdf: f64,
}

pub(crate) fn posterior_terms(epsilon: f64, params: &NigParams) -> PosteriorTerms {
    let (alpha, delta) = (params.alpha(), params.delta());
    let root_phi = ((epsilon - params.mu()) / delta).hypot(1.0);
    let chi = delta * root_phi;
    let arg = alpha * chi;
    let (log_k0, log_k1) = log_k_pair(0.0, arg, 1);
    let r = (log_k0 - log_k1).exp();
    // K₂/K₁ = K₀/K₁ + 2/x
    PosteriorTerms {
        s: chi / alpha * r,
        w: alpha / chi * (r + 2.0 / arg),
        log_pdf: (alpha / PI).ln() + delta * params.gamma() - params.beta() * params.mu() - root_phi.ln()
            + log_k1
            + params.beta() * epsilon,
    }
}
