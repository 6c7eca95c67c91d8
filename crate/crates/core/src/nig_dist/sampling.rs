//! Exact samplers for the IG and NIG laws.

use super::{IgParams, NigParams};
use crate::rng::rng_from_seed;
use rand::Rng;
use rand_distr::StandardNormal;

/// One inverse Gaussian draw with mean `mu1` and shape `lambda1`
/// (transformation with one rejection step).
///
/// 1. `Z ~ N(0,1)`, `Y = Z²`;
/// 2. `X₁ = μ₁ + μ₁²Y/(2λ₁) − (μ₁/2λ₁)√(4μ₁λ₁Y + μ₁²Y²)`;
/// 3. `U ~ U[0,1)`;
/// 4. return `X₁` if `U ≤ μ₁/(μ₁ + X₁)`, else `μ₁²/X₁`.
///
/// Step 2 is the smaller root of a quadratic whose roots multiply to `μ₁²`;
/// it is evaluated as `μ₁²` over the larger root, which has no cancellation.
pub(crate) fn draw_ig<R: Rng + ?Sized>(rng: &mut R, mu1: f64, lambda1: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    let y = z * z;
    let mu_y = mu1 * y;
    let larger_root =
        mu1 + mu1 * mu_y / (2.0 * lambda1) + mu1 / (2.0 * lambda1) * (mu_y * (4.0 * lambda1 + mu_y)).sqrt();
    let x1 = mu1 * mu1 / larger_root;
    let u: f64 = rng.random();
    if u <= mu1 / (mu1 + x1) {
        x1
    } else {
        larger_root
    }
}

/// One NIG draw `μ + βG + √G Z`.
pub(crate) fn draw_nig<R: Rng + ?Sized>(rng: &mut R, params: &NigParams) -> f64 {
    let ig = params.mixing_law();
    let g = draw_ig(rng, ig.mu1(), ig.lambda1());
    let z: f64 = rng.sample(StandardNormal);
    params.mu() + params.beta() * g + g.sqrt() * z
}

impl IgParams {
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        let (m, l) = (self.mu1(), self.lambda1());
        (0..n).map(|_| draw_ig(rng, m, l)).collect()
    }
}

impl NigParams {
    pub fn sample_with<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<f64> {
        (0..n).map(|_| draw_nig(rng, self)).collect()
    }
}

/// `n` independent `IG(γ, δ)` draws; identical output for identical seeds.
pub fn sample_ig(params: &IgParams, n: usize, seed: u64) -> Vec<f64> {
    params.sample_with(&mut rng_from_seed(seed), n)
}

/// `n` independent NIG draws through the variance-mean mixture.
pub fn sample_nig(params: &NigParams, n: usize, seed: u64) -> Vec<f64> {
    params.sample_with(&mut rng_from_seed(seed), n)
}
