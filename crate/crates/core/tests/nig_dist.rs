mod common;

use common::{ig_cdf, ln_phi, mean_var, posterior_oracle, rel};
use nigar::diagnostics::ks_one_sample;
use nigar::nig_dist::{gig_posterior_moments, sample_ig, sample_nig, GigPosterior, IgParams, NigParams};
use nigar::quadrature::{integrate, integrate_to_inf, Tolerance};
use nigar::TimeSeries;
use proptest::prelude::*;

fn case1() -> NigParams {
    NigParams::symmetric(1.0, 2.0).unwrap()
}
fn case2() -> NigParams {
    NigParams::symmetric(0.0087, 70.3882).unwrap()
}

#[test]
fn density_is_the_normal_variance_mean_mixture() {
    for p in [case1(), case2(), NigParams::new(2.0, 1.2, -0.4, 0.7).unwrap()] {
        let sd = p.variance().sqrt();
        for k in -8..=8 {
            let x = p.mean() + 0.5 * k as f64 * sd;
            let o = posterior_oracle(x, p.alpha(), p.beta(), p.mu(), p.delta());
            assert!((p.log_pdf(x) - o.log_marginal).abs() < 1e-9, "{p:?} x={x}");
        }
    }
}

#[test]
fn posterior_moments_match_quadrature() {
    for p in [case1(), case2()] {
        let sd = p.variance().sqrt();
        for k in 0..20 {
            let eps = -5.0 * sd + k as f64 * 10.0 * sd / 19.0;
            let (s, w) = gig_posterior_moments(eps, &p);
            let o = posterior_oracle(eps, p.alpha(), p.beta(), p.mu(), p.delta());
            assert!(rel(s, o.s) < 1e-8 && rel(w, o.w) < 1e-8, "eps={eps}: ({s},{w}) vs ({},{})", o.s, o.w);
        }
    }
    let skewed = NigParams::new(1.5, -0.9, 0.3, 1.1).unwrap();
    for eps in [-4.0, -0.5, 0.3, 2.0, 6.0] {
        let g = GigPosterior::new(eps, &skewed);
        let o = posterior_oracle(eps, 1.5, -0.9, 0.3, 1.1);
        assert!(rel(g.mean(), o.s) < 1e-8 && rel(g.inverse_mean(), o.w) < 1e-8);
    }
}

#[test]
fn moments_match_numerical_integration() {
    let p = NigParams::new(3.0, 1.0, 0.5, 2.0).unwrap();
    let m = p.moments();
    let tol = Tolerance::default();
    let raw = |k: i32| integrate(|x| x.powi(k) * p.pdf(x), -80.0, 80.0, tol).value;
    let mean = raw(1);
    let var = integrate(|x| (x - mean).powi(2) * p.pdf(x), -80.0, 80.0, tol).value;
    let m3 = integrate(|x| (x - mean).powi(3) * p.pdf(x), -80.0, 80.0, tol).value;
    let m4 = integrate(|x| (x - mean).powi(4) * p.pdf(x), -80.0, 80.0, tol).value;
    assert!((raw(0) - 1.0).abs() < 1e-10);
    assert!(rel(m.mean, mean) < 1e-10 && rel(m.variance, var) < 1e-10);
    assert!(rel(m.skewness, m3 / var.powf(1.5)) < 1e-8);
    assert!(rel(m.kurtosis, m4 / (var * var) - 3.0) < 1e-8);
}

#[test]
fn ig_density_integrates_and_matches_cdf() {
    let ig = IgParams::new(0.7, 1.3).unwrap();
    let total = integrate_to_inf(|x| if x > 0.0 { ig.pdf(x).unwrap() } else { 0.0 }, 0.0, Tolerance::default());
    assert!((total.value - 1.0).abs() < 1e-10);
    let (m, l) = (ig.mu1(), ig.lambda1());
    for x in [0.3, 1.0, 2.0, 5.0] {
        let f = integrate(|t| ig.pdf(t).unwrap(), 1e-12, x, Tolerance::default()).value;
        assert!((f - ig_cdf(x, m, l)).abs() < 1e-9);
    }
    assert!(ln_phi(-40.0) < -800.0);
}

#[test]
fn numeric_cdf_matches_direct_integration() {
    for p in [case1(), case2(), NigParams::new(1.0, 0.6, 0.0, 0.5).unwrap()] {
        let cdf = p.cdf();
        let sd = p.variance().sqrt();
        for k in [-3.0, -1.0, 0.0, 0.7, 2.5] {
            let x = p.mean() + k * sd;
            let lo = p.mean() - 400.0 * sd;
            let direct = integrate(|t| p.pdf(t), lo, x, Tolerance { abs: 1e-15, rel: 1e-13, max_intervals: 20_000 });
            assert!((cdf.cdf(x) - direct.value).abs() < 1e-9, "{p:?} k={k}");
        }
    }
}

fn check_sample_moments(xs: &[f64], mean: f64, var: f64, excess_kurtosis: f64) {
    let n = xs.len() as f64;
    let (m, v) = mean_var(xs);
    let se_mean = (var / n).sqrt();
    let se_var = var * ((excess_kurtosis + 2.0) / n).sqrt();
    assert!((m - mean).abs() < 3.0 * se_mean, "mean {m} vs {mean}");
    assert!((v - var).abs() < 3.0 * se_var, "var {v} vs {var}");
}

#[test]
fn ig_sampler_moments_and_ks() {
    for (ig, seed) in [(IgParams::new(1.0, 2.0).unwrap(), 11), (IgParams::new(0.0087, 70.3882).unwrap(), 12)] {
        let xs = sample_ig(&ig, 100_000, seed);
        let (m, l) = (ig.mu1(), ig.lambda1());
        check_sample_moments(&xs, m, m.powi(3) / l, 15.0 * m / l);
        let ks = ks_one_sample(&TimeSeries::new(xs).unwrap(), |x| ig_cdf(x, m, l)).unwrap();
        assert!(ks.p_value > 0.01, "{ks:?}");
    }
}

#[test]
fn nig_sampler_moments_and_ks() {
    for (p, seed) in [(case1(), 21), (case2(), 22), (NigParams::new(2.0, -1.0, 0.5, 1.5).unwrap(), 23)] {
        let xs = sample_nig(&p, 100_000, seed);
        let m = p.moments();
        check_sample_moments(&xs, m.mean, m.variance, m.kurtosis);
        let cdf = p.cdf();
        let ks = ks_one_sample(&TimeSeries::new(xs).unwrap(), |x| cdf.cdf(x)).unwrap();
        assert!(ks.p_value > 0.01, "{p:?}: {ks:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posterior_moments_satisfy_jensen(alpha in 0.01f64..10.0, skew in -0.95f64..0.95, delta in 0.01f64..100.0, z in -20.0f64..20.0) {
        let p = NigParams::new(alpha, skew * alpha, 0.0, delta).unwrap();
        let eps = z * p.variance().sqrt();
        let (s, w) = gig_posterior_moments(eps, &p);
        prop_assert!(s > 0.0 && w > 0.0);
        prop_assert!(s * w >= 1.0 - 1e-12);
    }

    #[test]
    fn standardize_is_location_scale_map(alpha in 0.1f64..10.0, skew in -0.9f64..0.9, mu in -5.0f64..5.0, delta in 0.1f64..10.0, x in -10.0f64..10.0) {
        let p = NigParams::new(alpha, skew * alpha, mu, delta).unwrap();
        let q = p.standardize();
        prop_assert!((q.log_pdf((x - mu) / delta) - (p.log_pdf(x) + delta.ln())).abs() < 1e-9);
    }

    #[test]
    fn convolution_adds_cumulants(alpha in 0.5f64..5.0, skew in -0.9f64..0.9, d1 in 0.1f64..5.0, d2 in 0.1f64..5.0) {
        let a = NigParams::new(alpha, skew * alpha, 0.3, d1).unwrap();
        let b = NigParams::new(alpha, skew * alpha, -1.0, d2).unwrap();
        let c = a.convolve(&b).unwrap();
        prop_assert!(rel(c.variance(), a.variance() + b.variance()) < 1e-12);
        prop_assert!((c.mean() - a.mean() - b.mean()).abs() < 1e-9);
        for u in [-0.3 * (alpha - skew * alpha), 0.2 * (alpha + skew * alpha)] {
            if let (Some(x), Some(y), Some(z)) = (a.mgf(u), b.mgf(u), c.mgf(u)) {
                prop_assert!(rel(z, x * y) < 1e-10);
            }
        }
    }

    #[test]
    fn scaling_maps_densities(alpha in 0.5f64..5.0, skew in -0.9f64..0.9, delta in 0.1f64..5.0, c in 0.1f64..10.0, x in -5.0f64..5.0) {
        let p = NigParams::new(alpha, skew * alpha, 0.2, delta).unwrap();
        let q = p.scale(c).unwrap();
        prop_assert!((q.log_pdf(c * x) - (p.log_pdf(x) - c.ln())).abs() < 1e-9);
    }
}
