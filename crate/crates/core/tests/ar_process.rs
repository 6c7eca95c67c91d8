mod common;

use common::{autocov_by_psi_weights, random_stationary, rel};
use nigar::ar_process::{ar2_variance, ar3_variance, ar3_variance_quartic_variant, check_stationarity};
use nigar::nig_dist::NigParams;
use nigar::rng::rng_from_seed;
use nigar::{ArNigModel, TimeSeries};
use proptest::prelude::*;

fn innovation() -> NigParams {
    NigParams::symmetric(1.0, 2.0).unwrap()
}

#[test]
fn case1_variance_from_closed_form() {
    let v = ar2_variance(0.5, 0.3, 2.0);
    assert!(rel(v, 1.4 / 0.312) < 1e-14);
    let m = ArNigModel::new(vec![0.5, 0.3], innovation()).unwrap();
    assert!(rel(m.theoretical_moments(0).unwrap().variance(), 1.4 / 0.312) < 1e-12);
}

#[test]
fn closed_forms_agree_with_linear_system() {
    let mut rng = rng_from_seed(2024);
    for _ in 0..100 {
        let r2 = random_stationary(2, &mut rng);
        let m2 = ArNigModel::new(r2.clone(), innovation()).unwrap();
        let lin = m2.theoretical_moments(0).unwrap().variance();
        assert!(rel(ar2_variance(r2[0], r2[1], 2.0), lin) < 1e-10, "{r2:?}");

        let r3 = random_stationary(3, &mut rng);
        let m3 = ArNigModel::new(r3.clone(), innovation()).unwrap();
        let lin = m3.theoretical_moments(0).unwrap().variance();
        assert!(rel(ar3_variance([r3[0], r3[1], r3[2]], 2.0), lin) < 1e-10, "{r3:?}");
    }
}

#[test]
fn quartic_denominator_variant_disagrees() {
    let r = [0.4, 0.2, 0.3];
    let m = ArNigModel::new(r.to_vec(), innovation()).unwrap();
    let lin = m.theoretical_moments(0).unwrap().variance();
    assert!(rel(ar3_variance(r, 2.0), lin) < 1e-12);
    assert!(rel(ar3_variance_quartic_variant(r, 2.0), lin) > 1e-3);
}

#[test]
fn autocovariances_match_ma_weights() {
    let mut rng = rng_from_seed(5);
    for p in 1..=4 {
        let rho = random_stationary(p, &mut rng);
        let m = ArNigModel::new(rho.clone(), innovation()).unwrap();
        let set = m.theoretical_moments(8).unwrap();
        let psi = autocov_by_psi_weights(&rho, 2.0, 8);
        for (a, b) in set.lags.iter().zip(&psi) {
            assert!((a - b).abs() < 1e-9 * psi[0], "p={p}");
        }
    }
}

#[test]
fn sample_moments_approach_theory() {
    let m = ArNigModel::new(vec![0.5, 0.3], innovation()).unwrap();
    let s = m.simulate(200_000, 1000, 77).unwrap();
    let y = s.values();
    let n = y.len() as f64;
    let mean = s.mean();
    let var = y.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    let theory = m.theoretical_moments(1).unwrap();
    assert!(mean.abs() < 0.05);
    assert!(rel(var, theory.variance()) < 0.03);
    let c1 = y.windows(2).map(|w| (w[0] - mean) * (w[1] - mean)).sum::<f64>() / n;
    assert!((c1 / var - theory.autocorrelations()[1]).abs() < 0.01);
}

#[test]
fn log_likelihood_sums_conditional_densities() {
    let m = ArNigModel::new(vec![0.3, -0.2], NigParams::new(1.5, 0.4, 0.1, 0.8).unwrap()).unwrap();
    let s = m.simulate(50, 20, 8).unwrap();
    let y = s.values();
    let direct: f64 = (2..50).map(|t| m.conditional_log_density(y[t], &[y[t - 1], y[t - 2]]).unwrap()).sum();
    assert!((m.log_likelihood(&s).unwrap() - direct).abs() < 1e-10);
}

#[test]
fn nonstationary_models_rejected() {
    assert!(ArNigModel::new(vec![0.5, 0.5], innovation()).is_err());
    assert!(ArNigModel::new(vec![1.01], innovation()).is_err());
    let st = check_stationarity(&[0.5, 0.3]).unwrap();
    assert!(st.stationary && st.min_root_modulus() > 1.0);
}

#[test]
fn serde_round_trip_validates() {
    let m = ArNigModel::new(vec![0.5, 0.3], innovation()).unwrap();
    let text = serde_json::to_string(&m).unwrap();
    assert_eq!(serde_json::from_str::<ArNigModel>(&text).unwrap(), m);
    let bad = text.replace("0.3", "0.6");
    assert!(serde_json::from_str::<ArNigModel>(&bad).is_err());
    assert!(serde_json::from_str::<TimeSeries>(r#"{"values":[]}"#).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn simulation_is_deterministic_per_seed(seed in any::<u64>(), n in 1usize..300) {
        let m = ArNigModel::new(vec![0.5, 0.3], innovation()).unwrap();
        prop_assert_eq!(m.simulate(n, 50, seed).unwrap(), m.simulate(n, 50, seed).unwrap());
    }

    #[test]
    fn filter_inverts_residuals(seed in any::<u64>()) {
        let m = ArNigModel::new(vec![0.4, -0.3, 0.1], innovation()).unwrap();
        let (s, eps) = m.simulate_with_innovations(100, 0, seed).unwrap();
        let y = s.values();
        for t in 3..100 {
            let e = y[t] - 0.4 * y[t - 1] + 0.3 * y[t - 2] - 0.1 * y[t - 3];
            prop_assert!((e - eps[t]).abs() < 1e-9 * (1.0 + y[t].abs()));
        }
    }
}
