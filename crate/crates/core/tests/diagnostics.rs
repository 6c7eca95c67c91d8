mod common;

use nigar::diagnostics::{
    detrend_polynomial, kde, ks_one_sample, ks_two_sample, pacf, quantile_fan, segment_by_variance, select_order,
    DECILES,
};
use nigar::nig_dist::{sample_nig, NigParams};
use nigar::rng::{derive_seed, rng_from_seed};
use nigar::{ArNigModel, TimeSeries};
use proptest::prelude::*;
use rand::Rng;
use rand_distr::StandardNormal;
use statrs::distribution::{Continuous, ContinuousCDF, Normal};

fn normals(n: usize, seed: u64) -> Vec<f64> {
    let mut r = rng_from_seed(seed);
    (0..n).map(|_| r.sample::<f64, _>(StandardNormal)).collect()
}

#[test]
fn pacf_of_case2_ar1() {
    let m = ArNigModel::new(vec![0.961], NigParams::symmetric(0.0087, 70.3882).unwrap()).unwrap();
    let band = 2.0 / 579f64.sqrt();
    let (mut lag1_ok, mut inside, mut order1) = (0, 0, 0);
    for r in 0..100 {
        let s = m.simulate(579, 500, derive_seed(31, r)).unwrap();
        let p = pacf(&s, 20).unwrap();
        lag1_ok += usize::from((p[0] - 0.961).abs() < 0.05);
        inside += p[1..].iter().filter(|v| v.abs() < band).count();
        order1 += usize::from(select_order(&s, 20).unwrap().order == 1);
    }
    // a 2/√n band holds each null lag with probability ≈ 0.95
    assert!(lag1_ok >= 95, "{lag1_ok}");
    assert!(inside as f64 / 1900.0 >= 0.92, "{inside}");
    assert_eq!(order1, 100);
}

#[test]
fn pacf_of_white_noise_and_case1() {
    let s = TimeSeries::new(normals(4000, 2)).unwrap();
    let p = pacf(&s, 30).unwrap();
    assert!(p.iter().all(|v| v.abs() < 3.0 / 4000f64.sqrt()));
    let m = ArNigModel::new(vec![0.5, 0.3], NigParams::symmetric(1.0, 2.0).unwrap()).unwrap();
    let c1 = m.simulate(1000, 500, 4).unwrap();
    let p = pacf(&c1, 10).unwrap();
    assert!(p[1] > 1.96 / 1000f64.sqrt());
    let sel = select_order(&c1, 10).unwrap();
    assert!(sel.order == 1 || sel.order == 2);
}

#[test]
fn detrend_quadratic_plus_noise() {
    let e = normals(1000, 6);
    let y: Vec<f64> = (0..1000).map(|t| 1e-4 * (t as f64).powi(2) - 0.05 * t as f64 + e[t]).collect();
    let d = detrend_polynomial(&TimeSeries::new(y).unwrap(), 6).unwrap();
    let var = |xs: &[f64]| common::mean_var(xs).1;
    assert!(var(d.residual.values()) <= var(&e) * 1.05);
    assert!(d.residual.mean().abs() < 1e-8);
}

#[test]
fn segmentation_scale_invariant() {
    let mut x = normals(600, 8);
    x.extend(normals(400, 9).iter().map(|v| 2.5 * v));
    let a = segment_by_variance(&TimeSeries::new(x.clone()).unwrap()).unwrap();
    let b = segment_by_variance(&TimeSeries::new(x.iter().map(|v| 37.0 * v).collect()).unwrap()).unwrap();
    assert_eq!(a.breakpoints, b.breakpoints);
    assert!(a.breakpoints[0].abs_diff(600) <= 25);
}

#[test]
fn ks_calibration_under_null() {
    let n = Normal::standard();
    let rejects = (0..200)
        .filter(|&r| {
            let s = TimeSeries::new(normals(10_000, derive_seed(404, r))).unwrap();
            ks_one_sample(&s, |x| n.cdf(x)).unwrap().p_value < 0.05
        })
        .count();
    // binomial(200, 0.05): mean 10, sd ≈ 3.1
    assert!((2..=20).contains(&rejects), "{rejects}");
}

#[test]
fn ks_separates_and_self_compares() {
    let a = TimeSeries::new(normals(1000, 1)).unwrap();
    let b = TimeSeries::new(normals(1000, 2).iter().map(|v| v + 3.0).collect()).unwrap();
    assert!(ks_two_sample(&a, &b).unwrap().p_value < 1e-6);

    let mut sorted = a.values().to_vec();
    sorted.sort_by(f64::total_cmp);
    let ecdf = |x: f64| sorted.partition_point(|v| *v <= x) as f64 / sorted.len() as f64;
    assert!(ks_one_sample(&a, ecdf).unwrap().statistic <= 1.0 / 1000.0 + 1e-12);

    let heavy = TimeSeries::new(sample_nig(&NigParams::symmetric(0.0087, 70.3882).unwrap(), 579, 3)).unwrap();
    let (m, v) = common::mean_var(heavy.values());
    let normal = Normal::new(m, v.sqrt()).unwrap();
    assert!(ks_one_sample(&heavy, |x| normal.cdf(x)).unwrap().p_value < 0.05);
}

#[test]
fn ks_invariant_under_monotone_transform() {
    let s = TimeSeries::new(normals(500, 12)).unwrap();
    let n = Normal::standard();
    let a = ks_one_sample(&s, |x| n.cdf(x)).unwrap();
    let t = TimeSeries::new(s.values().iter().map(|x| x.exp()).collect()).unwrap();
    let b = ks_one_sample(&t, |y| n.cdf(y.ln())).unwrap();
    assert!((a.statistic - b.statistic).abs() < 1e-14);
}

#[test]
fn kde_of_normal_sample() {
    let s = TimeSeries::new(normals(100_000, 13)).unwrap();
    let grid: Vec<f64> = (0..161).map(|i| -4.0 + i as f64 * 0.05).collect();
    let f = kde(&s, &grid).unwrap();
    let n = Normal::standard();
    let dev = grid.iter().zip(&f).map(|(x, v)| (v - n.pdf(*x)).abs()).fold(0.0, f64::max);
    assert!(dev < 0.01, "{dev}");
}

#[test]
fn quantile_fan_properties() {
    let m = ArNigModel::new(vec![0.7], NigParams::symmetric(1.0, 1.0).unwrap()).unwrap();
    let fan = quantile_fan(&m, None, 200, 1000, &DECILES, 1).unwrap();
    let median_mean = fan.paths[4].iter().sum::<f64>() / 200.0;
    assert!(median_mean.abs() < 0.1);
    let probe = m.simulate(200, 500, 999_999).unwrap();
    let inside = probe
        .values()
        .iter()
        .enumerate()
        .filter(|(t, v)| **v >= fan.paths[0][*t] && **v <= fan.paths[8][*t])
        .count() as f64
        / 200.0;
    assert!((inside - 0.8).abs() <= 0.1, "{inside}");

    let wide = ArNigModel::new(vec![0.7], NigParams::symmetric(1.0, 4.0).unwrap()).unwrap();
    let fan2 = quantile_fan(&wide, None, 200, 1000, &DECILES, 1).unwrap();
    let width = |f: &nigar::diagnostics::QuantileFan| (0..200).map(|t| f.paths[8][t] - f.paths[0][t]).sum::<f64>();
    assert!(width(&fan2) > width(&fan));
}

#[test]
fn quantile_fan_adds_trend() {
    let m = ArNigModel::new(vec![0.5], NigParams::symmetric(2.0, 0.5).unwrap()).unwrap();
    let y: Vec<f64> = (0..300).map(|t| 100.0 + 0.2 * t as f64).collect();
    let d = detrend_polynomial(&TimeSeries::new(y).unwrap(), 1).unwrap();
    let plain = quantile_fan(&m, None, 300, 200, &DECILES, 4).unwrap();
    let trended = quantile_fan(&m, Some(&d), 300, 200, &DECILES, 4).unwrap();
    for t in [0, 150, 299] {
        let want = plain.paths[4][t] + 100.0 + 0.2 * t as f64;
        assert!((trended.paths[4][t] - want).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn pacf_mean_invariant(seed in any::<u64>(), shift in -100.0f64..100.0) {
        let x = normals(200, seed);
        let a = pacf(&TimeSeries::new(x.clone()).unwrap(), 10).unwrap();
        let b = pacf(&TimeSeries::new(x.iter().map(|v| v + shift).collect()).unwrap(), 10).unwrap();
        for (u, v) in a.iter().zip(&b) {
            prop_assert!((u - v).abs() < 1e-9);
        }
    }

    #[test]
    fn detrend_residual_orthogonal(seed in any::<u64>(), degree in 0usize..7) {
        let y: Vec<f64> = normals(300, seed).iter().enumerate().map(|(t, e)| e + (t as f64 / 50.0).sin() * 5.0).collect();
        let d = detrend_polynomial(&TimeSeries::new(y.clone()).unwrap(), degree).unwrap();
        for j in 0..=degree {
            let dot: f64 = d.residual.values().iter().enumerate()
                .map(|(t, r)| r * (2.0 * t as f64 / 299.0 - 1.0).powi(j as i32)).sum();
            prop_assert!(dot.abs() < 1e-8);
        }
        for ((a, b), v) in d.trend.values().iter().zip(d.residual.values()).zip(&y) {
            prop_assert!((a + b - v).abs() < 1e-10);
        }
    }

    #[test]
    fn fan_monotone_in_level(seed in any::<u64>()) {
        let m = ArNigModel::new(vec![0.3, 0.2], NigParams::new(1.0, 0.5, 0.0, 1.0).unwrap()).unwrap();
        let fan = quantile_fan(&m, None, 30, 50, &[0.05, 0.3, 0.5, 0.51, 0.95], seed).unwrap();
        for t in 0..30 {
            for k in 1..5 {
                prop_assert!(fan.paths[k][t] >= fan.paths[k - 1][t]);
            }
        }
    }
}
