use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    /// Asymptotic p-value from the Kolmogorov distribution.
    pub p_value: f64,
    /// Effective sample size (`nm/(n+m)` for two samples).
    pub effective_n: f64,
}

/// `P(K > λ)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.0 {
        // Jacobi-theta form, fast for small λ
        let c = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let s: f64 = (1..=20).map(|k| (-((2 * k - 1) as f64).powi(2) * c).exp()).sum();
        return (1.0 - (2.0 * std::f64::consts::PI).sqrt() / lambda * s).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..=100 {
        let term = (-2.0 * (k * k) as f64 * lambda * lambda).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-300 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

fn sorted(xs: &[f64]) -> Vec<f64> {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// One-sample test of `sample` against a continuous distribution function.
pub fn ks_one_sample<F: Fn(f64) -> f64>(sample: &TimeSeries, cdf: F) -> Result<KsResult> {
    let n = sample.len();
    if n < 10 {
        return Err(Error::TooShort { needed: 10, got: n });
    }
    let xs = sorted(sample.values());
    let nf = n as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        d = d.max((i + 1) as f64 / nf - f).max(f - i as f64 / nf);
    }
    Ok(KsResult { statistic: d, p_value: kolmogorov_survival(nf.sqrt() * d), effective_n: nf })
}

pub fn ks_two_sample(a: &TimeSeries, b: &TimeSeries) -> Result<KsResult> {
    for s in [a, b] {
        if s.len() < 10 {
            return Err(Error::TooShort { needed: 10, got: s.len() });
        }
    }
    let (xa, xb) = (sorted(a.values()), sorted(b.values()));
    let (n, m) = (xa.len() as f64, xb.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < xa.len() && j < xb.len() {
        let x = xa[i].min(xb[j]);
        while i < xa.len() && xa[i] <= x {
            i += 1;
        }
        while j < xb.len() && xb[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    let ne = n * m / (n + m);
    Ok(KsResult { statistic: d, p_value: kolmogorov_survival(ne.sqrt() * d), effective_n: ne })
}

/// `(theoretical, empirical)` quantile pairs at plotting positions `(i − ½)/n`.
pub fn qq_pairs<Q: Fn(f64) -> f64>(sample: &TimeSeries, quantile: Q) -> Vec<(f64, f64)> {
    let n = sample.len() as f64;
    sorted(sample.values())
        .into_iter()
        .enumerate()
        .map(|(i, x)| (quantile((i as f64 + 0.5) / n), x))
        .collect()
}
