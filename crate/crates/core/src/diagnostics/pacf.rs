use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use crate::estimators::sample_autocovariances;
use serde::{Deserialize, Serialize};

/// Partial autocorrelations at lags `1..=max_lag` (Durbin-Levinson on the
/// biased sample autocovariances of the demeaned series).
pub fn pacf(series: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    let n = series.len();
    if max_lag == 0 || 4 * max_lag >= n {
        return Err(Error::Domain(format!("max_lag must be in 1..n/4 (n = {n}), got {max_lag}")));
    }
    let acov = sample_autocovariances(series.values(), max_lag);
    if !(acov[0] > 0.0) {
        return Err(Error::Degenerate("constant series has no autocorrelation".into()));
    }
    let r: Vec<f64> = acov.iter().map(|c| c / acov[0]).collect();
    let mut out = Vec::with_capacity(max_lag);
    let mut phi: Vec<f64> = Vec::with_capacity(max_lag);
    let mut v = 1.0;
    for k in 1..=max_lag {
        let num = r[k] - phi.iter().enumerate().map(|(j, p)| p * r[k - 1 - j]).sum::<f64>();
        let kk = num / v;
        let prev = phi.clone();
        for j in 0..phi.len() {
            phi[j] = prev[j] - kk * prev[prev.len() - 1 - j];
        }
        phi.push(kk);
        v *= 1.0 - kk * kk;
        out.push(kk);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderSelection {
    /// Lag in `1..=max_lag` with the largest `|PACF|`.
    pub order: usize,
    pub pacf: Vec<f64>,
    /// Whether the selected lag lies outside the `±1.96/√n` band.
    pub significant: bool,
    pub band: f64,
}

pub fn select_order(series: &TimeSeries, max_lag: usize) -> Result<OrderSelection> {
    let values = pacf(series, max_lag)?;
    let (idx, best) = values
        .iter()
        .enumerate()
        .fold((0, 0.0_f64), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
    let band = 1.96 / (series.len() as f64).sqrt();
    Ok(OrderSelection { order: idx + 1, pacf: values, significant: best > band, band })
}
