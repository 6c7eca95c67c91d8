use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use crate::par::{map_slice, Execution};
use std::f64::consts::PI;

use super::type7_quantile;

/// `0.9 · min(sd, IQR/1.34) · n^{−1/5}`, falling back to whichever spread is positive.
pub fn silverman_bandwidth(series: &TimeSeries) -> Result<f64> {
    let x = series.values();
    let n = x.len();
    if n < 2 {
        return Err(Error::TooShort { needed: 2, got: n });
    }
    let m = series.mean();
    let sd = (x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
    let mut s = x.to_vec();
    s.sort_by(f64::total_cmp);
    let iqr = (type7_quantile(&s, 0.75) - type7_quantile(&s, 0.25)) / 1.34;
    let spread = match (sd > 0.0, iqr > 0.0) {
        (true, true) => sd.min(iqr),
        (true, false) => sd,
        _ => return Err(Error::Degenerate("zero-variance sample".into())),
    };
    Ok(0.9 * spread * (n as f64).powf(-0.2))
}

/// Gaussian-kernel density estimate on `grid` with the Silverman bandwidth.
pub fn kde(series: &TimeSeries, grid: &[f64]) -> Result<Vec<f64>> {
    let h = silverman_bandwidth(series)?;
    kde_with_bandwidth(series, grid, h, Execution::default())
}

pub fn kde_with_bandwidth(series: &TimeSeries, grid: &[f64], bandwidth: f64, exec: Execution) -> Result<Vec<f64>> {
    if !(bandwidth > 0.0) || !bandwidth.is_finite() {
        return Err(Error::Domain(format!("bandwidth must be positive, got {bandwidth}")));
    }
    let x = series.values();
    let norm = 1.0 / (x.len() as f64 * bandwidth * (2.0 * PI).sqrt());
    Ok(map_slice(exec, grid, |&g| {
        x.iter()
            .map(|xi| {
                let u = (g - xi) / bandwidth;
                (-0.5 * u * u).exp()
            })
            .sum::<f64>()
            * norm
    }))
}
