use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Least-squares polynomial trend in the time index mapped onto `[−1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetrendResult {
    pub degree: usize,
    /// Coefficients of `1, u, …, u^degree` with `u = 2t/(n−1) − 1`.
    pub coefficients: Vec<f64>,
    pub trend: TimeSeries,
    pub residual: TimeSeries,
}

fn normalized(t: f64, n: usize) -> f64 {
    if n < 2 {
        0.0
    } else {
        2.0 * t / (n - 1) as f64 - 1.0
    }
}

impl DetrendResult {
    /// Trend value at index `t` (fractional and out-of-sample indices allowed).
    pub fn evaluate(&self, t: f64) -> f64 {
        let u = normalized(t, self.trend.len());
        self.coefficients.iter().rev().fold(0.0, |acc, c| acc * u + c)
    }

    /// Trend at indices `0..len`; beyond the fitted range the polynomial is extrapolated.
    pub fn extrapolate(&self, len: usize) -> Vec<f64> {
        (0..len).map(|t| self.evaluate(t as f64)).collect()
    }
}

pub fn detrend_polynomial(series: &TimeSeries, degree: usize) -> Result<DetrendResult> {
    let n = series.len();
    if 10 * degree >= n && degree > 0 {
        return Err(Error::Domain(format!("degree {degree} needs more than {} observations", 10 * degree)));
    }
    let y = DVector::from_column_slice(series.values());
    let x = DMatrix::from_fn(n, degree + 1, |i, j| normalized(i as f64, n).powi(j as i32));
    let qr = x.clone().qr();
    let r = qr.r();
    let scale = r.diagonal().amax();
    if r.diagonal().iter().any(|d| d.abs() <= 1e-12 * scale) {
        return Err(Error::Singular("polynomial design matrix"));
    }
    let qty = qr.q().transpose() * &y;
    let coef = r.solve_upper_triangular(&qty).ok_or(Error::Singular("polynomial design matrix"))?;
    let trend: Vec<f64> = (&x * &coef).iter().copied().collect();
    let residual: Vec<f64> = series.values().iter().zip(&trend).map(|(v, t)| v - t).collect();
    Ok(DetrendResult {
        degree,
        coefficients: coef.iter().copied().collect(),
        trend: TimeSeries::new(trend)?,
        residual: TimeSeries::new(residual)?,
    })
}
