//! Yule-Walker and conditional least squares baselines.

use super::em::{fit_innovations, residuals};
use super::{lagged, EmConfig, EstimationReport, Method, REPORT_SCHEMA_VERSION};
use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Solves the Toeplitz system `Γ ρ = (γ₁ … γ_p)` from autocovariances `γ₀ … γ_p`.
pub fn yule_walker_from_autocov(acov: &[f64], p: usize) -> Result<Vec<f64>> {
    if p == 0 || acov.len() < p + 1 {
        return Err(Error::Domain(format!("need {} autocovariances for order {p}", p + 1)));
    }
    if !(acov[0] > 0.0) {
        return Err(Error::Singular("autocovariance matrix"));
    }
    let gamma = DMatrix::from_fn(p, p, |i, j| acov[i.abs_diff(j)]);
    let rhs = DVector::from_iterator(p, acov[1..=p].iter().copied());
    let sol = gamma.lu().solve(&rhs).ok_or(Error::Singular("autocovariance matrix"))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("autocovariance matrix"));
    }
    Ok(sol.iter().copied().collect())
}

/// Biased (`1/n`) sample autocovariances of the demeaned series, lags `0..=max_lag`.
pub fn sample_autocovariances(y: &[f64], max_lag: usize) -> Vec<f64> {
    let n = y.len();
    let m = y.iter().sum::<f64>() / n as f64;
    let c: Vec<f64> = y.iter().map(|v| v - m).collect();
    (0..=max_lag.min(n.saturating_sub(1)))
        .map(|k| c[..n - k].iter().zip(&c[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect()
}

pub fn yw_coefficients(series: &TimeSeries, p: usize) -> Result<Vec<f64>> {
    if series.len() <= p {
        return Err(Error::TooShort { needed: p + 1, got: series.len() });
    }
    yule_walker_from_autocov(&sample_autocovariances(series.values(), p), p)
}

/// Least squares of `y_t` on `(y_{t−1}, …, y_{t−p})`, no intercept.
pub fn cls_coefficients(series: &TimeSeries, p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Err(Error::Domain("AR order must be at least 1".into()));
    }
    if series.len() <= p + 1 {
        return Err(Error::TooShort { needed: p + 2, got: series.len() });
    }
    let (rows, targets) = lagged(series.values(), p);
    let mut xtx = DMatrix::<f64>::zeros(p, p);
    let mut xty = DVector::<f64>::zeros(p);
    for (x, &yt) in rows.iter().zip(&targets) {
        for i in 0..p {
            xty[i] += x[i] * yt;
            for j in 0..p {
                xtx[(i, j)] += x[i] * x[j];
            }
        }
    }
    let chol = xtx.cholesky().ok_or(Error::Singular("least-squares design matrix"))?;
    Ok(chol.solve(&xty).iter().copied().collect())
}

fn baseline_report(series: &TimeSeries, rho: Vec<f64>, method: Method, config: &EmConfig) -> Result<EstimationReport> {
    let resid = TimeSeries::new(residuals(series.values(), &rho))?;
    let fit = fit_innovations(&resid, config)?;
    Ok(EstimationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        method,
        order: rho.len(),
        rho,
        innovation: fit.innovation,
        iterations: fit.iterations,
        converged: fit.converged,
        loglik_path: fit.loglik_path,
        residuals: resid,
    })
}

pub fn yw_fit(series: &TimeSeries, p: usize) -> Result<EstimationReport> {
    yw_fit_with(series, p, &EmConfig::default())
}

pub fn yw_fit_with(series: &TimeSeries, p: usize, config: &EmConfig) -> Result<EstimationReport> {
    let rho = yw_coefficients(series, p)?;
    baseline_report(series, rho, Method::Yw, config)
}

pub fn cls_fit(series: &TimeSeries, p: usize) -> Result<EstimationReport> {
    cls_fit_with(series, p, &EmConfig::default())
}

pub fn cls_fit_with(series: &TimeSeries, p: usize, config: &EmConfig) -> Result<EstimationReport> {
    let rho = cls_coefficients(series, p)?;
    baseline_report(series, rho, Method::Cls, config)
}
