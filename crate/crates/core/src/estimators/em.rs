//! EM iterations for the AR(p)-NIG likelihood.
//!
//! The latent mixing variables `G_t` turn the complete-data likelihood into a
//! weighted Gaussian regression plus an IG likelihood. The E-step needs only
//! the posterior moments `s_t = E(G_t | ε_t)` and `w_t = E(1/G_t | ε_t)`; the
//! M-step maximises the expected complete-data log-likelihood in closed form:
//!
//! ```text
//! ρ̂ = (Σ w_t Y_{t−1}Y_{t−1}ᵀ)⁻¹ Σ (w_t y_t − μw_t − β) Y_{t−1}
//! β̂ = (Σ w_t ε_t − n w̄ ε̄) / (n(1 − s̄w̄)),   μ̂ = (Σ w_t ε_t − nβ̂) / (n w̄)
//! δ̂ = √(s̄ / (s̄w̄ − 1)),   γ̂ = δ̂ / s̄,   α̂ = √(γ̂² + β̂²)
//! ```

use super::{yw_coefficients, EmConfig, EstimationReport, Method, Theta, REPORT_SCHEMA_VERSION};
use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use crate::nig_dist::{posterior_terms, NigParams};
use nalgebra::{DMatrix, DVector};

/// Quantities produced by one E-step at `theta`.
#[derive(Debug, Clone, PartialEq)]
pub struct EmState {
    pub theta: Theta,
    /// `ε_t = y_t − ρᵀY_{t−1}` for `t = p+1..n`.
    pub residuals: Vec<f64>,
    pub s: Vec<f64>,
    pub w: Vec<f64>,
    pub s_bar: f64,
    pub w_bar: f64,
    pub eps_bar: f64,
    /// Conditional log-likelihood of the series at `theta`.
    pub loglik: f64,
}

pub(crate) fn residuals(y: &[f64], rho: &[f64]) -> Vec<f64> {
    let p = rho.len();
    (p..y.len())
        .map(|t| y[t] - rho.iter().enumerate().map(|(i, r)| r * y[t - 1 - i]).sum::<f64>())
        .collect()
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn em_e_step(series: &TimeSeries, theta: &Theta) -> Result<EmState> {
    let p = theta.rho.len();
    let y = series.values();
    if y.len() < p + 2 {
        return Err(Error::TooShort { needed: p + 2, got: y.len() });
    }
    let innovation = theta.innovation()?;
    let residuals = residuals(y, &theta.rho);
    let mut s = Vec::with_capacity(residuals.len());
    let mut w = Vec::with_capacity(residuals.len());
    let mut loglik = 0.0;
    for &e in &residuals {
        let terms = posterior_terms(e, &innovation);
        s.push(terms.s);
        w.push(terms.w);
        loglik += terms.log_pdf;
    }
    Ok(EmState {
        theta: theta.clone(),
        s_bar: mean(&s),
        w_bar: mean(&w),
        eps_bar: mean(&residuals),
        residuals,
        s,
        w,
        loglik,
    })
}

pub fn em_m_step(state: &EmState, series: &TimeSeries, config: &EmConfig) -> Result<Theta> {
    m_step(state, series, config, true)
}

pub(crate) fn m_step(state: &EmState, series: &TimeSeries, config: &EmConfig, update_rho: bool) -> Result<Theta> {
    let y = series.values();
    let p = state.theta.rho.len();
    let (mu, beta) = if config.symmetric { (0.0, 0.0) } else { (state.theta.mu, state.theta.beta) };

    let rho = if update_rho && p > 0 {
        let mut gram = DMatrix::<f64>::zeros(p, p);
        let mut rhs = DVector::<f64>::zeros(p);
        for (k, t) in (p..y.len()).enumerate() {
            let wt = state.w[k];
            let coef = wt * y[t] - mu * wt - beta;
            for i in 0..p {
                let xi = y[t - 1 - i];
                rhs[i] += coef * xi;
                for j in 0..=i {
                    gram[(i, j)] += wt * xi * y[t - 1 - j];
                }
            }
        }
        for i in 0..p {
            for j in 0..i {
                gram[(j, i)] = gram[(i, j)];
            }
        }
        let chol = gram.cholesky().ok_or(Error::Singular("weighted Gram matrix"))?;
        chol.solve(&rhs).iter().copied().collect()
    } else {
        state.theta.rho.clone()
    };

    let sw = state.s_bar * state.w_bar;
    if !(sw > 1.0) {
        return Err(Error::Degenerate(format!(
            "mean posterior moments give s̄·w̄ = {sw} ≤ 1; δ update undefined"
        )));
    }

    let (mu_new, beta_new) = if config.symmetric {
        (0.0, 0.0)
    } else {
        let eps = if update_rho { residuals(y, &rho) } else { state.residuals.clone() };
        let n = eps.len() as f64;
        let sum_we: f64 = eps.iter().zip(&state.w).map(|(e, w)| e * w).sum();
        let beta = (sum_we - n * state.w_bar * mean(&eps)) / (n * (1.0 - sw));
        let mu = (sum_we - n * beta) / (n * state.w_bar);
        (mu, beta)
    };

    let delta = (state.s_bar / (sw - 1.0)).sqrt();
    let gamma = delta / state.s_bar;
    Ok(Theta { rho, alpha: gamma.hypot(beta_new), beta: beta_new, mu: mu_new, delta })
}

/// Largest relative change over `α`, `δ` and each component of `ρ`
/// (absolute change for components below `1e-12`). Without the symmetric
/// constraint, absolute changes of `μ` and `β` are monitored as well.
pub fn relative_change(old: &Theta, new: &Theta, symmetric: bool) -> f64 {
    let rel = |a: f64, b: f64| if a.abs() < 1e-12 { (b - a).abs() } else { ((b - a) / a).abs() };
    let mut change = rel(old.alpha, new.alpha).max(rel(old.delta, new.delta));
    for (a, b) in old.rho.iter().zip(&new.rho) {
        change = change.max(rel(*a, *b));
    }
    if !symmetric {
        change = change.max((new.mu - old.mu).abs()).max((new.beta - old.beta).abs());
    }
    change
}

pub(crate) struct EmRun {
    pub theta: Theta,
    pub iterations: usize,
    pub converged: bool,
    pub loglik_path: Vec<f64>,
    pub state: EmState,
}

pub(crate) fn run_em(series: &TimeSeries, theta0: Theta, config: &EmConfig, update_rho: bool) -> Result<EmRun> {
    let mut theta = theta0;
    let mut state = em_e_step(series, &theta)?;
    let mut loglik_path = vec![state.loglik];
    let mut iterations = 0;
    let mut converged = false;
    while iterations < config.max_iterations {
        let next = m_step(&state, series, config, update_rho)?;
        let change = relative_change(&theta, &next, config.symmetric);
        theta = next;
        iterations += 1;
        state = em_e_step(series, &theta)?;
        loglik_path.push(state.loglik);
        if change < config.tolerance {
            converged = true;
            break;
        }
    }
    Ok(EmRun { theta, iterations, converged, loglik_path, state })
}

/// `α⁽⁰⁾δ⁽⁰⁾ = 1` with `δ⁽⁰⁾/α⁽⁰⁾` matching the residual second moment.
fn moment_start(residuals: &[f64]) -> Result<(f64, f64)> {
    let sd = (residuals.iter().map(|e| e * e).sum::<f64>() / residuals.len() as f64).sqrt();
    if !(sd > 0.0) || !sd.is_finite() {
        return Err(Error::Degenerate("residuals have zero variance".into()));
    }
    Ok((1.0 / sd, sd))
}

/// Starting point: Yule-Walker coefficients, moment-matched `(α, δ)`, `μ = β = 0`.
pub(crate) fn initial_theta(series: &TimeSeries, p: usize) -> Result<Theta> {
    let rho = yw_coefficients(series, p)?;
    let (alpha, delta) = moment_start(&residuals(series.values(), &rho))?;
    Ok(Theta { rho, alpha, beta: 0.0, mu: 0.0, delta })
}

/// Full EM fit of an AR(`p`) model. Hitting `max_iterations` is reported
/// through `converged = false`, not as an error.
pub fn em_fit(series: &TimeSeries, p: usize, config: &EmConfig) -> Result<EstimationReport> {
    config.validate()?;
    if p == 0 {
        return Err(Error::Domain("AR order must be at least 1".into()));
    }
    if series.len() < p + 3 {
        return Err(Error::TooShort { needed: p + 3, got: series.len() });
    }
    let theta0 = match &config.initial {
        Some(t) if t.rho.len() != p => {
            return Err(Error::Config(format!("initial ρ has length {}, order is {p}", t.rho.len())))
        }
        Some(t) => t.clone(),
        None => initial_theta(series, p)?,
    };
    let run = run_em(series, theta0, config, true)?;
    Ok(EstimationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        method: Method::Em,
        order: p,
        innovation: run.theta.innovation()?,
        rho: run.theta.rho,
        iterations: run.iterations,
        converged: run.converged,
        loglik_path: run.loglik_path,
        residuals: TimeSeries::new(run.state.residuals)?,
    })
}

/// NIG law of a residual sequence, by EM with no AR part.
#[derive(Debug, Clone, PartialEq)]
pub struct InnovationFit {
    pub innovation: NigParams,
    pub iterations: usize,
    pub converged: bool,
    pub loglik_path: Vec<f64>,
}

pub fn fit_innovations(residuals: &TimeSeries, config: &EmConfig) -> Result<InnovationFit> {
    config.validate()?;
    let (alpha, delta) = moment_start(residuals.values())?;
    let theta0 = Theta { rho: vec![], alpha, beta: 0.0, mu: 0.0, delta };
    let run = run_em(residuals, theta0, config, false)?;
    Ok(InnovationFit {
        innovation: run.theta.innovation()?,
        iterations: run.iterations,
        converged: run.converged,
        loglik_path: run.loglik_path,
    })
}
