//! Parameter estimation for AR(p) models with NIG innovations.
//!
//! [`em_fit`] is the full maximum-likelihood EM estimator. [`yw_fit`] and
//! [`cls_fit`] estimate the AR coefficients by Yule-Walker and conditional
//! least squares, then fit the innovation law to their residuals with the
//! distribution-only EM updates.

mod baselines;
mod em;

pub use baselines::{
    cls_coefficients, cls_fit, cls_fit_with, sample_autocovariances, yule_walker_from_autocov, yw_coefficients, yw_fit,
    yw_fit_with,
};
pub use em::{em_e_step, em_fit, em_m_step, fit_innovations, relative_change, EmState, InnovationFit};

use crate::ar_process::{ArNigModel, TimeSeries};
use crate::error::{Error, Result};
use crate::nig_dist::NigParams;
use serde::{Deserialize, Serialize};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
#[serde(rename_all = "UPPERCASE")]
pub enum Method {
    Em,
    Yw,
    Cls,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Em => "EM",
            Method::Yw => "YW",
            Method::Cls => "CLS",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "em" => Ok(Method::Em),
            "yw" => Ok(Method::Yw),
            "cls" => Ok(Method::Cls),
            other => Err(Error::Config(format!("unknown estimator '{other}' (expected em, yw or cls)"))),
        }
    }
}

/// Parameter vector `θ = (α, β, μ, δ, ρ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theta {
    pub rho: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub delta: f64,
}

impl Theta {
    pub fn innovation(&self) -> Result<NigParams> {
        NigParams::new(self.alpha, self.beta, self.mu, self.delta)
    }

    pub fn from_model(model: &ArNigModel) -> Self {
        let p = model.innovation();
        Self {
            rho: model.rho().to_vec(),
            alpha: p.alpha(),
            beta: p.beta(),
            mu: p.mu(),
            delta: p.delta(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmConfig {
    /// Threshold on the largest relative parameter change between iterations.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Hold `μ = β = 0` (the symmetric, zero-mean innovation law).
    pub symmetric: bool,
    pub initial: Option<Theta>,
}

impl Default for EmConfig {
    fn default() -> Self {
        Self { tolerance: 1e-4, max_iterations: 500, symmetric: true, initial: None }
    }
}

impl EmConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        Ok(())
    }
}

/// Result of one fit, serialisable as the `fit` command's JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub schema_version: u32,
    pub method: Method,
    pub order: usize,
    pub rho: Vec<f64>,
    pub innovation: NigParams,
    /// EM iterations (for YW and CLS: those of the residual-law fit).
    pub iterations: usize,
    pub converged: bool,
    pub loglik_path: Vec<f64>,
    pub residuals: TimeSeries,
}

impl EstimationReport {
    /// The fitted model, if its coefficients are stationary.
    pub fn model(&self) -> Result<ArNigModel> {
        ArNigModel::new(self.rho.clone(), self.innovation)
    }

    /// Smallest increment along the log-likelihood path (`+∞` for a single entry).
    pub fn min_loglik_increment(&self) -> f64 {
        self.loglik_path.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min)
    }
}

/// Lagged regressor rows `(y_{t−1}, …, y_{t−p})` and targets `y_t`, `t = p..n`.
pub(crate) fn lagged(y: &[f64], p: usize) -> (Vec<Vec<f64>>, Vec<f64>) {
    let rows = (p..y.len()).map(|t| (1..=p).map(|i| y[t - i]).collect()).collect();
    (rows, y[p..].to_vec())
}
