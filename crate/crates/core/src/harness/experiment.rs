use super::io::write_json;
use crate::ar_process::ArNigModel;
use crate::error::{Error, Result};
use crate::estimators::{cls_fit_with, em_fit, yw_fit_with, EmConfig, EstimationReport, Method};
use crate::nig_dist::NigParams;
use crate::par::{map_range, Execution};
use crate::rng::derive_seed;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Case {
    Ar2Case1,
    Ar1Case2,
    Custom,
}

impl FromStr for Case {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ar2_case1" => Ok(Case::Ar2Case1),
            "ar1_case2" => Ok(Case::Ar1Case2),
            "custom" => Ok(Case::Custom),
            other => Err(Error::Config(format!("unknown case '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub case: Case,
    pub n_trajectories: usize,
    pub series_length: usize,
    pub burn_in: usize,
    pub model: ArNigModel,
    pub estimators: Vec<Method>,
    pub seed: u64,
    pub output_path: Option<PathBuf>,
    pub em: EmConfig,
}

impl ExperimentConfig {
    /// AR(2), `ρ = (0.5, 0.3)`, NIG(1, 0, 0, 2); 1000 series of length 1000.
    pub fn case1() -> Self {
        Self::with_model(Case::Ar2Case1, case1_model(), 1000)
    }

    /// AR(1), `ρ = 0.9610`, NIG(0.0087, 0, 0, 70.3882); 1000 series of length 579.
    pub fn case2() -> Self {
        Self::with_model(Case::Ar1Case2, case2_model(), 579)
    }

    fn with_model(case: Case, model: ArNigModel, series_length: usize) -> Self {
        Self {
            case,
            n_trajectories: 1000,
            series_length,
            burn_in: 500,
            model,
            estimators: vec![Method::Em, Method::Yw, Method::Cls],
            seed: 1,
            output_path: None,
            em: EmConfig::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trajectories == 0 {
            return Err(Error::Config("n_trajectories must be at least 1".into()));
        }
        if self.series_length <= self.model.order() + 2 {
            return Err(Error::Config(format!(
                "series_length {} too short for order {}",
                self.series_length,
                self.model.order()
            )));
        }
        if self.estimators.is_empty() {
            return Err(Error::Config("no estimators requested".into()));
        }
        self.em.validate()
    }

    /// Parses `key = value` lines; `#` starts a comment. `case` selects the
    /// defaults that the remaining keys override.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: i + 1, msg: format!("expected key = value, got '{line}'") })?;
            pairs.push((i + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let case = match pairs.iter().find(|p| p.1 == "case") {
            Some((line, _, v)) => v.parse().map_err(|e: Error| Error::Parse { line: *line, msg: e.to_string() })?,
            None => Case::Ar2Case1,
        };
        let mut cfg = match case {
            Case::Ar1Case2 => Self::case2(),
            _ => Self::case1(),
        };
        cfg.case = case;
        let base = cfg.model.innovation();
        let (mut rho, mut alpha, mut beta, mut mu, mut delta) =
            (cfg.model.rho().to_vec(), base.alpha(), base.beta(), base.mu(), base.delta());
        let mut custom_keys = 0;
        for (line, key, value) in &pairs {
            let err = |msg: String| Error::Parse { line: *line, msg };
            let num = || value.parse::<f64>().map_err(|_| err(format!("'{key}' needs a number, got '{value}'")));
            let count = || value.parse::<usize>().map_err(|_| err(format!("'{key}' needs a count, got '{value}'")));
            match key.as_str() {
                "case" => {}
                "n_trajectories" => cfg.n_trajectories = count()?,
                "series_length" => cfg.series_length = count()?,
                "burn_in" => cfg.burn_in = count()?,
                "seed" => cfg.seed = value.parse().map_err(|_| err(format!("bad seed '{value}'")))?,
                "output_path" => cfg.output_path = Some(PathBuf::from(value)),
                "tolerance" => cfg.em.tolerance = num()?,
                "max_iter" => cfg.em.max_iterations = count()?,
                "symmetric" => {
                    cfg.em.symmetric = value.parse().map_err(|_| err(format!("'symmetric' needs true/false, got '{value}'")))?
                }
                "estimators" => {
                    cfg.estimators = value
                        .split(',')
                        .map(|m| m.parse::<Method>().map_err(|e| err(e.to_string())))
                        .collect::<Result<_>>()?
                }
                "rho" => {
                    rho = value
                        .split(',')
                        .map(|r| r.trim().parse::<f64>().map_err(|_| err(format!("bad coefficient '{r}'"))))
                        .collect::<Result<_>>()?;
                    custom_keys += 1;
                }
                "alpha" => (alpha, custom_keys) = (num()?, custom_keys + 1),
                "beta" => (beta, custom_keys) = (num()?, custom_keys + 1),
                "mu" => (mu, custom_keys) = (num()?, custom_keys + 1),
                "delta" => (delta, custom_keys) = (num()?, custom_keys + 1),
                other => return Err(err(format!("unknown key '{other}'"))),
            }
        }
        if case != Case::Custom && custom_keys > 0 {
            return Err(Error::Config("model keys (rho, alpha, beta, mu, delta) require case = custom".into()));
        }
        cfg.model = ArNigModel::new(rho, NigParams::new(alpha, beta, mu, delta)?)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}

pub(crate) fn case1_model() -> ArNigModel {
    ArNigModel::new(vec![0.5, 0.3], NigParams::symmetric(1.0, 2.0).expect("valid")).expect("stationary")
}

pub(crate) fn case2_model() -> ArNigModel {
    ArNigModel::new(vec![0.961], NigParams::symmetric(0.0087, 70.3882).expect("valid")).expect("stationary")
}

/// One estimator applied to one replication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub replication: usize,
    pub method: Method,
    pub rho: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub delta: f64,
    pub iterations: usize,
    pub converged: bool,
    pub min_loglik_increment: f64,
}

impl EstimateRecord {
    fn from_report(replication: usize, r: &EstimationReport) -> Self {
        Self {
            replication,
            method: r.method,
            rho: r.rho.clone(),
            alpha: r.innovation.alpha(),
            beta: r.innovation.beta(),
            mu: r.innovation.mu(),
            delta: r.innovation.delta(),
            iterations: r.iterations,
            converged: r.converged,
            min_loglik_increment: r.min_loglik_increment(),
        }
    }

    fn parameter(&self, name: &str) -> f64 {
        match name {
            "alpha" => self.alpha,
            "beta" => self.beta,
            "mu" => self.mu,
            "delta" => self.delta,
            rho => rho[3..].parse::<usize>().map(|k| self.rho[k - 1]).unwrap_or(f64::NAN),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub estimator: Method,
    pub parameter: String,
    pub n: usize,
    pub mean: Option<f64>,
    /// Sample standard deviation; absent for fewer than two estimates.
    pub std: Option<f64>,
    pub median: Option<f64>,
    pub q25: Option<f64>,
    pub q75: Option<f64>,
    /// Estimates outside the 1.5·IQR fences.
    pub outliers_low: usize,
    pub outliers_high: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSummary {
    pub schema_version: u32,
    pub case: Case,
    pub replications: usize,
    pub series_length: usize,
    pub seed: u64,
    pub rows: Vec<SummaryRow>,
    /// Failed fits per estimator.
    pub failures: BTreeMap<Method, usize>,
    pub non_converged: BTreeMap<Method, usize>,
    /// Fits with a log-likelihood decrease larger than `1e−8`.
    pub loglik_violations: BTreeMap<Method, usize>,
    pub wall_time_secs: f64,
}

impl ExperimentSummary {
    pub fn row(&self, estimator: Method, parameter: &str) -> Option<&SummaryRow> {
        self.rows.iter().find(|r| r.estimator == estimator && r.parameter == parameter)
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::Io(e.into()))?;
        let opt = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
        w.write_record(["estimator", "parameter", "n", "mean", "std", "median", "q25", "q75", "outliers_low", "outliers_high"])
            .map_err(|e| Error::Io(e.into()))?;
        for r in &self.rows {
            w.write_record([
                r.estimator.as_str().to_string(),
                r.parameter.clone(),
                r.n.to_string(),
                opt(r.mean),
                opt(r.std),
                opt(r.median),
                opt(r.q25),
                opt(r.q75),
                r.outliers_low.to_string(),
                r.outliers_high.to_string(),
            ])
            .map_err(|e| Error::Io(e.into()))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub summary: ExperimentSummary,
    pub estimates: Vec<EstimateRecord>,
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn summarize(method: Method, parameter: &str, values: &[f64]) -> SummaryRow {
    let n = values.len();
    let mut s = values.to_vec();
    s.sort_by(f64::total_cmp);
    let q = |p| if n == 0 { None } else { finite(crate::diagnostics::type7_quantile(&s, p)) };
    let mean = if n == 0 { None } else { finite(s.iter().sum::<f64>() / n as f64) };
    let std = match (mean, n) {
        (Some(m), n) if n >= 2 => finite((s.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()),
        _ => None,
    };
    let (q25, q75) = (q(0.25), q(0.75));
    let (mut lo, mut hi) = (0, 0);
    if let (Some(a), Some(b)) = (q25, q75) {
        let iqr = b - a;
        lo = s.iter().filter(|v| **v < a - 1.5 * iqr).count();
        hi = s.iter().filter(|v| **v > b + 1.5 * iqr).count();
    }
    SummaryRow {
        estimator: method,
        parameter: parameter.to_string(),
        n,
        mean,
        std,
        median: q(0.5),
        q25,
        q75,
        outliers_low: lo,
        outliers_high: hi,
    }
}

fn fit(method: Method, series: &crate::TimeSeries, p: usize, em: &EmConfig) -> Result<EstimationReport> {
    match method {
        Method::Em => em_fit(series, p, em),
        Method::Yw => yw_fit_with(series, p, em),
        Method::Cls => cls_fit_with(series, p, em),
    }
}

/// Simulates `n_trajectories` series (replication `r` seeded with
/// `derive_seed(seed, r)`), fits every requested estimator and aggregates.
/// Failed fits are counted rather than aborting the run.
pub fn run_experiment(config: &ExperimentConfig, exec: Execution) -> Result<ExperimentOutcome> {
    config.validate()?;
    let start = Instant::now();
    let p = config.model.order();
    let per_rep = map_range(exec, config.n_trajectories, |r| {
        let series = config.model.simulate(config.series_length, config.burn_in, derive_seed(config.seed, r as u64));
        config
            .estimators
            .iter()
            .map(|&m| match &series {
                Ok(s) => fit(m, s, p, &config.em).map(|rep| EstimateRecord::from_report(r, &rep)).map_err(|_| m),
                Err(_) => Err(m),
            })
            .collect::<Vec<_>>()
    });

    let mut estimates = Vec::new();
    let mut failures: BTreeMap<Method, usize> = config.estimators.iter().map(|m| (*m, 0)).collect();
    for rep in per_rep {
        for res in rep {
            match res {
                Ok(e) => estimates.push(e),
                Err(m) => *failures.entry(m).or_default() += 1,
            }
        }
    }

    let mut params: Vec<String> = (1..=p).map(|k| format!("rho{k}")).collect();
    params.extend(["alpha", "delta"].map(String::from));
    if !config.em.symmetric {
        params.extend(["beta", "mu"].map(String::from));
    }
    let mut rows = Vec::new();
    let mut non_converged = BTreeMap::new();
    let mut loglik_violations = BTreeMap::new();
    for &m in &config.estimators {
        let mine: Vec<&EstimateRecord> = estimates.iter().filter(|e| e.method == m).collect();
        for name in &params {
            let vals: Vec<f64> = mine.iter().map(|e| e.parameter(name)).collect();
            rows.push(summarize(m, name, &vals));
        }
        non_converged.insert(m, mine.iter().filter(|e| !e.converged).count());
        loglik_violations.insert(m, mine.iter().filter(|e| e.min_loglik_increment < -1e-8).count());
    }
    Ok(ExperimentOutcome {
        summary: ExperimentSummary {
            schema_version: SUMMARY_SCHEMA_VERSION,
            case: config.case,
            replications: config.n_trajectories,
            series_length: config.series_length,
            seed: config.seed,
            rows,
            failures,
            non_converged,
            loglik_violations,
            wall_time_secs: start.elapsed().as_secs_f64(),
        },
        estimates,
    })
}
