use super::io::{log_returns, write_columns_csv, write_json, InputKind};
use crate::ar_process::TimeSeries;
use crate::diagnostics::{
    detrend_polynomial, kde_with_bandwidth, ks_one_sample, ks_two_sample, quantile_fan_with, segment_with,
    select_order, silverman_bandwidth, DetrendResult, KsResult, OrderSelection, QuantileFan, SegmentationConfig,
    DECILES,
};
use crate::error::{Error, Result};
use crate::estimators::{em_fit, EmConfig, EstimationReport};
use crate::nig_dist::{sample_nig, NigParams};
use crate::par::Execution;
use crate::rng::derive_seed;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};
use std::ops::Range;
use std::path::Path;

pub const PIPELINE_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub input_kind: InputKind,
    pub segmentation: SegmentationConfig,
    pub detrend_degree: usize,
    /// Largest PACF lag considered (capped below `n/4` per segment).
    pub max_lag: usize,
    pub em: EmConfig,
    pub n_paths: usize,
    pub levels: Vec<f64>,
    pub kde_points: usize,
    pub seed: u64,
    pub execution: Execution,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            input_kind: InputKind::Price,
            segmentation: SegmentationConfig::default(),
            detrend_degree: 6,
            max_lag: 20,
            em: EmConfig::default(),
            n_paths: 1000,
            levels: DECILES.to_vec(),
            kde_points: 200,
            seed: 1,
            execution: Execution::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "message", rename_all = "lowercase")]
pub enum StageStatus {
    Ok,
    Failed(String),
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: String,
    pub segment: Option<usize>,
    #[serde(flatten)]
    pub status: StageStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentReport {
    pub index: usize,
    pub range: Range<usize>,
    pub detrend_coefficients: Option<Vec<f64>>,
    pub order: Option<OrderSelection>,
    pub rho: Option<Vec<f64>>,
    pub innovation: Option<NigParams>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    /// Mean and variance of the normal law fitted to the residuals.
    pub normal_fit: Option<(f64, f64)>,
    pub ks_normal: Option<KsResult>,
    pub ks_nig: Option<KsResult>,
    /// L1 distances on the KDE grid between the residual KDE and the two fitted laws.
    pub kde_l1_nig: Option<f64>,
    pub kde_l1_normal: Option<f64>,
}

impl SegmentReport {
    fn new(index: usize, range: Range<usize>) -> Self {
        Self {
            index,
            range,
            detrend_coefficients: None,
            order: None,
            rho: None,
            innovation: None,
            iterations: None,
            converged: None,
            normal_fit: None,
            ks_normal: None,
            ks_nig: None,
            kde_l1_nig: None,
            kde_l1_normal: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub schema_version: u32,
    pub input_kind: InputKind,
    pub n_observations: usize,
    /// Segment starts in observation indices (after the first segment).
    pub breakpoints: Vec<usize>,
    pub segments: Vec<SegmentReport>,
    pub stages: Vec<StageRecord>,
}

impl PipelineReport {
    pub fn failed_stage(&self) -> Option<&StageRecord> {
        self.stages.iter().find(|s| matches!(s.status, StageStatus::Failed(_)))
    }
}

/// Numeric tables produced for one segment.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SegmentArtifacts {
    pub detrend: Option<DetrendResult>,
    pub fit: Option<EstimationReport>,
    /// Columns: grid, KDE, fitted NIG pdf, fitted normal pdf.
    pub kde_table: Option<[Vec<f64>; 4]>,
    pub fan: Option<QuantileFan>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub report: PipelineReport,
    pub observations: TimeSeries,
    /// `C_k` of the segmentation input.
    pub statistic_path: Vec<f64>,
    pub artifacts: Vec<SegmentArtifacts>,
}

const STAGES: [&str; 7] = ["detrend", "order", "fit", "ks_normal", "ks_nig", "kde", "quantile_fan"];

struct Recorder {
    stages: Vec<StageRecord>,
    failed: bool,
}

impl Recorder {
    fn run<T>(&mut self, stage: &str, segment: Option<usize>, f: impl FnOnce() -> Result<T>) -> Option<T> {
        if self.failed {
            self.stages.push(StageRecord { stage: stage.into(), segment, status: StageStatus::Skipped });
            return None;
        }
        match f() {
            Ok(v) => {
                self.stages.push(StageRecord { stage: stage.into(), segment, status: StageStatus::Ok });
                Some(v)
            }
            Err(e) => {
                self.failed = true;
                self.stages.push(StageRecord { stage: stage.into(), segment, status: StageStatus::Failed(e.to_string()) });
                None
            }
        }
    }
}

fn segmentation_input(values: &TimeSeries, kind: InputKind) -> Result<(TimeSeries, usize)> {
    match kind {
        InputKind::Price => Ok((log_returns(values)?, 1)),
        InputKind::Level => {
            let v = values.values();
            if v.len() < 2 {
                return Err(Error::TooShort { needed: 2, got: v.len() });
            }
            Ok((TimeSeries::new(v.windows(2).map(|w| w[1] - w[0]).collect())?, 1))
        }
        InputKind::Return => Ok((values.clone(), 0)),
    }
}

/// Segmentation, then per segment: polynomial detrending, PACF order
/// selection, EM fit, KS tests of the residuals against the fitted normal
/// and NIG laws, KDE table and quantile fan. A failing stage is recorded and
/// every later stage is skipped.
pub fn run_pipeline(observations: &TimeSeries, config: &PipelineConfig) -> PipelineOutput {
    let mut rec = Recorder { stages: Vec::new(), failed: false };
    let n = observations.len();
    let mut statistic_path = Vec::new();
    let ranges = rec
        .run("segmentation", None, || {
            let (input, offset) = segmentation_input(observations, config.input_kind)?;
            let seg = segment_with(&input, &config.segmentation)?;
            statistic_path = seg.statistic_path;
            let mut bounds = vec![0];
            bounds.extend(seg.breakpoints.iter().map(|b| b + offset));
            bounds.push(n);
            Ok(bounds.windows(2).map(|w| w[0]..w[1]).collect::<Vec<_>>())
        })
        .unwrap_or_default();

    let mut segments = Vec::new();
    let mut artifacts = Vec::new();
    for (k, range) in ranges.iter().enumerate() {
        let mut report = SegmentReport::new(k, range.clone());
        let mut art = SegmentArtifacts::default();
        run_segment(&mut rec, observations, k, range.clone(), config, &mut report, &mut art);
        segments.push(report);
        artifacts.push(art);
    }
    if ranges.is_empty() {
        for s in STAGES {
            rec.run(s, None, || Ok(()));
        }
    }
    PipelineOutput {
        report: PipelineReport {
            schema_version: PIPELINE_SCHEMA_VERSION,
            input_kind: config.input_kind,
            n_observations: n,
            breakpoints: ranges.iter().skip(1).map(|r| r.start).collect(),
            segments,
            stages: rec.stages,
        },
        observations: observations.clone(),
        statistic_path,
        artifacts,
    }
}

fn l1(a: &[f64], b: &[f64], step: f64) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum::<f64>() * step
}

fn run_segment(
    rec: &mut Recorder,
    obs: &TimeSeries,
    k: usize,
    range: Range<usize>,
    cfg: &PipelineConfig,
    report: &mut SegmentReport,
    art: &mut SegmentArtifacts,
) {
    let seg = Some(k);
    let detrend = rec.run("detrend", seg, || {
        detrend_polynomial(&TimeSeries::new(obs.values()[range.clone()].to_vec())?, cfg.detrend_degree)
    });
    let Some(detrend) = detrend else {
        return skip_rest(rec, seg, 1);
    };
    report.detrend_coefficients = Some(detrend.coefficients.clone());
    let resid = detrend.residual.clone();
    art.detrend = Some(detrend);

    let order = rec.run("order", seg, || {
        let cap = (resid.len().saturating_sub(1) / 4).min(cfg.max_lag);
        select_order(&resid, cap)
    });
    let Some(order) = order else { return skip_rest(rec, seg, 2) };
    let p = order.order;
    report.order = Some(order);

    let Some(fit) = rec.run("fit", seg, || em_fit(&resid, p, &cfg.em)) else { return skip_rest(rec, seg, 3) };
    report.rho = Some(fit.rho.clone());
    report.innovation = Some(fit.innovation);
    report.iterations = Some(fit.iterations);
    report.converged = Some(fit.converged);
    let eps = fit.residuals.clone();
    let law = fit.innovation;
    art.fit = Some(fit);

    let e = eps.values();
    let m = eps.mean();
    let var = e.iter().map(|v| (v - m).powi(2)).sum::<f64>() / e.len() as f64;
    let ks_n = rec.run("ks_normal", seg, || {
        let normal = Normal::new(m, var.sqrt()).map_err(|e| Error::Degenerate(e.to_string()))?;
        ks_one_sample(&eps, |x| normal.cdf(x))
    });
    let Some(ks_n) = ks_n else { return skip_rest(rec, seg, 4) };
    report.normal_fit = Some((m, var));
    report.ks_normal = Some(ks_n);

    let ks_g = rec.run("ks_nig", seg, || {
        let reference = TimeSeries::new(sample_nig(&law, e.len(), derive_seed(cfg.seed, 2 * k as u64)))?;
        ks_two_sample(&eps, &reference)
    });
    let Some(ks_g) = ks_g else { return skip_rest(rec, seg, 5) };
    report.ks_nig = Some(ks_g);

    let table = rec.run("kde", seg, || {
        let h = silverman_bandwidth(&eps)?;
        let lo = e.iter().copied().fold(f64::INFINITY, f64::min) - 3.0 * h;
        let hi = e.iter().copied().fold(f64::NEG_INFINITY, f64::max) + 3.0 * h;
        let pts = cfg.kde_points.max(2);
        let step = (hi - lo) / (pts - 1) as f64;
        let grid: Vec<f64> = (0..pts).map(|i| lo + i as f64 * step).collect();
        let dens = kde_with_bandwidth(&eps, &grid, h, cfg.execution)?;
        let nig: Vec<f64> = grid.iter().map(|x| law.pdf(*x)).collect();
        let sd = var.sqrt();
        let norm: Vec<f64> = grid
            .iter()
            .map(|x| (-0.5 * ((x - m) / sd).powi(2)).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt()))
            .collect();
        Ok(([grid, dens, nig, norm], step))
    });
    let Some((table, step)) = table else { return skip_rest(rec, seg, 6) };
    report.kde_l1_nig = Some(l1(&table[1], &table[2], step));
    report.kde_l1_normal = Some(l1(&table[1], &table[3], step));
    art.kde_table = Some(table);

    let fan = rec.run("quantile_fan", seg, || {
        let model = art.fit.as_ref().expect("fit stage succeeded").model()?;
        quantile_fan_with(
            &model,
            art.detrend.as_ref(),
            range.len(),
            cfg.n_paths,
            &cfg.levels,
            derive_seed(cfg.seed, 2 * k as u64 + 1),
            cfg.execution,
        )
    });
    art.fan = fan;
}

fn skip_rest(rec: &mut Recorder, seg: Option<usize>, from: usize) {
    for s in &STAGES[from..] {
        rec.run(s, seg, || Ok(()));
    }
}

impl PipelineOutput {
    /// Writes `pipeline.json`, `segmentation.csv` and per-segment
    /// `segment_<k>_{trend,residuals,kde,fan}.csv` into `dir`.
    pub fn write_bundle(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        write_json(&dir.join("pipeline.json"), &self.report)?;
        if !self.statistic_path.is_empty() {
            let k: Vec<f64> = (1..=self.statistic_path.len()).map(|i| i as f64).collect();
            write_columns_csv(&dir.join("segmentation.csv"), &["k", "cumulative_sum_squares"], &[&k, &self.statistic_path])?;
        }
        for (i, (seg, art)) in self.report.segments.iter().zip(&self.artifacts).enumerate() {
            let t: Vec<f64> = seg.range.clone().map(|v| v as f64).collect();
            let obs = &self.observations.values()[seg.range.clone()];
            if let Some(d) = &art.detrend {
                write_columns_csv(
                    &dir.join(format!("segment_{i}_trend.csv")),
                    &["t", "observed", "trend", "detrended"],
                    &[&t, obs, d.trend.values(), d.residual.values()],
                )?;
            }
            if let Some(f) = &art.fit {
                let idx: Vec<f64> = (0..f.residuals.len()).map(|j| (seg.range.start + f.order + j) as f64).collect();
                write_columns_csv(&dir.join(format!("segment_{i}_residuals.csv")), &["t", "residual"], &[&idx, f.residuals.values()])?;
            }
            if let Some([g, k, nig, norm]) = &art.kde_table {
                write_columns_csv(
                    &dir.join(format!("segment_{i}_kde.csv")),
                    &["x", "kde", "nig_pdf", "normal_pdf"],
                    &[g, k, nig, norm],
                )?;
            }
            if let Some(fan) = &art.fan {
                let names: Vec<String> = fan.levels.iter().map(|l| format!("q{}", (l * 100.0).round())).collect();
                let mut headers = vec!["t", "observed"];
                headers.extend(names.iter().map(String::as_str));
                let mut cols: Vec<&[f64]> = vec![&t, obs];
                cols.extend(fan.paths.iter().map(Vec::as_slice));
                write_columns_csv(&dir.join(format!("segment_{i}_fan.csv")), &headers, &cols)?;
            }
        }
        Ok(())
    }
}
