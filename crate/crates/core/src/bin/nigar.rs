use clap::{ArgAction, Args, Parser, Subcommand};
use nigar::ar_process::ArNigModel;
use nigar::diagnostics::{quantile_fan_with, segment_with, select_order, SegmentationConfig, DECILES};
use nigar::estimators::{cls_fit_with, em_fit, yw_fit_with, EmConfig, EstimationReport, Method};
use nigar::harness::{
    read_series_csv, run_experiment, run_pipeline, write_columns_csv, write_json, ExperimentConfig, InputKind,
    PipelineConfig, StageStatus,
};
use nigar::nig_dist::NigParams;
use nigar::par::Execution;
use nigar::{Error, Result, TimeSeries};
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "nigar", version, about = "AR(p) models with normal inverse Gaussian innovations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate a series from a model and write it as CSV.
    Simulate {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 500)]
        burn_in: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Also write the innovation sequence.
        #[arg(long)]
        innovations: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit an AR(p)-NIG model to a CSV series and emit a JSON report.
    Fit {
        input: PathBuf,
        #[arg(long, default_value_t = 1)]
        order: usize,
        #[arg(long, default_value = "em")]
        method: Method,
        #[command(flatten)]
        em: EmArgs,
        #[arg(long, default_value = "level")]
        input_kind: InputKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run segmentation, detrending, order selection, fitting and residual diagnostics.
    Pipeline {
        input: PathBuf,
        #[arg(long, default_value = "price")]
        input_kind: InputKind,
        #[command(flatten)]
        em: EmArgs,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        #[arg(long, default_value_t = 6)]
        degree: usize,
        /// Output directory for the bundle.
        #[arg(long)]
        out: PathBuf,
    },
    /// Monte Carlo study from a key=value config file.
    Experiment {
        config: PathBuf,
        /// Overrides the config seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Output directory (overrides `output_path`).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        sequential: bool,
    },
    /// Partial autocorrelations and the selected order.
    Pacf {
        input: PathBuf,
        #[arg(long, default_value_t = 20)]
        max_lag: usize,
        #[arg(long, default_value = "level")]
        input_kind: InputKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Variance-change segmentation via the cumulative sum of squares.
    Segment {
        input: PathBuf,
        #[arg(long, default_value = "price")]
        input_kind: InputKind,
        #[arg(long, default_value_t = 0.05)]
        threshold: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Quantile fan of simulated trajectories as CSV.
    Quantiles {
        /// Fit report whose model is simulated (instead of the model flags).
        #[arg(long)]
        report: Option<PathBuf>,
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, default_value_t = 250)]
        steps: usize,
        #[arg(long, default_value_t = 1000)]
        paths: usize,
        #[arg(long, value_delimiter = ',')]
        levels: Option<Vec<f64>>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct ModelArgs {
    /// Preset: ar2_case1 or ar1_case2.
    #[arg(long)]
    case: Option<String>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    rho: Option<Vec<f64>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    mu: f64,
    #[arg(long)]
    delta: Option<f64>,
}

impl ModelArgs {
    fn model(&self) -> Result<ArNigModel> {
        match (&self.case, &self.rho, self.alpha, self.delta) {
            (Some(_), Some(_), ..) => Err(Error::Config("give either --case or --rho/--alpha/--delta".into())),
            (None, Some(rho), Some(a), Some(d)) => ArNigModel::new(rho.clone(), NigParams::new(a, self.beta, self.mu, d)?),
            (None, Some(_), ..) => Err(Error::Config("--rho needs --alpha and --delta".into())),
            (case, None, ..) => {
                let text = format!("case = {}", case.as_deref().unwrap_or("ar2_case1"));
                Ok(ExperimentConfig::parse(&text)?.model)
            }
        }
    }
}

#[derive(Args)]
struct EmArgs {
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, default_value_t = 500)]
    max_iter: usize,
    /// Constrain the innovation law to be symmetric about zero.
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    symmetric: bool,
}

impl EmArgs {
    fn config(&self) -> EmConfig {
        EmConfig { tolerance: self.tolerance, max_iterations: self.max_iter, symmetric: self.symmetric, initial: None }
    }
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_json(p, value),
        None => {
            println!("{}", serde_json::to_string_pretty(value)?);
            Ok(())
        }
    }
}

fn load(path: &Path, kind: InputKind) -> Result<TimeSeries> {
    let series = read_series_csv(path)?.series;
    if kind == InputKind::Price && series.values().iter().any(|v| *v <= 0.0) {
        return Err(Error::Domain("prices must be positive".into()));
    }
    Ok(series)
}

fn fit(series: &TimeSeries, order: usize, method: Method, em: &EmConfig) -> Result<EstimationReport> {
    if series.len() < order + 10 {
        return Err(Error::TooShort { needed: order + 10, got: series.len() });
    }
    match method {
        Method::Em => em_fit(series, order, em),
        Method::Yw => yw_fit_with(series, order, em),
        Method::Cls => cls_fit_with(series, order, em),
    }
}

#[derive(Serialize)]
struct PacfOutput {
    schema_version: u32,
    n: usize,
    order: usize,
    significant: bool,
    band: f64,
    pacf: Vec<f64>,
}

#[derive(Serialize)]
struct SegmentOutput {
    schema_version: u32,
    n: usize,
    breakpoints: Vec<usize>,
    segments: Vec<std::ops::Range<usize>>,
    gains: Vec<f64>,
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Simulate { model, n, burn_in, seed, innovations, out } => {
            let model = model.model()?;
            let (y, eps) = model.simulate_with_innovations(n, burn_in, seed)?;
            let t: Vec<f64> = (0..n).map(|i| i as f64).collect();
            let mut headers = vec!["t", "value"];
            let mut cols: Vec<&[f64]> = vec![&t, y.values()];
            if innovations {
                headers.push("innovation");
                cols.push(&eps);
            }
            let path = out.unwrap_or_else(|| PathBuf::from("/dev/stdout"));
            write_columns_csv(&path, &headers, &cols)
        }
        Command::Fit { input, order, method, em, input_kind, out } => {
            let series = load(&input, input_kind)?;
            let report = fit(&series, order, method, &em.config())?;
            emit(&report, out.as_deref())
        }
        Command::Pipeline { input, input_kind, em, seed, paths, degree, out } => {
            let series = load(&input, input_kind)?;
            let cfg = PipelineConfig {
                input_kind,
                em: em.config(),
                seed,
                n_paths: paths,
                detrend_degree: degree,
                ..PipelineConfig::default()
            };
            cfg.em.validate()?;
            let output = run_pipeline(&series, &cfg);
            output.write_bundle(&out)?;
            match output.report.failed_stage() {
                Some(s) => {
                    let msg = match &s.status {
                        StageStatus::Failed(m) => m.clone(),
                        _ => String::new(),
                    };
                    Err(Error::Degenerate(format!("pipeline stage '{}' failed: {msg}", s.stage)))
                }
                None => Ok(()),
            }
        }
        Command::Experiment { config, seed, out, sequential } => {
            let mut cfg = ExperimentConfig::from_file(&config)?;
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let dir = out
                .or_else(|| cfg.output_path.clone())
                .ok_or_else(|| Error::Config("no output directory (--out or output_path)".into()))?;
            let exec = if sequential { Execution::Sequential } else { Execution::Parallel };
            let outcome = run_experiment(&cfg, exec)?;
            std::fs::create_dir_all(&dir)?;
            outcome.summary.write_json(&dir.join("summary.json"))?;
            outcome.summary.write_csv(&dir.join("summary.csv"))
        }
        Command::Pacf { input, max_lag, input_kind, out } => {
            let series = load(&input, input_kind)?;
            let sel = select_order(&series, max_lag)?;
            let o = PacfOutput {
                schema_version: 1,
                n: series.len(),
                order: sel.order,
                significant: sel.significant,
                band: sel.band,
                pacf: sel.pacf,
            };
            emit(&o, out.as_deref())
        }
        Command::Segment { input, input_kind, threshold, out } => {
            let series = load(&input, input_kind)?;
            let cfg = PipelineConfig { input_kind, ..PipelineConfig::default() };
            let (stat, offset) = match input_kind {
                InputKind::Price => (nigar::harness::log_returns(&series)?, 1),
                InputKind::Level => {
                    let d = series.values().windows(2).map(|w| w[1] - w[0]).collect();
                    (TimeSeries::new(d)?, 1)
                }
                InputKind::Return => (series.clone(), 0),
            };
            let seg = segment_with(&stat, &SegmentationConfig { threshold, ..cfg.segmentation })?;
            let breakpoints: Vec<usize> = seg.breakpoints.iter().map(|b| b + offset).collect();
            let mut bounds = vec![0];
            bounds.extend(&breakpoints);
            bounds.push(series.len());
            let o = SegmentOutput {
                schema_version: 1,
                n: series.len(),
                segments: bounds.windows(2).map(|w| w[0]..w[1]).collect(),
                breakpoints,
                gains: seg.gains,
            };
            emit(&o, out.as_deref())
        }
        Command::Quantiles { report, model, steps, paths, levels, seed, out } => {
            let model = match report {
                Some(p) => {
                    let text = std::fs::read_to_string(&p)?;
                    serde_json::from_str::<EstimationReport>(&text)?.model()?
                }
                None => model.model()?,
            };
            let levels = levels.unwrap_or_else(|| DECILES.to_vec());
            let fan = quantile_fan_with(&model, None, steps, paths, &levels, seed, Execution::Parallel)?;
            let t: Vec<f64> = (0..steps).map(|i| i as f64).collect();
            let names: Vec<String> = levels.iter().map(|l| format!("q{l}")).collect();
            let mut headers = vec!["t"];
            headers.extend(names.iter().map(String::as_str));
            let mut cols: Vec<&[f64]> = vec![&t];
            cols.extend(fan.paths.iter().map(Vec::as_slice));
            let path = out.unwrap_or_else(|| PathBuf::from("/dev/stdout"));
            write_columns_csv(&path, &headers, &cols)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
