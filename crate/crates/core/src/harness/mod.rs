//! Data ingestion, Monte Carlo experiments and the real-data pipeline behind
//! the `nigar` command-line tool.

mod experiment;
mod io;
mod pipeline;

pub use experiment::{
    run_experiment, Case, EstimateRecord, ExperimentConfig, ExperimentOutcome, ExperimentSummary, SummaryRow,
    SUMMARY_SCHEMA_VERSION,
};
pub use io::{
    log_returns, parse_series_csv, read_series_csv, write_columns_csv, write_json, InputKind, LoadedSeries,
};
pub use pipeline::{
    run_pipeline, PipelineConfig, PipelineOutput, PipelineReport, SegmentArtifacts, SegmentReport, StageRecord,
    StageStatus, PIPELINE_SCHEMA_VERSION,
};
