//! Autoregressive models with normal inverse Gaussian (NIG) innovations.
//!
//! The crate is organised bottom-up:
//!
//! * [`special_fn`] – modified Bessel function of the third kind `K_ν(x)`,
//!   evaluated in log space.
//! * [`nig_dist`] – NIG, inverse Gaussian and posterior GIG distributions:
//!   densities, moments, closure properties, CDF and exact samplers.
//! * [`ar_process`] – the AR(p) model driven by NIG noise: stationarity,
//!   simulation, conditional densities and theoretical autocovariances.
//! * [`estimators`] – EM maximum likelihood plus Yule-Walker and conditional
//!   least squares baselines.
//! * [`diagnostics`] – PACF, polynomial detrending, variance segmentation,
//!   Kolmogorov-Smirnov tests, kernel density estimates and quantile fans.
//! * [`harness`] – CSV ingestion, Monte Carlo experiments and the real-data
//!   pipeline driven by the `nigar` binary.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ar_process;
pub mod diagnostics;
pub mod error;
pub mod estimators;
pub mod harness;
pub mod nig_dist;
pub mod par;
pub mod quadrature;
pub mod rng;
pub mod special_fn;

pub use ar_process::{ArNigModel, TimeSeries};
pub use error::{Error, Result};
pub use estimators::{EmConfig, EstimationReport, Method};
pub use nig_dist::{IgParams, NigParams};
