//! Empirical diagnostics for fitted AR-NIG models: partial autocorrelations
//! and order selection, polynomial detrending, variance segmentation,
//! Kolmogorov-Smirnov tests, kernel density estimates and quantile fans.

mod detrend;
mod fan;
mod kde;
mod ks;
mod pacf;
mod segment;

pub use detrend::{detrend_polynomial, DetrendResult};
pub use fan::{quantile_fan, quantile_fan_with, type7_quantile, QuantileFan, DECILES};
pub use kde::{kde, kde_with_bandwidth, silverman_bandwidth};
pub use ks::{kolmogorov_survival, ks_one_sample, ks_two_sample, qq_pairs, KsResult};
pub use pacf::{pacf, select_order, OrderSelection};
pub use segment::{segment_by_variance, segment_with, SegmentationConfig, SegmentationResult};
