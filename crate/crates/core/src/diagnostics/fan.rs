use super::DetrendResult;
use crate::ar_process::ArNigModel;
use crate::error::{Error, Result};
use crate::par::{map_range, Execution};
use crate::rng::derive_seed;
use serde::{Deserialize, Serialize};

pub const DECILES: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

const FAN_BURN_IN: usize = 500;

/// Per-time empirical quantiles of simulated trajectories.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantileFan {
    pub levels: Vec<f64>,
    /// `paths[level][t]`.
    pub paths: Vec<Vec<f64>>,
    pub n_trajectories: usize,
}

/// Linear-interpolation quantile of a sorted sample (type 7).
pub fn type7_quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn quantile_fan(
    model: &ArNigModel,
    trend: Option<&DetrendResult>,
    n_steps: usize,
    n_paths: usize,
    levels: &[f64],
    seed: u64,
) -> Result<QuantileFan> {
    quantile_fan_with(model, trend, n_steps, n_paths, levels, seed, Execution::default())
}

/// Simulates `n_paths` stationary trajectories (path `i` seeded with
/// `derive_seed(seed, i)`), adds the trend back when given and takes the
/// quantiles at each time step.
pub fn quantile_fan_with(
    model: &ArNigModel,
    trend: Option<&DetrendResult>,
    n_steps: usize,
    n_paths: usize,
    levels: &[f64],
    seed: u64,
    exec: Execution,
) -> Result<QuantileFan> {
    if n_steps == 0 || n_paths == 0 {
        return Err(Error::Domain("n_steps and n_paths must be positive".into()));
    }
    if levels.is_empty()
        || levels.iter().any(|l| !(*l > 0.0 && *l < 1.0))
        || levels.windows(2).any(|w| w[0] >= w[1])
    {
        return Err(Error::Domain("levels must be strictly increasing in (0, 1)".into()));
    }
    let sims = map_range(exec, n_paths, |i| {
        model.simulate(n_steps, FAN_BURN_IN, derive_seed(seed, i as u64)).map(|s| s.into_values())
    });
    let sims = sims.into_iter().collect::<Result<Vec<_>>>()?;
    let offset = trend.map(|t| t.extrapolate(n_steps)).unwrap_or_else(|| vec![0.0; n_steps]);
    let columns = map_range(exec, n_steps, |t| {
        let mut col: Vec<f64> = sims.iter().map(|p| p[t] + offset[t]).collect();
        col.sort_by(f64::total_cmp);
        levels.iter().map(|&l| type7_quantile(&col, l)).collect::<Vec<_>>()
    });
    let paths = (0..levels.len()).map(|k| columns.iter().map(|c| c[k]).collect()).collect();
    Ok(QuantileFan { levels: levels.to_vec(), paths, n_trajectories: n_paths })
}
