use crate::ar_process::TimeSeries;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::ops::Range;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationConfig {
    /// Shortest admissible segment.
    pub min_segment: usize,
    /// Minimum gain of a split, as a fraction of the total variation of `C_k`
    /// about its mean.
    pub threshold: f64,
    /// Recursion depth; 1 allows a single breakpoint.
    pub max_depth: usize,
}

impl Default for SegmentationConfig {
    fn default() -> Self {
        Self { min_segment: 20, threshold: 0.05, max_depth: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationResult {
    /// First index of each segment after the first.
    pub breakpoints: Vec<usize>,
    /// Cumulative sum of squares `C_k = x_1² + … + x_k`², `k = 1..n`.
    pub statistic_path: Vec<f64>,
    pub segments: Vec<Range<usize>>,
    /// Relative gain of each accepted split, in breakpoint order.
    pub gains: Vec<f64>,
}

/// Prefix sums for O(1) least-squares line fits of `C` against its index.
struct Prefix {
    x: Vec<f64>,
    xx: Vec<f64>,
    c: Vec<f64>,
    cc: Vec<f64>,
    xc: Vec<f64>,
}

impl Prefix {
    fn new(path: &[f64]) -> Self {
        let n = path.len();
        let mut p = Prefix {
            x: vec![0.0; n + 1],
            xx: vec![0.0; n + 1],
            c: vec![0.0; n + 1],
            cc: vec![0.0; n + 1],
            xc: vec![0.0; n + 1],
        };
        for (i, &c) in path.iter().enumerate() {
            let x = i as f64;
            p.x[i + 1] = p.x[i] + x;
            p.xx[i + 1] = p.xx[i] + x * x;
            p.c[i + 1] = p.c[i] + c;
            p.cc[i + 1] = p.cc[i] + c * c;
            p.xc[i + 1] = p.xc[i] + x * c;
        }
        p
    }

    /// Residual sum of squares of the best line through `path[a..b]`.
    fn sse(&self, a: usize, b: usize) -> f64 {
        let m = (b - a) as f64;
        let sx = self.x[b] - self.x[a];
        let sxx = self.xx[b] - self.xx[a] - sx * sx / m;
        let sc = self.c[b] - self.c[a];
        let scc = self.cc[b] - self.cc[a] - sc * sc / m;
        let sxc = self.xc[b] - self.xc[a] - sx * sc / m;
        let r = if sxx > 0.0 { scc - sxc * sxc / sxx } else { scc };
        r.max(0.0)
    }

    fn sst(&self, a: usize, b: usize) -> f64 {
        let m = (b - a) as f64;
        let sc = self.c[b] - self.c[a];
        (self.cc[b] - self.cc[a] - sc * sc / m).max(0.0)
    }
}

pub fn segment_by_variance(series: &TimeSeries) -> Result<SegmentationResult> {
    segment_with(series, &SegmentationConfig::default())
}

/// Splits a series where its variance changes, using the piecewise-linear
/// shape of the cumulative sum of squares. Every admissible breakpoint is
/// tried; the split minimising the total squared deviation of two line fits
/// is accepted when it removes at least `threshold` of the variation of `C_k`.
pub fn segment_with(series: &TimeSeries, config: &SegmentationConfig) -> Result<SegmentationResult> {
    let n = series.len();
    if n < 50 {
        return Err(Error::TooShort { needed: 50, got: n });
    }
    if config.min_segment < 2 || !(config.threshold >= 0.0) {
        return Err(Error::Config("min_segment must be ≥ 2 and threshold non-negative".into()));
    }
    let mut path = Vec::with_capacity(n);
    let mut acc = 0.0;
    for v in series.values() {
        acc += v * v;
        path.push(acc);
    }
    if !(acc > 0.0) {
        return Err(Error::Degenerate("series is identically zero".into()));
    }
    let prefix = Prefix::new(&path);
    let mut breaks = Vec::new();
    split(&prefix, 0..n, config, config.max_depth, &mut breaks);
    breaks.sort_by_key(|b| b.0);
    let mut bounds: Vec<usize> = vec![0];
    bounds.extend(breaks.iter().map(|b| b.0));
    bounds.push(n);
    Ok(SegmentationResult {
        breakpoints: breaks.iter().map(|b| b.0).collect(),
        gains: breaks.iter().map(|b| b.1).collect(),
        segments: bounds.windows(2).map(|w| w[0]..w[1]).collect(),
        statistic_path: path,
    })
}

fn split(p: &Prefix, range: Range<usize>, cfg: &SegmentationConfig, depth: usize, out: &mut Vec<(usize, f64)>) {
    let (a, b) = (range.start, range.end);
    if depth == 0 || b - a < 2 * cfg.min_segment {
        return;
    }
    let sst = p.sst(a, b);
    if !(sst > 0.0) {
        return;
    }
    let one = p.sse(a, b);
    let (k, two) = (a + cfg.min_segment..=b - cfg.min_segment)
        .map(|k| (k, p.sse(a, k) + p.sse(k, b)))
        .fold((a, f64::INFINITY), |best, c| if c.1 < best.1 { c } else { best });
    let gain = (one - two) / sst;
    if gain >= cfg.threshold {
        out.push((k, gain));
        split(p, a..k, cfg, depth - 1, out);
        split(p, k..b, cfg, depth - 1, out);
    }
}
