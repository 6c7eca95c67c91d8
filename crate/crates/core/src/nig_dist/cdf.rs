//! NIG distribution function by quadrature of the density.
//!
//! There is no closed form. The real line is cut into a central block of
//! equal panels plus two semi-infinite tails; each panel is integrated once
//! at construction and the running sums are cached together with the total
//! mass, which normalises every subsequent evaluation.

use super::NigParams;
use crate::quadrature::{gauss_kronrod, integrate, integrate_from_neg_inf, integrate_to_inf, Tolerance};

const MAX_PANELS: usize = 20_000;
const TAIL_DECAY_UNITS: f64 = 45.0;

#[derive(Debug, Clone)]
pub struct NigCdf {
    params: NigParams,
    lo: f64,
    width: f64,
    /// mass below `lo + i * width`
    cumulative: Vec<f64>,
    total: f64,
}

impl NigCdf {
    pub fn new(params: NigParams) -> Self {
        let pdf = |x: f64| params.pdf(x);
        let centre = params.mean();
        let core = params.delta() + params.variance().sqrt();
        let lo = centre - TAIL_DECAY_UNITS / (params.alpha() + params.beta()) - 10.0 * core;
        let hi = centre + TAIL_DECAY_UNITS / (params.alpha() - params.beta()) + 10.0 * core;
        let step = 0.5 * params.delta().min(params.variance().sqrt());
        let panels = (((hi - lo) / step).ceil() as usize).clamp(16, MAX_PANELS);
        let width = (hi - lo) / panels as f64;

        let tol = Tolerance { abs: 1e-300, rel: 1e-13, max_intervals: 200 };
        let mut cumulative = Vec::with_capacity(panels + 1);
        let mut acc = integrate_from_neg_inf(pdf, lo, tol).value;
        cumulative.push(acc);
        for i in 0..panels {
            let a = lo + i as f64 * width;
            acc += integrate(pdf, a, a + width, tol).value;
            cumulative.push(acc);
        }
        let total = acc + integrate_to_inf(pdf, lo + panels as f64 * width, tol).value;
        Self { params, lo, width, cumulative, total }
    }

    pub fn params(&self) -> &NigParams {
        &self.params
    }

    /// Mass found by integrating the density over the whole line; 1 up to
    /// quadrature error.
    pub fn total_mass(&self) -> f64 {
        self.total
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        let pdf = |t: f64| self.params.pdf(t);
        let panels = self.cumulative.len() - 1;
        let hi = self.lo + panels as f64 * self.width;
        let tol = Tolerance { abs: 1e-300, rel: 1e-12, max_intervals: 200 };
        let mass = if x <= self.lo {
            if x == f64::NEG_INFINITY {
                0.0
            } else {
                integrate_from_neg_inf(pdf, x, tol).value
            }
        } else if x >= hi {
            if x == f64::INFINITY {
                self.total
            } else {
                self.total - integrate_to_inf(pdf, x, tol).value
            }
        } else {
            let i = (((x - self.lo) / self.width) as usize).min(panels - 1);
            let a = self.lo + i as f64 * self.width;
            self.cumulative[i] + gauss_kronrod(&pdf, a, x).0
        };
        (mass / self.total).clamp(0.0, 1.0)
    }

    /// Numerical inverse of [`cdf`](Self::cdf) by bracketing and bisection.
    pub fn quantile(&self, p: f64) -> f64 {
        if !(0.0..=1.0).contains(&p) {
            return f64::NAN;
        }
        if p == 0.0 {
            return f64::NEG_INFINITY;
        }
        if p == 1.0 {
            return f64::INFINITY;
        }
        let sd = self.params.variance().sqrt();
        let mut lo = self.params.mean() - sd;
        let mut hi = self.params.mean() + sd;
        while self.cdf(lo) > p {
            lo -= 2.0 * (hi - lo);
        }
        while self.cdf(hi) < p {
            hi += 2.0 * (hi - lo);
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.cdf(mid) < p {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}
