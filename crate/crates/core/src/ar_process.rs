//! AR(p) processes driven by i.i.d. NIG innovations,
//! `Y_t = ρ₁Y_{t−1} + … + ρ_pY_{t−p} + ε_t`.

use crate::error::{Error, Result};
use crate::nig_dist::NigParams;
use crate::rng::rng_from_seed;
use nalgebra::{Complex, DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Ordered, finite observations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSeries")]
pub struct TimeSeries {
    values: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

#[derive(Deserialize)]
struct RawSeries {
    values: Vec<f64>,
    #[serde(default)]
    label: Option<String>,
}

impl TryFrom<RawSeries> for TimeSeries {
    type Error = Error;
    fn try_from(raw: RawSeries) -> Result<Self> {
        let mut s = TimeSeries::new(raw.values)?;
        s.label = raw.label;
        Ok(s)
    }
}

impl TimeSeries {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite observation at index {i}")));
        }
        Ok(Self { values, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
    pub fn len(&self) -> usize {
        self.values.len()
    }
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Roots of `1 − ρ₁z − … − ρ_p z^p` and whether all lie outside the unit circle.
#[derive(Debug, Clone)]
pub struct Stationarity {
    pub stationary: bool,
    pub roots: Vec<Complex<f64>>,
    pub root_moduli: Vec<f64>,
}

impl Stationarity {
    pub fn min_root_modulus(&self) -> f64 {
        self.root_moduli.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

const UNIT_ROOT_TOL: f64 = 1e-10;

/// Roots come from the eigenvalues `λ` of the companion matrix of
/// `λ^q − ρ₁λ^{q−1} − … − ρ_q` (trailing zero coefficients dropped), with `z = 1/λ`.
/// Roots within `1e−10` of the unit circle count as unit roots.
pub fn check_stationarity(rho: &[f64]) -> Result<Stationarity> {
    if rho.is_empty() {
        return Err(Error::Domain("AR coefficient vector is empty".into()));
    }
    if rho.iter().any(|r| !r.is_finite()) {
        return Err(Error::Domain("AR coefficients must be finite".into()));
    }
    let q = rho.iter().rposition(|&r| r != 0.0).map_or(0, |i| i + 1);
    if q == 0 {
        return Ok(Stationarity { stationary: true, roots: vec![], root_moduli: vec![] });
    }
    let mut companion = DMatrix::<f64>::zeros(q, q);
    for (j, &r) in rho[..q].iter().enumerate() {
        companion[(0, j)] = r;
    }
    for i in 1..q {
        companion[(i, i - 1)] = 1.0;
    }
    let roots: Vec<Complex<f64>> = companion
        .complex_eigenvalues()
        .iter()
        .map(|lambda| Complex::new(1.0, 0.0) / lambda)
        .collect();
    let root_moduli: Vec<f64> = roots.iter().map(|z| z.norm()).collect();
    let stationary = root_moduli.iter().all(|&m| m > 1.0 + UNIT_ROOT_TOL);
    Ok(Stationarity { stationary, roots, root_moduli })
}

/// Stationary AR(p) model with NIG innovations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawModel")]
pub struct ArNigModel {
    rho: Vec<f64>,
    innovation: NigParams,
}

#[derive(Deserialize)]
struct RawModel {
    rho: Vec<f64>,
    innovation: NigParams,
}

impl TryFrom<RawModel> for ArNigModel {
    type Error = Error;
    fn try_from(raw: RawModel) -> Result<Self> {
        ArNigModel::new(raw.rho, raw.innovation)
    }
}

/// Theoretical autocovariances `γ₀ … γ_J` and innovation variance `σ_ε²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AutocovarianceSet {
    pub lags: Vec<f64>,
    pub sigma_eps2: f64,
}

impl AutocovarianceSet {
    pub fn variance(&self) -> f64 {
        self.lags[0]
    }
    pub fn autocorrelations(&self) -> Vec<f64> {
        self.lags.iter().map(|g| g / self.lags[0]).collect()
    }
}

impl ArNigModel {
    /// Builds the model, refusing coefficient vectors with a root on or inside
    /// the unit circle.
    pub fn new(rho: Vec<f64>, innovation: NigParams) -> Result<Self> {
        let st = check_stationarity(&rho)?;
        if !st.stationary {
            return Err(Error::NonStationary { min_root_modulus: st.min_root_modulus() });
        }
        Ok(Self { rho, innovation })
    }

    pub fn order(&self) -> usize {
        self.rho.len()
    }
    pub fn rho(&self) -> &[f64] {
        &self.rho
    }
    pub fn innovation(&self) -> &NigParams {
        &self.innovation
    }

    /// Simulates `burn_in + n` steps from a zero pre-sample and keeps the last `n`.
    pub fn simulate(&self, n: usize, burn_in: usize, seed: u64) -> Result<TimeSeries> {
        self.simulate_with_innovations(n, burn_in, seed).map(|(s, _)| s)
    }

    /// Like [`simulate`](Self::simulate), also returning the innovations that
    /// drove the kept observations.
    pub fn simulate_with_innovations(
        &self,
        n: usize,
        burn_in: usize,
        seed: u64,
    ) -> Result<(TimeSeries, Vec<f64>)> {
        if n == 0 {
            return Err(Error::TooShort { needed: 1, got: 0 });
        }
        let mut rng = rng_from_seed(seed);
        let eps = self.innovation.sample_with(&mut rng, n + burn_in);
        let y = self.filter(&eps);
        Ok((TimeSeries::new(y[burn_in..].to_vec())?, eps[burn_in..].to_vec()))
    }

    /// Runs the AR recursion over an innovation sequence with zero pre-sample.
    pub fn filter(&self, innovations: &[f64]) -> Vec<f64> {
        let mut y = Vec::with_capacity(innovations.len());
        for (t, &e) in innovations.iter().enumerate() {
            let ar: f64 = self.rho.iter().enumerate().filter(|(i, _)| *i < t).map(|(i, r)| r * y[t - 1 - i]).sum();
            y.push(ar + e);
        }
        y
    }

    /// `log p(y_t | y_{t−1}, …, y_{t−p})`; `history[0]` is `y_{t−1}`.
    pub fn conditional_log_density(&self, y_t: f64, history: &[f64]) -> Result<f64> {
        if history.len() != self.rho.len() {
            return Err(Error::Domain(format!(
                "history holds {} values, model order is {}",
                history.len(),
                self.rho.len()
            )));
        }
        let ar: f64 = self.rho.iter().zip(history).map(|(r, y)| r * y).sum();
        Ok(self.innovation.shift(ar)?.log_pdf(y_t))
    }

    /// Conditional log-likelihood `Σ_{t>p} log p(y_t | F_{t−1})`.
    pub fn log_likelihood(&self, series: &TimeSeries) -> Result<f64> {
        let p = self.order();
        let y = series.values();
        if y.len() <= p {
            return Err(Error::TooShort { needed: p + 1, got: y.len() });
        }
        let mut history = vec![0.0; p];
        let mut total = 0.0;
        for t in p..y.len() {
            for (i, h) in history.iter_mut().enumerate() {
                *h = y[t - 1 - i];
            }
            total += self.conditional_log_density(y[t], &history)?;
        }
        Ok(total)
    }

    /// `E Y_t = (μ + δβ/γ) / (1 − ρ₁ − … − ρ_p)`.
    pub fn mean(&self) -> f64 {
        self.innovation.mean() / (1.0 - self.rho.iter().sum::<f64>())
    }

    /// Solves the Yule-Walker equations for `γ₀ … γ_p`, then extends by the
    /// recursion `γ_j = Σ ρ_i γ_{j−i}`.
    pub fn theoretical_moments(&self, max_lag: usize) -> Result<AutocovarianceSet> {
        let sigma_eps2 = self.innovation.variance();
        let p = self.order();
        let mut a = DMatrix::<f64>::identity(p + 1, p + 1);
        for k in 0..=p {
            for (j, &r) in self.rho.iter().enumerate() {
                a[(k, k.abs_diff(j + 1))] -= r;
            }
        }
        let mut b = DVector::<f64>::zeros(p + 1);
        b[0] = sigma_eps2;
        let sol = a.lu().solve(&b).ok_or(Error::Singular("autocovariance system"))?;
        let mut lags: Vec<f64> = sol.iter().copied().collect();
        lags.truncate(max_lag + 1);
        while lags.len() <= max_lag {
            let j = lags.len();
            lags.push(self.rho.iter().enumerate().map(|(i, r)| r * lags[j - 1 - i]).sum());
        }
        Ok(AutocovarianceSet { lags, sigma_eps2 })
    }
}

/// AR(2) variance `(1−ρ₂)σ² / (1 − ρ₂ − ρ₁² − ρ₂² − ρ₁²ρ₂ + ρ₂³)`.
pub fn ar2_variance(rho1: f64, rho2: f64, sigma_eps2: f64) -> f64 {
    let den = 1.0 - rho2 - rho1 * rho1 - rho2 * rho2 - rho1 * rho1 * rho2 + rho2.powi(3);
    (1.0 - rho2) * sigma_eps2 / den
}

/// AR(3) variance in closed form.
///
/// The denominator term is `+ρ₁ρ₃³`, from solving the Yule-Walker system
/// symbolically. A `+ρ₁ρ₃⁴` variant also circulates; see
/// [`ar3_variance_quartic_variant`].
pub fn ar3_variance(rho: [f64; 3], sigma_eps2: f64) -> f64 {
    let [a, b, c] = rho;
    let num = 1.0 - b - a * c - c * c;
    num * sigma_eps2 / ar3_denominator(a, b, c, a * c.powi(3))
}

/// AR(3) variance with `+ρ₁ρ₃⁴` in the denominator. Kept for comparison only:
/// it disagrees with the Yule-Walker solution whenever `ρ₁ρ₃ ≠ 0`.
pub fn ar3_variance_quartic_variant(rho: [f64; 3], sigma_eps2: f64) -> f64 {
    let [a, b, c] = rho;
    let num = 1.0 - b - a * c - c * c;
    num * sigma_eps2 / ar3_denominator(a, b, c, a * c.powi(4))
}

fn ar3_denominator(a: f64, b: f64, c: f64, a_c_term: f64) -> f64 {
    1.0 - b - a * c - a * a - b * b - 2.0 * c * c - a * a * b - b * b * c * c - a * a * c * c
        - a.powi(3) * c
        - 4.0 * a * b * c
        + b * c * c
        + a_c_term
        + b.powi(3)
        + c.powi(4)
        + a * b * b * c
}

#[cfg(test)]
mod tests {
    use super::*;

    fn case1() -> ArNigModel {
        ArNigModel::new(vec![0.5, 0.3], NigParams::symmetric(1.0, 2.0).unwrap()).unwrap()
    }

    #[test]
    fn ar2_roots() {
        let st = check_stationarity(&[0.5, 0.3]).unwrap();
        assert!(st.stationary);
        let mut re: Vec<f64> = st.roots.iter().map(|z| z.re).collect();
        re.sort_by(f64::total_cmp);
        assert!((re[0] + 2.840_25).abs() < 1e-4 && (re[1] - 1.173_58).abs() < 1e-4);
        for z in &st.roots {
            let val = Complex::new(1.0, 0.0) - z * 0.5 - z * z * 0.3;
            assert!(val.norm() < 1e-12);
        }
    }

    #[test]
    fn unit_root_and_near_unit_root() {
        let st = check_stationarity(&[1.0]).unwrap();
        assert!(!st.stationary);
        assert_eq!(st.root_moduli, vec![1.0]);
        let st = check_stationarity(&[0.9610]).unwrap();
        assert!(st.stationary);
        assert!((st.root_moduli[0] - 1.0 / 0.9610).abs() < 1e-12);
        assert!(check_stationarity(&[]).is_err());
        assert!(check_stationarity(&[0.0, 0.0]).unwrap().stationary);
        assert!(matches!(
            ArNigModel::new(vec![1.2], NigParams::symmetric(1.0, 1.0).unwrap()),
            Err(Error::NonStationary { .. })
        ));
    }

    #[test]
    fn case1_variance_from_ar2_formula() {
        let m = case1();
        let v = m.theoretical_moments(3).unwrap().variance();
        assert!((ar2_variance(0.5, 0.3, 2.0) - 1.4 / 0.312).abs() < 1e-12);
        assert!((v - 1.4 / 0.312).abs() < 1e-12);
    }

    #[test]
    fn ar1_identity() {
        let m = ArNigModel::new(vec![0.9610], NigParams::symmetric(0.0087, 70.3882).unwrap()).unwrap();
        let acv = m.theoretical_moments(4).unwrap();
        let s2 = 70.3882 / 0.0087;
        assert!(((acv.lags[0] - s2 / (1.0 - 0.9610f64.powi(2))) / acv.lags[0]).abs() < 1e-12);
        assert!(((acv.lags[3] - acv.lags[0] * 0.9610f64.powi(3)) / acv.lags[3]).abs() < 1e-12);
    }

    #[test]
    fn quartic_ar3_variant_disagrees() {
        let m = ArNigModel::new(vec![0.3, 0.2, 0.1], NigParams::symmetric(1.0, 1.0).unwrap()).unwrap();
        let v = m.theoretical_moments(0).unwrap().variance();
        assert!(((ar3_variance([0.3, 0.2, 0.1], 1.0) - v) / v).abs() < 1e-12);
        assert!(((ar3_variance_quartic_variant([0.3, 0.2, 0.1], 1.0) - v) / v).abs() > 1e-4);
    }

    #[test]
    fn conditional_density_reduces() {
        let innov = NigParams::symmetric(1.0, 2.0).unwrap();
        let m = ArNigModel::new(vec![0.0], innov).unwrap();
        assert_eq!(m.conditional_log_density(1.3, &[42.0]).unwrap(), innov.log_pdf(1.3));
        let m = case1();
        let a = m.conditional_log_density(0.7, &[1.0, -2.0]).unwrap();
        let b = innov.log_pdf(0.7 - (0.5 - 0.6));
        assert!((a - b).abs() < 1e-12);
        assert!(m.conditional_log_density(0.7, &[1.0]).is_err());
    }

    #[test]
    fn mean_formula() {
        let m = ArNigModel::new(vec![0.5], NigParams::new(1.0, 0.0, 1.0, 2.0).unwrap()).unwrap();
        assert!((m.mean() - 2.0).abs() < 1e-15);
        assert_eq!(case1().mean(), 0.0);
    }

    #[test]
    fn simulation_is_deterministic() {
        let m = case1();
        assert_eq!(m.simulate(50, 10, 3).unwrap(), m.simulate(50, 10, 3).unwrap());
        assert_eq!(m.simulate(1, 0, 3).unwrap().len(), 1);
        assert!(m.simulate(0, 10, 3).is_err());
        let (y, e) = m.simulate_with_innovations(20, 0, 4).unwrap();
        assert_eq!(y.values()[0], e[0]);
        assert!((y.values()[2] - (0.5 * y.values()[1] + 0.3 * y.values()[0] + e[2])).abs() < 1e-12);
    }

    #[test]
    fn series_validation() {
        assert!(TimeSeries::new(vec![]).is_err());
        assert!(TimeSeries::new(vec![1.0, f64::NAN]).is_err());
        let s: TimeSeries = serde_json::from_str(r#"{"values":[1.0,2.0]}"#).unwrap();
        assert_eq!(s.len(), 2);
        assert!(serde_json::from_str::<TimeSeries>(r#"{"values":[]}"#).is_err());
    }
}
