//! Sample autocorrelations and ARCH-robust inference on them.
//!
//! For ARCH-type white noise with finite fourth moments the lag-`i` sample
//! autocorrelation satisfies `√n·ρ̂(i) → N(0, wᵢᵢ)` with
//! `wᵢᵢ = E[X₁²X₁₊ᵢ²] / (E X₁²)²`, and distinct lags are asymptotically
//! independent. [`w_hat`] estimates `wᵢᵢ`; [`significance_bands`] and
//! [`portmanteau`] build on it. The classical white-noise bands correspond to
//! `wᵢᵢ = 1`, the Bartlett value computed by [`bartlett_w`].

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::distributions::{chisq_sf, normal_quantile};
use crate::error::{Error, Result};
use crate::series::TimeSeries;
use crate::transform::signed_power_into;

/// Finite-sample factor `c_in` in the robust variance estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    /// `c_in = n / (n - i)`.
    #[default]
    NOverNMinusI,
    /// `c_in = 1`.
    One,
}

impl Correction {
    fn factor(self, n: usize, lag: usize) -> f64 {
        match self {
            Correction::NOverNMinusI => n as f64 / (n - lag) as f64,
            Correction::One => 1.0,
        }
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Correction::NOverNMinusI => "n_over_n_minus_i",
            Correction::One => "one",
        })
    }
}

impl FromStr for Correction {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "n_over_n_minus_i" | "n-over-n-minus-i" => Ok(Correction::NOverNMinusI),
            "one" | "1" => Ok(Correction::One),
            other => Err(format!(
                "unknown correction `{other}` (expected `n_over_n_minus_i` or `one`)"
            )),
        }
    }
}

/// `min(20, n / 10)`, but at least 1 and below `n`.
pub fn default_max_lag(n: usize) -> usize {
    (n / 10).clamp(1, 20).min(n.saturating_sub(1).max(1))
}

pub fn sample_mean(xs: &TimeSeries) -> f64 {
    mean(xs.values())
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean-corrected sample autocovariance with divisor `n`.
pub fn sample_acvf(xs: &TimeSeries, lag: usize) -> Result<f64> {
    let v = xs.values();
    if lag >= v.len() {
        return Err(Error::LagOutOfRange { lag, n: v.len() });
    }
    Ok(acvf(v, mean(v), lag))
}

fn acvf(xs: &[f64], mean: f64, lag: usize) -> f64 {
    let s: f64 = xs
        .iter()
        .zip(&xs[lag..])
        .map(|(a, b)| (a - mean) * (b - mean))
        .sum();
    s / xs.len() as f64
}

/// `ρ̂(1), …, ρ̂(m)`.
pub fn sample_acf(xs: &TimeSeries, max_lag: usize) -> Result<Vec<f64>> {
    acf_slice(xs.values(), max_lag)
}

pub(crate) fn acf_slice(v: &[f64], max_lag: usize) -> Result<Vec<f64>> {
    let n = v.len();
    if max_lag == 0 || max_lag >= n {
        return Err(Error::LagOutOfRange { lag: max_lag, n });
    }
    let m = mean(v);
    let g0 = acvf(v, m, 0);
    if !(g0 > 0.0) {
        return Err(Error::Degenerate("constant series has no autocorrelation"));
    }
    Ok((1..=max_lag).map(|lag| acvf(v, m, lag) / g0).collect())
}

/// Robust variance estimate `ŵᵢᵢ = n·c_in·Σ X_d² X_{d+i}² / (Σ X_d²)²`.
///
/// Uses raw, not mean-corrected, squares.
pub fn w_hat(xs: &TimeSeries, lag: usize, correction: Correction) -> Result<f64> {
    w_hat_slice(xs.values(), lag, correction)
}

pub(crate) fn w_hat_slice(v: &[f64], lag: usize, correction: Correction) -> Result<f64> {
    let n = v.len();
    if lag == 0 || lag >= n {
        return Err(Error::LagOutOfRange { lag, n });
    }
    let sum_sq: f64 = v.iter().map(|x| x * x).sum();
    if !(sum_sq > 0.0) {
        return Err(Error::Degenerate("all-zero series"));
    }
    let cross: f64 = v.iter().zip(&v[lag..]).map(|(a, b)| (a * a) * (b * b)).sum();
    let w = n as f64 * correction.factor(n, lag) * cross / (sum_sq * sum_sq);
    if !(w > 0.0) {
        return Err(Error::Degenerate("zero robust variance"));
    }
    Ok(w)
}

/// Bartlett's asymptotic covariance `w_ij` of `√n·ρ̂` for a linear process.
///
/// `rho[k]` holds `ρ(k)` for `k = 0, 1, …, K`; `ρ(-k) = ρ(k)` and `ρ(k) = 0`
/// beyond `K`. Requires `ρ(0) = 1`.
pub fn bartlett_w(rho: &[f64], i: usize, j: usize) -> Result<f64> {
    match rho.first() {
        Some(&r0) if (r0 - 1.0).abs() <= 1e-12 => {}
        Some(&r0) => return Err(Error::domain("rho(0)", r0, "must equal 1")),
        None => return Err(Error::domain("rho", f64::NAN, "must contain rho(0)")),
    }
    if let Some(&bad) = rho.iter().find(|r| !r.is_finite()) {
        return Err(Error::domain("rho", bad, "must be finite"));
    }
    let r = |k: i64| -> f64 { rho.get(k.unsigned_abs() as usize).copied().unwrap_or(0.0) };
    let (i, j) = (i as i64, j as i64);
    let reach = rho.len() as i64 + i.max(j);
    let (ri, rj) = (r(i), r(j));
    let total = (-reach..=reach)
        .map(|k| {
            let rk = r(k);
            r(k + i) * r(k + j) + r(k - i) * r(k + j) + 2.0 * ri * rj * rk * rk
                - 2.0 * ri * rk * r(k + j)
                - 2.0 * rj * rk * r(k + i)
        })
        .sum();
    Ok(total)
}

/// Two-sided band half-widths `z_{(1+level)/2}·sqrt(wᵢ/n)`.
pub fn significance_bands(w: &[f64], n: usize, level: f64) -> Result<Vec<f64>> {
    let z = two_sided_z(level)?;
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    Ok(w.iter().map(|wi| z * (wi / n as f64).sqrt()).collect())
}

pub(crate) fn two_sided_z(level: f64) -> Result<f64> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::domain("level", level, "must lie in (0, 1)"));
    }
    normal_quantile(0.5 * (1.0 + level))
}

/// Robust portmanteau statistic `Q = n·Σ ρ̂(i)²/ŵᵢᵢ` with its χ²ₘ p-value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Portmanteau {
    pub stat: f64,
    pub df: usize,
    pub pvalue: f64,
}

pub fn portmanteau(xs: &TimeSeries, max_lag: usize, correction: Correction) -> Result<Portmanteau> {
    let rho = sample_acf(xs, max_lag)?;
    let w = (1..=max_lag)
        .map(|lag| w_hat(xs, lag, correction))
        .collect::<Result<Vec<_>>>()?;
    portmanteau_from_parts(&rho, &w, xs.len())
}

fn portmanteau_from_parts(rho: &[f64], w: &[f64], n: usize) -> Result<Portmanteau> {
    let stat = n as f64 * rho.iter().zip(w).map(|(r, w)| r * r / w).sum::<f64>();
    Ok(Portmanteau {
        stat,
        df: rho.len(),
        pvalue: chisq_sf(stat, rho.len())?,
    })
}

/// Everything the correlogram of one series needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfDiagnostics {
    pub n: usize,
    pub max_lag: usize,
    pub level: f64,
    pub correction: Correction,
    /// `rho_hat[i - 1]` is `ρ̂(i)`.
    pub rho_hat: Vec<f64>,
    pub w_hat: Vec<f64>,
    pub band_halfwidth: Vec<f64>,
    pub portmanteau_stat: f64,
    pub portmanteau_pvalue: f64,
}

impl AcfDiagnostics {
    pub fn compute(
        xs: &TimeSeries,
        max_lag: usize,
        level: f64,
        correction: Correction,
    ) -> Result<Self> {
        let rho_hat = sample_acf(xs, max_lag)?;
        let w = (1..=max_lag)
            .map(|lag| w_hat(xs, lag, correction))
            .collect::<Result<Vec<_>>>()?;
        let band_halfwidth = significance_bands(&w, xs.len(), level)?;
        let q = portmanteau_from_parts(&rho_hat, &w, xs.len())?;
        Ok(AcfDiagnostics {
            n: xs.len(),
            max_lag,
            level,
            correction,
            rho_hat,
            w_hat: w,
            band_halfwidth,
            portmanteau_stat: q.stat,
            portmanteau_pvalue: q.pvalue,
        })
    }

    /// Lags (1-based) whose `|ρ̂|` falls outside the band.
    pub fn rejected_lags(&self) -> Vec<usize> {
        self.rho_hat
            .iter()
            .zip(&self.band_halfwidth)
            .enumerate()
            .filter(|(_, (r, b))| r.abs() > **b)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn portmanteau(&self) -> Portmanteau {
        Portmanteau {
            stat: self.portmanteau_stat,
            df: self.max_lag,
            pvalue: self.portmanteau_pvalue,
        }
    }
}

/// Diagnostics of one signed power of the input.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaDiagnostics {
    pub lambda: f64,
    #[serde(flatten)]
    pub diagnostics: AcfDiagnostics,
}

/// Runs [`AcfDiagnostics::compute`] on `sign(x)|x|^λ` for each `λ` in the grid.
pub fn acf_diagnose(
    xs: &TimeSeries,
    max_lag: usize,
    lambda_grid: &[f64],
    level: f64,
    correction: Correction,
) -> Result<Vec<LambdaDiagnostics>> {
    let mut buf = Vec::with_capacity(xs.len());
    lambda_grid
        .iter()
        .map(|&lambda| {
            if !(lambda > 0.0 && lambda.is_finite()) {
                return Err(Error::domain("lambda", lambda, "must be positive and finite"));
            }
            signed_power_into(xs.values(), lambda, &mut buf);
            let ys = TimeSeries::new(buf.clone())
                .map_err(|e| e.with_context(format!("lambda = {lambda}")))?;
            let diagnostics = AcfDiagnostics::compute(&ys, max_lag, level, correction)
                .map_err(|e| e.with_context(format!("lambda = {lambda}")))?;
            Ok(LambdaDiagnostics {
                lambda,
                diagnostics,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn ts(v: &[f64]) -> TimeSeries {
        TimeSeries::new(v.to_vec()).unwrap()
    }

    #[test]
    fn mean_examples() {
        assert_eq!(sample_mean(&ts(&[1.0, 2.0, 3.0])), 2.0);
        assert_eq!(sample_mean(&ts(&[-1.0, 1.0])), 0.0);
        assert_eq!(sample_mean(&ts(&[2.5; 7])), 2.5);
    }

    #[test]
    fn acvf_alternating() {
        let xs = ts(&[1.0, -1.0, 1.0, -1.0]);
        assert_eq!(sample_acvf(&xs, 0).unwrap(), 1.0);
        assert_eq!(sample_acvf(&xs, 1).unwrap(), -0.75);
        assert!(matches!(sample_acvf(&xs, 4), Err(Error::LagOutOfRange { lag: 4, n: 4 })));
        assert_eq!(sample_acf(&xs, 1).unwrap(), vec![-0.75]);
    }

    #[test]
    fn acf_of_constant_is_degenerate() {
        assert!(matches!(sample_acf(&ts(&[3.0; 10]), 2), Err(Error::Degenerate(_))));
        assert!(sample_acf(&ts(&[1.0, 2.0]), 2).is_err());
        assert!(sample_acf(&ts(&[1.0, 2.0]), 0).is_err());
    }

    #[test]
    fn w_hat_hand_value() {
        let xs = ts(&[1.0, 1.0, 1.0, 1.0]);
        assert_eq!(w_hat(&xs, 1, Correction::One).unwrap(), 0.75);
        assert_eq!(w_hat(&xs, 1, Correction::NOverNMinusI).unwrap(), 1.0);
        assert!(matches!(w_hat(&ts(&[0.0; 5]), 1, Correction::One), Err(Error::Degenerate(_))));
        assert!(w_hat(&xs, 0, Correction::One).is_err());
        assert!(w_hat(&xs, 4, Correction::One).is_err());
        // Products across the lag all vanish.
        assert!(w_hat(&ts(&[1.0, 0.0, 1.0, 0.0]), 1, Correction::One).is_err());
    }

    #[test]
    fn bartlett_examples() {
        let white = [1.0];
        for i in 1..6 {
            assert_eq!(bartlett_w(&white, i, i).unwrap(), 1.0);
        }
        assert_eq!(bartlett_w(&white, 1, 2).unwrap(), 0.0);
        let ma1 = [1.0, 0.4];
        assert_relative_eq!(bartlett_w(&ma1, 2, 2).unwrap(), 1.32, epsilon = 1e-14);
        assert!(bartlett_w(&[0.9, 0.1], 1, 1).is_err());
        assert!(bartlett_w(&[], 1, 1).is_err());
    }

    #[test]
    fn bartlett_ma1_lag1() {
        // Classical: w11 = 1 - 3ρ1² + 4ρ1⁴ for MA(1).
        let r = 0.4f64;
        let expected = 1.0 - 3.0 * r * r + 4.0 * r.powi(4);
        assert_relative_eq!(bartlett_w(&[1.0, r], 1, 1).unwrap(), expected, epsilon = 1e-14);
    }

    #[test]
    fn bands_examples() {
        let b = significance_bands(&[1.0], 400, 0.95).unwrap()[0];
        assert_relative_eq!(b, 1.959_963_984_540_054 / 20.0, epsilon = 1e-12);
        let b4 = significance_bands(&[4.0], 400, 0.95).unwrap()[0];
        assert_relative_eq!(b4, 2.0 * b, epsilon = 1e-15);
        let b_quad = significance_bands(&[1.0], 1600, 0.95).unwrap()[0];
        assert_relative_eq!(b_quad, b / 2.0, epsilon = 1e-15);
        assert!(significance_bands(&[1.0], 10, 1.0).is_err());
    }

    #[test]
    fn portmanteau_zero_acf() {
        // Zero mean; lag-1 and lag-2 cross products both sum to zero.
        let xs = ts(&[-2.0, -1.0, 1.0, -1.0, 2.0, 1.0]);
        let rho = sample_acf(&xs, 2).unwrap();
        assert_eq!(rho, vec![0.0, 0.0]);
        let q = portmanteau(&xs, 2, Correction::One).unwrap();
        assert_eq!(q.stat, 0.0);
        assert_eq!(q.pvalue, 1.0);
        assert_eq!(q.df, 2);
    }

    #[test]
    fn diagnostics_consistent() {
        let xs = ts(&[0.3, -1.2, 0.8, 2.1, -0.4, -0.9, 1.5, 0.2, -2.2, 0.7, 1.1, -0.6]);
        let d = AcfDiagnostics::compute(&xs, 3, 0.95, Correction::default()).unwrap();
        let q: f64 = 12.0 * d.rho_hat.iter().zip(&d.w_hat).map(|(r, w)| r * r / w).sum::<f64>();
        assert_eq!(d.portmanteau_stat, q);
        assert!(d.w_hat.iter().all(|&w| w > 0.0));
        let via = acf_diagnose(&xs, 3, &[1.0], 0.95, Correction::default()).unwrap();
        assert_eq!(via[0].diagnostics, d);
        let two = acf_diagnose(&xs, 3, &[0.5, 1.0], 0.95, Correction::default()).unwrap();
        assert_eq!(two.len(), 2);
        assert!(two.iter().all(|d| d.diagnostics.rho_hat.len() == 3));
        assert!(acf_diagnose(&xs, 3, &[0.0], 0.95, Correction::default()).is_err());
    }

    #[test]
    fn correction_parses() {
        assert_eq!("one".parse::<Correction>().unwrap(), Correction::One);
        assert_eq!(
            Correction::NOverNMinusI.to_string().parse::<Correction>().unwrap(),
            Correction::NOverNMinusI
        );
        assert!("two".parse::<Correction>().is_err());
    }

    #[test]
    fn default_lag() {
        assert_eq!(default_max_lag(2000), 20);
        assert_eq!(default_max_lag(100), 10);
        assert_eq!(default_max_lag(5), 1);
        assert_eq!(default_max_lag(2), 1);
    }

    fn series_strategy() -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-100.0f64..100.0, 8..60)
            .prop_filter("non-constant", |v| v.iter().any(|&x| (x - v[0]).abs() > 1e-3))
    }

    proptest! {
        #[test]
        fn acf_bounded(v in series_strategy()) {
            let m = (v.len() - 1).min(10);
            for r in sample_acf(&ts(&v), m).unwrap() {
                prop_assert!(r.abs() <= 1.0 + 1e-12);
            }
        }

        #[test]
        fn acf_affine_invariant(v in series_strategy(), a in 0.1f64..10.0, neg in any::<bool>(), b in -50.0f64..50.0) {
            let a = if neg { -a } else { a };
            let m = (v.len() - 1).min(5);
            let base = sample_acf(&ts(&v), m).unwrap();
            let moved: Vec<f64> = v.iter().map(|x| a * x + b).collect();
            let other = sample_acf(&ts(&moved), m).unwrap();
            for (x, y) in base.iter().zip(&other) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn correction_identity(v in series_strategy(), lag in 1usize..7) {
            let xs = ts(&v);
            let n = v.len() as f64;
            let a = w_hat(&xs, lag, Correction::NOverNMinusI).unwrap();
            let b = w_hat(&xs, lag, Correction::One).unwrap();
            prop_assert!((a - n / (n - lag as f64) * b).abs() <= 1e-12 * a);
        }

        #[test]
        fn portmanteau_grows_with_rho(v in series_strategy()) {
            let n = v.len();
            let rho = acf_slice(&v, 2).unwrap();
            let w = [w_hat_slice(&v, 1, Correction::One).unwrap(), w_hat_slice(&v, 2, Correction::One).unwrap()];
            let base = portmanteau_from_parts(&rho, &w, n).unwrap();
            let inflated = [rho[0].signum() * (rho[0].abs() + 0.1), rho[1]];
            let more = portmanteau_from_parts(&inflated, &w, n).unwrap();
            prop_assert!(more.stat > base.stat);
            prop_assert!(more.pvalue <= base.pvalue);
        }
    }
}
