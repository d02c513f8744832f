//! Time-indexed Monte-Carlo series, decay fits and bound reports.

use serde::Serialize;

use crate::error::SgfError;
use crate::rates::estimate::Quantity;
use crate::Result;

/// Monte-Carlo estimate of an expected quantity on a time grid, with 95%
/// normal-approximation confidence halfwidths `1.96 s / sqrt(n)`.
#[derive(Debug, Clone, Serialize)]
pub struct GapSeries {
    pub quantity: Quantity,
    pub n_paths: usize,
    pub times: Vec<f64>,
    pub mean: Vec<f64>,
    pub ci_halfwidth: Vec<f64>,
}

impl GapSeries {
    /// Aggregates per-path sample vectors (one value per time index) in
    /// ascending path order. The reduction order is fixed, so the result is
    /// bit-identical no matter how the samples were produced.
    pub fn aggregate(
        quantity: Quantity,
        times: Vec<f64>,
        per_path: &[Vec<f64>],
    ) -> Result<GapSeries> {
        let n = per_path.len();
        if n < 1 {
            return Err(SgfError::InvalidParameter("need at least one path".into()));
        }
        let len = times.len();
        // Welford accumulation in fixed path order: stable, and exactly zero
        // variance when every path produced the same values
        let mut mean = vec![0.0; len];
        let mut m2 = vec![0.0; len];
        for (k, path) in per_path.iter().enumerate() {
            debug_assert_eq!(path.len(), len);
            let count = (k + 1) as f64;
            for (i, v) in path.iter().enumerate() {
                let delta = v - mean[i];
                mean[i] += delta / count;
                m2[i] += delta * (v - mean[i]);
            }
        }
        let nf = n as f64;
        let ci: Vec<f64> = m2
            .iter()
            .map(|&m2i| {
                if n > 1 {
                    1.96 * ((m2i / (nf - 1.0)).max(0.0) / nf).sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        Ok(GapSeries {
            quantity,
            n_paths: n,
            times,
            mean,
            ci_halfwidth: ci,
        })
    }
}

/// Decay model fitted to a series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RateModel {
    /// `mean ~ C t^s` (the stored exponent is the signed slope `s`).
    Power,
    /// `mean ~ C e^{-r t}` (the stored exponent is the positive rate `r`).
    Exponential,
}

#[derive(Debug, Clone, Serialize)]
pub struct RateFit {
    pub model: RateModel,
    pub exponent: f64,
    pub constant: f64,
    pub r2: f64,
    pub window: (f64, f64),
    pub points_used: usize,
}

/// Least-squares fit on log-transformed data restricted to `window`.
/// Keeps only points with positive mean; needs at least five of them.
pub fn fit_rate(series: &GapSeries, model: RateModel, window: (f64, f64)) -> Result<RateFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (i, &t) in series.times.iter().enumerate() {
        if t < window.0 || t > window.1 || series.mean[i] <= 0.0 || t <= 0.0 {
            continue;
        }
        let x = match model {
            RateModel::Power => t.ln(),
            RateModel::Exponential => t,
        };
        xs.push(x);
        ys.push(series.mean[i].ln());
    }
    let n = xs.len();
    if n < 5 {
        return Err(SgfError::FitError(format!(
            "only {n} usable points in window [{}, {}]",
            window.0, window.1
        )));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for i in 0..n {
        let dx = xs[i] - mx;
        let dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        return Err(SgfError::FitError("degenerate window (single time)".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    let exponent = match model {
        RateModel::Power => slope,
        RateModel::Exponential => -slope,
    };
    Ok(RateFit {
        model,
        exponent,
        constant: intercept.exp(),
        r2,
        window,
        points_used: n,
    })
}

/// A closed-form bound checked against a series with one-sided CI slack:
/// a time counts as a violation only when `mean - ci > bound`.
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub bound_name: String,
    pub parameters: String,
    pub times: Vec<f64>,
    pub bound_values: Vec<f64>,
    pub violations: usize,
}

impl BoundReport {
    pub fn passes(&self) -> bool {
        self.violations == 0
    }
}

pub fn check_bound(
    series: &GapSeries,
    bound_name: impl Into<String>,
    parameters: impl Into<String>,
    bound: impl Fn(f64) -> f64,
) -> BoundReport {
    let mut bound_values = Vec::with_capacity(series.times.len());
    let mut violations = 0;
    for (i, &t) in series.times.iter().enumerate() {
        let b = bound(t);
        bound_values.push(b);
        if series.mean[i] - series.ci_halfwidth[i] > b {
            violations += 1;
        }
    }
    BoundReport {
        bound_name: bound_name.into(),
        parameters: parameters.into(),
        times: series.times.clone(),
        bound_values,
        violations,
    }
}
