//! Parametric fits to attachment estimates and degree distributions.

mod asymptotic;
mod regression;

pub use asymptotic::{asymptotic_pi, AsymptoticDistribution};

use serde::{Deserialize, Serialize};

use crate::estimate::AttachmentEstimate;
use crate::net::DegreeHistogram;
use crate::{Error, Result};
use regression::weighted_linear_fit;

/// Functional form of a fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitForm {
    /// Attachment `A_k = max(k,1)^α`; parameter is `α`.
    PowerLaw,
    /// Attachment `A_k = k/(1 + β·ln k)`; parameter is `β`.
    LogDamped,
    /// Degree-distribution tail `P(k) ∝ k^{-γ}`; parameter is `γ`.
    TailExponent,
}

/// A fitted parameter with its ±2σ half-width.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub form: FitForm,
    pub parameter: f64,
    /// Two standard errors of the parameter.
    pub two_sigma: f64,
    /// Square root of the (weighted) sum of squared residuals; 0 when the
    /// fit is exact or residuals are not defined for the method.
    pub residual_norm: f64,
    pub points_used: usize,
}

/// Records usable for log-log fitting: positive value, degree at least 1,
/// not a floored artifact.
fn usable_records(estimate: &AttachmentEstimate) -> Vec<(u64, f64, Option<f64>)> {
    estimate
        .records
        .iter()
        .filter(|r| r.degree >= 1 && r.a_hat > 0.0 && r.a_hat.is_finite() && !r.floored)
        .map(|r| (r.degree, r.a_hat, r.sd))
        .collect()
}

/// Least-squares slope of `ln A_k` against `ln k` over degrees `k ≥ 1`.
///
/// With `weighted` set and per-record spreads available, points weigh
/// `1/sd²` in log space; records without a positive spread get the median
/// positive weight. Degree-0 records never participate (the floored
/// power-law form cannot separate them from degree 1). The slope is
/// invariant under rescaling of the estimate.
pub fn fit_alpha(estimate: &AttachmentEstimate, weighted: bool) -> Result<FitResult> {
    let usable = usable_records(estimate);
    if usable.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "power-law fit needs at least 2 usable records, got {}",
            usable.len()
        )));
    }
    let weights = if weighted {
        let positive: Vec<f64> = usable
            .iter()
            .filter_map(|(_, _, sd)| match sd {
                Some(s) if *s > 0.0 && s.is_finite() => Some(1.0 / (s * s)),
                _ => None,
            })
            .collect();
        if positive.is_empty() {
            vec![1.0; usable.len()]
        } else {
            let fallback = median(&positive);
            usable
                .iter()
                .map(|(_, _, sd)| match sd {
                    Some(s) if *s > 0.0 && s.is_finite() => 1.0 / (s * s),
                    _ => fallback,
                })
                .collect()
        }
    } else {
        vec![1.0; usable.len()]
    };
    let points: Vec<(f64, f64, f64)> = usable
        .iter()
        .zip(&weights)
        .map(|(&(k, a, _), &w)| ((k as f64).ln(), a.ln(), w))
        .collect();
    let fit = weighted_linear_fit(&points);
    Ok(FitResult {
        form: FitForm::PowerLaw,
        parameter: fit.slope,
        two_sigma: 2.0 * fit.slope_se,
        residual_norm: fit.residual_norm,
        points_used: points.len(),
    })
}

/// Fit the log-damped form by the linearization `k/A_k = 1 + β·ln k`.
///
/// The estimate is first rescaled to 1 at the reference degree (degree 1
/// when present), fixing the scale at which the linearization's intercept
/// is 1; the regression then runs with a free intercept and the slope is
/// reported as `β`.
pub fn fit_beta(estimate: &AttachmentEstimate) -> Result<FitResult> {
    let usable = usable_records(estimate);
    if usable.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "log-damped fit needs at least 2 usable records, got {}",
            usable.len()
        )));
    }
    let reference = usable
        .iter()
        .find(|(k, _, _)| *k == 1)
        .or_else(|| usable.first())
        .map(|&(_, a, _)| a)
        .expect("nonempty");
    let points: Vec<(f64, f64, f64)> = usable
        .iter()
        .map(|&(k, a, _)| ((k as f64).ln(), k as f64 * reference / a, 1.0))
        .collect();
    let fit = weighted_linear_fit(&points);
    Ok(FitResult {
        form: FitForm::LogDamped,
        parameter: fit.slope,
        two_sigma: 2.0 * fit.slope_se,
        residual_norm: fit.residual_norm,
        points_used: points.len(),
    })
}

/// Continuous-approximation maximum-likelihood tail exponent:
/// `γ = 1 + n·[Σ_i ln(k_i/(k_min - 1/2))]⁻¹` over nodes with degree at
/// least `k_min`, with `two_sigma = 2(γ-1)/√n`. Requires at least 10 tail
/// nodes; a tail concentrated entirely at `k_min` is rejected as
/// degenerate.
pub fn fit_gamma(histogram: &DegreeHistogram, k_min: u64) -> Result<FitResult> {
    if k_min < 1 {
        return Err(Error::InvalidParameter(
            "tail threshold k_min must be at least 1".into(),
        ));
    }
    let tail: Vec<(u64, u64)> = histogram.iter().filter(|&(k, _)| k >= k_min).collect();
    let n: u64 = tail.iter().map(|&(_, c)| c).sum();
    if n < 10 {
        return Err(Error::InsufficientData(format!(
            "tail exponent fit needs at least 10 nodes with degree >= {k_min}, got {n}"
        )));
    }
    if tail.len() == 1 && tail[0].0 == k_min {
        return Err(Error::Numeric(
            "all tail degrees equal k_min; tail exponent diverges".into(),
        ));
    }
    let shift = k_min as f64 - 0.5;
    let log_sum: f64 = tail
        .iter()
        .map(|&(k, c)| c as f64 * (k as f64 / shift).ln())
        .sum();
    let gamma = 1.0 + n as f64 / log_sum;
    Ok(FitResult {
        form: FitForm::TailExponent,
        parameter: gamma,
        two_sigma: 2.0 * (gamma - 1.0) / (n as f64).sqrt(),
        residual_norm: 0.0,
        points_used: n as usize,
    })
}

fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite weights"));
    let mid = sorted.len() / 2;
    if sorted.len() % 2 == 1 {
        sorted[mid]
    } else {
        0.5 * (sorted[mid - 1] + sorted[mid])
    }
}
