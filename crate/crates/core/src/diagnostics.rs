//! Simulation-based consistency checks.
//!
//! Both diagnostics average over replicated simulations with derived seeds:
//! the tail-ratio check verifies that `mean tail / mean count` is
//! proportional to the attachment function at small degrees, and the
//! degree-fraction check compares empirical `n_k(T)/(p·T)` against the
//! closed-form asymptotic distribution for linear attachment.

use rayon::prelude::*;
use serde::Serialize;

use crate::fit::asymptotic_pi;
use crate::net::DegreeHistogram;
use crate::sim::{derive_seed, grow_histogram, AttachmentFunction, Schedule};
use crate::{Error, Result};

/// One degree of the tail-ratio diagnostic.
#[derive(Debug, Clone, Serialize)]
pub struct RatioPoint {
    pub degree: u64,
    /// Mean over replicates of the count of nodes above this degree.
    pub mean_tail: f64,
    /// Mean over replicates of `n_k(T)`.
    pub mean_count: f64,
    pub ratio: f64,
    /// Ratio rescaled so its value at degree 1 is 1; proportionality to the
    /// attachment function makes this comparable to `A_k / A_1`.
    pub normalized: f64,
}

/// Replicate the growth model and report, per degree up to `max_degree`,
/// the ratio of the mean tail count to the mean count. Degrees whose mean
/// count is zero are omitted; degree 1 must occur for normalization.
pub fn tail_ratio_diagnostic(
    attachment: &AttachmentFunction,
    node_probability: f64,
    time_steps: u64,
    replicates: usize,
    seed: u64,
    max_degree: u64,
) -> Result<Vec<RatioPoint>> {
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be positive".into()));
    }
    let histograms = replicate_histograms(
        attachment,
        &Schedule::Constant(node_probability),
        time_steps,
        replicates,
        seed,
    )?;
    let mut mean_tail = vec![0.0f64; max_degree as usize + 1];
    let mut mean_count = vec![0.0f64; max_degree as usize + 1];
    for hist in &histograms {
        for k in 0..=max_degree {
            mean_count[k as usize] += hist.count(k) as f64;
            mean_tail[k as usize] += hist.tail_count_at(k) as f64;
        }
    }
    let r = replicates as f64;
    let points: Vec<(u64, f64, f64, f64)> = (0..=max_degree)
        .filter_map(|k| {
            let count = mean_count[k as usize] / r;
            let tail = mean_tail[k as usize] / r;
            (count > 0.0).then_some((k, tail, count, tail / count))
        })
        .collect();
    let at_one = points
        .iter()
        .find(|&&(k, _, _, _)| k == 1)
        .map(|&(_, _, _, ratio)| ratio)
        .ok_or_else(|| {
            Error::InsufficientData("degree 1 never occurred; cannot normalize ratios".into())
        })?;
    Ok(points
        .into_iter()
        .map(|(degree, mean_tail, mean_count, ratio)| RatioPoint {
            degree,
            mean_tail,
            mean_count,
            ratio,
            normalized: ratio / at_one,
        })
        .collect())
}

/// One degree of the asymptotic-distribution comparison.
#[derive(Debug, Clone, Serialize)]
pub struct DegreeFractionPoint {
    pub degree: u64,
    /// Mean over replicates of `n_k(T) / (p·T)`.
    pub empirical: f64,
    /// Closed-form asymptotic fraction.
    pub predicted: f64,
    pub relative_error: f64,
}

/// Simulate with linear attachment `A_k = k + offset` and compare the
/// empirical degree fractions against the asymptotic distribution.
pub fn degree_fraction_comparison(
    offset: f64,
    node_probability: f64,
    time_steps: u64,
    replicates: usize,
    seed: u64,
    max_degree: u64,
) -> Result<Vec<DegreeFractionPoint>> {
    if replicates == 0 {
        return Err(Error::InvalidParameter("replicates must be positive".into()));
    }
    let attachment = AttachmentFunction::Linear { offset };
    let histograms = replicate_histograms(
        &attachment,
        &Schedule::Constant(node_probability),
        time_steps,
        replicates,
        seed,
    )?;
    let scale = node_probability * time_steps as f64;
    let mut empirical = vec![0.0f64; max_degree as usize + 1];
    for hist in &histograms {
        for k in 0..=max_degree {
            empirical[k as usize] += hist.count(k) as f64 / scale;
        }
    }
    let predicted = asymptotic_pi(offset, node_probability, max_degree)?;
    Ok((0..=max_degree)
        .map(|k| {
            let emp = empirical[k as usize] / replicates as f64;
            let pred = predicted.value(k);
            DegreeFractionPoint {
                degree: k,
                empirical: emp,
                predicted: pred,
                relative_error: (emp - pred).abs() / pred,
            }
        })
        .collect())
}

fn replicate_histograms(
    attachment: &AttachmentFunction,
    schedule: &Schedule,
    time_steps: u64,
    replicates: usize,
    seed: u64,
) -> Result<Vec<DegreeHistogram>> {
    (0..replicates)
        .into_par_iter()
        .map(|i| grow_histogram(time_steps, schedule, derive_seed(seed, i as u64), attachment))
        .collect()
}
