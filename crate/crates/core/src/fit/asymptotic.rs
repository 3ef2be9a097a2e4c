//! Closed-form asymptotic degree distribution for linear attachment.
//!
//! Under constant node probability `p` and attachment `A_k = k + c`, the
//! fraction of degree-`k` nodes converges to
//!
//! ```text
//! π_0 = (1 + (c-1)p) / (1 - p + c)
//! π_k = λ/(λ+k+c) · Π_{j=0}^{k-1} (j+c)/(λ+j+c)      (k ≥ 1)
//! ```
//!
//! with `λ = 1 + c·p/(1-p)`. The tail behaves like `k^{-(1+λ)}`.

use crate::{Error, Result};

/// The distribution `π_0..π_kmax` with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticDistribution {
    /// Attachment offset `c`.
    pub offset: f64,
    /// Node probability `p`.
    pub node_probability: f64,
    /// `λ = 1 + c·p/(1-p)`; the tail exponent is `1 + λ`.
    pub lambda: f64,
    values: Vec<f64>,
}

impl AsymptoticDistribution {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, degree: u64) -> f64 {
        self.values[degree as usize]
    }

    pub fn max_degree(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    /// `Σ_{k ≤ kmax} π_k`; approaches 1 as the table grows.
    pub fn partial_sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σ_{j > degree} π_j` within the table.
    pub fn tail_sum(&self, degree: u64) -> f64 {
        self.values[degree as usize + 1..].iter().sum()
    }
}

/// Evaluate the distribution up to `k_max`. The product is accumulated as a
/// running sum of logs, so values stay accurate far past the point where a
/// direct product would underflow.
pub fn asymptotic_pi(offset: f64, node_probability: f64, k_max: u64) -> Result<AsymptoticDistribution> {
    if !offset.is_finite() || offset <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "attachment offset must be positive, got {offset}"
        )));
    }
    if !node_probability.is_finite() || node_probability <= 0.0 || node_probability >= 1.0 {
        return Err(Error::InvalidParameter(format!(
            "node probability must lie strictly inside (0, 1), got {node_probability}"
        )));
    }
    let c = offset;
    let p = node_probability;
    let lambda = 1.0 + c * p / (1.0 - p);
    let mut values = Vec::with_capacity(k_max as usize + 1);
    values.push((1.0 + (c - 1.0) * p) / (1.0 - p + c));
    let mut log_product = 0.0f64; // Σ_{j<k} ln((j+c)/(λ+j+c))
    for k in 1..=k_max {
        let j = (k - 1) as f64;
        log_product += (j + c).ln() - (lambda + j + c).ln();
        values.push((lambda.ln() - (lambda + k as f64 + c).ln() + log_product).exp());
    }
    Ok(AsymptoticDistribution {
        offset,
        node_probability,
        lambda,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_values_for_unit_offset() {
        // c = 1, p = 1/2: λ = 2 and π_k = 4/((k+1)(k+2)(k+3)).
        let dist = asymptotic_pi(1.0, 0.5, 10).unwrap();
        assert_eq!(dist.lambda, 2.0);
        assert!((dist.value(0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((dist.value(1) - 1.0 / 6.0).abs() < 1e-15);
        assert!((dist.value(2) - 1.0 / 15.0).abs() < 1e-15);
        for k in 0..=10u64 {
            let kf = k as f64;
            let exact = 4.0 / ((kf + 1.0) * (kf + 2.0) * (kf + 3.0));
            assert!((dist.value(k) - exact).abs() < 1e-14 * exact.max(1e-30));
        }
    }

    #[test]
    fn partial_sums_approach_one() {
        let dist = asymptotic_pi(1.0, 0.5, 1_000_000).unwrap();
        let deficit = 1.0 - dist.partial_sum();
        assert!(deficit.abs() < 1e-3, "deficit {deficit}");
        // Values form a probability distribution: positive everywhere and
        // partial sums below 1 at any truncation.
        assert!(dist.values().iter().all(|&v| v > 0.0 && v < 1.0));
        let short = asymptotic_pi(1.0, 0.5, 100).unwrap();
        assert!(short.partial_sum() < 1.0);
    }

    #[test]
    fn satisfies_level_recurrence() {
        // Oracle: π_k·(λ + A_k) = A_{k-1}·π_{k-1} + λ·1[k=0] with A_k = k+c.
        for &(c, p) in &[(1.0, 0.5), (0.35, 0.1), (4.0, 0.8)] {
            let dist = asymptotic_pi(c, p, 200).unwrap();
            let lambda = dist.lambda;
            let a = |k: f64| k + c;
            let head = lambda / (lambda + a(0.0));
            assert!(
                ((dist.value(0) - head) / head).abs() < 1e-12,
                "c={c} p={p}"
            );
            for k in 1..=200u64 {
                let kf = k as f64;
                let expected = a(kf - 1.0) * dist.value(k - 1) / (lambda + a(kf));
                let got = dist.value(k);
                assert!(
                    ((got - expected) / expected).abs() < 1e-12,
                    "c={c} p={p} k={k}: {got} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn tail_identity_holds() {
        // Σ_{j>k} π_j = (k+c)·π_k / λ, checked against direct summation on
        // a table long enough that the truncated tail is negligible.
        let dist = asymptotic_pi(1.0, 0.5, 2_000_000).unwrap();
        for k in 0..=20u64 {
            let direct = dist.tail_sum(k);
            let identity = (k as f64 + 1.0) * dist.value(k) / dist.lambda;
            assert!(
                ((direct - identity) / identity).abs() < 1e-9,
                "k={k}: {direct} vs {identity}"
            );
        }
    }

    #[test]
    fn tail_follows_power_law() {
        // π_k·k^{1+λ} settles to a constant.
        let dist = asymptotic_pi(1.0, 0.5, 10_000).unwrap();
        let scaled = |k: u64| dist.value(k) * (k as f64).powf(1.0 + dist.lambda);
        let ratio = scaled(1_000) / scaled(10_000);
        assert!((ratio - 1.0).abs() < 0.05, "ratio {ratio}");
    }

    #[test]
    fn invalid_parameters_rejected() {
        assert!(asymptotic_pi(0.0, 0.5, 10).is_err());
        assert!(asymptotic_pi(1.0, 0.0, 10).is_err());
        assert!(asymptotic_pi(1.0, 1.0, 10).is_err());
    }

    #[test]
    fn log_space_survives_steep_tails() {
        // Large λ makes the tail extremely steep; the log-space
        // accumulation keeps values positive and consistent with the level
        // ratio far down the tail.
        let dist = asymptotic_pi(10.0, 0.9, 3_000).unwrap();
        assert!(dist.lambda > 90.0);
        let v = dist.value(3_000);
        assert!(v > 0.0 && v < 1e-150, "{v}");
        let ratio = dist.value(3_000) / dist.value(2_999);
        let expected = (2_999.0 + 10.0) / (dist.lambda + 3_000.0 + 10.0);
        assert!((ratio / expected - 1.0).abs() < 1e-9, "{ratio} vs {expected}");
    }
}
