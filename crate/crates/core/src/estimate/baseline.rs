//! Tail-ratio estimator straight from one snapshot.

use super::{AttachmentEstimate, EstimateRecord};
use crate::net::DegreeHistogram;

/// Estimate `A_k` as `tail_k / n_k` for every degree with `n_k > 0` and a
/// positive tail. Works well at small `k`; at large `k` it severely
/// underestimates because observed degrees exist by construction, so their
/// counts overestimate the unconditional expectation. A single-degree
/// histogram yields an empty estimate.
pub fn estimate_baseline(histogram: &DegreeHistogram) -> AttachmentEstimate {
    let tails = histogram.tail_counts();
    let records = histogram
        .iter()
        .filter_map(|(degree, n_k)| {
            let tail_k = tails[&degree];
            (tail_k > 0).then(|| EstimateRecord {
                degree,
                n_k,
                tail_k,
                a_hat: tail_k as f64 / n_k as f64,
                sd: None,
                p_hat: None,
                floored: false,
            })
        })
        .collect();
    AttachmentEstimate {
        records,
        reference_degree: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(pairs: &[(u64, u64)]) -> DegreeHistogram {
        let mut h = DegreeHistogram::new();
        for &(k, n) in pairs {
            h.add_nodes(k, n);
        }
        h
    }

    #[test]
    fn direct_tail_ratio() {
        let est = estimate_baseline(&hist(&[(0, 5), (1, 3), (2, 2)]));
        assert_eq!(est.records.len(), 2);
        assert_eq!(est.record(0).unwrap().a_hat, 1.0);
        assert!((est.record(1).unwrap().a_hat - 2.0 / 3.0).abs() < 1e-15);
        assert!(est.record(2).is_none()); // zero tail
    }

    #[test]
    fn single_degree_gives_empty_estimate() {
        let est = estimate_baseline(&hist(&[(0, 1)]));
        assert!(est.records.is_empty());
    }
}
