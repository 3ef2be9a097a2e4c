//! Estimate containers and estimator configuration.

use serde::{Deserialize, Serialize};

use crate::sim::{AttachmentFunction, Schedule};
use crate::{Error, Result};

/// One estimated attachment value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRecord {
    pub degree: u64,
    /// Nodes with this degree in the observed snapshot.
    pub n_k: u64,
    /// Nodes with a strictly larger degree.
    pub tail_k: u64,
    /// Estimated attachment value.
    pub a_hat: f64,
    /// Spread of `ln a_hat` across repetitions, when the estimator exposes
    /// one.
    pub sd: Option<f64>,
    /// Estimated probability that this degree exists in a snapshot.
    pub p_hat: Option<f64>,
    /// The existence probability was never observed in any simulation and
    /// was floored; the value is a lower-bound artifact.
    #[serde(default)]
    pub floored: bool,
}

/// A per-degree attachment estimate.
///
/// Snapshot-based estimators emit records only for degrees with `n_k > 0`
/// and `tail_k > 0`; the full-timeline estimator covers every degree that
/// appeared during growth (possibly with `a_hat = 0` for degrees that never
/// received an edge).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct AttachmentEstimate {
    pub records: Vec<EstimateRecord>,
    /// When set, values are scaled so `a_hat` at this degree equals 1.
    pub reference_degree: Option<u64>,
}

impl AttachmentEstimate {
    pub fn record(&self, degree: u64) -> Option<&EstimateRecord> {
        self.records.iter().find(|r| r.degree == degree)
    }

    /// Degree used for normalization: 1 when it carries a positive value,
    /// otherwise the smallest degree with one.
    pub fn reference_candidate(&self) -> Option<u64> {
        if self
            .record(1)
            .is_some_and(|r| r.a_hat > 0.0 && r.a_hat.is_finite())
        {
            return Some(1);
        }
        self.records
            .iter()
            .filter(|r| r.a_hat > 0.0 && r.a_hat.is_finite())
            .map(|r| r.degree)
            .min()
    }

    /// Rescale so the value at the reference degree is exactly 1.
    pub fn normalized(mut self) -> Self {
        if let Some(reference) = self.reference_candidate() {
            let scale = self.record(reference).unwrap().a_hat;
            for r in &mut self.records {
                r.a_hat /= scale;
            }
            self.reference_degree = Some(reference);
        }
        self
    }

    /// View the estimate as a tabulated attachment function over
    /// `0..=max recorded degree`: degrees without a positive estimate carry
    /// the nearest lower positive value forward (the first positive value
    /// backfills the head), and degrees beyond the table hold the last
    /// value.
    pub fn as_attachment_function(&self) -> Result<AttachmentFunction> {
        let max_degree = self
            .records
            .iter()
            .filter(|r| r.a_hat > 0.0 && r.a_hat.is_finite())
            .map(|r| r.degree)
            .max()
            .ok_or_else(|| {
                Error::InsufficientData("estimate has no positive attachment values".into())
            })?;
        let mut table = vec![f64::NAN; max_degree as usize + 1];
        for r in &self.records {
            if r.degree <= max_degree && r.a_hat > 0.0 && r.a_hat.is_finite() {
                table[r.degree as usize] = r.a_hat;
            }
        }
        let mut first_positive = None;
        for v in table.iter() {
            if !v.is_nan() {
                first_positive = Some(*v);
                break;
            }
        }
        let mut carry = first_positive.expect("at least one positive value");
        for v in table.iter_mut() {
            if v.is_nan() {
                *v = carry;
            } else {
                carry = *v;
            }
        }
        Ok(AttachmentFunction::Tabulated(table))
    }
}

/// Knobs of the one-shot estimator.
#[derive(Debug, Clone)]
pub struct OneshotConfig {
    /// Simulations per round (`M ≥ 1`).
    pub simulations_per_round: usize,
    /// Update rounds per repetition (`S ≥ 1`).
    pub rounds: usize,
    /// Independent repetitions of the whole round loop, averaged at the end
    /// (`R ≥ 1`).
    pub repetitions: usize,
    pub seed: u64,
    /// Simulation schedule; defaults to a constant node probability
    /// estimated from the observed totals.
    pub schedule: Option<Schedule>,
    /// Simulated time-steps; defaults to `N + E - 1` of the observed
    /// snapshot so one event per step reproduces the observed size.
    pub time_steps: Option<u64>,
}

impl OneshotConfig {
    pub fn new(simulations_per_round: usize, rounds: usize, seed: u64) -> Self {
        Self {
            simulations_per_round,
            rounds,
            repetitions: 5,
            seed,
            schedule: None,
            time_steps: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.simulations_per_round == 0 || self.rounds == 0 || self.repetitions == 0 {
            return Err(Error::InvalidParameter(
                "simulations per round, rounds and repetitions must all be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Contiguous, disjoint degree bins covering `0..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinningScheme {
    // Inclusive (start, end) ranges, sorted.
    bins: Vec<(u64, u64)>,
}

impl BinningScheme {
    /// Width-1 bins: one bin per degree.
    pub fn unit(max_degree: u64) -> Self {
        Self {
            bins: (0..=max_degree).map(|k| (k, k)).collect(),
        }
    }

    /// Geometrically widening bins `[0,0], [1,1], [2,3], ...` with the given
    /// width ratio (> 1).
    pub fn geometric(max_degree: u64, ratio: f64) -> Result<Self> {
        if !ratio.is_finite() || ratio <= 1.0 {
            return Err(Error::InvalidParameter(format!(
                "bin ratio must be greater than 1, got {ratio}"
            )));
        }
        let mut bins = vec![(0, 0)];
        let mut start = 1u64;
        let mut width = 1.0f64;
        while start <= max_degree {
            let w = width.round().max(1.0) as u64;
            let end = (start + w - 1).min(max_degree);
            bins.push((start, end));
            start = end + 1;
            width *= ratio;
        }
        Ok(Self { bins })
    }

    /// Explicit inclusive ranges; must be sorted, disjoint and contiguous
    /// from 0.
    pub fn from_ranges(bins: Vec<(u64, u64)>) -> Result<Self> {
        let mut expected = 0u64;
        if bins.is_empty() {
            return Err(Error::InvalidParameter("binning needs at least one bin".into()));
        }
        for &(start, end) in &bins {
            if start != expected || end < start {
                return Err(Error::InvalidParameter(format!(
                    "bins must be contiguous from 0; offending bin [{start}, {end}]"
                )));
            }
            expected = end + 1;
        }
        Ok(Self { bins })
    }

    pub fn len(&self) -> usize {
        self.bins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bins.is_empty()
    }

    /// Inclusive degree range of bin `g`.
    pub fn range(&self, bin: usize) -> (u64, u64) {
        self.bins[bin]
    }

    /// Largest degree covered.
    pub fn max_degree(&self) -> u64 {
        self.bins.last().map(|&(_, end)| end).unwrap_or(0)
    }

    /// Index of the bin containing `degree`, if covered.
    pub fn bin_of(&self, degree: u64) -> Option<usize> {
        let idx = self.bins.partition_point(|&(start, _)| start <= degree);
        if idx == 0 {
            return None;
        }
        let (start, end) = self.bins[idx - 1];
        (degree >= start && degree <= end).then_some(idx - 1)
    }

    pub fn validate_for(&self, max_degree: u64) -> Result<()> {
        if self.max_degree() < max_degree {
            return Err(Error::InvalidParameter(format!(
                "bins cover degrees up to {} but the snapshot reaches {}",
                self.max_degree(),
                max_degree
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(degree: u64, a_hat: f64) -> EstimateRecord {
        EstimateRecord {
            degree,
            n_k: 1,
            tail_k: 1,
            a_hat,
            sd: None,
            p_hat: None,
            floored: false,
        }
    }

    #[test]
    fn normalization_prefers_degree_one() {
        let est = AttachmentEstimate {
            records: vec![record(0, 2.0), record(1, 4.0), record(3, 8.0)],
            reference_degree: None,
        }
        .normalized();
        assert_eq!(est.reference_degree, Some(1));
        assert_eq!(est.record(1).unwrap().a_hat, 1.0);
        assert_eq!(est.record(0).unwrap().a_hat, 0.5);
        assert_eq!(est.record(3).unwrap().a_hat, 2.0);
    }

    #[test]
    fn table_carries_values_across_gaps() {
        let est = AttachmentEstimate {
            records: vec![record(1, 2.0), record(4, 8.0)],
            reference_degree: None,
        };
        let f = est.as_attachment_function().unwrap();
        // Head backfills from the first positive value, the gap carries
        // forward, and degrees beyond the table hold the last value.
        assert_eq!(f.value(0), 2.0);
        assert_eq!(f.value(2), 2.0);
        assert_eq!(f.value(3), 2.0);
        assert_eq!(f.value(4), 8.0);
        assert_eq!(f.value(40), 8.0);
    }

    #[test]
    fn geometric_bins_cover_contiguously() {
        let bins = BinningScheme::geometric(20, 2.0).unwrap();
        assert_eq!(bins.range(0), (0, 0));
        assert_eq!(bins.range(1), (1, 1));
        assert_eq!(bins.range(2), (2, 3));
        assert_eq!(bins.max_degree(), 20);
        for k in 0..=20u64 {
            let g = bins.bin_of(k).unwrap();
            let (s, e) = bins.range(g);
            assert!(k >= s && k <= e);
        }
        assert_eq!(bins.bin_of(21), None);
    }

    #[test]
    fn unit_bins_are_single_degrees() {
        let bins = BinningScheme::unit(3);
        assert_eq!(bins.len(), 4);
        assert_eq!(bins.range(2), (2, 2));
    }

    #[test]
    fn from_ranges_rejects_gaps() {
        assert!(BinningScheme::from_ranges(vec![(0, 1), (3, 4)]).is_err());
        assert!(BinningScheme::from_ranges(vec![(1, 2)]).is_err());
        assert!(BinningScheme::from_ranges(vec![(0, 1), (2, 5)]).is_ok());
    }
}
