//! Per-degree node counts of a network at one instant.

use std::collections::BTreeMap;

/// Counts `n_k` of nodes per in-degree `k` at a single instant.
///
/// Only strictly positive counts are stored; an absent degree means
/// `n_k = 0`. The running total of nodes is kept alongside the map so that
/// `sum of counts == total_nodes` holds at all times.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DegreeHistogram {
    counts: BTreeMap<u64, u64>,
    total_nodes: u64,
}

impl DegreeHistogram {
    /// Empty histogram.
    pub fn new() -> Self {
        Self::default()
    }

    /// Build from one degree value per node.
    pub fn from_degrees<I>(degrees: I) -> Self
    where
        I: IntoIterator<Item = u64>,
    {
        let mut h = Self::new();
        for d in degrees {
            h.add_nodes(d, 1);
        }
        h
    }

    /// Add `count` nodes of the given degree.
    pub fn add_nodes(&mut self, degree: u64, count: u64) {
        if count == 0 {
            return;
        }
        *self.counts.entry(degree).or_insert(0) += count;
        self.total_nodes += count;
    }

    /// Number of nodes with exactly this degree (0 when absent).
    pub fn count(&self, degree: u64) -> u64 {
        self.counts.get(&degree).copied().unwrap_or(0)
    }

    pub fn total_nodes(&self) -> u64 {
        self.total_nodes
    }

    /// Largest degree present, if any node exists.
    pub fn max_degree(&self) -> Option<u64> {
        self.counts.keys().next_back().copied()
    }

    /// Number of distinct degrees present.
    pub fn distinct_degrees(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Iterate `(degree, count)` in increasing degree order.
    pub fn iter(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().map(|(&k, &n)| (k, n))
    }

    /// Degrees present, increasing.
    pub fn degrees(&self) -> impl Iterator<Item = u64> + '_ {
        self.counts.keys().copied()
    }

    /// `Σ_k k·n_k`, i.e. the edge count of the snapshot this histogram
    /// describes.
    pub fn weighted_degree_sum(&self) -> u64 {
        self.counts.iter().map(|(&k, &n)| k * n).sum()
    }

    /// For every stored degree `k`, the number of nodes with degree
    /// strictly greater than `k`. Values are non-increasing in `k` and the
    /// largest stored degree maps to 0.
    pub fn tail_counts(&self) -> BTreeMap<u64, u64> {
        let mut out = BTreeMap::new();
        let mut above = 0u64;
        for (&k, &n) in self.counts.iter().rev() {
            out.insert(k, above);
            above += n;
        }
        out
    }

    /// Number of nodes with degree strictly greater than `degree`
    /// (defined for any degree, not just stored ones).
    pub fn tail_count_at(&self, degree: u64) -> u64 {
        self.counts
            .range(degree + 1..)
            .map(|(_, &n)| n)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn hist(pairs: &[(u64, u64)]) -> DegreeHistogram {
        let mut h = DegreeHistogram::new();
        for &(k, n) in pairs {
            h.add_nodes(k, n);
        }
        h
    }

    #[test]
    fn tail_counts_small() {
        let h = hist(&[(0, 5), (1, 3), (2, 2)]);
        let t = h.tail_counts();
        assert_eq!(t[&0], 5);
        assert_eq!(t[&1], 2);
        assert_eq!(t[&2], 0);
    }

    #[test]
    fn tail_counts_single_degree() {
        let h = hist(&[(0, 1)]);
        assert_eq!(h.tail_counts()[&0], 0);
    }

    #[test]
    fn weighted_degree_sum_counts_edges() {
        let h = hist(&[(0, 2), (2, 1)]);
        assert_eq!(h.weighted_degree_sum(), 2);
        assert_eq!(h.total_nodes(), 3);
    }

    proptest! {
        // Oracle: brute-force per-degree recount over the expanded node list.
        #[test]
        fn tail_matches_linear_recount(degrees in proptest::collection::vec(0u64..50, 1..200)) {
            let h = DegreeHistogram::from_degrees(degrees.iter().copied());
            let tails = h.tail_counts();
            for (&k, &tail) in &tails {
                let brute = degrees.iter().filter(|&&d| d > k).count() as u64;
                prop_assert_eq!(tail, brute);
            }
        }

        // tail(k) plus the cumulative count at or below k is the node total.
        #[test]
        fn tail_plus_head_is_total(degrees in proptest::collection::vec(0u64..30, 1..200)) {
            let h = DegreeHistogram::from_degrees(degrees.iter().copied());
            for (k, tail) in h.tail_counts() {
                let head: u64 = h.iter().filter(|&(d, _)| d <= k).map(|(_, n)| n).sum();
                prop_assert_eq!(tail + head, h.total_nodes());
            }
        }
    }
}
