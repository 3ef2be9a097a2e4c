//! A single observed network state.

use super::DegreeHistogram;
use crate::{Error, Result};

/// One observed network state: node and edge totals, the in-degree
/// histogram, and optionally the raw edges.
///
/// Multi-edges and self-loops are kept; each parallel edge contributes to
/// the target's in-degree, so `Σ_k k·n_k == edge_count`.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub node_count: u64,
    pub edge_count: u64,
    pub histogram: DegreeHistogram,
    /// `(source, target)` pairs when the snapshot was built from explicit
    /// edges; `None` when only the histogram is known.
    pub edges: Option<Vec<(u32, u32)>>,
}

impl Snapshot {
    /// Build from an explicit edge list over nodes `0..node_count`.
    /// Nodes that receive no edge are counted with in-degree 0.
    pub fn from_edges(node_count: u64, edges: Vec<(u32, u32)>) -> Result<Self> {
        let mut degrees = vec![0u64; node_count as usize];
        for &(source, target) in &edges {
            if source as u64 >= node_count || target as u64 >= node_count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({source}, {target}) references a node outside 0..{node_count}"
                )));
            }
            degrees[target as usize] += 1;
        }
        Ok(Self {
            node_count,
            edge_count: edges.len() as u64,
            histogram: DegreeHistogram::from_degrees(degrees),
            edges: Some(edges),
        })
    }

    /// Check the structural invariants relating totals and histogram.
    pub fn validate(&self) -> Result<()> {
        if self.histogram.total_nodes() != self.node_count {
            return Err(Error::InvalidParameter(format!(
                "histogram covers {} nodes but snapshot claims {}",
                self.histogram.total_nodes(),
                self.node_count
            )));
        }
        if self.histogram.weighted_degree_sum() != self.edge_count {
            return Err(Error::InvalidParameter(format!(
                "histogram accounts for {} edges but snapshot claims {}",
                self.histogram.weighted_degree_sum(),
                self.edge_count
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edges_counts_in_degrees() {
        let s = Snapshot::from_edges(3, vec![(0, 1), (2, 1)]).unwrap();
        assert_eq!(s.node_count, 3);
        assert_eq!(s.edge_count, 2);
        assert_eq!(s.histogram.count(0), 2);
        assert_eq!(s.histogram.count(2), 1);
        s.validate().unwrap();
    }

    #[test]
    fn from_edges_rejects_out_of_range() {
        assert!(Snapshot::from_edges(2, vec![(0, 5)]).is_err());
    }
}
