//! Time-resolved growth records and endpoint-free event sequences.

use super::{DegreeHistogram, Snapshot};
use crate::{Error, Result};

/// A single growth event: one per time-step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthEvent {
    /// A new isolated node joins the network.
    Node,
    /// A new directed edge between existing nodes.
    Edge { source: u32, target: u32 },
}

/// An event with its endpoints stripped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventToken {
    Node,
    Edge,
}

/// An ordered node/edge token sequence, one token per time-step.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventSequence(Vec<EventToken>);

impl EventSequence {
    pub fn new(tokens: Vec<EventToken>) -> Self {
        Self(tokens)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn tokens(&self) -> &[EventToken] {
        &self.0
    }

    /// Number of `Node` tokens.
    pub fn node_tokens(&self) -> usize {
        self.0.iter().filter(|t| matches!(t, EventToken::Node)).count()
    }
}

/// The full record of a growth process: a number of initial isolated nodes
/// followed by one event per time-step.
///
/// Node ids are dense: initial nodes take ids `0..initial_nodes` and each
/// `Node` event claims the next id. An `Edge` event may only reference ids
/// that exist at that step.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthTrace {
    pub initial_nodes: u32,
    pub events: Vec<GrowthEvent>,
    /// Original timestamps when the trace came from a timed edge list,
    /// parallel to `events`. Used to collapse simultaneous events into one
    /// time-step; not preserved by the trace file format.
    pub event_times: Option<Vec<f64>>,
}

impl GrowthTrace {
    pub fn new(initial_nodes: u32, events: Vec<GrowthEvent>) -> Self {
        Self {
            initial_nodes,
            events,
            event_times: None,
        }
    }

    /// Total nodes after all events.
    pub fn node_count(&self) -> u64 {
        self.initial_nodes as u64
            + self
                .events
                .iter()
                .filter(|e| matches!(e, GrowthEvent::Node))
                .count() as u64
    }

    /// Total edges after all events.
    pub fn edge_count(&self) -> u64 {
        self.events.len() as u64 - (self.node_count() - self.initial_nodes as u64)
    }

    /// Apply all events and return the resulting snapshot, validating that
    /// every edge references nodes that exist at its step.
    pub fn replay(&self) -> Result<Snapshot> {
        let mut degrees: Vec<u64> = vec![0; self.initial_nodes as usize];
        let mut edges = Vec::new();
        for (step, event) in self.events.iter().enumerate() {
            match *event {
                GrowthEvent::Node => degrees.push(0),
                GrowthEvent::Edge { source, target } => {
                    let n = degrees.len() as u64;
                    if source as u64 >= n || target as u64 >= n {
                        return Err(Error::InvalidParameter(format!(
                            "edge event at step {} references node {} but only {} nodes exist",
                            step + 1,
                            source.max(target),
                            n
                        )));
                    }
                    degrees[target as usize] += 1;
                    edges.push((source, target));
                }
            }
        }
        Ok(Snapshot {
            node_count: degrees.len() as u64,
            edge_count: edges.len() as u64,
            histogram: DegreeHistogram::from_degrees(degrees),
            edges: Some(edges),
        })
    }

    /// Project the trace onto its endpoint-free token sequence.
    pub fn event_sequence(&self) -> EventSequence {
        EventSequence::new(
            self.events
                .iter()
                .map(|e| match e {
                    GrowthEvent::Node => EventToken::Node,
                    GrowthEvent::Edge { .. } => EventToken::Edge,
                })
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn event_sequence_strips_endpoints() {
        let tr = GrowthTrace::new(
            2,
            vec![
                GrowthEvent::Node,
                GrowthEvent::Edge { source: 0, target: 1 },
                GrowthEvent::Node,
            ],
        );
        assert_eq!(
            tr.event_sequence().tokens(),
            &[EventToken::Node, EventToken::Edge, EventToken::Node]
        );
    }

    #[test]
    fn empty_trace_has_empty_sequence() {
        let tr = GrowthTrace::new(2, vec![]);
        assert!(tr.event_sequence().is_empty());
        let snap = tr.replay().unwrap();
        assert_eq!(snap.node_count, 2);
        assert_eq!(snap.edge_count, 0);
    }

    #[test]
    fn replay_rejects_edge_to_future_node() {
        let tr = GrowthTrace::new(2, vec![GrowthEvent::Edge { source: 0, target: 2 }]);
        assert!(tr.replay().is_err());
    }

    #[test]
    fn replay_counts_match() {
        let tr = GrowthTrace::new(
            2,
            vec![
                GrowthEvent::Edge { source: 0, target: 1 },
                GrowthEvent::Node,
                GrowthEvent::Edge { source: 2, target: 1 },
            ],
        );
        let snap = tr.replay().unwrap();
        assert_eq!(snap.node_count, 3);
        assert_eq!(snap.edge_count, 2);
        assert_eq!(snap.histogram.count(2), 1);
        assert_eq!(snap.histogram.count(0), 2);
        snap.validate().unwrap();
    }
}
