//! Mutable simulation state with weighted destination sampling.

use rand::Rng;

use super::{AttachmentFunction, FenwickTree};
use crate::net::DegreeHistogram;

/// Rebuild the weight structure from scratch after this many point updates
/// to bound floating-point drift.
const REBUILD_INTERVAL: u64 = 1 << 20;

/// Per-node degrees, per-degree node buckets and the degree-class weights
/// `W_k = A_k·n_k` kept in a prefix-sum tree, so a destination is sampled
/// with probability `A_{deg(v)} / H` in two stages: the degree class by
/// weighted prefix search, then a node uniformly within the class bucket.
#[derive(Debug, Clone)]
pub struct SimState {
    attachment: AttachmentFunction,
    degrees: Vec<u32>,
    bucket_pos: Vec<u32>,
    buckets: Vec<Vec<u32>>,
    class_weight: Vec<f64>,
    tree: FenwickTree,
    updates: u64,
}

impl SimState {
    /// Empty state; nodes are added one by one.
    pub fn new(attachment: AttachmentFunction) -> Self {
        Self {
            attachment,
            degrees: Vec::new(),
            bucket_pos: Vec::new(),
            buckets: vec![Vec::new()],
            class_weight: vec![0.0],
            tree: FenwickTree::with_len(1),
            updates: 0,
        }
    }

    /// State holding the given nodes, identified by index.
    pub fn from_degrees(degrees: &[u32], attachment: AttachmentFunction) -> Self {
        let mut state = Self::new(attachment);
        for &d in degrees {
            state.push_node_with_degree(d);
        }
        state
    }

    pub fn node_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn degree(&self, node: u32) -> u32 {
        self.degrees[node as usize]
    }

    /// Total sampling weight `H = Σ_k A_k·n_k` as tracked incrementally.
    pub fn total_weight(&self) -> f64 {
        self.tree.total()
    }

    /// `H` recomputed exactly from current bucket occupancies, for
    /// consistency checks against [`SimState::total_weight`].
    pub fn recompute_total_weight(&self) -> f64 {
        self.buckets
            .iter()
            .enumerate()
            .map(|(k, bucket)| self.attachment.value(k as u64) * bucket.len() as f64)
            .sum()
    }

    /// Add one isolated node and return its id.
    pub fn add_node(&mut self) -> u32 {
        self.push_node_with_degree(0)
    }

    fn push_node_with_degree(&mut self, degree: u32) -> u32 {
        let id = self.degrees.len() as u32;
        self.ensure_class(degree as usize);
        self.degrees.push(degree);
        self.bucket_pos.push(self.buckets[degree as usize].len() as u32);
        self.buckets[degree as usize].push(id);
        let w = self.attachment.value(degree as u64);
        self.class_weight[degree as usize] += w;
        self.tree.add(degree as usize, w);
        self.bump_updates(1);
        id
    }

    /// Move `node` from its degree class `k` to `k + 1`.
    pub fn increment_degree(&mut self, node: u32) {
        let k = self.degrees[node as usize] as usize;
        self.remove_from_bucket(node, k);
        let next = k + 1;
        self.ensure_class(next);
        self.degrees[node as usize] = next as u32;
        self.bucket_pos[node as usize] = self.buckets[next].len() as u32;
        self.buckets[next].push(node);

        // When a class empties, zero its weight exactly instead of
        // subtracting, so no residue accumulates in vacated classes.
        let w_k = if self.buckets[k].is_empty() {
            let old = self.class_weight[k];
            self.class_weight[k] = 0.0;
            -old
        } else {
            let a = self.attachment.value(k as u64);
            self.class_weight[k] -= a;
            -a
        };
        self.tree.add(k, w_k);
        let a_next = self.attachment.value(next as u64);
        self.class_weight[next] += a_next;
        self.tree.add(next, a_next);
        self.bump_updates(2);
    }

    /// Sample a destination with probability `A_{deg(v)} / H`.
    pub fn sample_destination<R: Rng>(&self, rng: &mut R) -> u32 {
        debug_assert!(self.node_count() > 0);
        let target = rng.random::<f64>() * self.tree.total();
        let mut class = self.tree.search(target);
        if self.buckets[class].is_empty() {
            // Rounding pushed the search into an unpopulated class; fall
            // back to the nearest populated one.
            class = self.nearest_populated(class);
        }
        let bucket = &self.buckets[class];
        bucket[rng.random_range(0..bucket.len())]
    }

    /// Current in-degree histogram.
    pub fn histogram(&self) -> DegreeHistogram {
        let mut h = DegreeHistogram::new();
        for (k, bucket) in self.buckets.iter().enumerate() {
            h.add_nodes(k as u64, bucket.len() as u64);
        }
        h
    }

    fn nearest_populated(&self, from: usize) -> usize {
        let mut below = from;
        loop {
            if !self.buckets[below].is_empty() {
                return below;
            }
            if below == 0 {
                break;
            }
            below -= 1;
        }
        for above in from + 1..self.buckets.len() {
            if !self.buckets[above].is_empty() {
                return above;
            }
        }
        panic!("no populated degree class");
    }

    fn remove_from_bucket(&mut self, node: u32, class: usize) {
        let pos = self.bucket_pos[node as usize] as usize;
        let bucket = &mut self.buckets[class];
        let last = bucket.len() - 1;
        bucket.swap_remove(pos);
        if pos <= last && pos < bucket.len() {
            let moved = bucket[pos];
            self.bucket_pos[moved as usize] = pos as u32;
        }
    }

    fn ensure_class(&mut self, class: usize) {
        while self.buckets.len() <= class {
            self.buckets.push(Vec::new());
            self.class_weight.push(0.0);
        }
        if !self.tree.fits(self.class_weight.len()) {
            self.tree = FenwickTree::from_values(&self.class_weight);
        } else if self.tree.len() < self.class_weight.len() {
            self.tree.grow_len(self.class_weight.len());
        }
    }

    fn bump_updates(&mut self, n: u64) {
        self.updates += n;
        if self.updates >= REBUILD_INTERVAL {
            self.rebuild();
        }
    }

    /// Recompute class weights exactly and rebuild the prefix-sum tree.
    fn rebuild(&mut self) {
        for (k, bucket) in self.buckets.iter().enumerate() {
            self.class_weight[k] = self.attachment.value(k as u64) * bucket.len() as f64;
        }
        self.tree.assign(&self.class_weight);
        self.updates = 0;
    }
}
