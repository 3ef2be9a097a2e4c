//! Binary-indexed prefix-sum tree over f64 weights.

/// Fenwick tree supporting point update, total, and weighted search in
/// `O(log n)`. Capacity is kept at a power of two so the search can descend
/// bit by bit.
#[derive(Debug, Clone)]
pub struct FenwickTree {
    // 1-based storage; index 0 unused.
    tree: Vec<f64>,
    len: usize,
    capacity: usize,
}

impl FenwickTree {
    /// Tree of `len` zero weights.
    pub fn with_len(len: usize) -> Self {
        let capacity = len.max(1).next_power_of_two();
        Self {
            tree: vec![0.0; capacity + 1],
            len,
            capacity,
        }
    }

    /// Tree initialized from explicit weights.
    pub fn from_values(values: &[f64]) -> Self {
        let mut t = Self::with_len(values.len());
        t.assign(values);
        t
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Add `delta` to the weight at `index`.
    pub fn add(&mut self, index: usize, delta: f64) {
        debug_assert!(index < self.len);
        let mut i = index + 1;
        while i <= self.capacity {
            self.tree[i] += delta;
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of the first `count` weights.
    pub fn prefix(&self, count: usize) -> f64 {
        let mut i = count.min(self.len);
        let mut sum = 0.0;
        while i > 0 {
            sum += self.tree[i];
            i -= i & i.wrapping_neg();
        }
        sum
    }

    /// Sum of all weights.
    pub fn total(&self) -> f64 {
        self.prefix(self.len)
    }

    /// Smallest index whose prefix sum (inclusive) strictly exceeds
    /// `target`. With non-negative weights and `0 ≤ target < total()`, this
    /// selects index `i` with probability `w_i / total` when `target` is
    /// uniform; zero-weight entries are never selected. Returns `len - 1`
    /// when rounding pushes `target` to or past the total.
    pub fn search(&self, mut target: f64) -> usize {
        let mut pos = 0usize;
        let mut step = self.capacity;
        while step > 0 {
            let next = pos + step;
            if next <= self.capacity && self.tree[next] <= target {
                target -= self.tree[next];
                pos = next;
            }
            step >>= 1;
        }
        pos.min(self.len.saturating_sub(1))
    }

    /// Replace all weights, discarding accumulated rounding drift. The tree
    /// is rebuilt in `O(n)`; `values.len()` must not exceed the capacity
    /// this tree was created with unless it grows, so callers resizing past
    /// capacity should construct a fresh tree via [`FenwickTree::from_values`].
    pub fn assign(&mut self, values: &[f64]) {
        assert!(values.len() <= self.capacity, "assign beyond tree capacity");
        self.len = values.len();
        for slot in self.tree.iter_mut() {
            *slot = 0.0;
        }
        self.tree[1..=values.len()].copy_from_slice(values);
        for i in 1..=self.capacity {
            let parent = i + (i & i.wrapping_neg());
            if parent <= self.capacity {
                let v = self.tree[i];
                self.tree[parent] += v;
            }
        }
    }

    /// Whether `needed` entries fit without rebuilding.
    pub fn fits(&self, needed: usize) -> bool {
        needed <= self.capacity
    }

    /// Extend the logical length (new entries weigh zero). Panics beyond
    /// capacity; check with [`FenwickTree::fits`] first.
    pub fn grow_len(&mut self, len: usize) {
        assert!(len <= self.capacity, "grow beyond tree capacity");
        debug_assert!(len >= self.len);
        self.len = len;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn prefix_and_total() {
        let t = FenwickTree::from_values(&[2.0, 4.0, 1.0, 0.0, 1.5]);
        assert_eq!(t.prefix(0), 0.0);
        assert_eq!(t.prefix(2), 6.0);
        assert_eq!(t.total(), 8.5);
    }

    #[test]
    fn search_picks_by_cumulative_weight() {
        let t = FenwickTree::from_values(&[2.0, 0.0, 3.0]);
        assert_eq!(t.search(0.0), 0);
        assert_eq!(t.search(1.999), 0);
        assert_eq!(t.search(2.0), 2); // zero-weight entry skipped
        assert_eq!(t.search(4.999), 2);
    }

    #[test]
    fn updates_shift_search_boundaries() {
        let mut t = FenwickTree::from_values(&[1.0, 1.0]);
        t.add(0, 3.0);
        assert_eq!(t.total(), 5.0);
        assert_eq!(t.search(3.5), 0);
        assert_eq!(t.search(4.5), 1);
    }

    proptest! {
        #[test]
        fn matches_naive_prefix_sums(
            values in proptest::collection::vec(0.0f64..10.0, 1..64),
            updates in proptest::collection::vec((0usize..64, -5.0f64..5.0), 0..32),
        ) {
            let mut reference = values.clone();
            let mut tree = FenwickTree::from_values(&values);
            for (idx, delta) in updates {
                let idx = idx % reference.len();
                // Weights stay non-negative so search stays meaningful.
                let delta = if reference[idx] + delta < 0.0 { -reference[idx] } else { delta };
                reference[idx] += delta;
                tree.add(idx, delta);
            }
            for count in 0..=reference.len() {
                let naive: f64 = reference[..count].iter().sum();
                prop_assert!((tree.prefix(count) - naive).abs() <= 1e-9 * naive.abs().max(1.0));
            }
            // Search agrees with a linear scan on a few probe points.
            let total: f64 = reference.iter().sum();
            if total > 0.0 {
                for frac in [0.0, 0.3, 0.7, 0.999] {
                    let target = frac * total;
                    let mut acc = 0.0;
                    let mut expect = reference.len() - 1;
                    for (i, w) in reference.iter().enumerate() {
                        acc += w;
                        if acc > target {
                            expect = i;
                            break;
                        }
                    }
                    prop_assert_eq!(tree.search(target), expect);
                }
            }
        }
    }
}
