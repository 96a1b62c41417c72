//! Dynamic weighted selection over node weights `D_i + δ`.
//!
//! The Fenwick tree stores integer degrees only. The offset contributes
//! `δ · i` to the prefix over the first `i` nodes, which is added while
//! descending the tree, so prefix sums of degrees stay exact for any
//! `δ > −1` (including negative offsets).

use crate::error::{check_delta, Result};

#[derive(Debug, Clone)]
pub struct WeightIndex {
    delta: f64,
    // 1-based Fenwick array over degrees; slot 0 unused.
    tree: Vec<u64>,
    degrees: Vec<u64>,
    degree_sum: u64,
}

impl WeightIndex {
    pub fn with_capacity(capacity: usize, delta: f64) -> Result<Self> {
        check_delta(delta)?;
        Ok(Self {
            delta,
            tree: vec![0; capacity + 1],
            degrees: Vec::with_capacity(capacity),
            degree_sum: 0,
        })
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn capacity(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn degree(&self, i: usize) -> u64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn degree_sum(&self) -> u64 {
        self.degree_sum
    }

    pub fn weight(&self, i: usize) -> f64 {
        self.degrees[i] as f64 + self.delta
    }

    /// Σ (D_i + δ) over the active nodes.
    pub fn total(&self) -> f64 {
        self.degree_sum as f64 + self.delta * self.len() as f64
    }

    /// Appends a node with the given degree. Grows the tree if full.
    pub fn push(&mut self, degree: u64) {
        if self.len() == self.capacity() {
            self.grow();
        }
        self.degrees.push(0);
        let i = self.len() - 1;
        self.add(i, degree);
    }

    /// Adds one to the degree of node `i` (0-based).
    pub fn increment(&mut self, i: usize) {
        self.add(i, 1);
    }

    fn add(&mut self, i: usize, by: u64) {
        self.degrees[i] += by;
        self.degree_sum += by;
        let mut pos = i + 1;
        while pos < self.tree.len() {
            self.tree[pos] += by;
            pos += pos & pos.wrapping_neg();
        }
    }

    fn grow(&mut self) {
        let cap = (self.capacity() * 2).max(4);
        let mut tree = vec![0u64; cap + 1];
        for (i, &d) in self.degrees.iter().enumerate() {
            let mut pos = i + 1;
            while pos <= cap {
                tree[pos] += d;
                pos += pos & pos.wrapping_neg();
            }
        }
        self.tree = tree;
    }

    /// Σ_{j < i} (D_j + δ).
    pub fn prefix(&self, i: usize) -> f64 {
        let mut acc = 0u64;
        let mut pos = i;
        while pos > 0 {
            acc += self.tree[pos];
            pos &= pos - 1;
        }
        acc as f64 + self.delta * i as f64
    }

    /// Node `i` such that `prefix(i) <= target < prefix(i + 1)`.
    ///
    /// `target` is expected in `[0, total())`; values outside are clamped to
    /// the first or last node.
    pub fn find(&self, target: f64) -> usize {
        let len = self.len();
        debug_assert!(len > 0);
        let mut pos = 0usize;
        let mut acc = 0u64;
        let mut step = if len == 0 { 0 } else { 1usize << (usize::BITS - 1 - len.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= len {
                let candidate = acc + self.tree[next];
                if candidate as f64 + self.delta * next as f64 <= target {
                    pos = next;
                    acc = candidate;
                }
            }
            step >>= 1;
        }
        pos.min(len - 1)
    }
}
