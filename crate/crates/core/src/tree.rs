//! Implicit balanced binary tree over sequence indices.
//!
//! Nodes use heap numbering over a padded power-of-two leaf count: the root
//! is node 1, the children of `v` are `2v` and `2v + 1`, and leaf `k` is node
//! `size + k`. Nodes on one level are numbered consecutively, so the level
//! neighbors of `v` are `v - 1` and `v + 1`.

use crate::event::Window;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Layout {
    n: usize,
    size: usize,
    levels: u32,
}

impl Layout {
    pub fn new(n: usize) -> Self {
        let size = n.max(1).next_power_of_two();
        Layout {
            n,
            size,
            levels: size.trailing_zeros(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Number of leaves including padding.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Total number of node slots (node 0 is unused).
    pub fn slots(&self) -> usize {
        2 * self.size
    }

    /// Height of the root; leaves have height 0.
    pub fn root_height(&self) -> u32 {
        self.levels
    }

    pub fn leaf(&self, k: usize) -> usize {
        self.size + k
    }

    pub fn height(&self, v: usize) -> u32 {
        debug_assert!(v >= 1 && v < self.slots());
        self.levels - v.ilog2()
    }

    /// Leaf range `[lo, hi)` covered by `v`, clipped to the real leaves.
    pub fn span(&self, v: usize) -> (usize, usize) {
        let h = self.height(v);
        let lo = (v << h) - self.size;
        let hi = ((v + 1) << h) - self.size;
        (lo.min(self.n), hi.min(self.n))
    }

    /// Whether `v` covers at least one real leaf.
    pub fn is_real(&self, v: usize) -> bool {
        let (lo, hi) = self.span(v);
        lo < hi
    }

    /// Maximal nodes whose spans partition the window, left to right.
    pub fn canonical_cover(&self, w: Window) -> Vec<usize> {
        let mut left = Vec::new();
        let mut right = Vec::new();
        let mut l = w.i + self.size;
        let mut r = w.j + self.size + 1;
        while l < r {
            if l & 1 == 1 {
                left.push(l);
                l += 1;
            }
            if r & 1 == 1 {
                r -= 1;
                right.push(r);
            }
            l >>= 1;
            r >>= 1;
        }
        left.extend(right.into_iter().rev());
        left
    }

    /// One or two adjacent nodes of the same level, each of span at most twice
    /// the window width, whose union covers the window.
    pub fn cover_two(&self, w: Window) -> (usize, Option<usize>) {
        let width = w.width();
        let h = (2 * width - 1).ilog2().min(self.levels);
        let a = (w.i + self.size) >> h;
        let b = (w.j + self.size) >> h;
        if a == b {
            (a, None)
        } else {
            (a, Some(b))
        }
    }
}
