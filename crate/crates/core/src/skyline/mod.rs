//! Windowed skyline (maxima) queries.
//!
//! For every element `k` the index stores `pi[k] <= k <= phi[k]`, the widest
//! window boundaries within which `e_k` stays maximal. Then `e_k` is on the
//! skyline of `[i, j]` exactly when `pi[k] <= i <= k <= j <= phi[k]`, which is
//! a rectangle stabbing query answered by [`SkylineIndex`].

mod stab;

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::event::{EventSequence, Window};

pub use stab::StabIndex;

/// Irreflexive, transitive relation over the elements of a sequence.
/// `precedes(seq, a, b)` means `e_a < e_b`, i.e. `e_b` beats `e_a`.
pub trait Preorder {
    fn precedes(&self, seq: &EventSequence, a: usize, b: usize) -> bool;
}

/// `e_a < e_b` iff every coordinate of `e_b` is at least that of `e_a` and the
/// coordinate vectors differ. Identical points do not dominate each other.
#[derive(Debug, Clone, Copy, Default)]
pub struct Dominance;

pub fn dominates(p: &[f64], q: &[f64]) -> bool {
    let mut strict = false;
    for (a, b) in p.iter().zip(q) {
        if a < b {
            return false;
        }
        strict |= a > b;
    }
    strict
}

impl Preorder for Dominance {
    fn precedes(&self, seq: &EventSequence, a: usize, b: usize) -> bool {
        dominates(seq.coords(b), seq.coords(a))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiPhiTable {
    pub pi: Vec<usize>,
    pub phi: Vec<usize>,
}

impl PiPhiTable {
    pub fn len(&self) -> usize {
        self.pi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pi.is_empty()
    }
}

/// Computes `pi` and `phi` under dominance. The plane uses an
/// `O(n log n)` sweep; other dimensions fall back to the pairwise scan.
pub fn compute_phi_pi(seq: &EventSequence) -> PiPhiTable {
    if seq.dim() == 2 {
        sweep_2d(seq)
    } else {
        compute_phi_pi_with(seq, &Dominance)
    }
}

/// Pairwise scan for an arbitrary preorder, `O(n^2)` in the worst case.
pub fn compute_phi_pi_with<P: Preorder>(seq: &EventSequence, order: &P) -> PiPhiTable {
    let n = seq.len();
    let mut pi = vec![0; n];
    let mut phi = vec![n - 1; n];
    for k in 0..n {
        if let Some(j) = (k + 1..n).find(|&j| order.precedes(seq, k, j)) {
            phi[k] = j - 1;
        }
        if let Some(i) = (0..k).rev().find(|&i| order.precedes(seq, k, i)) {
            pi[k] = i + 1;
        }
    }
    PiPhiTable { pi, phi }
}

/// Min-segment tree over lexicographic ranks holding the y of alive points.
struct AliveTree {
    size: usize,
    min: Vec<f64>,
    owner: Vec<usize>,
}

impl AliveTree {
    fn new(n: usize) -> Self {
        let size = n.next_power_of_two();
        AliveTree {
            size,
            min: vec![f64::INFINITY; 2 * size],
            owner: vec![usize::MAX; size],
        }
    }

    fn set(&mut self, rank: usize, y: f64, k: usize) {
        self.owner[rank] = k;
        let mut v = rank + self.size;
        self.min[v] = y;
        v >>= 1;
        while v > 0 {
            self.min[v] = self.min[2 * v].min(self.min[2 * v + 1]);
            v >>= 1;
        }
    }

    /// Removes and returns every alive element with rank `< end` and
    /// `y <= ymax`.
    fn drain(&mut self, end: usize, ymax: f64, out: &mut Vec<usize>) {
        let mut stack = vec![(1usize, 0usize, self.size)];
        let mut hits = Vec::new();
        while let Some((v, lo, hi)) = stack.pop() {
            if lo >= end || self.min[v] > ymax {
                continue;
            }
            if hi - lo == 1 {
                hits.push(lo);
                continue;
            }
            let mid = (lo + hi) / 2;
            stack.push((2 * v + 1, mid, hi));
            stack.push((2 * v, lo, mid));
        }
        for rank in hits {
            out.push(self.owner[rank]);
            self.set(rank, f64::INFINITY, usize::MAX);
        }
    }
}

fn sweep_2d(seq: &EventSequence) -> PiPhiTable {
    let n = seq.len();
    let mut order: Vec<usize> = (0..n).collect();
    let key = |k: usize| {
        let p = seq.xy(k);
        (p[0], p[1])
    };
    order.sort_by(|&a, &b| key(a).partial_cmp(&key(b)).unwrap().then(a.cmp(&b)));
    let mut rank = vec![0; n];
    // Number of elements lexicographically strictly below each element.
    let mut below = vec![0; n];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
        below[k] = if r > 0 && key(order[r - 1]) == key(k) {
            below[order[r - 1]]
        } else {
            r
        };
    }
    let sweep = |forward: bool| {
        let mut tree = AliveTree::new(n);
        let mut bound = vec![if forward { n - 1 } else { 0 }; n];
        let mut hits = Vec::new();
        let steps: Box<dyn Iterator<Item = usize>> = if forward {
            Box::new(0..n)
        } else {
            Box::new((0..n).rev())
        };
        for j in steps {
            hits.clear();
            tree.drain(below[j], seq.xy(j)[1], &mut hits);
            for &k in &hits {
                bound[k] = if forward { j - 1 } else { j + 1 };
            }
            tree.set(rank[j], seq.xy(j)[1], j);
        }
        bound
    };
    let phi = sweep(true);
    let pi = sweep(false);
    PiPhiTable { pi, phi }
}

/// Skyline index over an event sequence.
#[derive(Debug, Clone)]
pub struct SkylineIndex {
    table: PiPhiTable,
    stab: StabIndex,
    colors: Option<Vec<u32>>,
}

impl SkylineIndex {
    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        self.stab.memory_bytes()
            + (self.table.pi.len() + self.table.phi.len()) * std::mem::size_of::<usize>()
            + self.colors.as_ref().map_or(0, |c| c.len() * 4)
    }

    pub fn build(seq: &EventSequence) -> Self {
        let table = compute_phi_pi(seq);
        let colors = if seq.is_colored() {
            (0..seq.len()).map(|k| seq.color(k)).collect()
        } else {
            None
        };
        Self::from_table(table, colors)
    }

    pub fn from_table(table: PiPhiTable, colors: Option<Vec<u32>>) -> Self {
        let stab = StabIndex::build(&table);
        SkylineIndex {
            table,
            stab,
            colors,
        }
    }

    pub fn table(&self) -> &PiPhiTable {
        &self.table
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    fn check(&self, w: Window) -> Result<()> {
        if w.i > w.j || w.j >= self.len() {
            return Err(Error::InvalidWindow {
                i: w.i,
                j: w.j,
                n: self.len(),
            });
        }
        Ok(())
    }

    /// Skyline indices of the window in increasing order.
    pub fn query(&self, w: Window) -> Result<Vec<usize>> {
        self.check(w)?;
        let mut out = Vec::new();
        self.stab.report(w.i, w.j, &mut out);
        out.sort_unstable();
        Ok(out)
    }

    pub fn count(&self, w: Window) -> Result<usize> {
        self.check(w)?;
        Ok(self.stab.count(w.i, w.j))
    }

    pub fn colors(&self, w: Window) -> Result<BTreeSet<u32>> {
        let palette = self
            .colors
            .as_ref()
            .ok_or(Error::MissingColor(w.i))?;
        self.check(w)?;
        let mut out = Vec::new();
        self.stab.report(w.i, w.j, &mut out);
        Ok(out.into_iter().map(|k| palette[k]).collect())
    }
}
