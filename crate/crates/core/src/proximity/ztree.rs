use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::quadtree::{build_into, QNode, QuadView};
use crate::error::{Error, Result};
use crate::event::{EventSequence, Window};
use crate::morton::{MortonKey, Quantizer, DEFAULT_BITS, SHIFTS};
use crate::predicates::Point2;
use crate::tree::Layout;

/// Time tree whose nodes keep their points in Z-order for every shift,
/// together with a compressed quadtree over the unshifted order.
#[derive(Debug, Clone)]
pub struct ZTree {
    pub(super) layout: Layout,
    pub(super) quant: Quantizer,
    pub(super) pts: Vec<Point2>,
    /// `codes[s][k]`: code of point `k` under shift `s`.
    pub(super) codes: [Vec<u64>; SHIFTS],
    /// `lists[s][h]`: concatenated Z-sorted lists of the nodes at height `h`.
    lists: [Vec<Vec<u32>>; SHIFTS],
    qroot: Vec<u32>,
    qnodes: Vec<QNode>,
    qchildren: Vec<u32>,
}

impl ZTree {
    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        let lists: usize = self.lists.iter().flatten().map(|l| l.len() * 4).sum();
        self.pts.len() * 16
            + self.codes.iter().map(|c| c.len() * 8).sum::<usize>()
            + lists
            + self.qroot.len() * 4
            + self.qnodes.len() * std::mem::size_of::<QNode>()
            + self.qchildren.len() * 4
    }

    pub fn build(seq: &EventSequence) -> Result<Self> {
        Self::with_bits(seq, DEFAULT_BITS)
    }

    pub fn with_bits(seq: &EventSequence, bits: u32) -> Result<Self> {
        seq.require_dim(2)?;
        let quant = Quantizer::for_sequence(seq, bits)?;
        let n = seq.len();
        let pts: Vec<Point2> = (0..n).map(|k| seq.xy(k)).collect();
        let mut codes: [Vec<u64>; SHIFTS] = Default::default();
        for (s, c) in codes.iter_mut().enumerate() {
            *c = pts
                .iter()
                .map(|&p| quant.encode(p, s).map(|key| key.code))
                .collect::<Result<_>>()?;
        }
        let layout = Layout::new(n);
        let levels = layout.root_height() as usize + 1;
        let mut lists: [Vec<Vec<u32>>; SHIFTS] = Default::default();
        for s in 0..SHIFTS {
            let code = &codes[s];
            let mut lv: Vec<Vec<u32>> = Vec::with_capacity(levels);
            lv.push((0..n as u32).collect());
            for h in 1..levels {
                let prev = &lv[h - 1];
                let mut cur = Vec::with_capacity(n);
                let half = 1usize << (h - 1);
                let mut lo = 0;
                while lo < n {
                    let mid = (lo + half).min(n);
                    let hi = (lo + 2 * half).min(n);
                    merge_into(&prev[lo..mid], &prev[mid..hi], code, &mut cur);
                    lo = hi;
                }
                lv.push(cur);
            }
            lists[s] = lv;
        }
        let mut qroot = vec![u32::MAX; layout.slots()];
        let mut qnodes = Vec::new();
        let mut qchildren = Vec::new();
        for v in 1..layout.slots() {
            if !layout.is_real(v) {
                continue;
            }
            let (lo, hi) = layout.span(v);
            let list = &lists[0][layout.height(v) as usize][lo..hi];
            let code = &codes[0];
            qroot[v] = build_into(
                hi - lo,
                |t| code[list[t] as usize],
                &mut qnodes,
                &mut qchildren,
            );
        }
        Ok(ZTree {
            layout,
            quant,
            pts,
            codes,
            lists,
            qroot,
            qnodes,
            qchildren,
        })
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn quantizer(&self) -> &Quantizer {
        &self.quant
    }

    pub fn point(&self, k: usize) -> Point2 {
        self.pts[k]
    }

    pub fn code(&self, k: usize, shift: usize) -> u64 {
        self.codes[shift][k]
    }

    pub(super) fn check_window(&self, w: Window) -> Result<()> {
        if w.i > w.j || w.j >= self.len() {
            return Err(Error::InvalidWindow {
                i: w.i,
                j: w.j,
                n: self.len(),
            });
        }
        Ok(())
    }

    /// Z-sorted point list of node `v` under shift `s`.
    pub fn node_list(&self, v: usize, s: usize) -> &[u32] {
        let (lo, hi) = self.layout.span(v);
        &self.lists[s][self.layout.height(v) as usize][lo..hi]
    }

    /// Quadtree of node `v`; leaf positions index [`ZTree::node_list`] with
    /// shift 0.
    pub fn node_quadtree(&self, v: usize) -> Option<QuadView<'_>> {
        let root = *self.qroot.get(v)?;
        (root != u32::MAX).then_some(QuadView {
            nodes: &self.qnodes,
            children: &self.qchildren,
            root,
        })
    }

    pub fn cover_two(&self, w: Window) -> (usize, Option<usize>) {
        self.layout.cover_two(w)
    }

    /// Window point with the smallest code at least `key` under the key's
    /// shift (smallest index among equal codes).
    pub fn successor(&self, w: Window, key: MortonKey) -> Result<Option<usize>> {
        self.check_window(w)?;
        let s = key.shift as usize;
        if s >= SHIFTS {
            return Err(Error::InvalidShift(s));
        }
        let code = &self.codes[s];
        let mut best: Option<(u64, u32)> = None;
        for v in self.layout.canonical_cover(w) {
            let list = self.node_list(v, s);
            let t = list.partition_point(|&k| code[k as usize] < key.code);
            if let Some(&k) = list.get(t) {
                let cand = (code[k as usize], k);
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        Ok(best.map(|(_, k)| k as usize))
    }

    /// Window point with the largest code at most `key` under the key's
    /// shift (largest index among equal codes).
    pub fn predecessor(&self, w: Window, key: MortonKey) -> Result<Option<usize>> {
        self.check_window(w)?;
        let s = key.shift as usize;
        if s >= SHIFTS {
            return Err(Error::InvalidShift(s));
        }
        let code = &self.codes[s];
        let mut best: Option<(u64, u32)> = None;
        for v in self.layout.canonical_cover(w) {
            let list = self.node_list(v, s);
            let t = list.partition_point(|&k| code[k as usize] <= key.code);
            if t > 0 {
                let k = list[t - 1];
                let cand = (code[k as usize], k);
                if best.is_none_or(|b| cand > b) {
                    best = Some(cand);
                }
            }
        }
        Ok(best.map(|(_, k)| k as usize))
    }

    /// Window points in unshifted Z-order (ties by index).
    pub fn window_zorder(&self, w: Window) -> Result<Vec<usize>> {
        self.check_window(w)?;
        let code = &self.codes[0];
        let lists: Vec<&[u32]> = self
            .layout
            .canonical_cover(w)
            .into_iter()
            .map(|v| self.node_list(v, 0))
            .collect();
        let mut heap: BinaryHeap<Reverse<(u64, u32, usize, usize)>> = lists
            .iter()
            .enumerate()
            .map(|(l, list)| Reverse((code[list[0] as usize], list[0], l, 0)))
            .collect();
        let mut out = Vec::with_capacity(w.width());
        while let Some(Reverse((_, k, l, t))) = heap.pop() {
            out.push(k as usize);
            if let Some(&next) = lists[l].get(t + 1) {
                heap.push(Reverse((code[next as usize], next, l, t + 1)));
            }
        }
        Ok(out)
    }

    /// Window points whose unshifted code lies in `[z0, z1]`, appended to
    /// `out` in no particular order.
    pub(super) fn report_z_range(&self, cover: &[usize], z0: u64, z1: u64, out: &mut Vec<usize>) {
        let code = &self.codes[0];
        for &v in cover {
            let list = self.node_list(v, 0);
            let a = list.partition_point(|&k| code[k as usize] < z0);
            let b = list.partition_point(|&k| code[k as usize] <= z1);
            out.extend(list[a..b].iter().map(|&k| k as usize));
        }
    }

    /// Some window point whose unshifted code lies in `[z0, z1]`.
    pub(super) fn any_in_z_range(&self, cover: &[usize], z0: u64, z1: u64) -> Option<usize> {
        let code = &self.codes[0];
        cover.iter().find_map(|&v| {
            let list = self.node_list(v, 0);
            let a = list.partition_point(|&k| code[k as usize] < z0);
            list.get(a)
                .filter(|&&k| code[k as usize] <= z1)
                .map(|&k| k as usize)
        })
    }
}

fn merge_into(a: &[u32], b: &[u32], code: &[u64], out: &mut Vec<u32>) {
    let key = |k: u32| (code[k as usize], k);
    let (mut x, mut y) = (0, 0);
    while x < a.len() && y < b.len() {
        if key(a[x]) <= key(b[y]) {
            out.push(a[x]);
            x += 1;
        } else {
            out.push(b[y]);
            y += 1;
        }
    }
    out.extend_from_slice(&a[x..]);
    out.extend_from_slice(&b[y..]);
}
