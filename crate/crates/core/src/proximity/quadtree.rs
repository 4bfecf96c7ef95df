//! Compressed quadtrees built from Z-sorted codes.
//!
//! Internal nodes are stored in an arena; a child reference with the high bit
//! set is a single point, given by its position in the Z-sorted list. Points
//! whose codes coincide share a level-0 internal node, so leaves always hold
//! exactly one point.

use crate::error::{Error, Result};
use crate::morton::lca_level;

pub const LEAF: u32 = 1 << 31;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct QNode {
    /// Z-list positions `[start, end)` of the points below this node.
    pub start: u32,
    pub end: u32,
    pub first_child: u32,
    pub nchild: u32,
    /// Cell level: the cell has side `2^level` grid units.
    pub level: u8,
}

#[inline]
pub fn is_leaf(r: u32) -> bool {
    r & LEAF != 0
}

#[inline]
pub fn leaf(pos: usize) -> u32 {
    pos as u32 | LEAF
}

#[inline]
pub fn leaf_pos(r: u32) -> usize {
    (r & !LEAF) as usize
}

/// Appends the quadtree of `m` Z-sorted codes to the arenas and returns the
/// root reference. `code(t)` is the code at list position `t`.
pub fn build_into(
    m: usize,
    code: impl Fn(usize) -> u64,
    nodes: &mut Vec<QNode>,
    children: &mut Vec<u32>,
) -> u32 {
    struct Frame {
        level: u32,
        start: u32,
        cstart: usize,
    }
    let start_of = |r: u32, nodes: &Vec<QNode>| {
        if is_leaf(r) {
            leaf_pos(r) as u32
        } else {
            nodes[r as usize].start
        }
    };
    let mut stack: Vec<Frame> = Vec::new();
    let mut pending: Vec<u32> = Vec::new();
    let close = |f: Frame, end: usize, pending: &mut Vec<u32>, nodes: &mut Vec<QNode>, children: &mut Vec<u32>| {
        let first_child = children.len() as u32;
        children.extend(pending.drain(f.cstart..));
        nodes.push(QNode {
            start: f.start,
            end: end as u32,
            first_child,
            nchild: children.len() as u32 - first_child,
            level: f.level as u8,
        });
        (nodes.len() - 1) as u32
    };
    let mut cur = leaf(0);
    for t in 0..m.saturating_sub(1) {
        let level = lca_level(code(t), code(t + 1));
        while stack.last().is_some_and(|f| f.level < level) {
            let f = stack.pop().unwrap();
            pending.push(cur);
            cur = close(f, t + 1, &mut pending, nodes, children);
        }
        if stack.last().is_some_and(|f| f.level == level) {
            pending.push(cur);
        } else {
            let cstart = pending.len();
            pending.push(cur);
            stack.push(Frame {
                level,
                start: start_of(cur, nodes),
                cstart,
            });
        }
        cur = leaf(t + 1);
    }
    while let Some(f) = stack.pop() {
        pending.push(cur);
        cur = close(f, m, &mut pending, nodes, children);
    }
    cur
}

/// Read-only view of one quadtree inside shared arenas.
#[derive(Debug, Clone, Copy)]
pub struct QuadView<'a> {
    pub nodes: &'a [QNode],
    pub children: &'a [u32],
    pub root: u32,
}

impl<'a> QuadView<'a> {
    pub fn node(&self, r: u32) -> &'a QNode {
        &self.nodes[r as usize]
    }

    pub fn kids(&self, r: u32) -> &'a [u32] {
        let n = self.node(r);
        &self.children[n.first_child as usize..(n.first_child + n.nchild) as usize]
    }

    /// Z-list positions covered by a reference.
    pub fn range(&self, r: u32) -> (usize, usize) {
        if is_leaf(r) {
            (leaf_pos(r), leaf_pos(r) + 1)
        } else {
            let n = self.node(r);
            (n.start as usize, n.end as usize)
        }
    }

    /// Level of the cell of a reference; leaves report level 0.
    pub fn level(&self, r: u32) -> u32 {
        if is_leaf(r) {
            0
        } else {
            self.node(r).level as u32
        }
    }
}

/// Compressed quadtree owning its arenas, over a Z-sorted list of codes.
#[derive(Debug, Clone)]
pub struct CompressedQuadtree {
    pub nodes: Vec<QNode>,
    pub children: Vec<u32>,
    pub root: u32,
    pub len: usize,
}

impl CompressedQuadtree {
    /// Builds the quadtree of `codes`, which must be sorted.
    pub fn from_zorder(codes: &[u64]) -> Result<Self> {
        if codes.is_empty() {
            return Err(Error::EmptyWindow);
        }
        if cfg!(debug_assertions) {
            if let Some(t) = codes.windows(2).position(|p| p[0] > p[1]) {
                return Err(Error::OrderingViolated(t + 1));
            }
        }
        let mut nodes = Vec::with_capacity(codes.len());
        let mut children = Vec::with_capacity(2 * codes.len());
        let root = build_into(codes.len(), |t| codes[t], &mut nodes, &mut children);
        Ok(CompressedQuadtree {
            nodes,
            children,
            root,
            len: codes.len(),
        })
    }

    pub fn view(&self) -> QuadView<'_> {
        QuadView {
            nodes: &self.nodes,
            children: &self.children,
            root: self.root,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morton::{cell_last, cell_prefix, interleave};
    use rand::{Rng, SeedableRng};

    #[test]
    fn single_point() {
        let q = CompressedQuadtree::from_zorder(&[5]).unwrap();
        assert_eq!(q.root, leaf(0));
        assert!(q.nodes.is_empty());
    }

    #[test]
    fn four_quadrants() {
        let mut codes: Vec<u64> = [(1, 1), (3, 1), (1, 3), (3, 3)]
            .iter()
            .map(|&(x, y)| interleave(x, y))
            .collect();
        codes.sort();
        let q = CompressedQuadtree::from_zorder(&codes).unwrap();
        let v = q.view();
        assert_eq!(v.kids(q.root).len(), 4);
        assert!(v.kids(q.root).iter().all(|&c| is_leaf(c)));
        assert_eq!(v.level(q.root), 2);
    }

    #[test]
    fn unsorted_input_is_rejected() {
        assert!(matches!(
            CompressedQuadtree::from_zorder(&[3, 1]),
            Err(Error::OrderingViolated(1))
        ));
    }

    #[test]
    fn cells_are_contiguous_runs() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let m = rng.gen_range(1..300);
            let mut codes: Vec<u64> = (0..m)
                .map(|_| interleave(rng.gen_range(0..64), rng.gen_range(0..64)))
                .collect();
            codes.sort();
            let q = CompressedQuadtree::from_zorder(&codes).unwrap();
            let v = q.view();
            let mut stack = vec![q.root];
            let mut leaves = Vec::new();
            while let Some(r) = stack.pop() {
                if is_leaf(r) {
                    leaves.push(leaf_pos(r));
                    continue;
                }
                let n = v.node(r);
                let (lo, hi) = (n.start as usize, n.end as usize);
                let level = n.level as u32;
                let (first, last) = (cell_prefix(codes[lo], level), cell_last(codes[lo], level));
                // Exactly the run [lo, hi) lies in the cell.
                for (t, &c) in codes.iter().enumerate() {
                    assert_eq!((lo..hi).contains(&t), first <= c && c <= last);
                }
                let kids = v.kids(r);
                assert!(kids.len() >= 2);
                let mut next = lo;
                for &c in kids {
                    let (a, b) = v.range(c);
                    assert_eq!(a, next);
                    assert!(v.level(c) < level || (level == 0 && is_leaf(c)));
                    next = b;
                    stack.push(c);
                }
                assert_eq!(next, hi);
            }
            leaves.sort();
            assert_eq!(leaves, (0..m).collect::<Vec<_>>());
        }
    }
}
