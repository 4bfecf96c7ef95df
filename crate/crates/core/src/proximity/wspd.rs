//! Well-separated pair decomposition over a window quadtree.

use super::quadtree::{is_leaf, leaf_pos, CompressedQuadtree, QuadView};
use crate::error::{Error, Result};
use crate::predicates::{dist, Point2};

/// Compressed quadtree over a Z-sorted point list, with the bounding box of
/// the actual points of every internal node.
#[derive(Debug, Clone)]
pub struct PointQuadtree {
    pub qt: CompressedQuadtree,
    /// Point indices in Z-order.
    pub ids: Vec<usize>,
    /// Coordinates in Z-order.
    pub pts: Vec<Point2>,
    boxes: Vec<(Point2, Point2)>,
}

impl PointQuadtree {
    /// `ids`, `codes` and `pts` are parallel and sorted by code.
    pub fn new(ids: Vec<usize>, codes: &[u64], pts: Vec<Point2>) -> Result<Self> {
        let qt = CompressedQuadtree::from_zorder(codes)?;
        // Children are stored before their parents.
        let mut boxes = Vec::with_capacity(qt.nodes.len());
        let view = qt.view();
        for x in 0..qt.nodes.len() {
            let mut lo = [f64::INFINITY; 2];
            let mut hi = [f64::NEG_INFINITY; 2];
            for &c in view.kids(x as u32) {
                let (a, b) = if is_leaf(c) {
                    (pts[leaf_pos(c)], pts[leaf_pos(c)])
                } else {
                    boxes[c as usize]
                };
                for m in 0..2 {
                    lo[m] = lo[m].min(a[m]);
                    hi[m] = hi[m].max(b[m]);
                }
            }
            boxes.push((lo, hi));
        }
        Ok(PointQuadtree { qt, ids, pts, boxes })
    }

    pub fn view(&self) -> QuadView<'_> {
        self.qt.view()
    }

    pub fn root(&self) -> u32 {
        self.qt.root
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn bbox(&self, r: u32) -> (Point2, Point2) {
        if is_leaf(r) {
            let p = self.pts[leaf_pos(r)];
            (p, p)
        } else {
            self.boxes[r as usize]
        }
    }

    /// Center and radius of the ball circumscribing the bounding box.
    pub fn ball(&self, r: u32) -> (Point2, f64) {
        let (lo, hi) = self.bbox(r);
        let c = [(lo[0] + hi[0]) / 2.0, (lo[1] + hi[1]) / 2.0];
        // Farthest corner per axis, so the rounded center still encloses the box.
        let dx = (c[0] - lo[0]).max(hi[0] - c[0]);
        let dy = (c[1] - lo[1]).max(hi[1] - c[1]);
        (c, dx.hypot(dy))
    }

    /// Z-order positions below `r`.
    pub fn positions(&self, r: u32) -> std::ops::Range<usize> {
        let (a, b) = self.view().range(r);
        a..b
    }
}

/// Two quadtree references whose point sets are well separated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WSPair {
    pub a: u32,
    pub b: u32,
}

/// Balls of equal radius around both sets are at least `s` radii apart.
pub fn separated(t: &PointQuadtree, a: u32, b: u32, s: f64) -> bool {
    let (ca, ra) = t.ball(a);
    let (cb, rb) = t.ball(b);
    let rho = ra.max(rb);
    dist(ca, cb) - 2.0 * rho >= s * rho * (1.0 + 1e-9)
}

/// Pairs every two sibling subtrees, splitting the side with the larger ball
/// until the pair is `s`-well separated.
pub fn build_wspd(t: &PointQuadtree, s: f64) -> Result<Vec<WSPair>> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::InvalidParameter(format!("separation must be positive, got {s}")));
    }
    let view = t.view();
    let mut out = Vec::new();
    let mut work: Vec<(u32, u32)> = Vec::new();
    for x in 0..t.qt.nodes.len() as u32 {
        let kids = view.kids(x);
        for (p, &a) in kids.iter().enumerate() {
            for &b in &kids[p + 1..] {
                work.push((a, b));
            }
        }
        while let Some((a, b)) = work.pop() {
            if separated(t, a, b, s) {
                out.push(WSPair { a, b });
                continue;
            }
            let split_a = !is_leaf(a) && (is_leaf(b) || t.ball(a).1 >= t.ball(b).1);
            if split_a {
                work.extend(view.kids(a).iter().map(|&c| (c, b)));
            } else {
                work.extend(view.kids(b).iter().map(|&c| (a, c)));
            }
        }
    }
    Ok(out)
}
