//! Windowed convex hull queries in the plane.
//!
//! [`HullTree`] is a balanced tree over time whose nodes store the clockwise
//! hull of their points. A window is covered by `O(log w)` nodes, and every
//! query combines one `O(log w)` search per covering hull.
//!
//! Conventions shared with the oracles:
//! - Points with identical coordinates are one hull vertex, represented by the
//!   smallest index in the window.
//! - Points in the interior of hull edges are not vertices.
//! - A window whose points coincide has the one-vertex hull `[p]`; a collinear
//!   window has the two-vertex hull `[min, max]`.
//! - Extremal ties go to the lexicographically largest point.
//! - Line decision counts touching as intersecting.

mod polygon;
mod stab;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::event::{EventSequence, Window};
use crate::predicates::{dot_cmp, lex_cmp, orient2d, Dir, Orientation, Point2};
use crate::tree::Layout;

pub use polygon::{angle_cmp, wrap_better, Rotation};
pub use stab::{Side, StabTrace};

use polygon::{hull_of_sorted, Polygon};

/// Position of a point relative to a window hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Location {
    Outside,
    Boundary,
    Inside,
}

/// Answer to a tangent query. `cw` is the vertex reached by wrapping
/// clockwise from the query point, `ccw` counterclockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tangent {
    Inside,
    Boundary,
    Outside { cw: usize, ccw: usize },
}

/// Hull edge `(a, b)` with `b` following `a` clockwise.
pub type HullEdge = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Point(usize),
    Segment(usize, usize),
    Proper(usize),
}

#[derive(Debug, Clone)]
pub struct HullTree {
    layout: Layout,
    pts: Vec<Point2>,
    ranges: Vec<(u32, u32)>,
    min_pos: Vec<u32>,
    verts: Vec<u32>,
}

fn tie_chain() -> [Dir; 2] {
    [Dir::vec(1.0, 0.0), Dir::vec(0.0, 1.0)]
}

fn normalize(q: Point2) -> Point2 {
    [q[0] + 0.0, q[1] + 0.0]
}

impl HullTree {
    /// Approximate heap footprint in bytes.
    pub fn memory_bytes(&self) -> usize {
        self.pts.len() * 16 + self.ranges.len() * 8 + self.min_pos.len() * 4 + self.verts.len() * 4
    }

    pub fn build(seq: &EventSequence) -> Result<Self> {
        seq.require_dim(2)?;
        let n = seq.len();
        let pts: Vec<Point2> = (0..n).map(|k| seq.xy(k)).collect();
        let layout = Layout::new(n);
        let slots = layout.slots();
        let mut tree = HullTree {
            layout,
            pts,
            ranges: vec![(0, 0); slots],
            min_pos: vec![0; slots],
            verts: Vec::new(),
        };
        let cmp = |a: &u32, b: &u32| {
            lex_cmp(tree.pts[*a as usize], tree.pts[*b as usize]).then(a.cmp(b))
        };
        let mut sorted: Vec<u32> = (0..n as u32).collect();
        let mut dedup = Vec::new();
        let mut node_hulls = Vec::new();
        for h in 0..=layout.root_height() {
            let block = 1usize << h;
            if h > 0 {
                let half = block / 2;
                let mut merged = Vec::with_capacity(n);
                for lo in (0..n).step_by(block) {
                    let mid = (lo + half).min(n);
                    let hi = (lo + block).min(n);
                    let (mut a, mut b) = (lo, mid);
                    while a < mid || b < hi {
                        if b >= hi || (a < mid && cmp(&sorted[a], &sorted[b]) != Ordering::Greater) {
                            merged.push(sorted[a]);
                            a += 1;
                        } else {
                            merged.push(sorted[b]);
                            b += 1;
                        }
                    }
                }
                sorted = merged;
            }
            for lo in (0..n).step_by(block) {
                let hi = (lo + block).min(n);
                dedup.clear();
                for &k in &sorted[lo..hi] {
                    let dup = dedup
                        .last()
                        .is_some_and(|&p: &u32| tree.pts[p as usize] == tree.pts[k as usize]);
                    if !dup {
                        dedup.push(k);
                    }
                }
                let (hull, min_pos) = hull_of_sorted(&dedup, &tree.pts);
                let v = (lo + layout.size()) >> h;
                node_hulls.push((v, hull, min_pos));
            }
            for (v, hull, min_pos) in node_hulls.drain(..) {
                let start = tree.verts.len() as u32;
                tree.verts.extend_from_slice(&hull);
                tree.ranges[v] = (start, hull.len() as u32);
                tree.min_pos[v] = min_pos as u32;
            }
        }
        Ok(tree)
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

    pub fn point(&self, k: usize) -> Point2 {
        self.pts[k]
    }

    /// Stored clockwise hull of tree node `v`, as point indices.
    pub fn node_hull(&self, v: usize) -> &[u32] {
        let (start, len) = self.ranges[v];
        &self.verts[start as usize..(start + len) as usize]
    }

    /// Total number of stored hull vertices over all nodes.
    pub fn stored_vertices(&self) -> usize {
        self.verts.len()
    }

    fn polygon(&self, v: usize) -> Polygon<'_> {
        Polygon {
            verts: self.node_hull(v),
            pts: &self.pts,
            min_pos: self.min_pos[v] as usize,
        }
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

    /// Canonical cover of the window: tree nodes whose point sets partition it.
    pub fn canonical_cover(&self, w: Window) -> Result<Vec<usize>> {
        self.check(w)?;
        Ok(self.layout.canonical_cover(w))
    }

    fn polygons(&self, w: Window) -> Result<Vec<Polygon<'_>>> {
        self.check(w)?;
        Ok(self
            .layout
            .canonical_cover(w)
            .into_iter()
            .map(|v| self.polygon(v))
            .collect())
    }

    /// Whether `a` beats `b` for direction `d` with the tie chain.
    fn ext_better(&self, d: &Dir, chain: &[Dir], a: usize, b: usize) -> bool {
        let (pa, pb) = (self.pts[a], self.pts[b]);
        match dot_cmp(d, pa, pb) {
            Ordering::Greater => return true,
            Ordering::Less => return false,
            Ordering::Equal => {}
        }
        for s in chain {
            match dot_cmp(s, pa, pb) {
                Ordering::Greater => return true,
                Ordering::Less => return false,
                Ordering::Equal => {}
            }
        }
        pa == pb && a < b
    }

    fn ext_in(&self, polys: &[Polygon], d: &Dir, chain: &[Dir]) -> usize {
        let mut best = usize::MAX;
        for poly in polys {
            let c = poly.index(poly.extremal(d, chain));
            if best == usize::MAX || self.ext_better(d, chain, c, best) {
                best = c;
            }
        }
        best
    }

    fn lex_min_in(&self, polys: &[Polygon]) -> usize {
        self.ext_in(polys, &Dir::vec(-1.0, 0.0), &[Dir::vec(0.0, -1.0)])
    }

    fn lex_max_in(&self, polys: &[Polygon]) -> usize {
        self.ext_in(polys, &Dir::vec(1.0, 0.0), &[Dir::vec(0.0, 1.0)])
    }

    fn shape(&self, polys: &[Polygon]) -> Shape {
        let lo = self.lex_min_in(polys);
        let hi = self.lex_max_in(polys);
        let (a, b) = (self.pts[lo], self.pts[hi]);
        if a == b {
            return Shape::Point(lo);
        }
        let n = Dir::normal(a, b);
        let up = self.ext_in(polys, &n, &tie_chain());
        let down = self.ext_in(polys, &n.neg(), &tie_chain());
        if dot_cmp(&n, self.pts[up], a) == Ordering::Equal
            && dot_cmp(&n, self.pts[down], a) == Ordering::Equal
        {
            Shape::Segment(lo, hi)
        } else {
            Shape::Proper(lo)
        }
    }

    /// Next gift-wrapping vertex from `q` over the covering hulls.
    fn wrap_in(&self, polys: &[Polygon], q: Point2, rot: Rotation) -> Option<usize> {
        let mut best: Option<usize> = None;
        for poly in polys {
            let Some(pos) = poly.wrap(q, rot) else { continue };
            let c = poly.index(pos);
            best = Some(match best {
                None => c,
                Some(b) => {
                    let (pc, pb) = (self.pts[c], self.pts[b]);
                    if pc == pb {
                        c.min(b)
                    } else if wrap_better(q, pc, pb, rot) {
                        c
                    } else {
                        b
                    }
                }
            });
        }
        best
    }

    /// A window point maximizing `d . p`; ties go to the lexicographically
    /// largest point.
    pub fn extremal(&self, w: Window, d: [f64; 2]) -> Result<usize> {
        let dir = Dir::vec(d[0], d[1]);
        if dir.is_zero() || !d.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidDirection);
        }
        let polys = self.polygons(w)?;
        Ok(self.ext_in(&polys, &dir, &tie_chain()))
    }

    /// Hull vertex adjacent to the point with index `k` in the given rotation.
    pub fn gift_wrap(&self, w: Window, k: usize, rot: Rotation) -> Result<usize> {
        let polys = self.polygons(w)?;
        if !w.contains(k) {
            return Err(Error::NotOnHull(k));
        }
        let q = self.pts[k];
        match self.shape(&polys) {
            Shape::Point(p) => Ok(p),
            Shape::Segment(lo, hi) => {
                if q == self.pts[lo] {
                    Ok(hi)
                } else if q == self.pts[hi] {
                    Ok(lo)
                } else {
                    Err(Error::NotOnHull(k))
                }
            }
            Shape::Proper(_) => {
                let next = self.wrap_in(&polys, q, rot).ok_or(Error::NotOnHull(k))?;
                let prev = self
                    .wrap_in(&polys, q, rot.flip())
                    .ok_or(Error::NotOnHull(k))?;
                let (cw, ccw) = match rot {
                    Rotation::Clockwise => (next, prev),
                    Rotation::CounterClockwise => (prev, next),
                };
                let (pn, pp) = (self.pts[cw], self.pts[ccw]);
                let corner = orient2d(pp, q, pn) == Orientation::Clockwise;
                let supported = |a: Point2, b: Point2| {
                    let n = Dir::normal(a, b);
                    let top = self.ext_in(&polys, &n, &tie_chain());
                    dot_cmp(&n, self.pts[top], a) != Ordering::Greater
                };
                if corner && supported(q, pn) && supported(pp, q) {
                    Ok(next)
                } else {
                    Err(Error::NotOnHull(k))
                }
            }
        }
    }

    /// The window hull in clockwise order starting at the lexicographic
    /// minimum.
    pub fn report_hull(&self, w: Window) -> Result<Vec<usize>> {
        let polys = self.polygons(w)?;
        Ok(match self.shape(&polys) {
            Shape::Point(p) => vec![p],
            Shape::Segment(lo, hi) => vec![lo, hi],
            Shape::Proper(start) => {
                let mut out = vec![start];
                let mut cur = start;
                loop {
                    let next = self
                        .wrap_in(&polys, self.pts[cur], Rotation::Clockwise)
                        .expect("proper hull has a successor");
                    if next == start {
                        break;
                    }
                    debug_assert!(out.len() <= w.width());
                    out.push(next);
                    cur = next;
                }
                out
            }
        })
    }

    pub fn tangent(&self, w: Window, q: Point2) -> Result<Tangent> {
        let q = normalize(q);
        let polys = self.polygons(w)?;
        Ok(match self.locate_in(&polys, q) {
            Location::Inside => Tangent::Inside,
            Location::Boundary => Tangent::Boundary,
            Location::Outside => Tangent::Outside {
                cw: self
                    .wrap_in(&polys, q, Rotation::Clockwise)
                    .expect("nonempty window"),
                ccw: self
                    .wrap_in(&polys, q, Rotation::CounterClockwise)
                    .expect("nonempty window"),
            },
        })
    }

    /// Whether the line through `p` with direction `d` meets the window hull.
    pub fn line_decision(&self, w: Window, p: Point2, d: [f64; 2]) -> Result<bool> {
        let dir = Dir::vec(d[0], d[1]);
        if dir.is_zero() {
            return Err(Error::InvalidDirection);
        }
        let polys = self.polygons(w)?;
        Ok(self.meets(&polys, normalize(p), &dir))
    }

    fn meets(&self, polys: &[Polygon], p: Point2, d: &Dir) -> bool {
        use crate::predicates::line_side;
        let left = self.ext_in(polys, &d.left_perp(), &tie_chain());
        let right = self.ext_in(polys, &d.right_perp(), &tie_chain());
        line_side(p, d, self.pts[left]) != Ordering::Less
            && line_side(p, d, self.pts[right]) != Ordering::Greater
    }

    pub fn point_location(&self, w: Window, q: Point2) -> Result<Location> {
        let polys = self.polygons(w)?;
        Ok(self.locate_in(&polys, normalize(q)))
    }

    fn locate_in(&self, polys: &[Polygon], q: Point2) -> Location {
        match self.shape(polys) {
            Shape::Point(p) => {
                if self.pts[p] == q {
                    Location::Boundary
                } else {
                    Location::Outside
                }
            }
            Shape::Segment(lo, hi) => {
                let (a, b) = (self.pts[lo], self.pts[hi]);
                let on = orient2d(a, b, q) == Orientation::Collinear
                    && lex_cmp(a, q) != Ordering::Greater
                    && lex_cmp(q, b) != Ordering::Greater;
                if on {
                    Location::Boundary
                } else {
                    Location::Outside
                }
            }
            Shape::Proper(lo) => {
                let hi = self.lex_max_in(polys);
                let (minx, maxx) = (self.pts[lo][0], self.pts[hi][0]);
                if q[0] < minx || q[0] > maxx {
                    return Location::Outside;
                }
                if q[0] == minx || q[0] == maxx {
                    // Vertical extent of the hull at an extreme x.
                    let (bottom, top) = if q[0] == minx {
                        (lo, self.ext_in(polys, &Dir::vec(-1.0, 0.0), &[Dir::vec(0.0, 1.0)]))
                    } else {
                        (self.ext_in(polys, &Dir::vec(1.0, 0.0), &[Dir::vec(0.0, -1.0)]), hi)
                    };
                    return if self.pts[bottom][1] <= q[1] && q[1] <= self.pts[top][1] {
                        Location::Boundary
                    } else {
                        Location::Outside
                    };
                }
                let (upper, lower) = self
                    .vertical_edges(polys, q[0])
                    .expect("x strictly inside the hull extent");
                let o1 = orient2d(self.pts[upper.0], self.pts[upper.1], q);
                let o2 = orient2d(self.pts[lower.0], self.pts[lower.1], q);
                if o1 == Orientation::CounterClockwise || o2 == Orientation::CounterClockwise {
                    Location::Outside
                } else if o1 == Orientation::Collinear || o2 == Orientation::Collinear {
                    Location::Boundary
                } else {
                    Location::Inside
                }
            }
        }
    }
}
