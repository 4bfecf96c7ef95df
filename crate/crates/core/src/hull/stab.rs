//! Line stabbing by prune-and-search over the merged normal lists.
//!
//! The exit edge of a directed line has its outward normal on the clockwise
//! arc from the line's left normal to its right normal. The search keeps a
//! bracket `(d1, d2)` on that arc with `ext(d1)` on or left of the line and
//! `ext(d2)` strictly right of it, and shrinks it by probing the weighted
//! median of the per-hull median normals until no stored normal is strictly
//! inside. The hull vertices extremal on the closed bracket then contain the
//! exit edge.

use std::cmp::Ordering;

use super::polygon::{hull_of_sorted, Polygon, Rotation};
use super::{normalize, tie_chain, HullEdge, HullTree, Shape};
use crate::error::{Error, Result};
use crate::event::Window;
use crate::predicates::{cross_sign, dot_cmp, lex_cmp, line_side, Dir, Point2};

/// Side of a directed line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Bookkeeping of one stabbing search.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StabTrace {
    /// Number of stored normals strictly inside the bracket, per round.
    pub weights: Vec<usize>,
    /// Number of candidate vertices taken from each covering hull.
    pub candidates: Vec<usize>,
}

/// Cyclic range of edge positions `start, start + 1, ..` of length `len`.
fn arc_range(poly: &Polygon, d1: &Dir, d2: &Dir) -> (usize, usize) {
    let m = poly.len();
    if m < 2 {
        return (0, 0);
    }
    let start = poly.rank_le(d1);
    let end = poly.rank_lt(d2);
    let len = if super::angle_cmp(d1, d2) == Ordering::Less {
        end.saturating_sub(start)
    } else {
        m - start + end
    };
    (start % m, len)
}

impl HullTree {
    /// Exit edge of the directed line through `p` with direction `d`, if the
    /// line meets the window hull. At a vertex exit the edge whose far end
    /// lies right of the line is preferred.
    pub fn line_stab(&self, w: Window, p: Point2, d: [f64; 2]) -> Result<Option<HullEdge>> {
        self.line_stab_traced(w, p, d, &mut StabTrace::default())
    }

    pub fn line_stab_traced(
        &self,
        w: Window,
        p: Point2,
        d: [f64; 2],
        trace: &mut StabTrace,
    ) -> Result<Option<HullEdge>> {
        let dir = Dir::vec(d[0], d[1]);
        if dir.is_zero() || !d.iter().chain(&p).all(|c| c.is_finite()) {
            return Err(Error::InvalidDirection);
        }
        let polys = self.polygons(w)?;
        Ok(self.stab_in(&polys, normalize(p), &dir, Side::Right, Some(trace)))
    }

    /// Upper and lower hull edges met by the vertical line at `x`. At a vertex
    /// the edge extending towards `+x` is reported.
    pub fn vertical_stab(&self, w: Window, x: f64) -> Result<Option<(HullEdge, HullEdge)>> {
        if !x.is_finite() {
            return Err(Error::InvalidParameter(format!("stab abscissa {x}")));
        }
        let polys = self.polygons(w)?;
        Ok(self.vertical_edges(&polys, x + 0.0))
    }

    pub(super) fn vertical_edges(
        &self,
        polys: &[Polygon],
        x: f64,
    ) -> Option<(HullEdge, HullEdge)> {
        let p = [x, 0.0];
        let upper = self.stab_in(polys, p, &Dir::vec(0.0, 1.0), Side::Right, None)?;
        let lower = self.stab_in(polys, p, &Dir::vec(0.0, -1.0), Side::Left, None)?;
        Some((upper, lower))
    }

    fn stab_in(
        &self,
        polys: &[Polygon],
        p: Point2,
        d: &Dir,
        prefer: Side,
        mut trace: Option<&mut StabTrace>,
    ) -> Option<HullEdge> {
        if !self.meets(polys, p, d) {
            return None;
        }
        match self.shape(polys) {
            Shape::Point(a) => return Some((a, a)),
            Shape::Segment(lo, hi) => return Some((lo, hi)),
            Shape::Proper(_) => {}
        }
        let side = |k: usize| line_side(p, d, self.pts[k]);
        let chain = tie_chain();
        let mut d1 = d.left_perp();
        let mut d2 = d.right_perp();
        loop {
            let ranges: Vec<(usize, usize)> =
                polys.iter().map(|poly| arc_range(poly, &d1, &d2)).collect();
            let total: usize = ranges.iter().map(|r| r.1).sum();
            if let Some(t) = trace.as_deref_mut() {
                t.weights.push(total);
            }
            if total == 0 {
                break;
            }
            let mut medians: Vec<(Dir, usize)> = polys
                .iter()
                .zip(&ranges)
                .filter(|(_, r)| r.1 > 0)
                .map(|(poly, &(start, len))| (poly.normal(start + len / 2), len))
                .collect();
            // Every median lies on the open arc (d1, d2) of at most a half-turn,
            // where the cross product orders directions.
            medians.sort_by(|a, b| cross_sign(&a.0, &b.0));
            let mut acc = 0;
            let mut probe = medians[0].0;
            for (n, wgt) in &medians {
                acc += wgt;
                if 2 * acc >= total {
                    probe = *n;
                    break;
                }
            }
            let v = self.ext_in(polys, &probe, &chain);
            if side(v) != Ordering::Less {
                d1 = probe;
            } else {
                d2 = probe;
            }
        }

        let mut cand: Vec<usize> = Vec::new();
        for poly in polys {
            let m = poly.len();
            let first = poly.rank_lt(&d1);
            let last = poly.rank_le(&d2);
            let normals = if super::angle_cmp(&d1, &d2) == Ordering::Less {
                last.saturating_sub(first)
            } else {
                m - first + last
            };
            let count = (normals + 1).min(m);
            if let Some(t) = trace.as_deref_mut() {
                t.candidates.push(count);
            }
            cand.extend((0..count).map(|s| poly.index(first + s)));
        }
        cand.sort_by(|&a, &b| lex_cmp(self.pts[a], self.pts[b]).then(a.cmp(&b)));
        cand.dedup_by(|a, b| self.pts[*a] == self.pts[*b]);
        let (hull, _) = hull_of_sorted(
            &cand.iter().map(|&k| k as u32).collect::<Vec<_>>(),
            &self.pts,
        );
        let hull: Vec<usize> = hull.into_iter().map(|k| k as usize).collect();
        let m = hull.len();
        let exit = (0..m).find(|&t| {
            side(hull[t]) != Ordering::Less && side(hull[(t + 1) % m]) == Ordering::Less
        });
        let vertex = match exit {
            Some(t) if side(hull[t]) == Ordering::Greater => {
                return Some((hull[t], hull[(t + 1) % m]));
            }
            Some(t) => hull[t],
            None => hull
                .iter()
                .copied()
                .filter(|&k| side(k) == Ordering::Equal)
                .max_by(|&a, &b| dot_cmp(d, self.pts[a], self.pts[b]))
                .expect("line meets the hull"),
        };
        Some(self.edge_at_vertex(polys, vertex, p, d, prefer))
    }

    /// Of the two hull edges at `a`, the one whose other end lies on the
    /// preferred side of the line, else on the line, else the outgoing one.
    fn edge_at_vertex(
        &self,
        polys: &[Polygon],
        a: usize,
        p: Point2,
        d: &Dir,
        prefer: Side,
    ) -> HullEdge {
        let q = self.pts[a];
        let next = self.wrap_in(polys, q, Rotation::Clockwise).expect("proper hull");
        let prev = self
            .wrap_in(polys, q, Rotation::CounterClockwise)
            .expect("proper hull");
        let want = match prefer {
            Side::Left => Ordering::Greater,
            Side::Right => Ordering::Less,
        };
        let class = |k: usize| {
            let s = line_side(p, d, self.pts[k]);
            if s == want {
                2
            } else if s == Ordering::Equal {
                1
            } else {
                0
            }
        };
        if class(prev) > class(next) {
            (prev, a)
        } else {
            (a, next)
        }
    }
}
