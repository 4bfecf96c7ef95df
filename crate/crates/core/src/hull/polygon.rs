//! Searches on a single stored convex polygon.
//!
//! A polygon is a slice of point indices in clockwise order starting at the
//! lexicographic maximum. Edge `k` runs from vertex `k` to vertex `k + 1`
//! (cyclically) and its outward normal is the left perpendicular. Measured
//! clockwise from `+x`, those normals strictly increase with `k`, so vertex
//! `k` is extremal for the directions between normals `k - 1` and `k`.

use std::cmp::Ordering;

use crate::predicates::{dist2_cmp, lex_cmp, orient2d, cross_sign, Dir, Orientation, Point2};

/// Rotational sense of a walk around a hull.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rotation {
    Clockwise,
    CounterClockwise,
}

impl Rotation {
    pub fn flip(self) -> Rotation {
        match self {
            Rotation::Clockwise => Rotation::CounterClockwise,
            Rotation::CounterClockwise => Rotation::Clockwise,
        }
    }
}

/// `true` for directions in the half-turn `[0, 180)` clockwise from `+x`.
fn first_half(d: &Dir) -> bool {
    d.sign_y() == Ordering::Less || (d.sign_y() == Ordering::Equal && d.sign_x() == Ordering::Greater)
}

/// Compares the clockwise angles of two nonzero directions measured from `+x`.
pub fn angle_cmp(a: &Dir, b: &Dir) -> Ordering {
    match (first_half(a), first_half(b)) {
        (true, false) => Ordering::Less,
        (false, true) => Ordering::Greater,
        _ => cross_sign(a, b),
    }
}

/// Whether `d` perturbed by `chain` turns counterclockwise off `+x`, i.e. to
/// the very end of the clockwise angle order.
fn wraps(d: &Dir, chain: &[Dir]) -> bool {
    if !(d.sign_y() == Ordering::Equal && d.sign_x() == Ordering::Greater) {
        return false;
    }
    chain
        .iter()
        .map(|s| cross_sign(d, s))
        .find(|&c| c != Ordering::Equal)
        == Some(Ordering::Greater)
}

/// Whether the angle of `n` is below that of `d` perturbed by the tie-break
/// directions in `chain` (each infinitesimally smaller than the previous).
/// Assumes the perturbation does not wrap.
fn below_perturbed(n: &Dir, d: &Dir, chain: &[Dir]) -> bool {
    match angle_cmp(n, d) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => chain
            .iter()
            .map(|s| cross_sign(d, s))
            .find(|&c| c != Ordering::Equal)
            == Some(Ordering::Less),
    }
}

#[derive(Clone, Copy)]
pub struct Polygon<'a> {
    pub verts: &'a [u32],
    pub pts: &'a [Point2],
    pub min_pos: usize,
}

impl<'a> Polygon<'a> {
    #[inline]
    pub fn len(&self) -> usize {
        self.verts.len()
    }

    #[inline]
    pub fn point(&self, k: usize) -> Point2 {
        self.pts[self.verts[k % self.len()] as usize]
    }

    #[inline]
    pub fn index(&self, k: usize) -> usize {
        self.verts[k % self.len()] as usize
    }

    #[inline]
    pub fn normal(&self, k: usize) -> Dir {
        Dir::normal(self.point(k), self.point(k + 1))
    }

    /// Number of edge normals for which `pred` holds; `pred` must hold on a
    /// prefix of the edges.
    fn count_edges(&self, pred: impl Fn(&Dir) -> bool) -> usize {
        let m = self.len();
        if m < 2 {
            return 0;
        }
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            if pred(&self.normal(mid)) {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    /// Number of normals with angle strictly below that of `d`.
    pub fn rank_lt(&self, d: &Dir) -> usize {
        self.count_edges(|n| angle_cmp(n, d) == Ordering::Less)
    }

    /// Number of normals with angle at most that of `d`.
    pub fn rank_le(&self, d: &Dir) -> usize {
        self.count_edges(|n| angle_cmp(n, d) != Ordering::Greater)
    }

    /// Position of the vertex maximizing `d`, ties resolved by the directions
    /// in `chain` in turn.
    pub fn extremal(&self, d: &Dir, chain: &[Dir]) -> usize {
        if wraps(d, chain) {
            return 0;
        }
        self.count_edges(|n| below_perturbed(n, d, chain)) % self.len()
    }

    /// Position of the vertex with coordinates `q`, if any.
    pub fn find(&self, q: Point2) -> Option<usize> {
        let m = self.len();
        // Lower chain: positions 0..=min_pos, lexicographically decreasing.
        let (mut lo, mut hi) = (0, self.min_pos + 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match lex_cmp(self.point(mid), q) {
                Ordering::Equal => return Some(mid),
                Ordering::Greater => lo = mid + 1,
                Ordering::Less => hi = mid,
            }
        }
        // Upper chain: positions min_pos..=m (m wraps to 0), increasing.
        let (mut lo, mut hi) = (self.min_pos, m + 1);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match lex_cmp(self.point(mid), q) {
                Ordering::Equal => return Some(mid % m),
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
            }
        }
        None
    }

    /// Gift-wrapping step from `q`: the vertex `p` such that every vertex is on
    /// the right of (clockwise) or left of (counterclockwise) the ray `q -> p`
    /// or on it, farthest along the ray on ties. `q` must not lie strictly
    /// inside the polygon or in the interior of one of its edges.
    pub fn wrap(&self, q: Point2, rot: Rotation) -> Option<usize> {
        let m = self.len();
        if let Some(k) = self.find(q) {
            if m == 1 {
                return None;
            }
            return Some(match rot {
                Rotation::Clockwise => (k + 1) % m,
                Rotation::CounterClockwise => (k + m - 1) % m,
            });
        }
        if m == 1 {
            return Some(0);
        }
        let better = |a: usize, b: usize| wrap_better(q, self.point(a), self.point(b), rot);
        let up = |k: usize| better((k + 1) % m, k);
        if up(0) {
            Some(first_true(1, m, |k| !(up(k) && better(k, 0))))
        } else if up(m - 1) {
            Some(0)
        } else {
            Some(first_true(1, m, |k| !up(k) && better(k, 0)))
        }
    }
}

/// `a` beats `b` as the next gift-wrapping vertex from `q`.
pub fn wrap_better(q: Point2, a: Point2, b: Point2, rot: Rotation) -> bool {
    let want = match rot {
        Rotation::Clockwise => Orientation::CounterClockwise,
        Rotation::CounterClockwise => Orientation::Clockwise,
    };
    match orient2d(q, b, a) {
        Orientation::Collinear => dist2_cmp(q, a, b) == Ordering::Greater,
        o => o == want,
    }
}

/// Smallest `k` in `[lo, hi)` with `pred(k)`, assuming `pred` is monotone;
/// `hi` if none.
fn first_true(mut lo: usize, mut hi: usize, pred: impl Fn(usize) -> bool) -> usize {
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Clockwise hull of lexicographically sorted, duplicate-free points, starting
/// at the lexicographic maximum. Returns the vertex list and the position of
/// the lexicographic minimum.
pub fn hull_of_sorted(sorted: &[u32], pts: &[Point2]) -> (Vec<u32>, usize) {
    let m = sorted.len();
    if m <= 1 {
        return (sorted.to_vec(), 0);
    }
    let p = |k: u32| pts[k as usize];
    let chain = |iter: &mut dyn Iterator<Item = u32>| {
        let mut out: Vec<u32> = Vec::new();
        for k in iter {
            while out.len() >= 2
                && orient2d(p(out[out.len() - 2]), p(out[out.len() - 1]), p(k))
                    != Orientation::Clockwise
            {
                out.pop();
            }
            out.push(k);
        }
        out
    };
    // Lower chain walked from the maximum down to the minimum turns clockwise.
    let lower = chain(&mut sorted.iter().rev().copied());
    let upper = chain(&mut sorted.iter().copied());
    let mut verts = lower.clone();
    let min_pos = verts.len() - 1;
    verts.extend_from_slice(&upper[1..upper.len() - 1]);
    (verts, min_pos)
}
