//! Hull-family answers from the full window hull.
//!
//! The window hull is rebuilt from scratch with a monotone chain over the
//! deduplicated window points, and each query is answered by scanning its
//! vertices or edges. Conventions follow the indexed implementation: one
//! representative (smallest index) per coordinate, strictly convex vertex
//! lists, `[p]` and `[min, max]` for degenerate windows.

use std::cmp::Ordering;

use tempogeo::hull::{HullEdge, Location, Rotation, Side, Tangent};
use tempogeo::predicates::{dist2_cmp, dot_cmp, line_side, orient2d, Dir, Orientation, Point2};
use tempogeo::{Error, EventSequence, Window};

fn lex(a: Point2, b: Point2) -> Ordering {
    a[0].partial_cmp(&b[0])
        .unwrap()
        .then(a[1].partial_cmp(&b[1]).unwrap())
}

/// Window indices with one representative (the smallest index) per
/// coordinate pair, sorted lexicographically.
pub fn distinct_points(seq: &EventSequence, w: Window) -> Vec<usize> {
    let mut idx: Vec<usize> = w.indices().collect();
    idx.sort_by(|&a, &b| lex(seq.xy(a), seq.xy(b)).then(a.cmp(&b)));
    idx.dedup_by(|a, b| seq.xy(*a) == seq.xy(*b));
    idx
}

/// Clockwise window hull starting at the lexicographic minimum.
pub fn hull(seq: &EventSequence, w: Window) -> Vec<usize> {
    let pts = distinct_points(seq, w);
    if pts.len() <= 2 {
        return pts;
    }
    let p = |k: usize| seq.xy(k);
    let mut upper: Vec<usize> = Vec::new();
    for &k in &pts {
        while upper.len() >= 2
            && orient2d(p(upper[upper.len() - 2]), p(upper[upper.len() - 1]), p(k))
                != Orientation::Clockwise
        {
            upper.pop();
        }
        upper.push(k);
    }
    let mut lower: Vec<usize> = Vec::new();
    for &k in pts.iter().rev() {
        while lower.len() >= 2
            && orient2d(p(lower[lower.len() - 2]), p(lower[lower.len() - 1]), p(k))
                != Orientation::Clockwise
        {
            lower.pop();
        }
        lower.push(k);
    }
    if upper.len() == 2 && lower.len() == 2 {
        return upper;
    }
    upper.extend_from_slice(&lower[1..lower.len() - 1]);
    upper
}

pub fn gift_wrap(seq: &EventSequence, w: Window, k: usize, rot: Rotation) -> Result<usize, Error> {
    let h = hull(seq, w);
    let pos = h
        .iter()
        .position(|&v| seq.xy(v) == seq.xy(k))
        .filter(|_| w.contains(k))
        .ok_or(Error::NotOnHull(k))?;
    let m = h.len();
    Ok(match rot {
        Rotation::Clockwise => h[(pos + 1) % m],
        Rotation::CounterClockwise => h[(pos + m - 1) % m],
    })
}

/// Maximizer of `d . p`, then of `x`, then of `y`; smallest index on full ties.
pub fn extremal(seq: &EventSequence, w: Window, d: [f64; 2]) -> usize {
    let dir = Dir::vec(d[0], d[1]);
    let mut best = w.i;
    for k in w.indices() {
        let (a, b) = (seq.xy(k), seq.xy(best));
        let c = dot_cmp(&dir, a, b).then(lex(a, b));
        if c == Ordering::Greater {
            best = k;
        }
    }
    best
}

pub fn line_decision(seq: &EventSequence, w: Window, p: Point2, d: [f64; 2]) -> bool {
    let dir = Dir::vec(d[0], d[1]);
    let sides: Vec<Ordering> = w.indices().map(|k| line_side(p, &dir, seq.xy(k))).collect();
    sides.iter().any(|&s| s != Ordering::Less) && sides.iter().any(|&s| s != Ordering::Greater)
}

pub fn point_location(seq: &EventSequence, w: Window, q: Point2) -> Location {
    let h = hull(seq, w);
    let p = |k: usize| seq.xy(k);
    match h.len() {
        1 => {
            if p(h[0]) == q {
                Location::Boundary
            } else {
                Location::Outside
            }
        }
        2 => {
            let (a, b) = (p(h[0]), p(h[1]));
            let on = orient2d(a, b, q) == Orientation::Collinear
                && lex(a, q) != Ordering::Greater
                && lex(q, b) != Ordering::Greater;
            if on {
                Location::Boundary
            } else {
                Location::Outside
            }
        }
        m => {
            let o: Vec<Orientation> = (0..m).map(|t| orient2d(p(h[t]), p(h[(t + 1) % m]), q)).collect();
            if o.contains(&Orientation::CounterClockwise) {
                Location::Outside
            } else if o.contains(&Orientation::Collinear) {
                Location::Boundary
            } else {
                Location::Inside
            }
        }
    }
}

/// Best next vertex from `q` by exhaustive comparison.
fn wrap_from(seq: &EventSequence, w: Window, q: Point2, rot: Rotation) -> usize {
    let want = match rot {
        Rotation::Clockwise => Orientation::CounterClockwise,
        Rotation::CounterClockwise => Orientation::Clockwise,
    };
    let mut best: Option<usize> = None;
    for k in distinct_points(seq, w) {
        let a = seq.xy(k);
        if a == q {
            continue;
        }
        best = match best {
            None => Some(k),
            Some(b) => {
                let beats = match orient2d(q, seq.xy(b), a) {
                    Orientation::Collinear => dist2_cmp(q, a, seq.xy(b)) == Ordering::Greater,
                    o => o == want,
                };
                Some(if beats { k } else { b })
            }
        };
    }
    best.unwrap_or(w.i)
}

pub fn tangent(seq: &EventSequence, w: Window, q: Point2) -> Tangent {
    match point_location(seq, w, q) {
        Location::Inside => Tangent::Inside,
        Location::Boundary => Tangent::Boundary,
        Location::Outside => Tangent::Outside {
            cw: wrap_from(seq, w, q, Rotation::Clockwise),
            ccw: wrap_from(seq, w, q, Rotation::CounterClockwise),
        },
    }
}

/// Exit edge of a directed line: the clockwise edge whose start is on or
/// left of the line and whose end is strictly right. When the line leaves
/// through a vertex, the incident edge whose far end lies on `prefer` wins,
/// then one whose far end is on the line, then the outgoing edge.
pub fn line_stab_with(
    seq: &EventSequence,
    w: Window,
    p: Point2,
    d: [f64; 2],
    prefer: Side,
) -> Option<HullEdge> {
    if !line_decision(seq, w, p, d) {
        return None;
    }
    let dir = Dir::vec(d[0], d[1]);
    let h = hull(seq, w);
    let m = h.len();
    if m == 1 {
        return Some((h[0], h[0]));
    }
    if m == 2 {
        return Some((h[0], h[1]));
    }
    let side = |k: usize| line_side(p, &dir, seq.xy(k));
    for t in 0..m {
        let (a, b) = (h[t], h[(t + 1) % m]);
        if side(a) == Ordering::Greater && side(b) == Ordering::Less {
            return Some((a, b));
        }
    }
    let t = (0..m)
        .filter(|&t| side(h[t]) == Ordering::Equal)
        .max_by(|&s, &t| dot_cmp(&dir, seq.xy(h[s]), seq.xy(h[t])))?;
    let (prev, a, next) = (h[(t + m - 1) % m], h[t], h[(t + 1) % m]);
    let want = match prefer {
        Side::Left => Ordering::Greater,
        Side::Right => Ordering::Less,
    };
    let class = |k: usize| match side(k) {
        s if s == want => 2,
        Ordering::Equal => 1,
        _ => 0,
    };
    Some(if class(prev) > class(next) {
        (prev, a)
    } else {
        (a, next)
    })
}

pub fn line_stab(seq: &EventSequence, w: Window, p: Point2, d: [f64; 2]) -> Option<HullEdge> {
    line_stab_with(seq, w, p, d, Side::Right)
}

pub fn vertical_stab(seq: &EventSequence, w: Window, x: f64) -> Option<(HullEdge, HullEdge)> {
    let xs = w.indices().map(|k| seq.xy(k)[0]);
    let (lo, hi) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| (l.min(v), h.max(v)));
    if x < lo || x > hi {
        return None;
    }
    let p = [x, 0.0];
    Some((
        line_stab_with(seq, w, p, [0.0, 1.0], Side::Right)?,
        line_stab_with(seq, w, p, [0.0, -1.0], Side::Left)?,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points() {
        let s = EventSequence::from_points(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]])
            .unwrap();
        assert_eq!(hull(&s, Window::new(0, 2)), vec![0, 2, 1]);
    }

    #[test]
    fn collinear_and_duplicates() {
        let s = EventSequence::from_points(vec![
            vec![1.0, 1.0],
            vec![0.0, 0.0],
            vec![2.0, 2.0],
            vec![0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(hull(&s, Window::new(0, 3)), vec![1, 2]);
        assert_eq!(hull(&s, Window::new(3, 3)), vec![3]);
    }
}
