//! Proximity answers by linear and quadratic scans.

use std::cmp::Ordering;

use tempogeo::predicates::{diametral_sign, dist, dist2_cmp, Point2};
use tempogeo::proximity::Edge;
use tempogeo::{EventSequence, Window};

/// Window points within distance `r` of `q` (inclusive), by index.
pub fn within(seq: &EventSequence, w: Window, q: Point2, r: f64) -> Vec<usize> {
    w.indices().filter(|&k| dist(q, seq.xy(k)) <= r).collect()
}

/// Violations of the range contract: points within `r` missing from `got`,
/// and reported points outside the window or beyond `(1 + eps) r`.
pub fn range_violations(seq: &EventSequence, w: Window, q: Point2, r: f64, eps: f64, got: &[usize]) -> usize {
    let missing = within(seq, w, q, r)
        .into_iter()
        .filter(|k| got.binary_search(k).is_err())
        .count();
    let extra = got
        .iter()
        .filter(|&&k| !w.contains(k) || dist(q, seq.xy(k)) > (1.0 + eps) * r)
        .count();
    missing + extra
}

/// Nearest window point to `q`, ties toward the smaller index.
pub fn nearest(seq: &EventSequence, w: Window, q: Point2) -> (usize, f64) {
    let k = w
        .indices()
        .min_by(|&a, &b| dist2_cmp(q, seq.xy(a), seq.xy(b)).then(a.cmp(&b)))
        .expect("nonempty window");
    (k, dist(q, seq.xy(k)))
}

/// Window point with the smallest code at least `key`, by scanning.
pub fn successor(codes: &[u64], w: Window, key: u64) -> Option<usize> {
    w.indices()
        .filter(|&k| codes[k] >= key)
        .min_by_key(|&k| (codes[k], k))
}

fn normalize(mut edges: Vec<Edge>) -> Vec<Edge> {
    for e in &mut edges {
        if e.0 > e.1 {
            std::mem::swap(&mut e.0, &mut e.1);
        }
    }
    edges.sort_by_key(|x| (x.0, x.1));
    edges.dedup_by(|x, y| (x.0, x.1) == (y.0, y.1));
    edges
}

/// Every window point joined to its nearest other window point.
pub fn nn_graph(seq: &EventSequence, w: Window) -> Vec<Edge> {
    let edges = w
        .indices()
        .filter(|_| w.width() > 1)
        .map(|a| {
            let q = seq.xy(a);
            let b = w
                .indices()
                .filter(|&b| b != a)
                .min_by(|&x, &y| dist2_cmp(q, seq.xy(x), seq.xy(y)).then(x.cmp(&y)))
                .unwrap();
            (a, b, dist(q, seq.xy(b)))
        })
        .collect();
    normalize(edges)
}

/// Minimum spanning tree by Kruskal over all pairs.
pub fn mst(seq: &EventSequence, w: Window) -> Vec<Edge> {
    let idx: Vec<usize> = w.indices().collect();
    let mut pairs = Vec::new();
    for x in 0..idx.len() {
        for y in x + 1..idx.len() {
            pairs.push((dist(seq.xy(idx[x]), seq.xy(idx[y])), x, y));
        }
    }
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
    let mut parent: Vec<usize> = (0..idx.len()).collect();
    fn root(p: &[usize], mut x: usize) -> usize {
        while p[x] != x {
            x = p[x];
        }
        x
    }
    let mut out = Vec::new();
    for (d, x, y) in pairs {
        let (a, b) = (root(&parent, x), root(&parent, y));
        if a != b {
            parent[a] = b;
            out.push((idx[x], idx[y], d));
        }
    }
    normalize(out)
}

/// Total length of the minimum spanning tree, summed in increasing order.
pub fn mst_weight(seq: &EventSequence, w: Window) -> f64 {
    weight(&mst(seq, w))
}

/// Sum of edge lengths in increasing order of length.
pub fn weight(edges: &[Edge]) -> f64 {
    let mut lens: Vec<f64> = edges.iter().map(|e| e.2).collect();
    lens.sort_by(f64::total_cmp);
    lens.iter().sum()
}

/// Gabriel graph by checking every disk against every point.
pub fn gabriel(seq: &EventSequence, w: Window) -> Vec<Edge> {
    let mut out = Vec::new();
    for a in w.indices() {
        for b in a + 1..=w.j {
            let (pa, pb) = (seq.xy(a), seq.xy(b));
            if !w
                .indices()
                .any(|c| diametral_sign(pa, pb, seq.xy(c)) == Ordering::Less)
            {
                out.push((a, b, dist(pa, pb)));
            }
        }
    }
    out
}
