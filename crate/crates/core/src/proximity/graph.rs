//! Proximity graphs of a window: nearest neighbor graph, Euclidean minimum
//! spanning tree and Gabriel graph, all generated from the well-separated
//! pairs of the window quadtree.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use super::quadtree::{is_leaf, leaf_pos};
use super::search::box_min_dist;
use super::wspd::{build_wspd, PointQuadtree, WSPair};
use super::ztree::ZTree;
use crate::error::{Error, Result};
use crate::event::Window;
use crate::predicates::{diametral_sign, dist, dist2_cmp, Point2};

const SLACK: f64 = 1e-9;

pub const DEFAULT_SEPARATION: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GraphKind {
    Nn,
    Mst,
    Gabriel,
}

impl GraphKind {
    pub fn name(self) -> &'static str {
        match self {
            GraphKind::Nn => "nn",
            GraphKind::Mst => "mst",
            GraphKind::Gabriel => "gabriel",
        }
    }
}

impl fmt::Display for GraphKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nn" => Ok(GraphKind::Nn),
            "mst" => Ok(GraphKind::Mst),
            "gabriel" => Ok(GraphKind::Gabriel),
            _ => Err(Error::InvalidParameter(format!("unknown graph kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphOptions {
    pub separation: f64,
    /// Check every point pair for the Gabriel condition instead of pruning
    /// through the pair decomposition.
    pub exact_gabriel: bool,
}

impl Default for GraphOptions {
    fn default() -> Self {
        GraphOptions {
            separation: DEFAULT_SEPARATION,
            exact_gabriel: false,
        }
    }
}

/// Undirected edge `(a, b, length)` with `a < b`.
pub type Edge = (usize, usize, f64);

#[derive(Debug, Clone, PartialEq)]
pub struct ProximityGraph {
    pub kind: GraphKind,
    /// Sorted by endpoints.
    pub edges: Vec<Edge>,
}

impl ProximityGraph {
    /// Total edge length, summed in increasing order of length.
    pub fn weight(&self) -> f64 {
        let mut lens: Vec<f64> = self.edges.iter().map(|e| e.2).collect();
        lens.sort_by(f64::total_cmp);
        lens.iter().sum()
    }
}

impl ZTree {
    /// Compressed quadtree over the window points.
    pub fn window_quadtree(&self, w: Window) -> Result<PointQuadtree> {
        let ids = self.window_zorder(w)?;
        let codes: Vec<u64> = ids.iter().map(|&k| self.codes[0][k]).collect();
        let pts = ids.iter().map(|&k| self.pts[k]).collect();
        PointQuadtree::new(ids, &codes, pts)
    }

    pub fn build_graph(&self, w: Window, kind: GraphKind, opts: &GraphOptions) -> Result<ProximityGraph> {
        let s = opts.separation;
        if kind != GraphKind::Gabriel && !(s > 2.0) {
            return Err(Error::InvalidParameter(format!(
                "{kind} graph needs separation > 2, got {s}"
            )));
        }
        let t = self.window_quadtree(w)?;
        let mut edges = match kind {
            GraphKind::Gabriel if opts.exact_gabriel => gabriel_exact(&t),
            _ => {
                let pairs = build_wspd(&t, s)?;
                match kind {
                    GraphKind::Nn => nn_graph(&t, &pairs),
                    GraphKind::Mst => mst(&t, &pairs),
                    GraphKind::Gabriel => gabriel(&t, &pairs),
                }
            }
        };
        for e in &mut edges {
            if e.0 > e.1 {
                std::mem::swap(&mut e.0, &mut e.1);
            }
        }
        edges.sort_by_key(|x| (x.0, x.1));
        edges.dedup_by(|x, y| (x.0, x.1) == (y.0, y.1));
        Ok(ProximityGraph { kind, edges })
    }
}

fn edge(t: &PointQuadtree, x: usize, y: usize) -> Edge {
    (t.ids[x], t.ids[y], dist(t.pts[x], t.pts[y]))
}

/// `x` is closer to `q` than `y`, ties toward the smaller point index.
fn closer(t: &PointQuadtree, q: Point2, x: usize, y: usize) -> bool {
    dist2_cmp(q, t.pts[x], t.pts[y]).then(t.ids[x].cmp(&t.ids[y])) == Ordering::Less
}

/// Improves `best` (a Z-order position) with the nearest point to `q` below
/// `root`.
fn nearest_below(t: &PointQuadtree, root: u32, q: Point2, best: &mut Option<usize>) {
    let view = t.view();
    let mut stack = vec![root];
    while let Some(r) = stack.pop() {
        if let Some(b) = *best {
            let bound = dist(q, t.pts[b]) * (1.0 + SLACK);
            let (lo, hi) = t.bbox(r);
            if box_min_dist(q, lo, hi) > bound {
                continue;
            }
        }
        if is_leaf(r) {
            let x = leaf_pos(r);
            if best.is_none_or(|b| closer(t, q, x, b)) {
                *best = Some(x);
            }
            continue;
        }
        // Nearest child last, so it is explored first.
        let mut kids: Vec<(f64, u32)> = view
            .kids(r)
            .iter()
            .map(|&c| {
                let (lo, hi) = t.bbox(c);
                (box_min_dist(q, lo, hi), c)
            })
            .collect();
        kids.sort_by(|a, b| b.0.total_cmp(&a.0));
        stack.extend(kids.into_iter().map(|k| k.1));
    }
}

fn nn_graph(t: &PointQuadtree, pairs: &[WSPair]) -> Vec<Edge> {
    let mut nn: Vec<Option<usize>> = vec![None; t.len()];
    for p in pairs {
        for (x, y) in [(p.a, p.b), (p.b, p.a)] {
            if is_leaf(x) {
                let a = leaf_pos(x);
                nearest_below(t, y, t.pts[a], &mut nn[a]);
            }
        }
    }
    nn.iter()
        .enumerate()
        .filter_map(|(a, b)| b.map(|b| edge(t, a, b)))
        .collect()
}

fn box_gap(a: (Point2, Point2), b: (Point2, Point2)) -> f64 {
    let gx = (a.0[0] - b.1[0]).max(b.0[0] - a.1[0]).max(0.0);
    let gy = (a.0[1] - b.1[1]).max(b.0[1] - a.1[1]).max(0.0);
    gx.hypot(gy)
}

fn diag(b: (Point2, Point2)) -> f64 {
    dist(b.0, b.1)
}

/// Closest pair between the point sets of two references.
/// Pushes node pairs so the closest one is popped first.
fn push_near_last(t: &PointQuadtree, stack: &mut Vec<(u32, u32)>, pairs: impl Iterator<Item = (u32, u32)>) {
    let at = stack.len();
    stack.extend(pairs);
    stack[at..].sort_by(|p, q| {
        let g = |(x, y): (u32, u32)| box_gap(t.bbox(x), t.bbox(y));
        g(*q).total_cmp(&g(*p))
    });
}

fn bichromatic_closest(t: &PointQuadtree, a: u32, b: u32) -> (usize, usize, f64) {
    let view = t.view();
    let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
    let mut stack = vec![(a, b)];
    while let Some((x, y)) = stack.pop() {
        let (bx, by) = (t.bbox(x), t.bbox(y));
        if box_gap(bx, by) > best.2 * (1.0 + SLACK) {
            continue;
        }
        match (is_leaf(x), is_leaf(y)) {
            (true, true) => {
                let (px, py) = (leaf_pos(x), leaf_pos(y));
                let d = dist(t.pts[px], t.pts[py]);
                if d < best.2 {
                    best = (px, py, d);
                }
            }
            (false, true) => push_near_last(t, &mut stack, view.kids(x).iter().map(|&c| (c, y))),
            (true, false) => push_near_last(t, &mut stack, view.kids(y).iter().map(|&c| (x, c))),
            (false, false) => {
                if diag(bx) >= diag(by) {
                    push_near_last(t, &mut stack, view.kids(x).iter().map(|&c| (c, y)));
                } else {
                    push_near_last(t, &mut stack, view.kids(y).iter().map(|&c| (x, c)));
                }
            }
        }
    }
    best
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Whether every point under `r` already belongs to component `root`.
fn one_component(t: &PointQuadtree, parent: &mut [usize], r: u32, root: usize) -> bool {
    t.positions(r).all(|k| find(parent, k) == root)
}

/// Kruskal over one closest pair per well-separated pair. Pairs enter a heap
/// keyed by their box gap and the closest pair is computed only when a pair
/// reaches the top, so far pairs and pairs already inside one component are
/// never searched.
fn mst(t: &PointQuadtree, pairs: &[WSPair]) -> Vec<Edge> {
    #[derive(PartialEq)]
    struct Key(f64, usize, Option<(usize, usize)>);
    impl Eq for Key {}
    impl PartialOrd for Key {
        fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
            Some(self.cmp(o))
        }
    }
    impl Ord for Key {
        fn cmp(&self, o: &Self) -> Ordering {
            // Min-heap on the key; computed entries before bounds at equal keys.
            o.0.total_cmp(&self.0)
                .then_with(|| self.2.is_some().cmp(&o.2.is_some()))
                .then_with(|| o.1.cmp(&self.1))
        }
    }
    let n = t.len();
    let mut heap: BinaryHeap<Key> = pairs
        .iter()
        .enumerate()
        .map(|(k, p)| Key(box_gap(t.bbox(p.a), t.bbox(p.b)), k, None))
        .collect();
    let mut parent: Vec<usize> = (0..n).collect();
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    while out.len() + 1 < n {
        let Some(Key(_, k, found)) = heap.pop() else { break };
        match found {
            Some((x, y)) => {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                    out.push(edge(t, x, y));
                }
            }
            None => {
                let p = pairs[k];
                let root = find(&mut parent, t.positions(p.a).start);
                if one_component(t, &mut parent, p.a, root) && one_component(t, &mut parent, p.b, root) {
                    continue;
                }
                let (x, y, d) = bichromatic_closest(t, p.a, p.b);
                heap.push(Key(d, k, Some((x, y))));
            }
        }
    }
    out
}

/// Whether some point lies strictly inside the disk with diameter `xy`
/// (Z-order positions).
fn disk_occupied(t: &PointQuadtree, x: usize, y: usize) -> bool {
    let (a, b) = (t.pts[x], t.pts[y]);
    let m = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
    let rad = dist(a, b) / 2.0 * (1.0 + SLACK);
    let view = t.view();
    let mut stack = vec![t.root()];
    while let Some(r) = stack.pop() {
        let (lo, hi) = t.bbox(r);
        if box_min_dist(m, lo, hi) > rad {
            continue;
        }
        if is_leaf(r) {
            if diametral_sign(a, b, t.pts[leaf_pos(r)]) == Ordering::Less {
                return true;
            }
        } else {
            stack.extend_from_slice(view.kids(r));
        }
    }
    false
}

/// Whether `c` lies strictly inside the diametral disk of every pair drawn
/// from the two boxes. The sign of `(c - a) . (c - b)` is separable per axis
/// and bilinear in `(a, b)`, so its maximum is attained at box corners.
fn witness_kills(c: Point2, ba: (Point2, Point2), bb: (Point2, Point2)) -> bool {
    let mut max = 0.0;
    let mut mag = 0.0;
    for k in 0..2 {
        let mut best = f64::NEG_INFINITY;
        let mut big: f64 = 0.0;
        for av in [ba.0[k], ba.1[k]] {
            for bv in [bb.0[k], bb.1[k]] {
                let v = (c[k] - av) * (c[k] - bv);
                best = best.max(v);
                big = big.max(v.abs());
            }
        }
        max += best;
        mag += big;
    }
    max < -SLACK * mag
}

fn gabriel(t: &PointQuadtree, pairs: &[WSPair]) -> Vec<Edge> {
    let view = t.view();
    let mut out = Vec::new();
    let mut work: Vec<(u32, u32)> = pairs.iter().map(|p| (p.a, p.b)).collect();
    while let Some((x, y)) = work.pop() {
        if is_leaf(x) && is_leaf(y) {
            let (px, py) = (leaf_pos(x), leaf_pos(y));
            if !disk_occupied(t, px, py) {
                out.push(edge(t, px, py));
            }
            continue;
        }
        let (bx, by) = (t.bbox(x), t.bbox(y));
        let (cx, cy) = (t.ball(x).0, t.ball(y).0);
        let m = [(cx[0] + cy[0]) / 2.0, (cx[1] + cy[1]) / 2.0];
        let mut witness = None;
        nearest_below(t, t.root(), m, &mut witness);
        if witness.is_some_and(|c| witness_kills(t.pts[c], bx, by)) {
            continue;
        }
        let split_x = !is_leaf(x) && (is_leaf(y) || diag(bx) >= diag(by));
        if split_x {
            work.extend(view.kids(x).iter().map(|&c| (c, y)));
        } else {
            work.extend(view.kids(y).iter().map(|&c| (x, c)));
        }
    }
    out
}

fn gabriel_exact(t: &PointQuadtree) -> Vec<Edge> {
    let mut out = Vec::new();
    for x in 0..t.len() {
        for y in x + 1..t.len() {
            if !disk_occupied(t, x, y) {
                out.push(edge(t, x, y));
            }
        }
    }
    out
}
