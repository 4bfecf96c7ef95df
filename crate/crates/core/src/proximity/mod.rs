//! Windowed proximity queries in the plane.
//!
//! [`ZTree`] stores, for every node of the time tree, the node's points in
//! Z-order under three shifted grids plus a compressed quadtree over the
//! unshifted order. A window is a time range crossed with a Z-order range in
//! each node, which gives approximate spherical range reporting, emptiness
//! and nearest neighbor queries, and a Z-order successor. Merging the lists
//! of the canonical nodes yields the window's Z-order, from which the window
//! quadtree, its well-separated pair decomposition and the proximity graphs
//! follow.

mod graph;
pub mod quadtree;
mod search;
mod wspd;
mod ztree;

pub use graph::{Edge, GraphKind, GraphOptions, ProximityGraph, DEFAULT_SEPARATION};
pub use quadtree::{CompressedQuadtree, QNode, QuadView};
pub use search::STAGE_ONE_FACTOR;
pub use wspd::{build_wspd, separated, PointQuadtree, WSPair};
pub use ztree::ZTree;

/// Default approximation parameter.
pub const DEFAULT_EPS: f64 = 0.1;

#[cfg(test)]
mod tests {
    use super::quadtree::{is_leaf, leaf_pos};
    use super::*;
    use crate::event::{EventSequence, Window};
    use crate::morton::{cell_last, cell_prefix, MortonKey, SHIFTS};
    use crate::predicates::dist;
    use crate::Error;
    use rand::{Rng, SeedableRng};

    fn random_seq(seed: u64, n: usize) -> EventSequence {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        EventSequence::from_points((0..n).map(|_| vec![rng.gen::<f64>(), rng.gen::<f64>()])).unwrap()
    }

    #[test]
    fn single_point_tree() {
        let seq = EventSequence::from_points(vec![vec![1.0, 2.0]]).unwrap();
        let t = ZTree::build(&seq).unwrap();
        let w = Window::new(0, 0);
        assert_eq!(t.window_zorder(w).unwrap(), vec![0]);
        assert_eq!(t.approx_nn(w, [5.0, 5.0], 0.1).unwrap().0, 0);
        assert!(t.build_graph(w, GraphKind::Mst, &GraphOptions::default()).unwrap().edges.is_empty());
    }

    #[test]
    fn rejects_other_dimensions() {
        let seq = EventSequence::from_points(vec![vec![1.0, 2.0, 3.0]]).unwrap();
        assert!(matches!(ZTree::build(&seq), Err(Error::UnsupportedDimension { .. })));
    }

    #[test]
    fn node_lists_are_sorted_and_quadtrees_satisfy_z_cell() {
        let seq = random_seq(5, 300);
        let t = ZTree::build(&seq).unwrap();
        for v in 1..t.layout().slots() {
            if !t.layout().is_real(v) {
                continue;
            }
            let (lo, hi) = t.layout().span(v);
            for s in 0..SHIFTS {
                let mut expect: Vec<u32> = (lo as u32..hi as u32).collect();
                expect.sort_by_key(|&k| (t.code(k as usize, s), k));
                assert_eq!(t.node_list(v, s), &expect[..]);
            }
            let list = t.node_list(v, 0);
            let qt = t.node_quadtree(v).unwrap();
            let mut stack = vec![qt.root];
            while let Some(x) = stack.pop() {
                if is_leaf(x) {
                    assert!(leaf_pos(x) < list.len());
                    continue;
                }
                let n = qt.node(x);
                let c = t.code(list[n.start as usize] as usize, 0);
                let (z0, z1) = (cell_prefix(c, n.level as u32), cell_last(c, n.level as u32));
                for (p, &k) in list.iter().enumerate() {
                    let inside = (z0..=z1).contains(&t.code(k as usize, 0));
                    assert_eq!(inside, (n.start as usize..n.end as usize).contains(&p));
                }
                stack.extend_from_slice(qt.kids(x));
            }
        }
    }

    #[test]
    fn successor_matches_scan() {
        let seq = random_seq(6, 200);
        let t = ZTree::build(&seq).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..500 {
            let (a, b) = (rng.gen_range(0..200), rng.gen_range(0..200));
            let w = Window::new(a.min(b), a.max(b));
            let s = rng.gen_range(0..SHIFTS);
            let key = MortonKey::new(rng.gen::<u64>() >> 1, s as u8);
            let expect = w
                .indices()
                .filter(|&k| t.code(k, s) >= key.code)
                .min_by_key(|&k| (t.code(k, s), k));
            assert_eq!(t.successor(w, key).unwrap(), expect);
        }
        let w = Window::new(10, 40);
        let zmin = w.indices().min_by_key(|&k| (t.code(k, 0), k));
        assert_eq!(t.successor(w, MortonKey::new(0, 0)).unwrap(), zmin);
        assert_eq!(t.successor(w, MortonKey::new(u64::MAX, 0)).unwrap(), None);
    }

    #[test]
    fn range_shells_hold() {
        let seq = random_seq(8, 400);
        let t = ZTree::build(&seq).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(9);
        for _ in 0..300 {
            let (a, b) = (rng.gen_range(0..400), rng.gen_range(0..400));
            let w = Window::new(a.min(b), a.max(b));
            let q = [rng.gen::<f64>(), rng.gen::<f64>()];
            let r = rng.gen_range(0.01..0.5);
            let got = t.approx_range_report(w, q, r, 0.1).unwrap();
            for k in w.indices() {
                let d = dist(q, seq.xy(k));
                if d <= r {
                    assert!(got.contains(&k));
                }
            }
            for &k in &got {
                assert!(w.contains(k) && dist(q, seq.xy(k)) <= 1.1 * r);
            }
            let e = t.approx_emptiness(w, q, r, 0.1).unwrap();
            match e {
                Some(k) => assert!(w.contains(k) && dist(q, seq.xy(k)) <= 1.1 * r),
                None => assert!(w.indices().all(|k| dist(q, seq.xy(k)) > r)),
            }
        }
    }

    #[test]
    fn nonpositive_parameters_are_rejected() {
        let seq = random_seq(1, 10);
        let t = ZTree::build(&seq).unwrap();
        let w = Window::new(0, 9);
        assert!(t.approx_range_report(w, [0.0, 0.0], 0.0, 0.1).is_err());
        assert!(t.approx_range_report(w, [0.0, 0.0], 1.0, -0.1).is_err());
        assert!(t.approx_nn(w, [0.0, 0.0], 0.0).is_err());
    }

    #[test]
    fn ann_within_factor() {
        let seq = random_seq(10, 500);
        let t = ZTree::build(&seq).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..500 {
            let (a, b) = (rng.gen_range(0..500), rng.gen_range(0..500));
            let w = Window::new(a.min(b), a.max(b));
            let q = [rng.gen::<f64>(), rng.gen::<f64>()];
            let best = w.indices().map(|k| dist(q, seq.xy(k))).fold(f64::INFINITY, f64::min);
            let (_, d1) = t.ann_stage_one(w, q).unwrap();
            assert!(d1 <= STAGE_ONE_FACTOR * best);
            let (k, d) = t.approx_nn(w, q, 0.1).unwrap();
            assert!(w.contains(k));
            assert!(d <= 1.1 * best, "{d} vs {best}");
        }
        assert_eq!(t.approx_nn(Window::new(3, 9), seq.xy(5), 0.1).unwrap(), (5, 0.0));
    }

    #[test]
    fn collinear_mst_is_a_path() {
        let seq = EventSequence::from_points((0..20).map(|k| vec![k as f64 * 0.5, 1.0])).unwrap();
        let t = ZTree::build(&seq).unwrap();
        let g = t.build_graph(Window::new(0, 19), GraphKind::Mst, &GraphOptions::default()).unwrap();
        assert_eq!(g.edges.len(), 19);
        assert!((g.weight() - 9.5).abs() < 1e-12);
        assert!(g.edges.iter().all(|e| e.1 == e.0 + 1));
    }

    #[test]
    fn two_points_single_edge() {
        let seq = EventSequence::from_points(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let t = ZTree::build(&seq).unwrap();
        for kind in [GraphKind::Nn, GraphKind::Mst, GraphKind::Gabriel] {
            let g = t.build_graph(Window::new(0, 1), kind, &GraphOptions::default()).unwrap();
            assert_eq!(g.edges.len(), 1);
            assert_eq!((g.edges[0].0, g.edges[0].1), (0, 1));
        }
        assert!("delaunay".parse::<GraphKind>().is_err());
    }
}
