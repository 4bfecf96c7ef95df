use rand::Rng;
use tempogeo::morton::{MortonKey, SHIFTS};
use tempogeo::proximity::{GraphKind, GraphOptions, ZTree, STAGE_ONE_FACTOR};
use tempogeo::Window;
use tempogeo_oracles::gen::{self, Cloud};
use tempogeo_oracles::proximity as oracle;

const CLOUDS: [Cloud; 3] = [Cloud::Uniform, Cloud::Grid(12), Cloud::Circle];

#[test]
fn successor_and_zorder() {
    for (seed, cloud) in CLOUDS.iter().enumerate() {
        let mut rng = gen::rng(seed as u64);
        let seq = gen::sequence(&mut rng, 300, 2, *cloud, None);
        let t = ZTree::build(&seq).unwrap();
        for _ in 0..300 {
            let w = gen::window(&mut rng, seq.len());
            let s = rng.gen_range(0..SHIFTS);
            let codes: Vec<u64> = (0..seq.len()).map(|k| t.code(k, s)).collect();
            let key = codes[rng.gen_range(0..seq.len())] + rng.gen_range(0..3) - 1;
            assert_eq!(
                t.successor(w, MortonKey::new(key, s as u8)).unwrap(),
                oracle::successor(&codes, w, key)
            );
            let mut expect: Vec<usize> = w.indices().collect();
            expect.sort_by_key(|&k| (t.code(k, 0), k));
            assert_eq!(t.window_zorder(w).unwrap(), expect);
        }
    }
}

#[test]
fn range_and_emptiness_shells() {
    for (seed, cloud) in CLOUDS.iter().enumerate() {
        let mut rng = gen::rng(10 + seed as u64);
        let seq = gen::sequence(&mut rng, 500, 2, *cloud, None);
        let t = ZTree::build(&seq).unwrap();
        let scale = if let Cloud::Grid(g) = cloud { *g as f64 } else { 1.0 };
        for _ in 0..400 {
            let w = gen::window(&mut rng, seq.len());
            let q = [rng.gen::<f64>() * scale, rng.gen::<f64>() * scale];
            let r = rng.gen_range(0.005..0.6) * scale;
            for eps in [0.01, 0.1, 1.0] {
                let got = t.approx_range_report(w, q, r, eps).unwrap();
                assert_eq!(oracle::range_violations(&seq, w, q, r, eps, &got), 0);
                match t.approx_emptiness(w, q, r, eps).unwrap() {
                    Some(k) => assert!(w.contains(k) && tempogeo::predicates::dist(q, seq.xy(k)) <= (1.0 + eps) * r),
                    None => assert!(oracle::within(&seq, w, q, r).is_empty()),
                }
            }
        }
    }
}

#[test]
fn nearest_neighbor_factors() {
    for (seed, cloud) in CLOUDS.iter().enumerate() {
        let mut rng = gen::rng(20 + seed as u64);
        let seq = gen::sequence(&mut rng, 1000, 2, *cloud, None);
        let t = ZTree::build(&seq).unwrap();
        for _ in 0..1000 {
            let w = gen::window(&mut rng, seq.len());
            let q = if rng.gen_bool(0.1) {
                seq.xy(rng.gen_range(w.i..=w.j))
            } else {
                gen::point(&mut rng, 2, *cloud).try_into().unwrap()
            };
            let (_, best) = oracle::nearest(&seq, w, q);
            let (_, d1) = t.ann_stage_one(w, q).unwrap();
            assert!(d1 <= STAGE_ONE_FACTOR * best);
            let (k, d) = t.approx_nn(w, q, 0.1).unwrap();
            assert!(w.contains(k));
            assert!(d <= 1.1 * best, "{d} > 1.1 * {best}");
        }
    }
}

#[test]
fn graphs_match_oracles() {
    for (seed, cloud) in CLOUDS.iter().enumerate() {
        let mut rng = gen::rng(30 + seed as u64);
        let seq = gen::sequence(&mut rng, 400, 2, *cloud, None);
        let t = ZTree::build(&seq).unwrap();
        let opts = GraphOptions::default();
        let exact = GraphOptions {
            exact_gabriel: true,
            ..opts
        };
        for _ in 0..30 {
            let width = rng.gen_range(1..120);
            let w = gen::window_of_width(&mut rng, seq.len(), width);
            let nn = t.build_graph(w, GraphKind::Nn, &opts).unwrap();
            assert_eq!(pairs(&nn.edges), pairs(&oracle::nn_graph(&seq, w)), "{w:?}");
            let mst = t.build_graph(w, GraphKind::Mst, &opts).unwrap();
            assert_eq!(mst.edges.len(), w.width() - 1);
            let want = oracle::mst_weight(&seq, w);
            assert!((mst.weight() - want).abs() <= 1e-9 * want.max(1.0), "{w:?}");
            let gab = oracle::gabriel(&seq, w);
            let fast = t.build_graph(w, GraphKind::Gabriel, &opts).unwrap();
            assert_eq!(pairs(&fast.edges), pairs(&gab), "{w:?} {cloud:?}");
            let slow = t.build_graph(w, GraphKind::Gabriel, &exact).unwrap();
            assert_eq!(pairs(&slow.edges), pairs(&gab));
        }
    }
}

#[test]
fn graph_rejects_small_separation() {
    let mut rng = gen::rng(40);
    let seq = gen::sequence(&mut rng, 20, 2, Cloud::Uniform, None);
    let t = ZTree::build(&seq).unwrap();
    let opts = GraphOptions {
        separation: 2.0,
        exact_gabriel: false,
    };
    assert!(t.build_graph(Window::new(0, 19), GraphKind::Mst, &opts).is_err());
}

fn pairs(edges: &[(usize, usize, f64)]) -> Vec<(usize, usize)> {
    edges.iter().map(|e| (e.0, e.1)).collect()
}
