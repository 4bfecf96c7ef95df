use rand::Rng;
use tempogeo::hull::{HullTree, Rotation};
use tempogeo::predicates::{dot_cmp, Dir};
use tempogeo::{EventSequence, Window};
use tempogeo_oracles::gen::{self, Cloud, Rng64};
use tempogeo_oracles::hull as oracle;

fn query_point(rng: &mut Rng64, seq: &EventSequence, w: Window, cloud: Cloud) -> [f64; 2] {
    match rng.gen_range(0..3) {
        0 => seq.xy(rng.gen_range(w.i..=w.j)),
        1 => {
            let a = seq.xy(rng.gen_range(w.i..=w.j));
            let b = seq.xy(rng.gen_range(w.i..=w.j));
            [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0]
        }
        _ => match cloud {
            Cloud::Grid(side) => [rng.gen_range(-1..=side as i32) as f64, rng.gen_range(-1..=side as i32) as f64],
            _ => [rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)],
        },
    }
}

fn direction(rng: &mut Rng64, seq: &EventSequence, w: Window) -> [f64; 2] {
    if rng.gen_bool(0.5) {
        let a = seq.xy(rng.gen_range(w.i..=w.j));
        let b = seq.xy(rng.gen_range(w.i..=w.j));
        if a != b {
            return [b[0] - a[0], b[1] - a[1]];
        }
    }
    if rng.gen_bool(0.3) {
        let d = [rng.gen_range(-2..=2) as f64, rng.gen_range(-2..=2) as f64];
        if d != [0.0, 0.0] {
            return d;
        }
    }
    gen::direction(rng)
}

fn check_instance(seed: u64, n: usize, cloud: Cloud, queries: usize) {
    let mut rng = gen::rng(seed);
    let seq = gen::sequence(&mut rng, n, 2, cloud, None);
    let tree = HullTree::build(&seq).unwrap();
    for _ in 0..queries {
        let w = if rng.gen_bool(0.2) {
            {
            let width = rng.gen_range(1..4);
            gen::window_of_width(&mut rng, n, width)
        }
        } else {
            gen::window(&mut rng, n)
        };
        let h = oracle::hull(&seq, w);
        assert_eq!(tree.report_hull(w).unwrap(), h, "hull {w:?} seed {seed}");

        let k = rng.gen_range(w.i..=w.j);
        for rot in [Rotation::Clockwise, Rotation::CounterClockwise] {
            let got = tree.gift_wrap(w, k, rot).ok();
            let want = oracle::gift_wrap(&seq, w, k, rot).ok();
            assert_eq!(got, want, "wrap {w:?} k={k} {rot:?} seed {seed}");
        }

        let d = direction(&mut rng, &seq, w);
        let e = tree.extremal(w, d).unwrap();
        let o = oracle::extremal(&seq, w, d);
        assert_eq!(dot_cmp(&Dir::vec(d[0], d[1]), seq.xy(e), seq.xy(o)), std::cmp::Ordering::Equal);
        assert_eq!(e, o, "extremal {w:?} {d:?}");

        let q = query_point(&mut rng, &seq, w, cloud);
        assert_eq!(tree.point_location(w, q).unwrap(), oracle::point_location(&seq, w, q), "locate {w:?} {q:?}");
        assert_eq!(tree.tangent(w, q).unwrap(), oracle::tangent(&seq, w, q), "tangent {w:?} {q:?}");

        let p = query_point(&mut rng, &seq, w, cloud);
        assert_eq!(tree.line_decision(w, p, d).unwrap(), oracle::line_decision(&seq, w, p, d));
        assert_eq!(tree.line_stab(w, p, d).unwrap(), oracle::line_stab(&seq, w, p, d), "stab {w:?} p={p:?} d={d:?}");
        assert_eq!(tree.vertical_stab(w, p[0]).unwrap(), oracle::vertical_stab(&seq, w, p[0]), "vstab {w:?} x={}", p[0]);
    }
}

#[test]
fn uniform_points() {
    for seed in 0..4 {
        check_instance(seed, 300, Cloud::Uniform, 500);
    }
}

#[test]
fn grid_points() {
    for seed in 10..16 {
        check_instance(seed, 200, Cloud::Grid(6), 500);
    }
}

#[test]
fn circle_points() {
    for seed in 20..23 {
        check_instance(seed, 200, Cloud::Circle, 300);
    }
}
