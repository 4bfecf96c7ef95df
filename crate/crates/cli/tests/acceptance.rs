//! Acceptance suite: one PASS/FAIL line per criterion. Run with
//! `cargo test -p tempogeo-cli --test acceptance`.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use tempogeo::hull::{HullTree, StabTrace};
use tempogeo::predicates::dist;
use tempogeo::proximity::{build_wspd, GraphKind, GraphOptions, ZTree, STAGE_ONE_FACTOR};
use tempogeo::skyline::SkylineIndex;
use tempogeo::{EventSequence, RawEvent, Window};
use tempogeo_cli::bench::{self, BenchOptions};
use tempogeo_cli::bundle::{Bundle, Config};
use tempogeo_cli::verify::{agrees, bounds, random_request, HULL_OPS};
use tempogeo_oracles::gen::{self, Cloud, Rng64};
use tempogeo_oracles::query::{self as oq, Family, Request, Settings};
use tempogeo_oracles::{proximity as prox_oracle, skyline as sky_oracle};

const EPS: f64 = 0.1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(failures: usize, checks: usize) -> Outcome {
    Outcome {
        pass: failures == 0,
        detail: format!("{failures} failures in {checks} checks"),
    }
}

/// Seeds of the instances shared by the two skyline criteria.
fn skyline_instances() -> impl Iterator<Item = (u64, EventSequence)> {
    (0..50u64).map(|seed| {
        let mut rng = gen::rng(1000 + seed);
        let dim = 2 + (seed % 3) as usize;
        let cloud = if seed % 5 == 4 { Cloud::Grid(6) } else { Cloud::Uniform };
        (seed, gen::sequence(&mut rng, 300, dim, cloud, Some(8)))
    })
}

fn skyline_exactness() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    for (_, seq) in skyline_instances() {
        let idx = SkylineIndex::build(&seq);
        for i in 0..seq.len() {
            sky_oracle::skylines_from(&seq, i, |j, sky| {
                let w = Window::new(i, j);
                let colors: BTreeSet<u32> = sky.iter().map(|&k| seq.color(k).unwrap()).collect();
                checks += 3;
                bad += usize::from(idx.query(w).unwrap() != sky);
                bad += usize::from(idx.count(w).unwrap() != sky.len());
                bad += usize::from(idx.colors(w).unwrap() != colors);
            });
        }
    }
    outcome(bad, checks)
}

fn phi_pi_definition() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    for (_, seq) in skyline_instances() {
        let idx = SkylineIndex::build(&seq);
        let t = idx.table();
        checks += seq.len();
        bad += sky_oracle::phi_pi_violations(&seq, &t.pi, &t.phi).len();
    }
    outcome(bad, checks)
}

fn hull_window(rng: &mut Rng64, n: usize) -> Window {
    if rng.gen_bool(0.2) {
        let width = rng.gen_range(1..=8);
        gen::window_of_width(rng, n, width)
    } else {
        gen::window(rng, n)
    }
}

/// Returns (hull outcome, stab candidate outcome).
fn hull_family() -> (Outcome, Outcome) {
    let n = 2000;
    let per_cloud = [(Cloud::Uniform, 6000), (Cloud::Grid(40), 2000), (Cloud::Circle, 2000)];
    let (mut checks, mut bad) = (0, 0);
    let (mut stabs, mut stab_bad) = (0, 0);
    let mut rng = gen::rng(3);
    for (cloud, queries) in per_cloud {
        let seq = gen::sequence(&mut rng, n, 2, cloud, None);
        let bundle = Bundle::build(seq, &BTreeSet::from([Family::Hull]), Config::default()).unwrap();
        let tree: &HullTree = bundle.hull.as_ref().unwrap();
        let bbox = bounds(&bundle.seq);
        let settings = Settings::default();
        for op in HULL_OPS {
            for _ in 0..queries {
                let w = hull_window(&mut rng, n);
                let req = random_request(&mut rng, op, &bundle.seq, w, bbox);
                let got = bundle.answer(&req, w);
                let want = oq::answer(&req, &bundle.seq, w, &settings);
                checks += 1;
                bad += usize::from(!agrees(&req, &got, &want, &bundle.seq, w, EPS));
                if let Request::LineStab { p, d } = req {
                    let mut trace = StabTrace::default();
                    tree.line_stab_traced(w, p, d, &mut trace).unwrap();
                    stabs += 1;
                    stab_bad += usize::from(trace.candidates.iter().any(|&c| c > 3));
                }
            }
        }
    }
    (outcome(bad, checks), outcome(stab_bad, stabs))
}

fn prox_instances(seed: u64) -> Vec<(Cloud, EventSequence)> {
    let mut rng = gen::rng(seed);
    [Cloud::Uniform, Cloud::Grid(30), Cloud::Circle]
        .into_iter()
        .map(|c| (c, gen::sequence(&mut rng, 2000, 2, c, None)))
        .collect()
}

fn query_point(rng: &mut Rng64, seq: &EventSequence, w: Window) -> [f64; 2] {
    if rng.gen_bool(0.2) {
        seq.xy(rng.gen_range(w.i..=w.j))
    } else {
        let (lo, hi) = bounds(seq);
        [rng.gen_range(lo[0] - 0.1..hi[0] + 0.1), rng.gen_range(lo[1] - 0.1..hi[1] + 0.1)]
    }
}

fn range_shells() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    let mut rng = gen::rng(5);
    for (_, seq) in prox_instances(50) {
        let tree = ZTree::build(&seq).unwrap();
        let (lo, hi) = bounds(&seq);
        let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]);
        for _ in 0..3334 {
            let w = hull_window(&mut rng, seq.len());
            let q = query_point(&mut rng, &seq, w);
            let r = rng.gen_range(1e-3..0.5) * extent;
            let got = tree.approx_range_report(w, q, r, EPS).unwrap();
            checks += 1;
            bad += usize::from(prox_oracle::range_violations(&seq, w, q, r, EPS, &got) > 0);
        }
    }
    outcome(bad, checks)
}

fn ann_factors() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    let mut rng = gen::rng(6);
    for (_, seq) in prox_instances(60) {
        let tree = ZTree::build(&seq).unwrap();
        for _ in 0..3334 {
            let w = hull_window(&mut rng, seq.len());
            let q = query_point(&mut rng, &seq, w);
            let (_, best) = prox_oracle::nearest(&seq, w, q);
            let (k1, d1) = tree.ann_stage_one(w, q).unwrap();
            let (k, d) = tree.approx_nn(w, q, EPS).unwrap();
            checks += 2;
            bad += usize::from(!(w.contains(k1) && d1 <= STAGE_ONE_FACTOR * best));
            bad += usize::from(!(w.contains(k) && d == dist(q, seq.xy(k)) && d <= (1.0 + EPS) * best));
        }
    }
    outcome(bad, checks)
}

fn graph_equivalence() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    let mut rng = gen::rng(7);
    let seqs = prox_instances(70);
    let trees: Vec<ZTree> = seqs.iter().map(|(_, s)| ZTree::build(s).unwrap()).collect();
    let exact = GraphOptions {
        exact_gabriel: true,
        ..GraphOptions::default()
    };
    for t in 0..100 {
        let (_, seq) = &seqs[t % seqs.len()];
        let tree = &trees[t % seqs.len()];
        let width = rng.gen_range(1..=400);
        let w = gen::window_of_width(&mut rng, seq.len(), width);
        let opts = GraphOptions::default();

        let nn = tree.build_graph(w, GraphKind::Nn, &opts).unwrap();
        checks += 1;
        bad += usize::from(nn.edges != prox_oracle::nn_graph(seq, w));

        let mst = tree.build_graph(w, GraphKind::Mst, &opts).unwrap();
        let (a, b) = (mst.weight(), prox_oracle::mst_weight(seq, w));
        checks += 1;
        bad += usize::from(mst.edges.len() != w.width() - 1 || (a - b).abs() > 1e-12 * b.max(f64::MIN_POSITIVE));

        let want: Vec<(usize, usize)> = prox_oracle::gabriel(seq, w).iter().map(|e| (e.0, e.1)).collect();
        for o in [&opts, &exact] {
            let g = tree.build_graph(w, GraphKind::Gabriel, o).unwrap();
            let got: Vec<(usize, usize)> = g.edges.iter().map(|e| (e.0, e.1)).collect();
            checks += 1;
            bad += usize::from(got != want);
        }
    }
    outcome(bad, checks)
}

fn wspd_structure() -> Outcome {
    let s = 4.0;
    let (mut checks, mut bad) = (0, 0);
    let mut rng = gen::rng(8);
    for inst in 0..50 {
        let cloud = [Cloud::Uniform, Cloud::Grid(12), Cloud::Circle][inst % 3];
        let seq = gen::sequence(&mut rng, 600, 2, cloud, None);
        let tree = ZTree::build(&seq).unwrap();
        let width = rng.gen_range(2..=300);
        let w = gen::window_of_width(&mut rng, seq.len(), width);
        let qt = tree.window_quadtree(w).unwrap();
        let pairs = build_wspd(&qt, s).unwrap();
        let m = qt.len();
        let mut seen = vec![0u32; m * m];
        for p in &pairs {
            let (a, b) = (qt.positions(p.a), qt.positions(p.b));
            let ((ca, ra), (cb, rb)) = (qt.ball(p.a), qt.ball(p.b));
            let rho = ra.max(rb);
            let enclosed = |r: std::ops::Range<usize>, c: [f64; 2]| r.into_iter().all(|x| dist(qt.pts[x], c) <= rho * (1.0 + 1e-12));
            checks += 1;
            bad += usize::from(
                !(enclosed(a.clone(), ca) && enclosed(b.clone(), cb) && dist(ca, cb) - 2.0 * rho >= s * rho * (1.0 - 1e-12)),
            );
            for x in a.clone() {
                for y in b.clone() {
                    let (u, v) = (x.min(y), x.max(y));
                    seen[u * m + v] += 1;
                }
            }
        }
        for u in 0..m {
            for v in u + 1..m {
                checks += 1;
                bad += usize::from(seen[u * m + v] != 1);
            }
        }
    }
    outcome(bad, checks)
}

fn scaling() -> Outcome {
    let opts = BenchOptions {
        queries: 100,
        ..BenchOptions::default()
    };
    let rows = bench::run_bench(&opts).unwrap();
    let checks = bench::scaling(&rows);
    let detail = checks
        .iter()
        .map(|c| format!("{} {}={:.2}", c.op, c.metric, c.value))
        .collect::<Vec<_>>()
        .join(", ");
    Outcome {
        pass: checks.iter().all(|c| c.pass),
        detail,
    }
}

fn collinear(n: usize) -> EventSequence {
    EventSequence::from_points((0..n).map(|k| vec![(k % 17) as f64, 2.0 * (k % 17) as f64 + 1.0])).unwrap()
}

fn degenerate_sequences(rng: &mut Rng64) -> Vec<(&'static str, EventSequence)> {
    let dup = gen::sequence(rng, 120, 2, Cloud::Grid(2), Some(3));
    let same = EventSequence::from_points((0..50).map(|_| vec![0.25, -0.5])).unwrap();
    let vertical = EventSequence::from_points((0..120).map(|k| vec![3.0, (k % 9) as f64])).unwrap();
    let ties = EventSequence::new(
        (0..240)
            .map(|k| RawEvent::new(k / 6, vec![rng.gen_range(0..10) as f64, rng.gen::<f64>()]))
            .collect(),
    )
    .unwrap();
    vec![
        ("duplicates", dup),
        ("identical", same),
        ("collinear", collinear(150)),
        ("vertical", vertical),
        ("equal timestamps", ties),
    ]
}

const PROX_OPS: &[&str] = &["range", "emptiness", "ann", "successor"];

fn all_requests(rng: &mut Rng64, seq: &EventSequence, w: Window) -> Vec<Request> {
    let bbox = bounds(seq);
    let mut out = vec![Request::Skyline, Request::SkylineColors, Request::SkylineCount];
    for op in HULL_OPS.iter().chain(PROX_OPS) {
        out.push(random_request(rng, op, seq, w, bbox));
    }
    for kind in [GraphKind::Nn, GraphKind::Mst, GraphKind::Gabriel] {
        out.push(Request::Graph { kind, sep: None });
    }
    out
}

/// Conventions of a width-1 window at index `i`.
fn single_point_conventions(bundle: &Bundle, i: usize) -> bool {
    let w = Window::new(i, i);
    let p = bundle.seq.xy(i);
    let ask = |req: Request| bundle.answer(&req, w).ok();
    use tempogeo_oracles::query::Answer as A;
    ask(Request::Hull) == Some(A::Indices(vec![i]))
        && ask(Request::Skyline) == Some(A::Indices(vec![i]))
        && ask(Request::SkylineCount) == Some(A::Count(1))
        && ask(Request::Extremal { d: [1.0, -2.0] }) == Some(A::Vertex(i))
        && ask(Request::GiftWrap { k: i, rot: tempogeo::hull::Rotation::Clockwise }) == Some(A::Vertex(i))
        && ask(Request::Nearest { q: [p[0] + 1.0, p[1]], eps: None }) == Some(A::Nearest { k: i, dist: 1.0 })
        && [GraphKind::Nn, GraphKind::Mst, GraphKind::Gabriel]
            .into_iter()
            .all(|kind| matches!(ask(Request::Graph { kind, sep: None }), Some(A::Graph { edges, .. }) if edges.is_empty()))
}

fn degeneracy() -> Outcome {
    let (mut checks, mut bad) = (0, 0);
    let mut rng = gen::rng(10);
    let all = BTreeSet::from([Family::Skyline, Family::Hull, Family::Proximity]);
    for (name, seq) in degenerate_sequences(&mut rng) {
        let n = seq.len();
        let settings = Settings::default();
        for exact in [false, true] {
            let config = Config {
                exact_gabriel: exact,
                ..Config::default()
            };
            let bundle = Bundle::build(seq.clone(), &all, config).unwrap();
            let mut windows: Vec<Window> = (0..n).map(|i| Window::new(i, i)).collect();
            windows.extend((0..100).map(|_| gen::window(&mut rng, n)));
            windows.push(seq.full_window());
            for w in windows {
                let reqs = all_requests(&mut rng, &bundle.seq, w);
                // The exact mode only changes Gabriel graphs.
                for req in reqs.into_iter().filter(|r| !exact || matches!(r, Request::Graph { kind: GraphKind::Gabriel, .. })) {
                    let ok = catch_unwind(AssertUnwindSafe(|| {
                        let got = bundle.answer(&req, w);
                        let want = oq::answer(&req, &bundle.seq, w, &settings);
                        agrees(&req, &got, &want, &bundle.seq, w, EPS)
                    }));
                    checks += 1;
                    if !matches!(ok, Ok(true)) {
                        bad += 1;
                        eprintln!("  {name}: {req:?} over {w:?} disagrees");
                    }
                }
            }
            for i in (0..n).filter(|_| !exact) {
                checks += 1;
                bad += usize::from(!single_point_conventions(&bundle, i));
            }
        }
        if name == "equal timestamps" {
            for t1 in -1..42 {
                for t2 in t1..42 {
                    let w = seq.resolve_window(t1, t2).unwrap();
                    let inside: Vec<usize> = (0..n).filter(|&k| (t1..=t2).contains(&seq.timestamp(k))).collect();
                    let want = inside.first().map(|&i| Window::new(i, *inside.last().unwrap()));
                    checks += 1;
                    bad += usize::from(w != want);
                }
            }
        }
    }
    outcome(bad, checks)
}

fn main() {
    // Filtering arguments from `cargo test <name>` are ignored; the suite
    // always runs whole.
    let started = Instant::now();
    let mut blocking_failures = 0;
    let mut report = |id: u32, name: &str, blocking: bool, f: &dyn Fn() -> Outcome| {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| Outcome {
            pass: false,
            detail: format!(
                "panicked: {}",
                e.downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default()
            ),
        });
        let verdict = if res.pass { "PASS" } else { "FAIL" };
        let gate = if blocking { "" } else { " (non-blocking)" };
        println!(
            "criterion {id:>2} {verdict} {name}{gate}: {} [{:.1}s]",
            res.detail,
            t.elapsed().as_secs_f64()
        );
        if blocking && !res.pass {
            blocking_failures += 1;
        }
    };
    report(1, "skyline exactness over all windows", true, &skyline_exactness);
    report(2, "phi/pi definition", true, &phi_pi_definition);
    let hull = std::cell::RefCell::new(None);
    let hull_run = || {
        let (a, b) = hull_family();
        *hull.borrow_mut() = Some(b);
        a
    };
    report(3, "hull family exactness", true, &hull_run);
    let stab = || {
        hull.borrow_mut().take().unwrap_or(Outcome {
            pass: false,
            detail: "hull criterion did not complete".into(),
        })
    };
    report(4, "line stabbing candidates per sub-hull", true, &stab);
    report(5, "approximate range shells", true, &range_shells);
    report(6, "nearest neighbor factors", true, &ann_factors);
    report(7, "proximity graph equivalence", true, &graph_equivalence);
    report(8, "WSPD coverage and separation", true, &wspd_structure);
    report(9, "window-locality scaling", false, &scaling);
    report(10, "degeneracy suite", true, &degeneracy);
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if blocking_failures > 0 {
        std::process::exit(1);
    }
}
