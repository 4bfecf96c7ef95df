//! Seeded oracle-equivalence and invariant suites.

use std::collections::BTreeSet;

use rand::Rng;
use serde::Serialize;
use tempogeo::predicates::{dist, dot_cmp, Dir, Point2};
use tempogeo::proximity::{build_wspd, GraphKind};
use tempogeo::{EventSequence, Window};
use tempogeo_oracles::gen::{self, Cloud, Rng64};
use tempogeo_oracles::query::{self as oq, Answer, Family, Request, Settings};
use tempogeo_oracles::{proximity as prox_oracle, skyline as sky_oracle};

use crate::bundle::{Bundle, Config};

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub sizes: Vec<usize>,
    pub trials: usize,
    pub config: Config,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 1,
            sizes: vec![64, 256],
            trials: 200,
            config: Config::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub n: usize,
    pub checks: usize,
    pub mismatches: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub suites: Vec<SuiteResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.mismatches == 0)
    }
}

pub const HULL_OPS: &[&str] = &[
    "hull", "giftwrap", "tangent", "extremal", "linedec", "linestab", "vstab", "locate",
];

const PROX_OPS: &[&str] = &["range", "emptiness", "ann", "successor"];

/// Whether an indexed answer honors the oracle's under the shared
/// conventions; approximate queries are checked against their guarantees.
pub fn agrees(
    req: &Request,
    got: &anyhow::Result<Answer>,
    want: &tempogeo::Result<Answer>,
    seq: &EventSequence,
    w: Window,
    default_eps: f64,
) -> bool {
    let (got, want) = match (got, want) {
        (Err(_), Err(_)) => return true,
        (Ok(g), Ok(o)) => (g, o),
        _ => return false,
    };
    let near = |k: usize, q: Point2, bound: f64| w.contains(k) && dist(q, seq.xy(k)) <= bound;
    match (req, got, want) {
        (Request::Range { q, r, eps }, Answer::Indices(g), Answer::Indices(o)) => {
            let e = eps.unwrap_or(default_eps);
            o.iter().all(|k| g.binary_search(k).is_ok()) && g.iter().all(|&k| near(k, *q, (1.0 + e) * r))
        }
        (Request::Emptiness { q, r, eps }, Answer::MaybeVertex(g), Answer::MaybeVertex(o)) => {
            let e = eps.unwrap_or(default_eps);
            match g {
                None => o.is_none(),
                Some(k) => near(*k, *q, (1.0 + e) * r),
            }
        }
        (Request::Nearest { q, eps }, Answer::Nearest { k, dist: d }, Answer::Nearest { dist: best, .. }) => {
            let e = eps.unwrap_or(default_eps);
            near(*k, *q, (1.0 + e) * best) && *d == dist(*q, seq.xy(*k))
        }
        (Request::Extremal { d }, Answer::Vertex(g), Answer::Vertex(o)) => {
            w.contains(*g) && dot_cmp(&Dir::vec(d[0], d[1]), seq.xy(*g), seq.xy(*o)).is_eq()
        }
        (Request::Graph { kind, .. }, Answer::Graph { edges: g, .. }, Answer::Graph { edges: o, .. }) => {
            let pairs = |e: &[(usize, usize, f64)]| e.iter().map(|x| (x.0, x.1)).collect::<Vec<_>>();
            match kind {
                GraphKind::Mst => {
                    let (a, b) = (prox_oracle::weight(g), prox_oracle::weight(o));
                    g.len() == o.len() && (a - b).abs() <= 1e-12 * b.max(f64::MIN_POSITIVE)
                }
                GraphKind::Nn => g == o,
                GraphKind::Gabriel => pairs(g) == pairs(o),
            }
        }
        _ => got == want,
    }
}

fn random_point(rng: &mut Rng64, seq: &EventSequence, w: Window, (lo, hi): (Point2, Point2)) -> Point2 {
    if rng.gen_bool(0.2) {
        seq.xy(rng.gen_range(w.i..=w.j))
    } else {
        let pad = 0.1 * (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1.0);
        [
            rng.gen_range(lo[0] - pad..=hi[0] + pad),
            rng.gen_range(lo[1] - pad..=hi[1] + pad),
        ]
    }
}

fn random_dir(rng: &mut Rng64) -> [f64; 2] {
    const AXES: [[f64; 2]; 6] = [[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0], [1.0, 1.0], [-1.0, 1.0]];
    if rng.gen_bool(0.25) {
        AXES[rng.gen_range(0..AXES.len())]
    } else {
        gen::direction(rng)
    }
}

/// Bounding box of all points.
pub fn bounds(seq: &EventSequence) -> (Point2, Point2) {
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for k in 0..seq.len() {
        let p = seq.xy(k);
        for m in 0..2 {
            lo[m] = lo[m].min(p[m]);
            hi[m] = hi[m].max(p[m]);
        }
    }
    (lo, hi)
}

/// Random request of the given kind over window `w`; `bbox` is the bounding
/// box of the sequence.
pub fn random_request(rng: &mut Rng64, op: &str, seq: &EventSequence, w: Window, bbox: (Point2, Point2)) -> Request {
    let (lo, hi) = bbox;
    let extent = (hi[0] - lo[0]).max(hi[1] - lo[1]).max(1e-9);
    match op {
        "giftwrap" => {
            let hull = tempogeo_oracles::hull::hull(seq, w);
            let k = if rng.gen_bool(0.9) {
                hull[rng.gen_range(0..hull.len())]
            } else {
                rng.gen_range(w.i..=w.j)
            };
            let rot = if rng.gen_bool(0.5) {
                tempogeo::hull::Rotation::Clockwise
            } else {
                tempogeo::hull::Rotation::CounterClockwise
            };
            Request::GiftWrap { k, rot }
        }
        "tangent" => Request::Tangent { q: random_point(rng, seq, w, bbox) },
        "locate" => Request::Locate { q: random_point(rng, seq, w, bbox) },
        "extremal" => Request::Extremal { d: random_dir(rng) },
        "linedec" => Request::LineDecision { p: random_point(rng, seq, w, bbox), d: random_dir(rng) },
        "linestab" => Request::LineStab { p: random_point(rng, seq, w, bbox), d: random_dir(rng) },
        "vstab" => Request::VerticalStab { x: random_point(rng, seq, w, bbox)[0] },
        "range" | "emptiness" => {
            let q = random_point(rng, seq, w, bbox);
            let r = rng.gen_range(1e-3..0.5) * extent;
            if op == "range" {
                Request::Range { q, r, eps: None }
            } else {
                Request::Emptiness { q, r, eps: None }
            }
        }
        "ann" => Request::Nearest { q: random_point(rng, seq, w, bbox), eps: None },
        "successor" => Request::Successor {
            q: random_point(rng, seq, w, bbox),
            shift: rng.gen_range(0..tempogeo::morton::SHIFTS),
        },
        other => Request::parse(other, &[]).expect("parameterless kind"),
    }
}

struct Tally {
    suite: String,
    n: usize,
    checks: usize,
    mismatches: usize,
}

impl Tally {
    fn new(suite: &str, n: usize) -> Tally {
        Tally {
            suite: suite.into(),
            n,
            checks: 0,
            mismatches: 0,
        }
    }

    fn check(&mut self, ok: bool) {
        self.checks += 1;
        self.mismatches += usize::from(!ok);
    }

    fn done(self) -> SuiteResult {
        SuiteResult {
            suite: self.suite,
            n: self.n,
            checks: self.checks,
            mismatches: self.mismatches,
        }
    }
}

fn compare(t: &mut Tally, bundle: &Bundle, req: &Request, w: Window) {
    let got = bundle.answer(req, w);
    let settings = Settings {
        eps: bundle.config.eps,
        bits: bundle.config.bits,
    };
    let want = oq::answer(req, &bundle.seq, w, &settings);
    t.check(agrees(req, &got, &want, &bundle.seq, w, bundle.config.eps));
}

fn skyline_suite(rng: &mut Rng64, n: usize, opts: &VerifyOptions) -> anyhow::Result<SuiteResult> {
    let mut t = Tally::new("skyline", n);
    for dim in [2, 3, 4] {
        let seq = gen::sequence(rng, n, dim, Cloud::Uniform, Some(8));
        let fam = BTreeSet::from([Family::Skyline]);
        let bundle = Bundle::build(seq, &fam, opts.config)?;
        let idx = bundle.skyline.as_ref().expect("built");
        let table = idx.table();
        t.check(sky_oracle::phi_pi_violations(&bundle.seq, &table.pi, &table.phi).is_empty());
        for _ in 0..opts.trials {
            let w = gen::window(rng, n);
            for req in [Request::Skyline, Request::SkylineColors, Request::SkylineCount] {
                compare(&mut t, &bundle, &req, w);
            }
        }
    }
    Ok(t.done())
}

fn hull_suite(rng: &mut Rng64, n: usize, opts: &VerifyOptions) -> anyhow::Result<SuiteResult> {
    let mut t = Tally::new("hull", n);
    for cloud in [Cloud::Uniform, Cloud::Grid(8), Cloud::Circle] {
        let seq = gen::sequence(rng, n, 2, cloud, None);
        let bundle = Bundle::build(seq, &BTreeSet::from([Family::Hull]), opts.config)?;
        let bbox = bounds(&bundle.seq);
        for _ in 0..opts.trials {
            let w = gen::window(rng, n);
            for op in HULL_OPS {
                let req = random_request(rng, op, &bundle.seq, w, bbox);
                compare(&mut t, &bundle, &req, w);
            }
        }
    }
    Ok(t.done())
}

fn prox_suite(rng: &mut Rng64, n: usize, opts: &VerifyOptions) -> anyhow::Result<SuiteResult> {
    let mut t = Tally::new("prox", n);
    for cloud in [Cloud::Uniform, Cloud::Grid(8), Cloud::Circle] {
        let seq = gen::sequence(rng, n, 2, cloud, None);
        let bundle = Bundle::build(seq, &BTreeSet::from([Family::Proximity]), opts.config)?;
        let bbox = bounds(&bundle.seq);
        for _ in 0..opts.trials {
            let w = gen::window(rng, n);
            for op in PROX_OPS {
                let req = random_request(rng, op, &bundle.seq, w, bbox);
                compare(&mut t, &bundle, &req, w);
            }
        }
        for _ in 0..opts.trials.div_ceil(10) {
            let width = rng.gen_range(1..=n.min(150));
            let w = gen::window_of_width(rng, n, width);
            for kind in [GraphKind::Nn, GraphKind::Mst, GraphKind::Gabriel] {
                compare(&mut t, &bundle, &Request::Graph { kind, sep: None }, w);
            }
        }
    }
    Ok(t.done())
}

fn wspd_suite(rng: &mut Rng64, n: usize, opts: &VerifyOptions) -> anyhow::Result<SuiteResult> {
    let mut t = Tally::new("wspd", n);
    let m = n.min(200);
    let seq = gen::sequence(rng, m, 2, Cloud::Uniform, None);
    let bundle = Bundle::build(seq, &BTreeSet::from([Family::Proximity]), opts.config)?;
    let tree = bundle.prox.as_ref().expect("built");
    let qt = tree.window_quadtree(bundle.seq.full_window())?;
    let s = opts.config.sep;
    let pairs = build_wspd(&qt, s)?;
    let mut seen = vec![0u32; m * m];
    for p in &pairs {
        let (a, b) = (qt.positions(p.a), qt.positions(p.b));
        let diam = |r: std::ops::Range<usize>| {
            r.clone()
                .flat_map(|x| r.clone().map(move |y| (x, y)))
                .map(|(x, y)| dist(qt.pts[x], qt.pts[y]))
                .fold(0.0, f64::max)
        };
        let mut gap = f64::INFINITY;
        for x in a.clone() {
            for y in b.clone() {
                let (u, v) = (qt.ids[x].min(qt.ids[y]), qt.ids[x].max(qt.ids[y]));
                seen[u * m + v] += 1;
                gap = gap.min(dist(qt.pts[x], qt.pts[y]));
            }
        }
        t.check(diam(a).max(diam(b)) <= 2.0 / s * gap * (1.0 + 1e-12));
    }
    for u in 0..m {
        for v in u + 1..m {
            t.check(seen[u * m + v] == 1);
        }
    }
    Ok(t.done())
}

/// Runs every suite for every size.
pub fn run_verify(opts: &VerifyOptions) -> anyhow::Result<VerifyReport> {
    let mut rng = gen::rng(opts.seed);
    let mut report = VerifyReport::default();
    for &n in &opts.sizes {
        if n < 2 {
            anyhow::bail!("verify sizes must be at least 2, got {n}");
        }
        report.suites.push(skyline_suite(&mut rng, n, opts)?);
        report.suites.push(hull_suite(&mut rng, n, opts)?);
        report.suites.push(prox_suite(&mut rng, n, opts)?);
        report.suites.push(wspd_suite(&mut rng, n, opts)?);
    }
    Ok(report)
}
