//! Latency sweeps over window widths.

use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::{bail, Result};
use rand::Rng;
use serde::Serialize;
use tempogeo::hull::Rotation;
use tempogeo::proximity::GraphKind;
use tempogeo_oracles::gen::{self, Cloud};
use tempogeo_oracles::query::{family_of, Request};

use crate::bundle::{Bundle, Config};
use crate::verify::{bounds, random_request};

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub n: usize,
    pub widths: Vec<usize>,
    pub ops: Vec<String>,
    /// Queries per (op, width); graph ops use at most a tenth of these.
    pub queries: usize,
    pub seed: u64,
    pub config: Config,
}

impl Default for BenchOptions {
    fn default() -> Self {
        BenchOptions {
            n: 1 << 20,
            widths: (8..=16).step_by(2).map(|e| 1usize << e).collect(),
            ops: ["giftwrap", "extremal", "ann", "mst", "nn_graph"]
                .map(String::from)
                .to_vec(),
            queries: 200,
            seed: 1,
            config: Config::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub op: String,
    pub n: usize,
    pub w: usize,
    pub median_us: f64,
    pub p99_us: f64,
}

/// Polylogarithmic ops must stay within this latency ratio from the smallest
/// to the largest width.
pub const RATIO_LIMIT: f64 = 8.0;
/// Linear ops must have a log-log slope within this factor of 1.
pub const SLOPE_TOLERANCE: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingCheck {
    pub op: String,
    /// `ratio` or `slope`.
    pub metric: String,
    pub value: f64,
    pub pass: bool,
}

fn is_graph(op: &str) -> bool {
    matches!(op, "mst" | "nn_graph" | "gabriel")
}

fn graph_request(op: &str) -> Request {
    let kind = match op {
        "mst" => GraphKind::Mst,
        "nn_graph" => GraphKind::Nn,
        _ => GraphKind::Gabriel,
    };
    Request::Graph { kind, sep: None }
}

fn percentile(sorted: &[f64], p: f64) -> f64 {
    let rank = ((p * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
    sorted[rank - 1]
}

pub fn run_bench(opts: &BenchOptions) -> Result<Vec<BenchRow>> {
    if opts.n < 2 || opts.widths.is_empty() || opts.queries == 0 {
        bail!("bench needs n >= 2, at least one width and at least one query");
    }
    if let Some(&w) = opts.widths.iter().find(|&&w| w == 0 || w > opts.n) {
        bail!("width {w} is outside 1..={}", opts.n);
    }
    let mut families = BTreeSet::new();
    for op in &opts.ops {
        match family_of(op) {
            Some(f) => families.insert(f),
            None => bail!("unknown bench op {op:?}"),
        };
    }
    let mut rng = gen::rng(opts.seed);
    let seq = gen::sequence(&mut rng, opts.n, 2, Cloud::Uniform, None);
    let bundle = Bundle::build(seq, &families, opts.config)?;
    let bbox = bounds(&bundle.seq);
    let mut rows = Vec::new();
    for op in &opts.ops {
        for &w in &opts.widths {
            let reps = if is_graph(op) {
                (opts.queries / 10).max(3)
            } else {
                opts.queries
            };
            let mut times = Vec::with_capacity(reps);
            for _ in 0..reps {
                let win = gen::window_of_width(&mut rng, opts.n, w);
                let req = match op.as_str() {
                    o if is_graph(o) => graph_request(o),
                    "giftwrap" => {
                        // Start from a hull vertex found through the index.
                        let d = gen::direction(&mut rng);
                        let k = bundle.hull.as_ref().expect("built").extremal(win, d)?;
                        let rot = if rng.gen_bool(0.5) {
                            Rotation::Clockwise
                        } else {
                            Rotation::CounterClockwise
                        };
                        Request::GiftWrap { k, rot }
                    }
                    o => random_request(&mut rng, o, &bundle.seq, win, bbox),
                };
                let start = Instant::now();
                std::hint::black_box(bundle.answer(&req, win)?);
                times.push(start.elapsed().as_secs_f64() * 1e6);
            }
            times.sort_by(f64::total_cmp);
            rows.push(BenchRow {
                op: op.clone(),
                n: opts.n,
                w,
                median_us: percentile(&times, 0.5),
                p99_us: percentile(&times, 0.99),
            });
        }
    }
    Ok(rows)
}

/// Ratio checks for polylogarithmic ops and slope checks for graph ops.
pub fn scaling(rows: &[BenchRow]) -> Vec<ScalingCheck> {
    let mut ops: Vec<&str> = rows.iter().map(|r| r.op.as_str()).collect();
    ops.dedup();
    let mut out = Vec::new();
    for op in ops {
        let mut pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.op == op)
            .map(|r| (r.w as f64, r.median_us.max(1e-3)))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        if pts.len() < 2 {
            continue;
        }
        if is_graph(op) {
            let xs: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
            let ys: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
            let mx = xs.iter().sum::<f64>() / xs.len() as f64;
            let my = ys.iter().sum::<f64>() / ys.len() as f64;
            let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
            let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
            let slope = sxy / sxx;
            out.push(ScalingCheck {
                op: op.into(),
                metric: "slope".into(),
                value: slope,
                pass: (1.0 / SLOPE_TOLERANCE..=SLOPE_TOLERANCE).contains(&slope),
            });
        } else {
            let ratio = pts.last().unwrap().1 / pts[0].1;
            out.push(ScalingCheck {
                op: op.into(),
                metric: "ratio".into(),
                value: ratio,
                pass: ratio < RATIO_LIMIT,
            });
        }
    }
    out
}

pub fn to_csv(rows: &[BenchRow]) -> String {
    let mut s = String::from("op,n,w,median_us,p99_us\n");
    for r in rows {
        s.push_str(&format!("{},{},{},{:.3},{:.3}\n", r.op, r.n, r.w, r.median_us, r.p99_us));
    }
    s
}
