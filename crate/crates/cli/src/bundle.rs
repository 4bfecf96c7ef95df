//! Indices built for one invocation and the query dispatch over them.

use std::collections::BTreeSet;
use std::time::Instant;

use anyhow::{anyhow, Result};
use serde::Serialize;
use tempogeo::hull::HullTree;
use tempogeo::proximity::{GraphOptions, ZTree, DEFAULT_EPS, DEFAULT_SEPARATION};
use tempogeo::skyline::SkylineIndex;
use tempogeo::{EventSequence, Window};
use tempogeo_oracles::query::{Answer, Family, Request};

/// Query-time settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    pub eps: f64,
    pub sep: f64,
    pub bits: u32,
    pub exact_gabriel: bool,
    /// Corrupt answers on purpose, to check that verification catches it.
    pub inject_fault: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            eps: DEFAULT_EPS,
            sep: DEFAULT_SEPARATION,
            bits: tempogeo::morton::DEFAULT_BITS,
            exact_gabriel: false,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexStats {
    pub index: String,
    pub build_ms: f64,
    pub bytes: usize,
    pub nodes: usize,
}

pub struct Bundle {
    pub seq: EventSequence,
    pub config: Config,
    pub skyline: Option<SkylineIndex>,
    pub hull: Option<HullTree>,
    pub prox: Option<ZTree>,
    pub stats: Vec<IndexStats>,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed().as_secs_f64() * 1e3)
}

impl Bundle {
    /// Builds the requested index families. Hull and proximity indices need
    /// planar data.
    pub fn build(seq: EventSequence, families: &BTreeSet<Family>, config: Config) -> Result<Bundle> {
        let mut b = Bundle {
            seq,
            config,
            skyline: None,
            hull: None,
            prox: None,
            stats: Vec::new(),
        };
        if families.contains(&Family::Skyline) {
            let (idx, ms) = timed(|| SkylineIndex::build(&b.seq));
            b.stats.push(IndexStats {
                index: "skyline".into(),
                build_ms: ms,
                bytes: idx.memory_bytes(),
                nodes: 2 * b.seq.len().next_power_of_two() - 1,
            });
            b.skyline = Some(idx);
        }
        if families.contains(&Family::Hull) {
            let (idx, ms) = timed(|| HullTree::build(&b.seq));
            let idx = idx?;
            b.stats.push(IndexStats {
                index: "hull".into(),
                build_ms: ms,
                bytes: idx.memory_bytes(),
                nodes: idx.layout().slots() - 1,
            });
            b.hull = Some(idx);
        }
        if families.contains(&Family::Proximity) {
            let (idx, ms) = timed(|| ZTree::with_bits(&b.seq, config.bits));
            let idx = idx?;
            b.stats.push(IndexStats {
                index: "prox".into(),
                build_ms: ms,
                bytes: idx.memory_bytes(),
                nodes: idx.layout().slots() - 1,
            });
            b.prox = Some(idx);
        }
        Ok(b)
    }

    fn skyline(&self) -> Result<&SkylineIndex> {
        self.skyline.as_ref().ok_or_else(|| anyhow!("skyline index not built (see --indices)"))
    }

    fn hull(&self) -> Result<&HullTree> {
        self.hull.as_ref().ok_or_else(|| anyhow!("hull index not built (see --indices)"))
    }

    fn prox(&self) -> Result<&ZTree> {
        self.prox.as_ref().ok_or_else(|| anyhow!("prox index not built (see --indices)"))
    }

    /// Answers a request from the indices.
    pub fn answer(&self, req: &Request, w: Window) -> Result<Answer> {
        let eps = |e: Option<f64>| e.unwrap_or(self.config.eps);
        let ans = match *req {
            Request::Skyline => Answer::Indices(self.skyline()?.query(w)?),
            Request::SkylineColors => Answer::Colors(self.skyline()?.colors(w)?.into_iter().collect()),
            Request::SkylineCount => Answer::Count(self.skyline()?.count(w)?),
            Request::Hull => Answer::Indices(self.hull()?.report_hull(w)?),
            Request::GiftWrap { k, rot } => Answer::Vertex(self.hull()?.gift_wrap(w, k, rot)?),
            Request::Tangent { q } => Answer::Tangent(self.hull()?.tangent(w, q)?),
            Request::Extremal { d } => Answer::Vertex(self.hull()?.extremal(w, d)?),
            Request::LineDecision { p, d } => Answer::Bool(self.hull()?.line_decision(w, p, d)?),
            Request::LineStab { p, d } => Answer::Stab(self.hull()?.line_stab(w, p, d)?),
            Request::VerticalStab { x } => Answer::VerticalStab(self.hull()?.vertical_stab(w, x)?),
            Request::Locate { q } => Answer::Location(self.hull()?.point_location(w, q)?),
            Request::Range { q, r, eps: e } => Answer::Indices(self.prox()?.approx_range_report(w, q, r, eps(e))?),
            Request::Emptiness { q, r, eps: e } => {
                Answer::MaybeVertex(self.prox()?.approx_emptiness(w, q, r, eps(e))?)
            }
            Request::Nearest { q, eps: e } => {
                let (k, dist) = self.prox()?.approx_nn(w, q, eps(e))?;
                Answer::Nearest { k, dist }
            }
            Request::Successor { q, shift } => {
                let t = self.prox()?;
                let key = t.quantizer().encode_clamped(q, shift)?;
                Answer::MaybeVertex(t.successor(w, key)?)
            }
            Request::Graph { kind, sep } => {
                let opts = GraphOptions {
                    separation: sep.unwrap_or(self.config.sep),
                    exact_gabriel: self.config.exact_gabriel,
                };
                let g = self.prox()?.build_graph(w, kind, &opts)?;
                Answer::Graph { kind, edges: g.edges }
            }
        };
        Ok(if self.config.inject_fault { corrupt(ans, w) } else { ans })
    }
}

/// Deliberately wrong variant of an answer.
fn corrupt(ans: Answer, w: Window) -> Answer {
    match ans {
        Answer::Indices(mut v) => {
            if v.pop().is_none() {
                v.push(w.i);
            }
            Answer::Indices(v)
        }
        Answer::Count(c) => Answer::Count(c + 1),
        Answer::Colors(mut c) => {
            c.push(u32::MAX);
            Answer::Colors(c)
        }
        Answer::Vertex(k) => Answer::Vertex(if k == w.j { w.i } else { w.j }),
        Answer::Bool(b) => Answer::Bool(!b),
        Answer::Graph { kind, mut edges } => {
            edges.pop();
            Answer::Graph { kind, edges }
        }
        other => other,
    }
}
