//! Typed queries and answers shared by the oracle dispatcher and the CLI.

use std::fmt;

use tempogeo::hull::{HullEdge, Location, Rotation, Tangent};
use tempogeo::morton::{Quantizer, SHIFTS};
use tempogeo::predicates::Point2;
use tempogeo::proximity::{Edge, GraphKind};
use tempogeo::{EventSequence, Window};

use crate::{hull, proximity, skyline};

/// Malformed query: unknown kind or bad parameters.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Debug, Clone, PartialEq)]
pub enum Request {
    Skyline,
    SkylineColors,
    SkylineCount,
    Hull,
    GiftWrap { k: usize, rot: Rotation },
    Tangent { q: Point2 },
    Extremal { d: [f64; 2] },
    LineDecision { p: Point2, d: [f64; 2] },
    LineStab { p: Point2, d: [f64; 2] },
    VerticalStab { x: f64 },
    Locate { q: Point2 },
    Range { q: Point2, r: f64, eps: Option<f64> },
    Emptiness { q: Point2, r: f64, eps: Option<f64> },
    Nearest { q: Point2, eps: Option<f64> },
    Successor { q: Point2, shift: usize },
    Graph { kind: GraphKind, sep: Option<f64> },
}

/// Every query kind accepted by [`Request::parse`].
pub const KINDS: &[&str] = &[
    "skyline",
    "skyline_colors",
    "skyline_count",
    "hull",
    "giftwrap",
    "tangent",
    "extremal",
    "linedec",
    "linestab",
    "vstab",
    "locate",
    "range",
    "emptiness",
    "ann",
    "nn",
    "successor",
    "graph",
    "nn_graph",
    "mst",
    "gabriel",
];

fn num(kind: &str, tok: &str) -> Result<f64, UsageError> {
    tok.parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| UsageError(format!("{kind}: expected a number, got {tok:?}")))
}

impl Request {
    /// Parses a query kind and its parameters. Parameters may be separated by
    /// spaces or commas.
    pub fn parse(kind: &str, params: &[&str]) -> Result<Request, UsageError> {
        let toks: Vec<&str> = params
            .iter()
            .flat_map(|p| p.split(','))
            .filter(|t| !t.is_empty())
            .collect();
        let arity = |lo: usize, hi: usize| {
            if toks.len() < lo || toks.len() > hi {
                let want = if lo == hi { lo.to_string() } else { format!("{lo} to {hi}") };
                Err(UsageError(format!("{kind}: expected {want} parameters, got {}", toks.len())))
            } else {
                Ok(())
            }
        };
        let f = |t: usize| num(kind, toks[t]);
        let opt = |t: usize| toks.get(t).map(|s| num(kind, s)).transpose();
        Ok(match kind {
            "skyline" | "skyline_colors" | "skyline_count" | "hull" => {
                arity(0, 0)?;
                match kind {
                    "skyline" => Request::Skyline,
                    "skyline_colors" => Request::SkylineColors,
                    "skyline_count" => Request::SkylineCount,
                    _ => Request::Hull,
                }
            }
            "giftwrap" => {
                arity(1, 2)?;
                let k = toks[0]
                    .parse()
                    .map_err(|_| UsageError(format!("giftwrap: bad point index {:?}", toks[0])))?;
                let rot = match toks.get(1).copied().unwrap_or("cw") {
                    "cw" => Rotation::Clockwise,
                    "ccw" => Rotation::CounterClockwise,
                    other => return Err(UsageError(format!("giftwrap: rotation must be cw or ccw, got {other:?}"))),
                };
                Request::GiftWrap { k, rot }
            }
            "tangent" | "locate" | "extremal" => {
                arity(2, 2)?;
                let v = [f(0)?, f(1)?];
                match kind {
                    "tangent" => Request::Tangent { q: v },
                    "locate" => Request::Locate { q: v },
                    _ => Request::Extremal { d: v },
                }
            }
            "linedec" | "linestab" => {
                arity(4, 4)?;
                let (p, d) = ([f(0)?, f(1)?], [f(2)?, f(3)?]);
                if kind == "linedec" {
                    Request::LineDecision { p, d }
                } else {
                    Request::LineStab { p, d }
                }
            }
            "vstab" => {
                arity(1, 1)?;
                Request::VerticalStab { x: f(0)? }
            }
            "range" | "emptiness" => {
                arity(3, 4)?;
                let (q, r, eps) = ([f(0)?, f(1)?], f(2)?, opt(3)?);
                if kind == "range" {
                    Request::Range { q, r, eps }
                } else {
                    Request::Emptiness { q, r, eps }
                }
            }
            "ann" | "nn" => {
                arity(2, 3)?;
                Request::Nearest {
                    q: [f(0)?, f(1)?],
                    eps: opt(2)?,
                }
            }
            "successor" => {
                arity(2, 3)?;
                let shift = match toks.get(2) {
                    None => 0,
                    Some(s) => s
                        .parse::<usize>()
                        .ok()
                        .filter(|&s| s < SHIFTS)
                        .ok_or_else(|| UsageError(format!("successor: shift must be below {SHIFTS}, got {s:?}")))?,
                };
                Request::Successor {
                    q: [f(0)?, f(1)?],
                    shift,
                }
            }
            "graph" => {
                arity(1, 2)?;
                let kind = toks[0]
                    .parse()
                    .map_err(|_| UsageError(format!("graph: unknown kind {:?}", toks[0])))?;
                Request::Graph { kind, sep: opt(1)? }
            }
            "nn_graph" | "mst" | "gabriel" => {
                arity(0, 1)?;
                let kind = match kind {
                    "nn_graph" => GraphKind::Nn,
                    "mst" => GraphKind::Mst,
                    _ => GraphKind::Gabriel,
                };
                Request::Graph { kind, sep: opt(0)? }
            }
            _ => return Err(UsageError(format!("unknown query kind {kind:?}"))),
        })
    }

    /// Canonical name of the query kind.
    pub fn name(&self) -> &'static str {
        match self {
            Request::Skyline => "skyline",
            Request::SkylineColors => "skyline_colors",
            Request::SkylineCount => "skyline_count",
            Request::Hull => "hull",
            Request::GiftWrap { .. } => "giftwrap",
            Request::Tangent { .. } => "tangent",
            Request::Extremal { .. } => "extremal",
            Request::LineDecision { .. } => "linedec",
            Request::LineStab { .. } => "linestab",
            Request::VerticalStab { .. } => "vstab",
            Request::Locate { .. } => "locate",
            Request::Range { .. } => "range",
            Request::Emptiness { .. } => "emptiness",
            Request::Nearest { .. } => "ann",
            Request::Successor { .. } => "successor",
            Request::Graph { .. } => "graph",
        }
    }

    /// Which index family answers the query.
    pub fn family(&self) -> Family {
        match self {
            Request::Skyline | Request::SkylineColors | Request::SkylineCount => Family::Skyline,
            Request::Range { .. }
            | Request::Emptiness { .. }
            | Request::Nearest { .. }
            | Request::Successor { .. }
            | Request::Graph { .. } => Family::Proximity,
            _ => Family::Hull,
        }
    }
}

/// Index family answering a query kind, if the kind exists.
pub fn family_of(kind: &str) -> Option<Family> {
    Some(match kind {
        "skyline" | "skyline_colors" | "skyline_count" => Family::Skyline,
        "hull" | "giftwrap" | "tangent" | "extremal" | "linedec" | "linestab" | "vstab" | "locate" => Family::Hull,
        "range" | "emptiness" | "ann" | "nn" | "successor" | "graph" | "nn_graph" | "mst" | "gabriel" => {
            Family::Proximity
        }
        _ => return None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Skyline,
    Hull,
    Proximity,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Skyline => "skyline",
            Family::Hull => "hull",
            Family::Proximity => "prox",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Answer {
    Indices(Vec<usize>),
    Count(usize),
    Colors(Vec<u32>),
    Vertex(usize),
    MaybeVertex(Option<usize>),
    Bool(bool),
    Tangent(Tangent),
    Stab(Option<HullEdge>),
    VerticalStab(Option<(HullEdge, HullEdge)>),
    Location(Location),
    Nearest { k: usize, dist: f64 },
    Graph { kind: GraphKind, edges: Vec<Edge> },
}

/// Settings an answer may depend on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Settings {
    pub eps: f64,
    pub bits: u32,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            eps: tempogeo::proximity::DEFAULT_EPS,
            bits: tempogeo::morton::DEFAULT_BITS,
        }
    }
}

/// Reference answer straight from the definitions.
pub fn answer(req: &Request, seq: &EventSequence, w: Window, settings: &Settings) -> Result<Answer, tempogeo::Error> {
    Ok(match *req {
        Request::Skyline => Answer::Indices(skyline::skyline(seq, w)),
        Request::SkylineColors => {
            if !seq.is_colored() {
                return Err(tempogeo::Error::MissingColor(w.i));
            }
            Answer::Colors(skyline::skyline_colors(seq, w).into_iter().collect())
        }
        Request::SkylineCount => Answer::Count(skyline::skyline_count(seq, w)),
        Request::Hull => Answer::Indices(hull::hull(seq, w)),
        Request::GiftWrap { k, rot } => Answer::Vertex(hull::gift_wrap(seq, w, k, rot)?),
        Request::Tangent { q } => Answer::Tangent(hull::tangent(seq, w, q)),
        Request::Extremal { d } => {
            if d == [0.0, 0.0] {
                return Err(tempogeo::Error::InvalidDirection);
            }
            Answer::Vertex(hull::extremal(seq, w, d))
        }
        Request::LineDecision { p, d } => {
            if d == [0.0, 0.0] {
                return Err(tempogeo::Error::InvalidDirection);
            }
            Answer::Bool(hull::line_decision(seq, w, p, d))
        }
        Request::LineStab { p, d } => {
            if d == [0.0, 0.0] {
                return Err(tempogeo::Error::InvalidDirection);
            }
            Answer::Stab(hull::line_stab(seq, w, p, d))
        }
        Request::VerticalStab { x } => Answer::VerticalStab(hull::vertical_stab(seq, w, x)),
        Request::Locate { q } => Answer::Location(hull::point_location(seq, w, q)),
        Request::Range { q, r, .. } => Answer::Indices(proximity::within(seq, w, q, r)),
        Request::Emptiness { q, r, .. } => {
            let (k, d) = proximity::nearest(seq, w, q);
            Answer::MaybeVertex((d <= r).then_some(k))
        }
        Request::Nearest { q, .. } => {
            let (k, dist) = proximity::nearest(seq, w, q);
            Answer::Nearest { k, dist }
        }
        Request::Successor { q, shift } => {
            let quant = Quantizer::for_sequence(seq, settings.bits)?;
            let codes: Vec<u64> = (0..seq.len())
                .map(|k| quant.encode(seq.xy(k), shift).map(|c| c.code))
                .collect::<Result<_, _>>()?;
            let key = quant.encode_clamped(q, shift)?;
            Answer::MaybeVertex(proximity::successor(&codes, w, key.code))
        }
        Request::Graph { kind, .. } => Answer::Graph {
            kind,
            edges: match kind {
                GraphKind::Nn => proximity::nn_graph(seq, w),
                GraphKind::Mst => proximity::mst(seq, w),
                GraphKind::Gabriel => proximity::gabriel(seq, w),
            },
        },
    })
}

/// Reference answer for a query given by kind name and raw parameters.
pub fn oracle(kind: &str, seq: &EventSequence, w: Window, params: &[&str]) -> Result<Answer, UsageError> {
    let req = Request::parse(kind, params)?;
    answer(&req, seq, w, &Settings::default()).map_err(|e| UsageError(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_kind() {
        let params: &[(&str, &[&str])] = &[
            ("giftwrap", &["3", "ccw"]),
            ("tangent", &["1", "2"]),
            ("extremal", &["1,0"]),
            ("linedec", &["0,0,1,1"]),
            ("linestab", &["0", "0", "1", "1"]),
            ("vstab", &["0.5"]),
            ("locate", &["1", "2"]),
            ("range", &["0", "0", "1"]),
            ("emptiness", &["0", "0", "1", "0.5"]),
            ("ann", &["0", "0"]),
            ("nn", &["0", "0", "0.2"]),
            ("successor", &["0", "0", "2"]),
            ("graph", &["mst"]),
            ("nn_graph", &[]),
            ("mst", &[]),
            ("gabriel", &["4"]),
        ];
        for kind in KINDS {
            assert!(family_of(kind).is_some());
            let p = params.iter().find(|p| p.0 == *kind).map_or(&[][..], |p| p.1);
            assert!(Request::parse(kind, p).is_ok(), "{kind}");
        }
        assert!(Request::parse("delaunay", &[]).is_err());
        assert!(Request::parse("range", &["0", "0"]).is_err());
        assert!(Request::parse("graph", &["foo"]).is_err());
        assert!(Request::parse("successor", &["0", "0", "3"]).is_err());
    }

    #[test]
    fn dispatcher_examples() {
        let seq = EventSequence::from_points(vec![vec![3.0, 1.0], vec![2.0, 2.0], vec![1.0, 3.0]]).unwrap();
        let w = Window::new(0, 2);
        assert_eq!(oracle("skyline", &seq, w, &[]).unwrap(), Answer::Indices(vec![0, 1, 2]));
        assert_eq!(oracle("hull", &seq, w, &[]).unwrap(), Answer::Indices(vec![2, 0]));
        let two = EventSequence::from_points(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        match oracle("mst", &two, Window::new(0, 1), &[]).unwrap() {
            Answer::Graph { edges, .. } => assert_eq!(edges, vec![(0, 1, 5.0)]),
            other => panic!("{other:?}"),
        }
        assert!(oracle("bogus", &seq, w, &[]).is_err());
    }
}
