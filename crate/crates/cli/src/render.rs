//! JSON payloads for query answers.

use serde_json::{json, Value};
use tempogeo::hull::{HullEdge, Location, Tangent};
use tempogeo::EventSequence;
use tempogeo_oracles::query::Answer;

pub fn vertex(seq: &EventSequence, k: usize) -> Value {
    let p = seq.xy(k);
    json!({"index": k, "x": p[0], "y": p[1]})
}

fn edge(seq: &EventSequence, e: HullEdge) -> Value {
    json!([vertex(seq, e.0), vertex(seq, e.1)])
}

pub fn answer(seq: &EventSequence, ans: &Answer) -> Value {
    match ans {
        Answer::Indices(v) => json!(v),
        Answer::Count(c) => json!(c),
        Answer::Colors(c) => json!(c),
        Answer::Vertex(k) => vertex(seq, *k),
        Answer::MaybeVertex(k) => k.map_or(Value::Null, |k| vertex(seq, k)),
        Answer::Bool(b) => json!(b),
        Answer::Tangent(t) => match *t {
            Tangent::Inside => json!({"inside": true}),
            Tangent::Boundary => json!({"boundary": true}),
            Tangent::Outside { cw, ccw } => json!({"cw": vertex(seq, cw), "ccw": vertex(seq, ccw)}),
        },
        Answer::Stab(e) => e.map_or(Value::Null, |e| edge(seq, e)),
        Answer::VerticalStab(s) => s.map_or(Value::Null, |(up, down)| {
            json!({"upper": edge(seq, up), "lower": edge(seq, down)})
        }),
        Answer::Location(l) => json!(match l {
            Location::Inside => "inside",
            Location::Boundary => "boundary",
            Location::Outside => "outside",
        }),
        Answer::Nearest { k, dist } => {
            let mut v = vertex(seq, *k);
            v["distance"] = json!(dist);
            v
        }
        Answer::Graph { kind, edges } => json!({
            "kind": kind.name(),
            "edges": edges.iter().map(|e| json!([e.0, e.1, e.2])).collect::<Vec<_>>(),
        }),
    }
}
