//! Query scripts: one query per line, `OP t1 t2 [params...]` with a time
//! interval or `OP @i @j [params...]` with an index window. Blank lines and
//! lines starting with `#` are skipped.

use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use serde_json::{json, Value};
use tempogeo::{EventSequence, Window};
use tempogeo_oracles::query::Request;

use crate::bundle::Bundle;
use crate::render;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Span {
    Time(i64, i64),
    Index(usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Query {
    pub line: usize,
    pub span: Span,
    pub request: Request,
}

fn index_token(tok: &str) -> Option<usize> {
    tok.strip_prefix('@')?.parse().ok()
}

/// Parses one script line; `None` for blank and comment lines.
pub fn parse_line(text: &str, line: usize, n: usize) -> Result<Option<Query>> {
    let text = text.trim();
    if text.is_empty() || text.starts_with('#') {
        return Ok(None);
    }
    let toks: Vec<&str> = text.split_whitespace().collect();
    if toks.len() < 3 {
        bail!("line {line}: expected `OP t1 t2 [params...]`");
    }
    let span = if toks[1].starts_with('@') || toks[2].starts_with('@') {
        let (i, j) = index_token(toks[1])
            .zip(index_token(toks[2]))
            .ok_or_else(|| anyhow!("line {line}: bad index window {} {}", toks[1], toks[2]))?;
        if i > j || j >= n {
            bail!("line {line}: window [{i}, {j}] is invalid for {n} events");
        }
        Span::Index(i, j)
    } else {
        let t = |s: &str| {
            s.parse::<i64>()
                .with_context(|| format!("line {line}: bad timestamp {s:?}"))
        };
        let (t1, t2) = (t(toks[1])?, t(toks[2])?);
        if t1 > t2 {
            bail!("line {line}: invalid interval: t1 = {t1} > t2 = {t2}");
        }
        Span::Time(t1, t2)
    };
    let request = Request::parse(toks[0], &toks[3..]).map_err(|e| anyhow!("line {line}: {e}"))?;
    Ok(Some(Query { line, span, request }))
}

pub fn parse_script(text: &str, n: usize) -> Result<Vec<Query>> {
    let mut out = Vec::new();
    for (k, l) in text.lines().enumerate() {
        if let Some(q) = parse_line(l, k + 1, n)? {
            out.push(q);
        }
    }
    Ok(out)
}

pub fn resolve(seq: &EventSequence, span: Span) -> Result<Option<Window>> {
    Ok(match span {
        Span::Index(i, j) => Some(seq.window(i, j)?),
        Span::Time(t1, t2) => seq.resolve_window(t1, t2)?,
    })
}

/// Runs one query and renders its JSON line. Index errors (such as a
/// gift-wrapping start that is not a hull vertex) are reported in the
/// `error` field.
pub fn run(bundle: &Bundle, q: &Query) -> Value {
    let start = Instant::now();
    let op = q.request.name();
    let w = match resolve(&bundle.seq, q.span) {
        Ok(Some(w)) => w,
        Ok(None) => {
            let Span::Time(t1, t2) = q.span else { unreachable!() };
            return json!({"op": op, "t1": t1, "t2": t2, "empty": true, "elapsed_us": 0});
        }
        Err(e) => return json!({"op": op, "line": q.line, "error": e.to_string()}),
    };
    let res = bundle.answer(&q.request, w);
    let us = start.elapsed().as_secs_f64() * 1e6;
    match res {
        Ok(ans) => json!({
            "op": op,
            "i": w.i,
            "j": w.j,
            "result": render::answer(&bundle.seq, &ans),
            "elapsed_us": (us * 10.0).round() / 10.0,
        }),
        Err(e) => json!({"op": op, "i": w.i, "j": w.j, "error": e.to_string()}),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_window_forms() {
        let q = parse_line("skyline 0 100", 1, 10).unwrap().unwrap();
        assert_eq!(q.span, Span::Time(0, 100));
        let q = parse_line("linestab @2 @5 0,0,1,1", 2, 10).unwrap().unwrap();
        assert_eq!(q.span, Span::Index(2, 5));
        assert!(parse_line("# comment", 3, 10).unwrap().is_none());
        assert!(parse_line("", 4, 10).unwrap().is_none());
    }

    #[test]
    fn rejects_malformed_lines() {
        assert!(parse_line("skyline 5", 1, 10).is_err());
        assert!(parse_line("skyline 9 3", 1, 10).is_err());
        assert!(parse_line("skyline @3 @10", 1, 10).is_err());
        assert!(parse_line("frobnicate 0 1", 1, 10).is_err());
        assert!(parse_line("ann 0 1 0.5", 1, 10).is_err());
        let e = parse_script("skyline 0 1\nhull x 2\n", 10).unwrap_err();
        assert!(e.to_string().contains("line 2"));
    }
}
