//! Event ingestion and window resolution.

use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An event as supplied by the caller, before sorting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawEvent {
    #[serde(rename = "t")]
    pub timestamp: i64,
    pub coords: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub color: Option<u32>,
}

impl RawEvent {
    pub fn new(timestamp: i64, coords: Vec<f64>) -> Self {
        RawEvent {
            timestamp,
            coords,
            color: None,
        }
    }

    pub fn colored(timestamp: i64, coords: Vec<f64>, color: u32) -> Self {
        RawEvent {
            timestamp,
            coords,
            color: Some(color),
        }
    }
}

/// One event of a sequence, with its position in time order.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalPoint {
    pub index: usize,
    pub timestamp: i64,
    pub coords: Vec<f64>,
    pub color: Option<u32>,
}

/// An inclusive index range `[i, j]` into an [`EventSequence`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Window {
    pub i: usize,
    pub j: usize,
}

impl Window {
    pub fn new(i: usize, j: usize) -> Self {
        debug_assert!(i <= j);
        Window { i, j }
    }

    pub fn width(&self) -> usize {
        self.j - self.i + 1
    }

    pub fn contains(&self, k: usize) -> bool {
        self.i <= k && k <= self.j
    }

    pub fn indices(&self) -> std::ops::RangeInclusive<usize> {
        self.i..=self.j
    }
}

/// Immutable, time-ordered sequence of point events.
///
/// Coordinates are stored column-major by event (`coords[k * d + m]`) so the
/// indices can read them without chasing one allocation per point.
#[derive(Debug, Clone)]
pub struct EventSequence {
    dim: usize,
    timestamps: Vec<i64>,
    coords: Vec<f64>,
    colors: Vec<Option<u32>>,
}

impl EventSequence {
    /// Sorts `events` stably by timestamp and assigns indices `0..n`.
    pub fn new(events: Vec<RawEvent>) -> Result<Self> {
        let first = events.first().ok_or(Error::EmptyInput)?;
        let dim = first.coords.len();
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                index: 0,
                expected: 1,
                found: 0,
            });
        }
        for (index, e) in events.iter().enumerate() {
            if e.coords.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: e.coords.len(),
                });
            }
            if let Some(&value) = e.coords.iter().find(|c| !c.is_finite()) {
                return Err(Error::OutOfBounds { value });
            }
        }
        let mut events = events;
        events.sort_by_key(|e| e.timestamp);
        let n = events.len();
        let mut seq = EventSequence {
            dim,
            timestamps: Vec::with_capacity(n),
            coords: Vec::with_capacity(n * dim),
            colors: Vec::with_capacity(n),
        };
        for e in events {
            seq.timestamps.push(e.timestamp);
            // Adding zero maps -0.0 to 0.0 so total and partial orders agree.
            seq.coords.extend(e.coords.iter().map(|c| c + 0.0));
            seq.colors.push(e.color);
        }
        Ok(seq)
    }

    /// Builds a sequence whose timestamps are the positions `0..n`.
    pub fn from_points<I, P>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = P>,
        P: Into<Vec<f64>>,
    {
        let events = points
            .into_iter()
            .enumerate()
            .map(|(k, p)| RawEvent::new(k as i64, p.into()))
            .collect();
        Self::new(events)
    }

    pub fn len(&self) -> usize {
        self.timestamps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.timestamps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn coords(&self, k: usize) -> &[f64] {
        &self.coords[k * self.dim..(k + 1) * self.dim]
    }

    /// First two coordinates of event `k`. Only meaningful when `dim() == 2`.
    #[inline]
    pub fn xy(&self, k: usize) -> [f64; 2] {
        let o = k * self.dim;
        [self.coords[o], self.coords[o + 1]]
    }

    pub fn timestamp(&self, k: usize) -> i64 {
        self.timestamps[k]
    }

    pub fn color(&self, k: usize) -> Option<u32> {
        self.colors[k]
    }

    pub fn is_colored(&self) -> bool {
        self.colors.iter().all(Option::is_some)
    }

    pub fn point(&self, k: usize) -> TemporalPoint {
        TemporalPoint {
            index: k,
            timestamp: self.timestamps[k],
            coords: self.coords(k).to_vec(),
            color: self.colors[k],
        }
    }

    pub fn points(&self) -> impl Iterator<Item = TemporalPoint> + '_ {
        (0..self.len()).map(move |k| self.point(k))
    }

    pub fn full_window(&self) -> Window {
        Window::new(0, self.len() - 1)
    }

    /// Validates an index window against this sequence.
    pub fn window(&self, i: usize, j: usize) -> Result<Window> {
        if i > j || j >= self.len() {
            return Err(Error::InvalidWindow { i, j, n: self.len() });
        }
        Ok(Window::new(i, j))
    }

    /// Maps a time interval `[t1, t2]` to the maximal index range of events
    /// with timestamps inside it, or `None` when no event falls inside.
    pub fn resolve_window(&self, t1: i64, t2: i64) -> Result<Option<Window>> {
        if t1 > t2 {
            return Err(Error::InvalidInterval { t1, t2 });
        }
        let i = self.timestamps.partition_point(|&t| t < t1);
        let end = self.timestamps.partition_point(|&t| t <= t2);
        if i >= end {
            return Ok(None);
        }
        Ok(Some(Window::new(i, end - 1)))
    }

    pub(crate) fn require_dim(&self, expected: usize) -> Result<()> {
        if self.dim != expected {
            return Err(Error::UnsupportedDimension {
                expected,
                found: self.dim,
            });
        }
        Ok(())
    }
}

/// Reads events from CSV with a header `t,x,y[,z...][,color]`.
pub fn read_csv<R: std::io::Read>(reader: R) -> Result<Vec<RawEvent>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let names: Vec<&str> = headers.iter().collect();
    if names.first() != Some(&"t") {
        return Err(Error::Parse {
            line: 1,
            message: "header must start with column `t`".into(),
        });
    }
    let has_color = names.last() == Some(&"color");
    let ncoords = names.len() - 1 - usize::from(has_color);
    if ncoords == 0 {
        return Err(Error::Parse {
            line: 1,
            message: "header names no coordinate columns".into(),
        });
    }

    let mut events = Vec::new();
    for (row, record) in rdr.records().enumerate() {
        let line = row + 2;
        let record = record.map_err(|e| Error::Parse {
            line,
            message: e.to_string(),
        })?;
        if record.len() != names.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", names.len(), record.len()),
            });
        }
        let bad = |what: &str, v: &str| Error::Parse {
            line,
            message: format!("invalid {what} `{v}`"),
        };
        let timestamp: i64 = record[0].parse().map_err(|_| bad("timestamp", &record[0]))?;
        let mut coords = Vec::with_capacity(ncoords);
        for m in 0..ncoords {
            let v: f64 = record[m + 1]
                .parse()
                .map_err(|_| bad("coordinate", &record[m + 1]))?;
            if !v.is_finite() {
                return Err(bad("coordinate", &record[m + 1]));
            }
            coords.push(v);
        }
        let color = if has_color {
            let c = &record[names.len() - 1];
            Some(c.parse::<u32>().map_err(|_| bad("color", c))?)
        } else {
            None
        };
        events.push(RawEvent {
            timestamp,
            coords,
            color,
        });
    }
    Ok(events)
}

/// Reads events from JSON lines with keys `t`, `coords` and optional `color`.
pub fn read_jsonl<R: BufRead>(reader: R) -> Result<Vec<RawEvent>> {
    let mut events = Vec::new();
    for (row, line) in reader.lines().enumerate() {
        let line_no = row + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let e: RawEvent = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if e.coords.iter().any(|v| !v.is_finite()) {
            return Err(Error::Parse {
                line: line_no,
                message: "non-finite coordinate".into(),
            });
        }
        events.push(e);
    }
    Ok(events)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(ts: &[i64]) -> EventSequence {
        EventSequence::new(
            ts.iter()
                .map(|&t| RawEvent::new(t, vec![t as f64, 0.0]))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn sorts_by_timestamp() {
        let s = EventSequence::new(vec![
            RawEvent::new(5, vec![0.0, 0.0]),
            RawEvent::new(1, vec![1.0, 1.0]),
        ])
        .unwrap();
        assert_eq!(s.timestamp(0), 1);
        assert_eq!(s.coords(0), &[1.0, 1.0]);
        assert_eq!(s.coords(1), &[0.0, 0.0]);
    }

    #[test]
    fn single_event() {
        let s = seq(&[7]);
        assert_eq!(s.len(), 1);
        assert_eq!(s.point(0).index, 0);
    }

    #[test]
    fn equal_timestamps_keep_insertion_order() {
        let s = EventSequence::new(vec![
            RawEvent::new(3, vec![1.0]),
            RawEvent::new(3, vec![2.0]),
            RawEvent::new(1, vec![0.0]),
        ])
        .unwrap();
        assert_eq!(s.coords(1), &[1.0]);
        assert_eq!(s.coords(2), &[2.0]);
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(EventSequence::new(vec![]).unwrap_err(), Error::EmptyInput);
        let err = EventSequence::new(vec![
            RawEvent::new(0, vec![0.0, 0.0]),
            RawEvent::new(1, vec![0.0]),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { index: 1, .. }));
    }

    #[test]
    fn resolves_windows() {
        let s = seq(&[10, 20, 30]);
        assert_eq!(s.resolve_window(15, 30).unwrap(), Some(Window::new(1, 2)));
        assert_eq!(s.resolve_window(31, 99).unwrap(), None);
        assert_eq!(s.resolve_window(10, 10).unwrap(), Some(Window::new(0, 0)));
        assert!(matches!(
            s.resolve_window(5, 4),
            Err(Error::InvalidInterval { .. })
        ));
    }

    #[test]
    fn csv_parsing() {
        let data = "t,x,y,color\n1,0.5,1.5,3\n0,2,3,4\n";
        let ev = read_csv(data.as_bytes()).unwrap();
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].coords, vec![0.5, 1.5]);
        assert_eq!(ev[1].color, Some(4));

        let bad = "t,x,y\n1,0,0\n2,zz,1\n";
        match read_csv(bad.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn jsonl_parsing() {
        let data = "{\"t\":4,\"coords\":[1.0,2.0]}\n\n{\"t\":1,\"coords\":[0,0],\"color\":9}\n";
        let ev = read_jsonl(data.as_bytes()).unwrap();
        assert_eq!(ev[1].color, Some(9));
        assert!(read_jsonl("{\"t\":1}".as_bytes()).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn resolve_matches_scan(
                mut ts in proptest::collection::vec(-50i64..50, 1..200),
                a in -60i64..60,
                b in -60i64..60,
            ) {
                let (t1, t2) = (a.min(b), a.max(b));
                ts.sort();
                let s = seq(&ts);
                let hits: Vec<usize> = (0..ts.len()).filter(|&k| t1 <= ts[k] && ts[k] <= t2).collect();
                let got = s.resolve_window(t1, t2).unwrap();
                match got {
                    None => prop_assert!(hits.is_empty()),
                    Some(w) => {
                        prop_assert_eq!(w.i, hits[0]);
                        prop_assert_eq!(w.j, *hits.last().unwrap());
                        prop_assert_eq!(w.width(), hits.len());
                    }
                }
            }
        }
    }
}
