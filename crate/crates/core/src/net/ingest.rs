//! Reading and writing edge lists, trace files and event files.
//!
//! Edge lists are UTF-8 text with `#` comment lines; each data line carries
//! whitespace-separated fields `source target` (untimed) or
//! `source target timestamp` (timed). Ids are arbitrary non-whitespace
//! strings and are mapped to dense integers in order of first appearance.
//! Multi-edges and self-loops are kept.
//!
//! Trace files carry one token per line, `N` or `E <src> <dst>`; event files
//! use the endpoint-free tokens `N` or `E`.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::{EventSequence, EventToken, GrowthEvent, GrowthTrace, Snapshot};
use crate::{Error, Result};

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        line,
        reason: reason.into(),
    }
}

fn data_lines<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String)>> {
    reader.lines().enumerate().filter_map(|(idx, line)| match line {
        Err(e) => Some(Err(Error::Io(e))),
        Ok(text) => {
            let trimmed = text.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                None
            } else {
                Some(Ok((idx + 1, trimmed.to_string())))
            }
        }
    })
}

#[derive(Default)]
struct IdInterner {
    map: HashMap<String, u32>,
}

impl IdInterner {
    fn intern(&mut self, id: &str) -> u32 {
        let next = self.map.len() as u32;
        *self.map.entry(id.to_string()).or_insert(next)
    }

    fn len(&self) -> usize {
        self.map.len()
    }
}

/// Read an untimed edge list as a final snapshot. The node set is the union
/// of endpoint ids; in-degrees count incoming edges with multiplicity.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<Snapshot> {
    let mut interner = IdInterner::default();
    let mut edges = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let mut fields = text.split_whitespace();
        let (src, dst) = match (fields.next(), fields.next(), fields.next()) {
            (Some(s), Some(d), None) => (s, d),
            _ => {
                return Err(parse_err(
                    line,
                    "expected exactly 2 fields: source-id target-id",
                ))
            }
        };
        let s = interner.intern(src);
        let d = interner.intern(dst);
        edges.push((s, d));
    }
    Snapshot::from_edges(interner.len() as u64, edges)
}

/// Read a timed edge list as a growth trace. Rows are stably sorted by
/// timestamp (ties keep input order); the first appearance of an id becomes
/// a node event, except that the first two distinct ids form the initial
/// two-node state. Each row then contributes one edge event.
pub fn read_timed_edge_list<R: BufRead>(reader: R) -> Result<GrowthTrace> {
    let mut rows: Vec<(f64, String, String)> = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        let mut fields = text.split_whitespace();
        let (src, dst, stamp) = match (fields.next(), fields.next(), fields.next(), fields.next())
        {
            (Some(s), Some(d), Some(t), None) => (s, d, t),
            (Some(_), Some(_), None, _) => {
                return Err(parse_err(line, "timed mode requires a timestamp field"))
            }
            _ => {
                return Err(parse_err(
                    line,
                    "expected exactly 3 fields: source-id target-id timestamp",
                ))
            }
        };
        let t: f64 = stamp
            .parse()
            .map_err(|_| parse_err(line, format!("invalid timestamp {stamp:?}")))?;
        if !t.is_finite() {
            return Err(parse_err(line, "timestamp must be finite"));
        }
        rows.push((t, src.to_string(), dst.to_string()));
    }
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite timestamps"));

    let mut interner = IdInterner::default();
    let mut events = Vec::new();
    let mut times = Vec::new();
    let mut initial_nodes = 0u32;
    for (stamp, src, dst) in &rows {
        for id in [src, dst] {
            let before = interner.len();
            interner.intern(id);
            if interner.len() > before {
                // First appearance: either part of the initial state or a
                // node event at this row's timestamp.
                if initial_nodes < 2 {
                    initial_nodes += 1;
                } else {
                    events.push(GrowthEvent::Node);
                    times.push(*stamp);
                }
            }
        }
        events.push(GrowthEvent::Edge {
            source: interner.intern(src),
            target: interner.intern(dst),
        });
        times.push(*stamp);
    }
    Ok(GrowthTrace {
        initial_nodes,
        events,
        event_times: Some(times),
    })
}

/// Write an untimed edge list (`source target` per line).
pub fn write_edge_list<W: Write>(writer: &mut W, snapshot: &Snapshot) -> Result<()> {
    let edges = snapshot.edges.as_ref().ok_or_else(|| {
        Error::InvalidParameter("snapshot carries no raw edges to write".into())
    })?;
    for &(s, d) in edges {
        writeln!(writer, "{s} {d}")?;
    }
    Ok(())
}

/// Write a timed edge list from a trace, using the 1-based time-step of each
/// edge event as its timestamp. Node events produce no line, so isolated
/// nodes are not representable in this format; use a trace file to keep
/// them.
pub fn write_timed_edge_list<W: Write>(writer: &mut W, trace: &GrowthTrace) -> Result<()> {
    for (idx, event) in trace.events.iter().enumerate() {
        if let GrowthEvent::Edge { source, target } = event {
            writeln!(writer, "{source} {target} {}", idx + 1)?;
        }
    }
    Ok(())
}

/// Write a trace file: one `N` or `E <src> <dst>` line per event. Traces
/// with other than two initial nodes record the count in a comment header.
pub fn write_trace_file<W: Write>(writer: &mut W, trace: &GrowthTrace) -> Result<()> {
    if trace.initial_nodes != 2 {
        writeln!(writer, "# initial-nodes {}", trace.initial_nodes)?;
    }
    for event in &trace.events {
        match event {
            GrowthEvent::Node => writeln!(writer, "N")?,
            GrowthEvent::Edge { source, target } => writeln!(writer, "E {source} {target}")?,
        }
    }
    Ok(())
}

/// Read a trace file written by [`write_trace_file`]. Edge events are
/// validated against the number of nodes existing at their step.
pub fn read_trace_file<R: BufRead>(reader: R) -> Result<GrowthTrace> {
    let mut initial_nodes = 2u32;
    let mut events = Vec::new();
    let mut nodes: u64;
    let mut first_data_seen = false;
    let mut pending_initial: Option<u32> = None;

    // The initial-node header, when present, must precede all events, so it
    // is picked out before the data-line filter drops comments.
    let mut raw = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let text = line?;
        let trimmed = text.trim().to_string();
        raw.push((idx + 1, trimmed));
    }
    for (line, text) in &raw {
        if let Some(rest) = text.strip_prefix("# initial-nodes") {
            if first_data_seen {
                return Err(parse_err(*line, "initial-nodes header must come first"));
            }
            let n: u32 = rest
                .trim()
                .parse()
                .map_err(|_| parse_err(*line, "invalid initial-nodes count"))?;
            pending_initial = Some(n);
        } else if !text.is_empty() && !text.starts_with('#') {
            first_data_seen = true;
        }
    }
    if let Some(n) = pending_initial {
        initial_nodes = n;
    }
    nodes = initial_nodes as u64;

    for (line, text) in raw {
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let mut fields = text.split_whitespace();
        match fields.next() {
            Some("N") => {
                if fields.next().is_some() {
                    return Err(parse_err(line, "N token takes no fields"));
                }
                events.push(GrowthEvent::Node);
                nodes += 1;
            }
            Some("E") => {
                let (s, d) = match (fields.next(), fields.next(), fields.next()) {
                    (Some(s), Some(d), None) => (s, d),
                    _ => return Err(parse_err(line, "expected E <src> <dst>")),
                };
                let source: u32 = s
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid node id {s:?}")))?;
                let target: u32 = d
                    .parse()
                    .map_err(|_| parse_err(line, format!("invalid node id {d:?}")))?;
                if source as u64 >= nodes || target as u64 >= nodes {
                    return Err(parse_err(
                        line,
                        format!("edge references node {} before it exists", source.max(target)),
                    ));
                }
                events.push(GrowthEvent::Edge { source, target });
            }
            _ => return Err(parse_err(line, "expected token N or E")),
        }
    }
    Ok(GrowthTrace::new(initial_nodes, events))
}

/// Write an endpoint-free event file: one `N` or `E` per line.
pub fn write_event_file<W: Write>(writer: &mut W, sequence: &EventSequence) -> Result<()> {
    for token in sequence.tokens() {
        match token {
            EventToken::Node => writeln!(writer, "N")?,
            EventToken::Edge => writeln!(writer, "E")?,
        }
    }
    Ok(())
}

/// Read an endpoint-free event file. `E <src> <dst>` lines are accepted and
/// stripped, so trace files parse as event sequences too.
pub fn read_event_file<R: BufRead>(reader: R) -> Result<EventSequence> {
    let mut tokens = Vec::new();
    for item in data_lines(reader) {
        let (line, text) = item?;
        match text.split_whitespace().next() {
            Some("N") => tokens.push(EventToken::Node),
            Some("E") => tokens.push(EventToken::Edge),
            _ => return Err(parse_err(line, "expected token N or E")),
        }
    }
    Ok(EventSequence::new(tokens))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn untimed_small_example() {
        let input = "a b\nc b\n";
        let snap = read_edge_list(input.as_bytes()).unwrap();
        assert_eq!(snap.node_count, 3);
        assert_eq!(snap.edge_count, 2);
        assert_eq!(snap.histogram.count(0), 2);
        assert_eq!(snap.histogram.count(2), 1);
    }

    #[test]
    fn untimed_empty_input() {
        let snap = read_edge_list("".as_bytes()).unwrap();
        assert_eq!(snap.node_count, 0);
        assert_eq!(snap.edge_count, 0);
        assert!(snap.histogram.is_empty());
    }

    #[test]
    fn comments_and_blanks_skipped() {
        let input = "# header\n\na b\n  # indented comment\nb a\n";
        let snap = read_edge_list(input.as_bytes()).unwrap();
        assert_eq!(snap.edge_count, 2);
    }

    #[test]
    fn malformed_line_reports_number() {
        let input = "a b\nc\n";
        match read_edge_list(input.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn timed_requires_timestamp() {
        let input = "a b 1\nc d\n";
        match read_timed_edge_list(input.as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn timed_orders_by_timestamp_with_stable_ties() {
        // Lines arrive out of order; after sorting, (a,b) at t=1 comes first
        // and the two t=2 lines keep their input order.
        let input = "c b 2\na b 1\nd b 2\n";
        let trace = read_timed_edge_list(input.as_bytes()).unwrap();
        let snap = trace.replay().unwrap();
        assert_eq!(snap.node_count, 4);
        assert_eq!(snap.edge_count, 3);
        assert_eq!(trace.initial_nodes, 2);
        // a and b are the initial nodes; c and d enter as node events.
        assert_eq!(
            trace.event_sequence().tokens(),
            &[
                EventToken::Edge,
                EventToken::Node,
                EventToken::Edge,
                EventToken::Node,
                EventToken::Edge
            ]
        );
    }

    #[test]
    fn trace_file_round_trip() {
        let input = "c b 2\na b 1\nd b 2\n";
        let trace = read_timed_edge_list(input.as_bytes()).unwrap();
        let mut buf = Vec::new();
        write_trace_file(&mut buf, &trace).unwrap();
        let back = read_trace_file(&buf[..]).unwrap();
        assert_eq!(back.events, trace.events);
        assert_eq!(back.initial_nodes, trace.initial_nodes);
    }

    #[test]
    fn event_file_round_trip() {
        let seq = EventSequence::new(vec![EventToken::Node, EventToken::Edge, EventToken::Node]);
        let mut buf = Vec::new();
        write_event_file(&mut buf, &seq).unwrap();
        assert_eq!(read_event_file(&buf[..]).unwrap(), seq);
    }

    proptest! {
        // Oracle: the trace built from a timed file must replay to exactly
        // the snapshot produced by untimed ingestion of the same lines.
        #[test]
        fn timed_replay_matches_untimed(
            rows in proptest::collection::vec((0u8..20, 0u8..20, 0u32..50), 0..300)
        ) {
            let mut timed = String::new();
            let mut untimed = String::new();
            for (s, d, t) in &rows {
                timed.push_str(&format!("n{s} n{d} {t}\n"));
            }
            // Untimed ingestion must see ids in the same first-appearance
            // order for node ids to line up, so feed it the sorted rows.
            let mut sorted = rows.clone();
            sorted.sort_by_key(|r| r.2);
            for (s, d, _) in &sorted {
                untimed.push_str(&format!("n{s} n{d}\n"));
            }
            let trace = read_timed_edge_list(timed.as_bytes()).unwrap();
            let replayed = trace.replay().unwrap();
            let direct = read_edge_list(untimed.as_bytes()).unwrap();
            prop_assert_eq!(replayed.node_count, direct.node_count);
            prop_assert_eq!(replayed.edge_count, direct.edge_count);
            prop_assert_eq!(replayed.histogram, direct.histogram);
        }
    }
}
