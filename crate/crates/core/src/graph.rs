//! Timestamped directed edge lists and the indexes the motif checks run on.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use thiserror::Error;

/// Dense node identifier, `0..node_count`.
pub type NodeId = u32;
/// Event time in whole seconds.
pub type Timestamp = u64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("input contains no events")]
    Empty,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("i/o error: {0}")]
    Io(String),
}

/// One directed interaction `source -> target` at `time`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Event {
    pub source: NodeId,
    pub target: NodeId,
    pub time: Timestamp,
}

impl Event {
    pub fn touches(&self, node: NodeId) -> bool {
        self.source == node || self.target == node
    }
}

/// What happened while ingesting an edge list.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LoadReport {
    pub lines: usize,
    pub comments: usize,
    pub events: usize,
    pub self_loops: usize,
}

/// Immutable, time-ordered event list with per-node and per-edge time indexes.
///
/// Node ids are remapped to `0..n` in ascending order of the original ids, so
/// inputs that already use a dense `0..n` range keep their ids.
#[derive(Debug, Clone, Default)]
pub struct TemporalGraph {
    events: Vec<Event>,
    node_index: Vec<Vec<(Timestamp, usize)>>,
    /// Per source node, `(target, sorted times)` sorted by target.
    edge_index: Vec<Vec<(NodeId, Vec<Timestamp>)>>,
    static_edges: usize,
    original_ids: Vec<u64>,
}

impl TemporalGraph {
    /// Builds a graph from `(source, target, time)` triples in arbitrary time
    /// order. Self-loops are dropped and counted in the report.
    pub fn from_triples<I>(triples: I) -> (Self, LoadReport)
    where
        I: IntoIterator<Item = (u64, u64, u64)>,
    {
        let mut report = LoadReport::default();
        let mut kept = Vec::new();
        for (u, v, t) in triples {
            if u == v {
                report.self_loops += 1;
            } else {
                kept.push((u, v, t));
            }
        }
        report.events = kept.len();
        (Self::build(kept), report)
    }

    fn build(mut triples: Vec<(u64, u64, u64)>) -> Self {
        // stable: equal timestamps keep input order
        triples.sort_by_key(|&(_, _, t)| t);

        let mut ids: Vec<u64> = triples.iter().flat_map(|&(u, v, _)| [u, v]).collect();
        ids.sort_unstable();
        ids.dedup();
        let dense: HashMap<u64, NodeId> = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (id, i as NodeId))
            .collect();

        let events: Vec<Event> = triples
            .iter()
            .map(|&(u, v, t)| Event {
                source: dense[&u],
                target: dense[&v],
                time: t,
            })
            .collect();

        let mut node_index = vec![Vec::new(); ids.len()];
        let mut by_edge: HashMap<(NodeId, NodeId), Vec<Timestamp>> = HashMap::new();
        for (ordinal, e) in events.iter().enumerate() {
            node_index[e.source as usize].push((e.time, ordinal));
            node_index[e.target as usize].push((e.time, ordinal));
            by_edge
                .entry((e.source, e.target))
                .or_default()
                .push(e.time);
        }
        let static_edges = by_edge.len();
        let mut edge_index: Vec<Vec<(NodeId, Vec<Timestamp>)>> = vec![Vec::new(); ids.len()];
        for ((u, v), times) in by_edge {
            edge_index[u as usize].push((v, times));
        }
        for list in &mut edge_index {
            list.sort_unstable_by_key(|&(v, _)| v);
        }

        TemporalGraph {
            events,
            node_index,
            edge_index,
            static_edges,
            original_ids: ids,
        }
    }

    fn original_triples(&self) -> impl Iterator<Item = (u64, u64, u64)> + '_ {
        self.events.iter().map(|e| {
            (
                self.original_ids[e.source as usize],
                self.original_ids[e.target as usize],
                e.time,
            )
        })
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn event(&self, ordinal: usize) -> Event {
        self.events[ordinal]
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn event_count(&self) -> usize {
        self.events.len()
    }

    pub fn node_count(&self) -> usize {
        self.original_ids.len()
    }

    pub fn static_edge_count(&self) -> usize {
        self.static_edges
    }

    /// The id the node had in the input.
    pub fn original_id(&self, node: NodeId) -> u64 {
        self.original_ids[node as usize]
    }

    /// Dense id of an input node id, if it occurs in the graph.
    pub fn node_of(&self, original: u64) -> Option<NodeId> {
        self.original_ids
            .binary_search(&original)
            .ok()
            .map(|i| i as NodeId)
    }

    /// `(time, ordinal)` of every event adjacent to `node`, sorted.
    pub fn node_events(&self, node: NodeId) -> &[(Timestamp, usize)] {
        self.node_index
            .get(node as usize)
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    /// Sorted timestamps of the events on the ordered edge `(u, v)`.
    pub fn edge_times(&self, u: NodeId, v: NodeId) -> &[Timestamp] {
        let Some(out) = self.edge_index.get(u as usize) else {
            return &[];
        };
        match out.binary_search_by_key(&v, |&(t, _)| t) {
            Ok(i) => &out[i].1,
            Err(_) => &[],
        }
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        !self.edge_times(u, v).is_empty()
    }

    /// Floors every timestamp to a multiple of `bin_seconds`, keeping seconds
    /// as the unit.
    pub fn degrade_resolution(&self, bin_seconds: u64) -> Result<Self, GraphError> {
        if bin_seconds == 0 {
            return Err(GraphError::Argument("bin_seconds must be positive".into()));
        }
        let triples = self
            .original_triples()
            .map(|(u, v, t)| (u, v, t / bin_seconds * bin_seconds))
            .collect();
        Ok(Self::build(triples))
    }

    /// Events at ordinals `[floor(start*m), floor(end*m))`.
    pub fn slice_by_fraction(&self, start: Fraction, end: Fraction) -> Result<Self, GraphError> {
        if start >= end {
            return Err(GraphError::Argument(format!(
                "slice start {start} must be below end {end}"
            )));
        }
        let m = self.events.len() as u64;
        let lo = start.floor_mul(m) as usize;
        let hi = end.floor_mul(m) as usize;
        let triples = self
            .original_triples()
            .skip(lo)
            .take(hi.saturating_sub(lo))
            .collect();
        Ok(Self::build(triples))
    }

    pub fn stats(&self) -> Result<GraphStats, GraphError> {
        if self.events.is_empty() {
            return Err(GraphError::Empty);
        }
        let m = self.events.len();

        let mut per_time: HashMap<Timestamp, usize> = HashMap::new();
        for e in &self.events {
            *per_time.entry(e.time).or_default() += 1;
        }
        let unique_events = per_time.values().filter(|&&c| c == 1).count();

        let mut gaps: Vec<u64> = self
            .events
            .windows(2)
            .map(|w| w[1].time - w[0].time)
            .collect();
        gaps.sort_unstable();
        let median = match gaps.len() {
            0 => None,
            n if n % 2 == 1 => Some(gaps[n / 2] as f64),
            n => Some((gaps[n / 2 - 1] + gaps[n / 2]) as f64 / 2.0),
        };

        Ok(GraphStats {
            nodes: self.node_count(),
            events: m,
            edges: self.static_edge_count(),
            unique_timestamps: per_time.len(),
            pct_events_unique_timestamp: 100.0 * unique_events as f64 / m as f64,
            median_interevent_time_seconds: median.unwrap_or(0.0),
            median_defined: median.is_some(),
        })
    }

    /// True iff an event adjacent to `node` with time in `[t_lo, t_hi]` exists
    /// whose ordinal is not in `excluded`.
    pub fn adjacent_event_exists(
        &self,
        node: NodeId,
        t_lo: Timestamp,
        t_hi: Timestamp,
        excluded: &[usize],
    ) -> bool {
        let list = self.node_events(node);
        let start = list.partition_point(|&(t, _)| t < t_lo);
        list[start..]
            .iter()
            .take_while(|&&(t, _)| t <= t_hi)
            .any(|(_, ordinal)| !excluded.contains(ordinal))
    }

    /// True iff edge `(u, v)` fired at some time in `[t_lo, t_hi)`.
    pub fn edge_event_exists(
        &self,
        u: NodeId,
        v: NodeId,
        t_lo: Timestamp,
        t_hi: Timestamp,
    ) -> bool {
        let times = self.edge_times(u, v);
        let start = times.partition_point(|&t| t < t_lo);
        times.get(start).is_some_and(|&t| t < t_hi)
    }

    /// Ordered pairs among `nodes` that carry at least one event.
    pub fn static_edges_within(&self, nodes: &[NodeId]) -> BTreeSet<(NodeId, NodeId)> {
        let mut out = BTreeSet::new();
        for &a in nodes {
            for &b in nodes {
                if a != b && self.has_edge(a, b) {
                    out.insert((a, b));
                }
            }
        }
        out
    }

    /// SHA-256 over the event list in original ids, hex encoded.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        for (u, v, t) in self.original_triples() {
            hasher.update(u.to_le_bytes());
            hasher.update(v.to_le_bytes());
            hasher.update(t.to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }

    /// Writes the graph as a `u v t` edge list using the original node ids.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for (u, v, t) in self.original_triples() {
            writeln!(out, "{u} {v} {t}")?;
        }
        Ok(())
    }
}

/// Parses a `u v t` edge list. Fields may be separated by whitespace or
/// commas; lines starting with `#` and blank lines are skipped.
pub fn load_edge_list<R: BufRead>(input: R) -> Result<(TemporalGraph, LoadReport), GraphError> {
    let mut triples = Vec::new();
    let mut lines = 0;
    let mut comments = 0;
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| GraphError::Io(e.to_string()))?;
        lines += 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            comments += 1;
            continue;
        }
        let fields: Vec<&str> = trimmed
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line: i + 1,
                reason: format!("expected 3 fields, found {}", fields.len()),
            });
        }
        let mut parsed = [0u64; 3];
        for (slot, field) in parsed.iter_mut().zip(&fields) {
            *slot = field.parse().map_err(|_| GraphError::Parse {
                line: i + 1,
                reason: format!("`{field}` is not a non-negative integer"),
            })?;
        }
        triples.push((parsed[0], parsed[1], parsed[2]));
    }
    let (graph, mut report) = TemporalGraph::from_triples(triples);
    if graph.is_empty() {
        return Err(GraphError::Empty);
    }
    report.lines = lines;
    report.comments = comments;
    Ok((graph, report))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphStats {
    pub nodes: usize,
    pub events: usize,
    pub edges: usize,
    pub unique_timestamps: usize,
    pub pct_events_unique_timestamp: f64,
    pub median_interevent_time_seconds: f64,
    /// False when the graph has a single event and no interevent times.
    pub median_defined: bool,
}

impl GraphStats {
    pub const CSV_HEADER: &'static str = "nodes,events,edges,unique_timestamps,pct_events_unique_timestamp,median_interevent_time_seconds,median_defined";

    pub fn to_csv(&self) -> String {
        format!(
            "{}\n{},{},{},{},{:.4},{},{}\n",
            Self::CSV_HEADER,
            self.nodes,
            self.events,
            self.edges,
            self.unique_timestamps,
            self.pct_events_unique_timestamp,
            self.median_interevent_time_seconds,
            self.median_defined
        )
    }
}

/// A non-negative rational used for slice bounds, parsed exactly from
/// decimals (`0.1`) or ratios (`1/10`).
#[derive(Debug, Clone, Copy)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub fn new(num: u64, den: u64) -> Result<Self, GraphError> {
        if den == 0 || num > den {
            return Err(GraphError::Argument(format!(
                "fraction {num}/{den} is not in [0, 1]"
            )));
        }
        Ok(Fraction { num, den })
    }

    pub const ZERO: Fraction = Fraction { num: 0, den: 1 };
    pub const ONE: Fraction = Fraction { num: 1, den: 1 };

    fn floor_mul(self, m: u64) -> u64 {
        (self.num as u128 * m as u128 / self.den as u128) as u64
    }
}

impl PartialEq for Fraction {
    fn eq(&self, other: &Self) -> bool {
        self.num as u128 * other.den as u128 == other.num as u128 * self.den as u128
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some((self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128)))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || GraphError::Argument(format!("cannot parse fraction `{s}`"));
        let s = s.trim();
        if let Some((n, d)) = s.split_once('/') {
            let num = n.trim().parse().map_err(|_| bad())?;
            let den = d.trim().parse().map_err(|_| bad())?;
            return Fraction::new(num, den);
        }
        let (int, frac) = s.split_once('.').unwrap_or((s, ""));
        if frac.len() > 18 || (int.is_empty() && frac.is_empty()) {
            return Err(bad());
        }
        let digits = format!("{int}{frac}");
        if !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let num: u64 = digits.parse().map_err(|_| bad())?;
        Fraction::new(num, 10u64.pow(frac.len() as u32))
    }
}
