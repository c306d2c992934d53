//! Motif instance enumeration and counting.
//!
//! The engine scans events in time order, uses each one as the first event of
//! a motif, and extends depth-first through events adjacent to the nodes
//! already in the motif. Timing, node budget, growth and same-timestamp rules
//! prune during the search; the inducedness restrictions are applied to
//! complete candidates only.
//!
//! [`brute_force_count`] is an independent oracle built directly on
//! [`validate`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;
#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

use thiserror::Error;

use crate::code::{canonical_code, enumerate_codes, Label, MotifCode, NodeSpec};
use crate::constraints::{
    check_cdg, check_consecutive, check_static_induced, validate, ConstraintConfig, ConstraintError,
};
use crate::graph::{Event, NodeId, TemporalGraph};

/// Graphs above this size need an explicit override for the oracle.
pub const BRUTE_FORCE_EVENT_LIMIT: usize = 2000;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Config(#[from] ConstraintError),
    #[error("combinatorial blow-up: anchor event {anchor} exceeded {cap} expansions")]
    BlowUp { anchor: usize, cap: u64 },
    #[error("brute force refused: {events} events exceeds the limit of {limit}")]
    TooLarge { events: usize, limit: usize },
    #[error("cannot parse count table: {0}")]
    Parse(String),
}

/// Receives every valid instance as its code plus its events in order.
pub trait InstanceVisitor {
    fn visit(&mut self, code: &MotifCode, events: &[Event], ordinals: &[usize]);
}

/// A visitor that can be split across workers and merged back.
///
/// Merging happens in anchor order, so a visitor whose `merge` is associative
/// gives the same result for any worker count.
pub trait ParallelVisitor: InstanceVisitor + Send {
    fn fork(&self) -> Self;
    fn merge(&mut self, other: Self);
}

impl<F> InstanceVisitor for F
where
    F: FnMut(&MotifCode, &[Event], &[usize]),
{
    fn visit(&mut self, code: &MotifCode, events: &[Event], ordinals: &[usize]) {
        self(code, events, ordinals)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    pub workers: usize,
    /// Abort when one anchor expands more than this many partial instances.
    pub expansion_cap: Option<u64>,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions {
            workers: 1,
            expansion_cap: None,
        }
    }
}

impl EngineOptions {
    pub fn workers(workers: usize) -> Self {
        EngineOptions {
            workers,
            ..Default::default()
        }
    }
}

struct Search<'g> {
    graph: &'g TemporalGraph,
    config: &'g ConstraintConfig,
    cap: Option<u64>,
    ordinals: Vec<usize>,
    events: Vec<Event>,
    nodes: Vec<NodeId>,
    digits: Vec<Label>,
    candidates: Vec<Vec<usize>>,
    expansions: u64,
    visited: u64,
}

impl<'g> Search<'g> {
    fn new(graph: &'g TemporalGraph, config: &'g ConstraintConfig, cap: Option<u64>) -> Self {
        let k = config.k_events;
        Search {
            graph,
            config,
            cap,
            ordinals: Vec::with_capacity(k),
            events: Vec::with_capacity(k),
            nodes: Vec::with_capacity(config.max_nodes),
            digits: Vec::with_capacity(2 * k),
            candidates: vec![Vec::new(); k],
            expansions: 0,
            visited: 0,
        }
    }

    fn label(&mut self, node: NodeId) -> Label {
        match self.nodes.iter().position(|&n| n == node) {
            Some(i) => i as Label,
            None => {
                self.nodes.push(node);
                (self.nodes.len() - 1) as Label
            }
        }
    }

    fn push(&mut self, ordinal: usize) {
        let e = self.graph.event(ordinal);
        let s = self.label(e.source);
        let t = self.label(e.target);
        self.ordinals.push(ordinal);
        self.events.push(e);
        self.digits.push(s);
        self.digits.push(t);
    }

    fn pop(&mut self) {
        self.ordinals.pop();
        self.events.pop();
        self.digits.truncate(self.digits.len() - 2);
        let used = self
            .digits
            .iter()
            .copied()
            .max()
            .map_or(0, |m| m as usize + 1);
        self.nodes.truncate(used);
    }

    fn run_anchor<V: InstanceVisitor + ?Sized>(
        &mut self,
        anchor: usize,
        visitor: &mut V,
    ) -> Result<(), EngineError> {
        self.expansions = 0;
        self.push(anchor);
        let result = self.extend(visitor);
        self.pop();
        result.map_err(|_| EngineError::BlowUp {
            anchor,
            cap: self.cap.unwrap_or(0),
        })
    }

    fn extend<V: InstanceVisitor + ?Sized>(&mut self, visitor: &mut V) -> Result<(), ()> {
        self.expansions += 1;
        if self.cap.is_some_and(|cap| self.expansions > cap) {
            return Err(());
        }
        let depth = self.ordinals.len();
        if depth == self.config.k_events {
            self.finish(visitor);
            return Ok(());
        }

        let first_t = self.events[0].time;
        let last_t = self.events[depth - 1].time;
        let mut limit = first_t.saturating_add(self.config.span_bound());
        if let Some(dc) = self.config.delta_c {
            limit = limit.min(last_t.saturating_add(dc));
        }
        if limit <= last_t {
            return Ok(());
        }

        let mut candidates = std::mem::take(&mut self.candidates[depth]);
        candidates.clear();
        for &node in &self.nodes {
            let adjacent = self.graph.node_events(node);
            let start = adjacent.partition_point(|&(t, _)| t <= last_t);
            candidates.extend(
                adjacent[start..]
                    .iter()
                    .take_while(|&&(t, _)| t <= limit)
                    .map(|&(_, ordinal)| ordinal),
            );
        }
        candidates.sort_unstable();
        candidates.dedup();

        let mut result = Ok(());
        for &next in &candidates {
            let e = self.graph.event(next);
            let fresh = usize::from(!self.nodes.contains(&e.source))
                + usize::from(!self.nodes.contains(&e.target));
            if self.nodes.len() + fresh > self.config.max_nodes {
                continue;
            }
            self.push(next);
            result = self.extend(visitor);
            self.pop();
            if result.is_err() {
                break;
            }
        }
        self.candidates[depth] = candidates;
        result
    }

    fn finish<V: InstanceVisitor + ?Sized>(&mut self, visitor: &mut V) {
        let (g, inst) = (self.graph, self.ordinals.as_slice());
        if self.config.consecutive && !check_consecutive(inst, g) {
            return;
        }
        if self.config.cdg && !check_cdg(inst, g) {
            return;
        }
        if self.config.static_induced && !check_static_induced(inst, g) {
            return;
        }
        let code = MotifCode::from_valid_digits(self.digits.clone());
        visitor.visit(&code, &self.events, &self.ordinals);
        self.visited += 1;
    }
}

/// Visits every valid instance exactly once, in anchor order, on the calling
/// thread. Returns the number of instances visited.
pub fn enumerate_instances<V: InstanceVisitor + ?Sized>(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    visitor: &mut V,
) -> Result<u64, EngineError> {
    enumerate_range(g, config, None, 0..g.event_count(), visitor)
}

/// Like [`enumerate_instances`] with an optional per-anchor expansion cap.
pub fn enumerate_instances_capped<V: InstanceVisitor + ?Sized>(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    cap: Option<u64>,
    visitor: &mut V,
) -> Result<u64, EngineError> {
    enumerate_range(g, config, cap, 0..g.event_count(), visitor)
}

fn enumerate_range<V: InstanceVisitor + ?Sized>(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    cap: Option<u64>,
    anchors: std::ops::Range<usize>,
    visitor: &mut V,
) -> Result<u64, EngineError> {
    config.validate()?;
    let mut search = Search::new(g, config, cap);
    for anchor in anchors {
        search.run_anchor(anchor, visitor)?;
    }
    Ok(search.visited)
}

/// Splits anchors into contiguous ranges, one per worker, and merges the
/// forked visitors back in range order.
pub fn enumerate_parallel<V: ParallelVisitor>(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    options: EngineOptions,
    visitor: &mut V,
) -> Result<u64, EngineError> {
    config.validate()?;
    let m = g.event_count();
    let workers = options.workers.clamp(1, m.max(1));
    if workers == 1 {
        return enumerate_range(g, config, options.expansion_cap, 0..m, visitor);
    }
    let chunk = m.div_ceil(workers);
    let results: Vec<Result<(V, u64), EngineError>> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let mut local = visitor.fork();
                let range = (w * chunk).min(m)..((w + 1) * chunk).min(m);
                scope.spawn(move || {
                    enumerate_range(g, config, options.expansion_cap, range, &mut local)
                        .map(|n| (local, n))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect()
    });
    let mut total = 0;
    for r in results {
        let (local, n) = r?;
        visitor.merge(local);
        total += n;
    }
    Ok(total)
}

/// Instance counts per motif class, over a fixed universe of codes.
#[derive(Debug, Clone, Default)]
pub struct CountTable {
    counts: BTreeMap<MotifCode, u64>,
    pub config: Option<ConstraintConfig>,
    pub graph_digest: Option<String>,
    /// Not serialized, so CSV output stays reproducible.
    pub wall_time: Option<Duration>,
}

impl PartialEq for CountTable {
    fn eq(&self, other: &Self) -> bool {
        self.counts == other.counts
    }
}

impl CountTable {
    /// A zero-filled table over `codes`.
    pub fn with_universe<I: IntoIterator<Item = MotifCode>>(codes: I) -> Self {
        CountTable {
            counts: codes.into_iter().map(|c| (c, 0)).collect(),
            ..Default::default()
        }
    }

    /// A zero-filled table over every code the config can produce.
    pub fn for_config(config: &ConstraintConfig) -> Self {
        let limit = config.max_nodes.min(config.k_events + 1);
        let mut table =
            Self::with_universe(enumerate_codes(config.k_events, NodeSpec::AtMost(limit)));
        table.config = Some(config.clone());
        table
    }

    pub fn add(&mut self, code: &MotifCode, n: u64) {
        if let Some(c) = self.counts.get_mut(code) {
            *c += n;
        } else {
            self.counts.insert(code.clone(), n);
        }
    }

    pub fn get(&self, code: &MotifCode) -> u64 {
        self.counts.get(code).copied().unwrap_or(0)
    }

    pub fn contains(&self, code: &MotifCode) -> bool {
        self.counts.contains_key(code)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// All `(code, count)` entries in code order, zeros included.
    pub fn iter(&self) -> impl Iterator<Item = (&MotifCode, u64)> {
        self.counts.iter().map(|(c, &n)| (c, n))
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&MotifCode, u64)> {
        self.iter().filter(|&(_, n)| n > 0)
    }

    pub fn codes(&self) -> impl Iterator<Item = &MotifCode> {
        self.counts.keys()
    }

    /// The sub-table of codes whose node count satisfies `nodes`.
    pub fn restrict(&self, nodes: NodeSpec) -> CountTable {
        CountTable {
            counts: self
                .counts
                .iter()
                .filter(|(c, _)| nodes.admits(c.node_count()))
                .map(|(c, &n)| (c.clone(), n))
                .collect(),
            config: self.config.clone(),
            graph_digest: self.graph_digest.clone(),
            wall_time: self.wall_time,
        }
    }

    /// `#` metadata lines, then `code,count` rows sorted by code.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("# tmotif count table\n");
        if let Some(cfg) = &self.config {
            let _ = writeln!(out, "# config: {cfg}");
        }
        if let Some(d) = &self.graph_digest {
            let _ = writeln!(out, "# graph_sha256: {d}");
        }
        let _ = writeln!(out, "# total: {}", self.total());
        out.push_str("code,count\n");
        for (code, n) in self.iter() {
            let _ = writeln!(out, "{code},{n}");
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<CountTable, EngineError> {
        let mut table = CountTable::default();
        let mut header_seen = false;
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                let meta = meta.trim();
                if let Some(cfg) = meta.strip_prefix("config:") {
                    table.config = cfg.trim().parse().ok();
                } else if let Some(d) = meta.strip_prefix("graph_sha256:") {
                    table.graph_digest = Some(d.trim().to_string());
                }
                continue;
            }
            if !header_seen {
                if line != "code,count" {
                    return Err(EngineError::Parse(format!(
                        "line {}: expected header `code,count`",
                        i + 1
                    )));
                }
                header_seen = true;
                continue;
            }
            let bad = |why: String| EngineError::Parse(format!("line {}: {why}", i + 1));
            let (code, count) = line
                .split_once(',')
                .ok_or_else(|| bad("expected `code,count`".into()))?;
            let code: MotifCode = code.parse().map_err(|e| bad(format!("{e}")))?;
            let count: u64 = count
                .trim()
                .parse()
                .map_err(|_| bad(format!("bad count `{count}`")))?;
            if table.counts.insert(code.clone(), count).is_some() {
                return Err(bad(format!("duplicate code {code}")));
            }
        }
        if !header_seen {
            return Err(EngineError::Parse("missing `code,count` header".into()));
        }
        Ok(table)
    }
}

/// Counting visitor used by [`count_motifs`].
#[derive(Debug, Clone)]
pub struct Counter {
    pub table: CountTable,
}

impl InstanceVisitor for Counter {
    fn visit(&mut self, code: &MotifCode, _events: &[Event], _ordinals: &[usize]) {
        self.table.add(code, 1);
    }
}

impl ParallelVisitor for Counter {
    fn fork(&self) -> Self {
        let mut table = self.table.clone();
        table.counts.values_mut().for_each(|c| *c = 0);
        Counter { table }
    }

    fn merge(&mut self, other: Self) {
        for (code, n) in other.table.counts {
            self.table.add(&code, n);
        }
    }
}

pub fn count_motifs(
    g: &TemporalGraph,
    config: &ConstraintConfig,
) -> Result<CountTable, EngineError> {
    count_motifs_with(g, config, EngineOptions::default())
}

pub fn count_motifs_with(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    options: EngineOptions,
) -> Result<CountTable, EngineError> {
    config.validate()?;
    // the browser target has no monotonic clock in std
    #[cfg(not(target_arch = "wasm32"))]
    let start = Instant::now();
    let mut counter = Counter {
        table: CountTable::for_config(config),
    };
    enumerate_parallel(g, config, options, &mut counter)?;
    let mut table = counter.table;
    table.graph_digest = Some(g.digest());
    #[cfg(not(target_arch = "wasm32"))]
    {
        table.wall_time = Some(start.elapsed());
    }
    Ok(table)
}

/// Reference counter: every increasing k-tuple of events is judged by
/// [`validate`]. Tuples whose span already exceeds the config's span bound
/// are skipped, since events are time-sorted and such tuples fail timing.
pub fn brute_force_count(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    allow_large: bool,
) -> Result<CountTable, EngineError> {
    config.validate()?;
    if !allow_large && g.event_count() > BRUTE_FORCE_EVENT_LIMIT {
        return Err(EngineError::TooLarge {
            events: g.event_count(),
            limit: BRUTE_FORCE_EVENT_LIMIT,
        });
    }
    let mut table = CountTable::for_config(config);
    let bound = config.span_bound();
    let mut tuple = Vec::with_capacity(config.k_events);
    for first in 0..g.event_count() {
        tuple.push(first);
        brute_extend(g, config, bound, &mut tuple, &mut table);
        tuple.pop();
    }
    table.graph_digest = Some(g.digest());
    Ok(table)
}

fn brute_extend(
    g: &TemporalGraph,
    config: &ConstraintConfig,
    bound: u64,
    tuple: &mut Vec<usize>,
    table: &mut CountTable,
) {
    if tuple.len() == config.k_events {
        if validate(tuple, g, config).is_valid() {
            let pairs: Vec<_> = tuple
                .iter()
                .map(|&i| (g.event(i).source, g.event(i).target))
                .collect();
            let code = canonical_code(&pairs).expect("validated instance has a code");
            table.add(&code, 1);
        }
        return;
    }
    let t0 = g.event(tuple[0]).time;
    let from = tuple.last().unwrap() + 1;
    for next in from..g.event_count() {
        if g.event(next).time - t0 > bound {
            break;
        }
        tuple.push(next);
        brute_extend(g, config, bound, tuple, table);
        tuple.pop();
    }
}
