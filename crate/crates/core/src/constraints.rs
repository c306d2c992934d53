//! Timing and inducedness constraints.
//!
//! Each surveyed motif model is a particular setting of the same knobs:
//!
//! | model     | timing | extra restriction                 |
//! |-----------|--------|-----------------------------------|
//! | Kovanen   | Δ_C    | consecutive events                |
//! | Hulovatyy | Δ_C    | static inducedness (+ optional CDG) |
//! | Paranjape | Δ_W    | static inducedness                |
//! | Song      | Δ_W    | none                              |
//!
//! Δ_C bounds the gap between consecutive motif events, Δ_W bounds the gap
//! between the first and last event. All bounds are inclusive.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::code::canonical_code;
use crate::graph::{NodeId, TemporalGraph, Timestamp};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConstraintError {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("timestamps must be strictly increasing")]
    NotIncreasing,
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("cannot parse configuration: {0}")]
    Parse(String),
}

/// The knobs that select a motif model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintConfig {
    /// Maximum gap between consecutive motif events, in seconds.
    pub delta_c: Option<u64>,
    /// Maximum gap between the first and last motif event, in seconds.
    pub delta_w: Option<u64>,
    /// Node-based temporal inducedness: no outside event may touch a motif
    /// node while that node is engaged in the motif.
    pub consecutive: bool,
    /// Constrained dynamic graphlets: the edge of the next motif event must
    /// not have fired since the previous motif event.
    pub cdg: bool,
    /// Every static edge among the motif nodes must appear in the motif.
    pub static_induced: bool,
    pub k_events: usize,
    pub max_nodes: usize,
}

impl Default for ConstraintConfig {
    fn default() -> Self {
        ConstraintConfig {
            delta_c: None,
            delta_w: None,
            consecutive: false,
            cdg: false,
            static_induced: false,
            k_events: 3,
            max_nodes: 3,
        }
    }
}

impl ConstraintConfig {
    pub fn with_delta_c(delta_c: u64) -> Self {
        ConstraintConfig {
            delta_c: Some(delta_c),
            ..Default::default()
        }
    }

    pub fn with_delta_w(delta_w: u64) -> Self {
        ConstraintConfig {
            delta_w: Some(delta_w),
            ..Default::default()
        }
    }

    pub fn kovanen(delta_c: u64) -> Self {
        ConstraintConfig {
            consecutive: true,
            ..Self::with_delta_c(delta_c)
        }
    }

    pub fn hulovatyy(delta_c: u64, cdg: bool) -> Self {
        ConstraintConfig {
            static_induced: true,
            cdg,
            ..Self::with_delta_c(delta_c)
        }
    }

    pub fn paranjape(delta_w: u64) -> Self {
        ConstraintConfig {
            static_induced: true,
            ..Self::with_delta_w(delta_w)
        }
    }

    pub fn song(delta_w: u64) -> Self {
        Self::with_delta_w(delta_w)
    }

    pub fn k(mut self, k_events: usize) -> Self {
        self.k_events = k_events;
        self
    }

    pub fn nodes(mut self, max_nodes: usize) -> Self {
        self.max_nodes = max_nodes;
        self
    }

    pub fn validate(&self) -> Result<(), ConstraintError> {
        let bad = |m: &str| Err(ConstraintError::InvalidConfig(m.to_string()));
        if self.delta_c.is_none() && self.delta_w.is_none() {
            return bad("at least one of delta_c, delta_w must be set");
        }
        if self.delta_c == Some(0) || self.delta_w == Some(0) {
            return bad("timing bounds must be positive");
        }
        if self.k_events == 0 {
            return bad("k must be at least 1");
        }
        if self.max_nodes < 2 {
            return bad("max_nodes must be at least 2");
        }
        Ok(())
    }

    /// Largest possible first-to-last span of a valid motif:
    /// `min(Δ_W, (k-1)·Δ_C)` over whichever bounds are set.
    pub fn span_bound(&self) -> u64 {
        let from_c = self
            .delta_c
            .map(|c| c.saturating_mul(self.k_events.saturating_sub(1) as u64));
        match (from_c, self.delta_w) {
            (Some(c), Some(w)) => c.min(w),
            (Some(c), None) => c,
            (None, Some(w)) => w,
            (None, None) => u64::MAX,
        }
    }

    /// Which timing bound actually binds, when both are set.
    pub fn regime(&self) -> Option<Regime> {
        match (self.delta_c, self.delta_w) {
            (Some(c), Some(w)) => constraint_regime(c, w, self.k_events).ok(),
            (Some(_), None) => Some(Regime::OnlyC),
            (None, Some(_)) => Some(Regime::OnlyW),
            (None, None) => None,
        }
    }
}

fn fmt_opt(v: Option<u64>) -> String {
    v.map_or_else(|| "none".to_string(), |v| v.to_string())
}

impl fmt::Display for ConstraintConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "delta_c={},delta_w={},consecutive={},cdg={},induced={},k={},max_nodes={}",
            fmt_opt(self.delta_c),
            fmt_opt(self.delta_w),
            self.consecutive,
            self.cdg,
            self.static_induced,
            self.k_events,
            self.max_nodes
        )
    }
}

impl FromStr for ConstraintConfig {
    type Err = ConstraintError;

    /// Parses `key=value` pairs separated by commas, whitespace or newlines.
    /// Lines starting with `#` are ignored; missing keys keep their defaults.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut cfg = ConstraintConfig::default();
        let body: String = s
            .lines()
            .filter(|l| !l.trim_start().starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n");
        for item in body
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|i| !i.is_empty())
        {
            let (key, value) = item
                .split_once('=')
                .ok_or_else(|| ConstraintError::Parse(format!("`{item}` is not key=value")))?;
            let perr = || ConstraintError::Parse(format!("bad value for {key}: `{value}`"));
            let opt = |v: &str| -> Result<Option<u64>, ConstraintError> {
                if v == "none" {
                    Ok(None)
                } else {
                    v.parse().map(Some).map_err(|_| perr())
                }
            };
            let flag = |v: &str| v.parse::<bool>().map_err(|_| perr());
            match key {
                "delta_c" => cfg.delta_c = opt(value)?,
                "delta_w" => cfg.delta_w = opt(value)?,
                "consecutive" => cfg.consecutive = flag(value)?,
                "cdg" => cfg.cdg = flag(value)?,
                "induced" => cfg.static_induced = flag(value)?,
                "k" => cfg.k_events = value.parse().map_err(|_| perr())?,
                "max_nodes" => cfg.max_nodes = value.parse().map_err(|_| perr())?,
                other => return Err(ConstraintError::Parse(format!("unknown key `{other}`"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Why a candidate instance is not a motif.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Violation {
    TimingC,
    TimingW,
    Consecutive,
    Cdg,
    Induced,
    Growth,
    SameTimestamp,
    NodeLimit,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Verdict {
    pub violations: BTreeSet<Violation>,
}

impl Verdict {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn has(&self, v: Violation) -> bool {
        self.violations.contains(&v)
    }
}

/// Timing violations of a strictly increasing time sequence.
pub fn check_timing(
    times: &[Timestamp],
    config: &ConstraintConfig,
) -> Result<BTreeSet<Violation>, ConstraintError> {
    if times.windows(2).any(|w| w[1] <= w[0]) {
        return Err(ConstraintError::NotIncreasing);
    }
    Ok(timing_violations(times, config))
}

fn timing_violations(times: &[Timestamp], config: &ConstraintConfig) -> BTreeSet<Violation> {
    let mut out = BTreeSet::new();
    if let Some(dc) = config.delta_c {
        if times.windows(2).any(|w| w[1].saturating_sub(w[0]) > dc) {
            out.insert(Violation::TimingC);
        }
    }
    if let (Some(dw), Some(first), Some(last)) = (config.delta_w, times.first(), times.last()) {
        if last.saturating_sub(*first) > dw {
            out.insert(Violation::TimingW);
        }
    }
    out
}

fn motif_nodes(instance: &[usize], g: &TemporalGraph) -> Vec<NodeId> {
    let mut nodes: Vec<NodeId> = instance
        .iter()
        .flat_map(|&i| {
            let e = g.event(i);
            [e.source, e.target]
        })
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    nodes
}

/// Consecutive-events restriction. For each motif node, no graph event
/// outside the motif may touch it within the closed span of its motif events.
pub fn check_consecutive(instance: &[usize], g: &TemporalGraph) -> bool {
    motif_nodes(instance, g).into_iter().all(|node| {
        let mut touching = instance
            .iter()
            .map(|&i| g.event(i))
            .filter(|e| e.touches(node));
        let first = touching.next().map(|e| e.time);
        let last = touching.next_back().map(|e| e.time);
        match (first, last) {
            (Some(lo), Some(hi)) => !g.adjacent_event_exists(node, lo, hi, instance),
            // a node touched once has nothing in between
            _ => true,
        }
    })
}

/// Constrained dynamic graphlet rule. For consecutive motif events on
/// different ordered edges, the second edge must not fire in `[t1, t2)`.
pub fn check_cdg(instance: &[usize], g: &TemporalGraph) -> bool {
    instance.windows(2).all(|w| {
        let (a, b) = (g.event(w[0]), g.event(w[1]));
        (a.source, a.target) == (b.source, b.target)
            || !g.edge_event_exists(b.source, b.target, a.time, b.time)
    })
}

/// Static inducedness against the whole graph's static projection.
pub fn check_static_induced(instance: &[usize], g: &TemporalGraph) -> bool {
    let nodes = motif_nodes(instance, g);
    let used = |a: NodeId, b: NodeId| {
        instance.iter().any(|&i| {
            let e = g.event(i);
            e.source == a && e.target == b
        })
    };
    nodes.iter().all(|&a| {
        nodes
            .iter()
            .all(|&b| a == b || !g.has_edge(a, b) || used(a, b))
    })
}

/// Every applicable check for a candidate instance given as event ordinals
/// in chronological order.
pub fn validate(instance: &[usize], g: &TemporalGraph, config: &ConstraintConfig) -> Verdict {
    let mut v = BTreeSet::new();
    let events: Vec<_> = instance.iter().map(|&i| g.event(i)).collect();
    let times: Vec<_> = events.iter().map(|e| e.time).collect();

    let pairs: Vec<_> = events.iter().map(|e| (e.source, e.target)).collect();
    if canonical_code(&pairs).is_err() {
        v.insert(Violation::Growth);
    }
    if times.windows(2).any(|w| w[1] <= w[0]) {
        v.insert(Violation::SameTimestamp);
    }
    if motif_nodes(instance, g).len() > config.max_nodes {
        v.insert(Violation::NodeLimit);
    }
    v.extend(timing_violations(&times, config));
    if config.consecutive && !check_consecutive(instance, g) {
        v.insert(Violation::Consecutive);
    }
    if config.cdg && !check_cdg(instance, g) {
        v.insert(Violation::Cdg);
    }
    if config.static_induced && !check_static_induced(instance, g) {
        v.insert(Violation::Induced);
    }
    Verdict { violations: v }
}

/// Which of the two timing bounds matters for motifs with `m` events.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// `Δ_C·(m-1) ≤ Δ_W`: the window can never bind.
    OnlyC,
    Both,
    /// `Δ_C ≥ Δ_W`: the gap bound can never bind.
    OnlyW,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::OnlyC => "OnlyC",
            Regime::Both => "Both",
            Regime::OnlyW => "OnlyW",
        })
    }
}

/// Classifies `Δ_C/Δ_W` against `1/(m-1)` and `1`, in exact integer
/// arithmetic.
pub fn constraint_regime(delta_c: u64, delta_w: u64, m: usize) -> Result<Regime, ConstraintError> {
    if m < 2 {
        return Err(ConstraintError::Argument(format!(
            "need at least 2 events, got {m}"
        )));
    }
    if delta_w == 0 {
        return Err(ConstraintError::Argument("delta_w must be positive".into()));
    }
    let loose = delta_c as u128 * (m as u128 - 1);
    Ok(if delta_c >= delta_w {
        Regime::OnlyW
    } else if loose <= delta_w as u128 {
        Regime::OnlyC
    } else {
        Regime::Both
    })
}
