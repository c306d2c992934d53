//! Comparisons between count tables and the event-pair, position and
//! timespan analyses.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use thiserror::Error;

use crate::code::{CodeError, MotifCode, PairType};
use crate::constraints::ConstraintConfig;
use crate::engine::{
    enumerate_parallel, CountTable, EngineError, EngineOptions, InstanceVisitor, ParallelVisitor,
};
use crate::graph::{Event, TemporalGraph, Timestamp};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("tables cover different motif classes ({only_before} only in first, {only_after} only in second)")]
    UniverseMismatch {
        only_before: usize,
        only_after: usize,
    },
    #[error("table total is zero")]
    ZeroTotal,
    #[error("code {code}: {source}")]
    Code { code: MotifCode, source: CodeError },
    #[error("code {0} is not a three-event motif on at most three nodes")]
    OutOfUniverse(MotifCode),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

fn check_universe(before: &CountTable, after: &CountTable) -> Result<(), AnalysisError> {
    let a: BTreeSet<_> = before.codes().collect();
    let b: BTreeSet<_> = after.codes().collect();
    if a != b {
        return Err(AnalysisError::UniverseMismatch {
            only_before: a.difference(&b).count(),
            only_after: b.difference(&a).count(),
        });
    }
    Ok(())
}

/// 1-based ranks by descending count; ties go to the smaller code.
pub fn ranks(table: &CountTable) -> BTreeMap<MotifCode, usize> {
    let mut entries: Vec<_> = table.iter().collect();
    entries.sort_by(|(ca, na), (cb, nb)| nb.cmp(na).then_with(|| ca.cmp(cb)));
    entries
        .into_iter()
        .enumerate()
        .map(|(i, (c, _))| (c.clone(), i + 1))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankDelta {
    pub code: MotifCode,
    pub rank_before: usize,
    pub rank_after: usize,
    /// Positive when the motif climbed.
    pub delta: i64,
}

pub fn rank_deltas(
    before: &CountTable,
    after: &CountTable,
) -> Result<Vec<RankDelta>, AnalysisError> {
    check_universe(before, after)?;
    let rb = ranks(before);
    let ra = ranks(after);
    Ok(rb
        .into_iter()
        .map(|(code, rank_before)| {
            let rank_after = ra[&code];
            RankDelta {
                delta: rank_before as i64 - rank_after as i64,
                code,
                rank_before,
                rank_after,
            }
        })
        .collect())
}

pub fn rank_deltas_csv(rows: &[RankDelta]) -> String {
    let mut out = String::from("code,rank_before,rank_after,delta\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:+}",
            r.code, r.rank_before, r.rank_after, r.delta
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionRow {
    pub code: MotifCode,
    pub pct_before: f64,
    pub pct_after: f64,
    pub delta_pp: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProportionDelta {
    pub rows: Vec<ProportionRow>,
    /// Population variance of `delta_pp` over all codes.
    pub variance: f64,
}

pub fn proportion_deltas(
    before: &CountTable,
    after: &CountTable,
) -> Result<ProportionDelta, AnalysisError> {
    check_universe(before, after)?;
    let (tb, ta) = (before.total(), after.total());
    if tb == 0 || ta == 0 {
        return Err(AnalysisError::ZeroTotal);
    }
    let rows: Vec<ProportionRow> = before
        .iter()
        .map(|(code, nb)| {
            let pct_before = 100.0 * nb as f64 / tb as f64;
            let pct_after = 100.0 * after.get(code) as f64 / ta as f64;
            ProportionRow {
                code: code.clone(),
                pct_before,
                pct_after,
                delta_pp: pct_after - pct_before,
            }
        })
        .collect();
    let n = rows.len() as f64;
    let mean = rows.iter().map(|r| r.delta_pp).sum::<f64>() / n;
    let variance = rows
        .iter()
        .map(|r| (r.delta_pp - mean).powi(2))
        .sum::<f64>()
        / n;
    Ok(ProportionDelta { rows, variance })
}

pub fn proportion_deltas_csv(p: &ProportionDelta) -> String {
    let mut out = format!(
        "# variance: {:.6}\ncode,pct_before,pct_after,delta_pp\n",
        p.variance
    );
    for r in &p.rows {
        let _ = writeln!(
            out,
            "{},{:.6},{:.6},{:+.6}",
            r.code, r.pct_before, r.pct_after, r.delta_pp
        );
    }
    out
}

/// Event-pair tallies for a table.
///
/// `pairs` counts letters: each instance of a k-event motif contributes its
/// k-1 letters. `motifs_containing` counts instances whose sequence holds the
/// letter at least once.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PairTotals {
    pub pairs: [u64; 6],
    pub motifs_containing: [u64; 6],
    pub rpio_pairs: u64,
    pub cw_pairs: u64,
    pub rpio_motifs: u64,
    pub cw_motifs: u64,
}

impl PairTotals {
    pub fn get(&self, t: PairType) -> u64 {
        t.index().map_or(0, |i| self.pairs[i])
    }

    pub fn total_pairs(&self) -> u64 {
        self.pairs.iter().sum()
    }

    pub fn to_csv(&self) -> String {
        let total = self.total_pairs();
        let ratio = |n: u64| {
            if total == 0 {
                0.0
            } else {
                n as f64 / total as f64
            }
        };
        let mut out = String::from("type,pairs,ratio,motifs_containing\n");
        for t in PairType::ALPHABET {
            let i = t.index().unwrap();
            let _ = writeln!(
                out,
                "{},{},{:.6},{}",
                t.letter(),
                self.pairs[i],
                ratio(self.pairs[i]),
                self.motifs_containing[i]
            );
        }
        let _ = writeln!(
            out,
            "RPIO,{},{:.6},{}",
            self.rpio_pairs,
            ratio(self.rpio_pairs),
            self.rpio_motifs
        );
        let _ = writeln!(
            out,
            "CW,{},{:.6},{}",
            self.cw_pairs,
            ratio(self.cw_pairs),
            self.cw_motifs
        );
        out
    }
}

fn is_rpio(t: PairType) -> bool {
    matches!(
        t,
        PairType::Repetition | PairType::PingPong | PairType::InBurst | PairType::OutBurst
    )
}

/// Letter tallies over all instances in `table`. Codes with a zero count are
/// ignored; a counted code without a pair sequence is an error.
pub fn pair_group_totals(table: &CountTable) -> Result<PairTotals, AnalysisError> {
    let mut out = PairTotals::default();
    for (code, n) in table.nonzero() {
        let seq = code.pair_sequence().map_err(|source| AnalysisError::Code {
            code: code.clone(),
            source,
        })?;
        let mut present = [false; 6];
        for &t in seq.letters() {
            let i = t.index().expect("sequence holds only shared-node pairs");
            out.pairs[i] += n;
            present[i] = true;
            if is_rpio(t) {
                out.rpio_pairs += n;
            } else {
                out.cw_pairs += n;
            }
        }
        for (i, &p) in present.iter().enumerate() {
            if p {
                out.motifs_containing[i] += n;
            }
        }
        let letters = seq.letters();
        if letters.iter().any(|&t| is_rpio(t)) {
            out.rpio_motifs += n;
        }
        if letters.iter().any(|&t| !is_rpio(t)) {
            out.cw_motifs += n;
        }
    }
    Ok(out)
}

/// Which codes an instance-level analysis should look at.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub enum CodeFilter {
    #[default]
    All,
    Only(BTreeSet<MotifCode>),
}

impl CodeFilter {
    pub fn matches(&self, code: &MotifCode) -> bool {
        match self {
            CodeFilter::All => true,
            CodeFilter::Only(set) => set.contains(code),
        }
    }
}

/// Position of event `i` within the motif's timespan, as a percentage:
/// 0 at the first event, 100 at the last.
pub fn normalized_position(times: &[Timestamp], i: usize) -> f64 {
    let first = times[0];
    let span = times[times.len() - 1] - first;
    100.0 * (times[i] - first) as f64 / span as f64
}

/// Binned positions of intermediate events, one row per event index
/// `1..k-1` (0-based).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositionHistogram {
    pub bins: usize,
    /// `counts[j]` is the histogram of event index `j + 1`.
    pub counts: Vec<Vec<u64>>,
}

impl PositionHistogram {
    fn new(k: usize, bins: usize) -> Self {
        PositionHistogram {
            bins,
            counts: vec![vec![0; bins]; k.saturating_sub(2)],
        }
    }

    pub fn record(&mut self, times: &[Timestamp]) {
        if times.len() < 3 || times[times.len() - 1] == times[0] {
            return;
        }
        for (j, row) in self.counts.iter_mut().enumerate() {
            let pos = normalized_position(times, j + 1);
            let bin = ((pos / 100.0 * self.bins as f64) as usize).min(self.bins - 1);
            row[bin] += 1;
        }
    }

    pub fn bin_edges(&self, b: usize) -> (f64, f64) {
        let w = 100.0 / self.bins as f64;
        (b as f64 * w, (b + 1) as f64 * w)
    }

    /// One CSV block for the event at 0-based index `event`.
    pub fn to_csv(&self, event: usize) -> String {
        let row = &self.counts[event - 1];
        histogram_csv(row, |b| self.bin_edges(b))
    }
}

fn histogram_csv(row: &[u64], edges: impl Fn(usize) -> (f64, f64)) -> String {
    let total: u64 = row.iter().sum();
    let mut out = String::from("bin_lo,bin_hi,count,frequency\n");
    for (b, &n) in row.iter().enumerate() {
        let (lo, hi) = edges(b);
        let freq = if total == 0 {
            0.0
        } else {
            n as f64 / total as f64
        };
        let _ = writeln!(out, "{lo},{hi},{n},{freq:.6}");
    }
    out
}

struct PositionVisitor(CodeFilter, PositionHistogram);

impl InstanceVisitor for PositionVisitor {
    fn visit(&mut self, code: &MotifCode, events: &[Event], _: &[usize]) {
        if self.0.matches(code) {
            let times: Vec<_> = events.iter().map(|e| e.time).collect();
            self.1.record(&times);
        }
    }
}

impl ParallelVisitor for PositionVisitor {
    fn fork(&self) -> Self {
        PositionVisitor(
            self.0.clone(),
            PositionHistogram::new(self.1.counts.len() + 2, self.1.bins),
        )
    }

    fn merge(&mut self, other: Self) {
        for (a, b) in self.1.counts.iter_mut().zip(other.1.counts) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
    }
}

pub fn intermediate_histogram(
    g: &TemporalGraph,
    filter: &CodeFilter,
    config: &ConstraintConfig,
    bins: usize,
    options: EngineOptions,
) -> Result<PositionHistogram, AnalysisError> {
    if config.k_events < 3 {
        return Err(AnalysisError::Argument(
            "intermediate events need k >= 3".into(),
        ));
    }
    if bins == 0 {
        return Err(AnalysisError::Argument("bin count must be positive".into()));
    }
    let mut v = PositionVisitor(
        filter.clone(),
        PositionHistogram::new(config.k_events, bins),
    );
    enumerate_parallel(g, config, options, &mut v)?;
    Ok(v.1)
}

/// Counts of `t_last - t_first` in bins `[i·w, (i+1)·w)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanHistogram {
    pub bin_width: u64,
    pub counts: Vec<u64>,
}

impl SpanHistogram {
    pub fn new(bin_width: u64) -> Self {
        SpanHistogram {
            bin_width,
            counts: Vec::new(),
        }
    }

    pub fn record(&mut self, span: u64) {
        let bin = (span / self.bin_width) as usize;
        if self.counts.len() <= bin {
            self.counts.resize(bin + 1, 0);
        }
        self.counts[bin] += 1;
    }

    pub fn to_csv(&self) -> String {
        let w = self.bin_width;
        histogram_csv(&self.counts, |b| {
            ((b as u64 * w) as f64, ((b as u64 + 1) * w) as f64)
        })
    }
}

struct SpanVisitor(CodeFilter, SpanHistogram);

impl InstanceVisitor for SpanVisitor {
    fn visit(&mut self, code: &MotifCode, events: &[Event], _: &[usize]) {
        if self.0.matches(code) {
            let span = events[events.len() - 1].time - events[0].time;
            self.1.record(span);
        }
    }
}

impl ParallelVisitor for SpanVisitor {
    fn fork(&self) -> Self {
        SpanVisitor(self.0.clone(), SpanHistogram::new(self.1.bin_width))
    }

    fn merge(&mut self, other: Self) {
        let other = other.1.counts;
        if self.1.counts.len() < other.len() {
            self.1.counts.resize(other.len(), 0);
        }
        self.1
            .counts
            .iter_mut()
            .zip(other)
            .for_each(|(x, y)| *x += y);
    }
}

pub fn timespan_histogram(
    g: &TemporalGraph,
    filter: &CodeFilter,
    config: &ConstraintConfig,
    bin_width: u64,
    options: EngineOptions,
) -> Result<SpanHistogram, AnalysisError> {
    if bin_width == 0 {
        return Err(AnalysisError::Argument("bin width must be positive".into()));
    }
    let mut v = SpanVisitor(filter.clone(), SpanHistogram::new(bin_width));
    enumerate_parallel(g, config, options, &mut v)?;
    Ok(v.1)
}

/// 6×6 counts of three-event motifs indexed by (first pair, second pair) in
/// `R, P, I, O, C, W` order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeatmapMatrix {
    pub cells: [[u64; 6]; 6],
}

impl HeatmapMatrix {
    pub fn total(&self) -> u64 {
        self.cells.iter().flatten().sum()
    }

    pub fn row_sums(&self) -> [u64; 6] {
        self.cells.map(|row| row.iter().sum())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("pair");
        for t in PairType::ALPHABET {
            out.push(',');
            out.push(t.letter());
        }
        out.push('\n');
        for (t, row) in PairType::ALPHABET.iter().zip(&self.cells) {
            out.push(t.letter());
            for n in row {
                let _ = write!(out, ",{n}");
            }
            out.push('\n');
        }
        out
    }
}

pub fn heatmap_3e(table: &CountTable) -> Result<HeatmapMatrix, AnalysisError> {
    let mut m = HeatmapMatrix::default();
    for (code, n) in table.iter() {
        if code.event_count() != 3 || code.node_count() > 3 {
            return Err(AnalysisError::OutOfUniverse(code.clone()));
        }
        let seq = code.pair_sequence().map_err(|source| AnalysisError::Code {
            code: code.clone(),
            source,
        })?;
        let l = seq.letters();
        m.cells[l[0].index().unwrap()][l[1].index().unwrap()] += n;
    }
    Ok(m)
}
