//! Temporal motif counting under configurable timing and inducedness
//! constraints.
//!
//! A [`TemporalGraph`] holds time-ordered directed events. A
//! [`ConstraintConfig`] selects a motif model (Δ_C or Δ_W timing plus the
//! consecutive-events, constrained-dynamic-graphlet and static-inducedness
//! restrictions), and [`count_motifs`] produces a [`CountTable`] keyed by
//! [`MotifCode`]. [`brute_force_count`] recomputes the same table from first
//! principles for verification.
//!
//! ```
//! use tmotif::{count_motifs, ConstraintConfig, TemporalGraph};
//!
//! let (g, _) = TemporalGraph::from_triples([(0, 1, 1), (1, 2, 3), (0, 2, 5)]);
//! let table = count_motifs(&g, &ConstraintConfig::with_delta_w(10)).unwrap();
//! assert_eq!(table.get(&"011202".parse().unwrap()), 1);
//! ```

pub mod analysis;
pub mod code;
pub mod constraints;
pub mod engine;
pub mod fixtures;
pub mod graph;

pub use analysis::{
    heatmap_3e, intermediate_histogram, normalized_position, pair_group_totals, proportion_deltas,
    proportion_deltas_csv, rank_deltas, rank_deltas_csv, ranks, timespan_histogram, AnalysisError,
    CodeFilter, HeatmapMatrix, PairTotals, PositionHistogram, ProportionDelta, ProportionRow,
    RankDelta, SpanHistogram,
};
pub use code::{
    canonical_code, classify_pair, decode, enumerate_codes, CodeError, MotifCode, NodeSpec,
    PairSequence, PairType,
};
pub use constraints::{
    check_cdg, check_consecutive, check_static_induced, check_timing, constraint_regime, validate,
    ConstraintConfig, ConstraintError, Regime, Verdict, Violation,
};
pub use engine::{
    brute_force_count, count_motifs, count_motifs_with, enumerate_instances, enumerate_parallel,
    CountTable, EngineError, EngineOptions, InstanceVisitor, ParallelVisitor,
};
pub use fixtures::{archetypes, random_graph, random_triples, FixtureSpec};
pub use graph::{
    load_edge_list, Event, Fraction, GraphError, GraphStats, LoadReport, NodeId, TemporalGraph,
    Timestamp,
};
