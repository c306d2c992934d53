//! Seeded random temporal graphs for oracle checks and demos.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::constraints::ConstraintConfig;
use crate::graph::TemporalGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureSpec {
    pub nodes: u64,
    pub events: usize,
    /// Times are drawn uniformly from `[0, horizon)`.
    pub horizon: u64,
    pub seed: u64,
    /// Emit at most one event per ordered edge.
    pub unique_edges: bool,
}

impl Default for FixtureSpec {
    fn default() -> Self {
        FixtureSpec {
            nodes: 20,
            events: 200,
            horizon: 10_000,
            seed: 0,
            unique_edges: false,
        }
    }
}

/// Raw `(source, target, time)` triples; never self-loops. With
/// `unique_edges` the result is capped at `nodes·(nodes-1)` events.
pub fn random_triples(spec: &FixtureSpec) -> Vec<(u64, u64, u64)> {
    assert!(spec.nodes >= 2, "need at least two nodes");
    assert!(spec.horizon >= 1, "horizon must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let max_edges = (spec.nodes * (spec.nodes - 1)) as usize;
    let target = if spec.unique_edges {
        spec.events.min(max_edges)
    } else {
        spec.events
    };
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::with_capacity(target);
    while out.len() < target {
        let u = rng.gen_range(0..spec.nodes);
        let mut v = rng.gen_range(0..spec.nodes - 1);
        if v >= u {
            v += 1;
        }
        if spec.unique_edges && !seen.insert((u, v)) {
            continue;
        }
        let t = rng.gen_range(0..spec.horizon);
        out.push((u, v, t));
    }
    out
}

pub fn random_graph(spec: &FixtureSpec) -> TemporalGraph {
    TemporalGraph::from_triples(random_triples(spec)).0
}

/// The twelve configuration archetypes used for oracle checks: each of
/// {none, consecutive, cdg, static induced} crossed with an only-Δ_C, a
/// both-bounds and an only-Δ_W timing setup, for `k` events on at most `k`
/// nodes.
///
/// Only-Δ_C uses `Δ_C = Δ_W/(k-1)` so both timing families cover the same
/// maximum span; the mixed setup uses `Δ_C = 2·Δ_W/3`.
pub fn archetypes(k: usize, delta_w: u64) -> Vec<(String, ConstraintConfig)> {
    let steps = (k.max(2) - 1) as u64;
    let timings = [
        ("only-c", Some((delta_w / steps).max(1)), None),
        ("both", Some((2 * delta_w / 3).max(1)), Some(delta_w)),
        ("only-w", None, Some(delta_w)),
    ];
    let mut out = Vec::with_capacity(12);
    for restriction in ["vanilla", "consecutive", "cdg", "induced"] {
        for (timing, delta_c, dw) in timings {
            let cfg = ConstraintConfig {
                delta_c,
                delta_w: dw,
                consecutive: restriction == "consecutive",
                cdg: restriction == "cdg",
                static_induced: restriction == "induced",
                k_events: k,
                max_nodes: k,
            };
            out.push((format!("{restriction}/{timing}"), cfg));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_loop_free() {
        let spec = FixtureSpec::default();
        let a = random_triples(&spec);
        assert_eq!(a, random_triples(&spec));
        assert_eq!(a.len(), 200);
        assert!(a
            .iter()
            .all(|&(u, v, t)| u != v && u < 20 && v < 20 && t < 10_000));
        let other = random_triples(&FixtureSpec { seed: 1, ..spec });
        assert_ne!(a, other);
    }

    #[test]
    fn archetype_regimes() {
        use crate::constraints::Regime;
        for k in [3, 4] {
            let a = archetypes(k, 600);
            assert_eq!(a.len(), 12);
            let regimes: Vec<_> = a.iter().take(3).map(|(_, c)| c.regime().unwrap()).collect();
            assert_eq!(regimes, vec![Regime::OnlyC, Regime::Both, Regime::OnlyW]);
            assert!(a.iter().all(|(_, c)| c.validate().is_ok()));
        }
    }

    #[test]
    fn unique_edges() {
        let spec = FixtureSpec {
            nodes: 5,
            events: 100,
            unique_edges: true,
            ..Default::default()
        };
        let g = random_graph(&spec);
        assert_eq!(g.event_count(), 20);
        assert_eq!(g.static_edge_count(), 20);
    }
}
