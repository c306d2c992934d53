//! Engine and check functions against independent re-implementations.

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use tmotif::{
    archetypes, brute_force_count, canonical_code, check_cdg, check_consecutive, check_timing,
    constraint_regime, count_motifs, count_motifs_with, decode, enumerate_codes, random_graph,
    validate, ConstraintConfig, EngineOptions, FixtureSpec, NodeSpec, Regime, TemporalGraph,
    Violation,
};

fn fixture(seed: u64) -> TemporalGraph {
    random_graph(&FixtureSpec {
        seed,
        ..Default::default()
    })
}

fn small_graph() -> impl Strategy<Value = TemporalGraph> {
    prop::collection::vec((0u64..6, 0u64..6, 0u64..40), 1..40)
        .prop_map(|t| TemporalGraph::from_triples(t).0)
        .prop_filter("non-empty", |g| !g.is_empty())
}

/// Consecutive-events rule by scanning every graph event.
fn consecutive_by_scan(instance: &[usize], g: &TemporalGraph) -> bool {
    let events = g.events();
    let mut nodes = BTreeSet::new();
    for &i in instance {
        nodes.insert(events[i].source);
        nodes.insert(events[i].target);
    }
    for node in nodes {
        let times: Vec<_> = instance
            .iter()
            .filter(|&&i| events[i].source == node || events[i].target == node)
            .map(|&i| events[i].time)
            .collect();
        if times.len() < 2 {
            continue;
        }
        let (lo, hi) = (times[0], times[times.len() - 1]);
        for (i, e) in events.iter().enumerate() {
            let touches = e.source == node || e.target == node;
            if touches && !instance.contains(&i) && lo <= e.time && e.time <= hi {
                return false;
            }
        }
    }
    true
}

/// CDG rule by scanning every graph event.
fn cdg_by_scan(instance: &[usize], g: &TemporalGraph) -> bool {
    let events = g.events();
    for w in instance.windows(2) {
        let (a, b) = (events[w[0]], events[w[1]]);
        if (a.source, a.target) == (b.source, b.target) {
            continue;
        }
        let fired = events.iter().any(|e| {
            (e.source, e.target) == (b.source, b.target) && a.time <= e.time && e.time < b.time
        });
        if fired {
            return false;
        }
    }
    true
}

fn increasing_tuples(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, m: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..m {
            cur.push(i);
            rec(i + 1, m, k, cur, out);
            cur.pop();
        }
    }
    rec(0, m, k, &mut cur, &mut out);
    out
}

#[test]
fn engine_matches_oracle_on_random_graphs() {
    for seed in 0..20 {
        let g = fixture(seed);
        for k in [3, 4] {
            for (name, cfg) in archetypes(k, 600) {
                let engine = count_motifs(&g, &cfg).unwrap();
                let oracle = brute_force_count(&g, &cfg, false).unwrap();
                assert_eq!(engine, oracle, "seed {seed} k {k} {name}");
            }
        }
    }
}

#[test]
fn engine_matches_oracle_with_many_ties() {
    // a short horizon forces plenty of equal timestamps
    for seed in 0..10 {
        let g = random_graph(&FixtureSpec {
            nodes: 6,
            events: 120,
            horizon: 150,
            seed,
            unique_edges: false,
        });
        for (name, cfg) in archetypes(3, 12) {
            assert_eq!(
                count_motifs(&g, &cfg).unwrap(),
                brute_force_count(&g, &cfg, false).unwrap(),
                "seed {seed} {name}"
            );
        }
    }
}

#[test]
fn engine_matches_oracle_with_node_budget_above_k() {
    let g = fixture(7);
    let cfg = ConstraintConfig::with_delta_w(800).k(3).nodes(4);
    let t = count_motifs(&g, &cfg).unwrap();
    assert_eq!(t, brute_force_count(&g, &cfg, false).unwrap());
    assert!(t.len() > 36);
}

#[test]
fn two_and_three_node_parts_sum_to_total() {
    for seed in 0..5 {
        let g = fixture(seed);
        let t = count_motifs(&g, &ConstraintConfig::with_delta_c(400)).unwrap();
        let two = t.restrict(NodeSpec::Exactly(2)).total();
        let three = t.restrict(NodeSpec::Exactly(3)).total();
        assert_eq!(two + three, t.total());
    }
}

#[test]
fn worker_count_does_not_change_tables() {
    let g = fixture(3);
    for (_, cfg) in archetypes(4, 600) {
        let one = count_motifs_with(&g, &cfg, EngineOptions::workers(1)).unwrap();
        for w in [2, 3, 8] {
            let many = count_motifs_with(&g, &cfg, EngineOptions::workers(w)).unwrap();
            assert_eq!(one.to_csv(), many.to_csv());
        }
    }
}

#[test]
fn tightening_never_adds_instances() {
    for seed in 0..10 {
        let g = fixture(seed);
        for k in [3, 4] {
            let base = ConstraintConfig::with_delta_c(400).k(k).nodes(k);
            let loose = count_motifs(&g, &base).unwrap();
            let mut tighter = Vec::new();
            tighter.push(ConstraintConfig {
                delta_c: Some(200),
                ..base.clone()
            });
            tighter.push(ConstraintConfig {
                consecutive: true,
                ..base.clone()
            });
            tighter.push(ConstraintConfig {
                cdg: true,
                ..base.clone()
            });
            tighter.push(ConstraintConfig {
                static_induced: true,
                ..base.clone()
            });
            for cfg in tighter {
                let t = count_motifs(&g, &cfg).unwrap();
                for (code, n) in t.iter() {
                    assert!(n <= loose.get(code), "seed {seed} {cfg} {code}");
                }
            }
        }
    }
}

#[test]
fn cdg_is_vacuous_without_repeated_edges() {
    for seed in 0..10 {
        let g = random_graph(&FixtureSpec {
            nodes: 20,
            events: 200,
            horizon: 10_000,
            seed,
            unique_edges: true,
        });
        let vanilla = ConstraintConfig::with_delta_c(1500);
        let cdg = ConstraintConfig {
            cdg: true,
            ..vanilla.clone()
        };
        assert_eq!(
            count_motifs(&g, &vanilla).unwrap(),
            count_motifs(&g, &cdg).unwrap()
        );
    }
}

#[test]
fn combined_timing_is_the_intersection() {
    let g = fixture(11);
    let c = ConstraintConfig::with_delta_c(300);
    let w = ConstraintConfig::with_delta_w(500);
    let both = ConstraintConfig {
        delta_w: Some(500),
        ..c.clone()
    };
    for tuple in increasing_tuples(60, 3) {
        let tv = |cfg: &ConstraintConfig| validate(&tuple, &g, cfg).is_valid();
        assert_eq!(tv(&both), tv(&c) && tv(&w));
    }
}

proptest! {
    #[test]
    fn adjacency_query_matches_scan(
        g in small_graph(),
        node in 0u32..6,
        lo in 0u64..40,
        len in 0u64..20,
        excluded in prop::collection::vec(0usize..40, 0..4),
    ) {
        let hi = lo + len;
        let fast = g.adjacent_event_exists(node, lo, hi, &excluded);
        let slow = g.events().iter().enumerate().any(|(i, e)| {
            e.touches(node) && lo <= e.time && e.time <= hi && !excluded.contains(&i)
        });
        prop_assert_eq!(fast, slow);
    }

    #[test]
    fn restriction_checks_match_scans(g in small_graph()) {
        let m = g.event_count().min(14);
        for tuple in increasing_tuples(m, 3) {
            prop_assert_eq!(check_consecutive(&tuple, &g), consecutive_by_scan(&tuple, &g));
            prop_assert_eq!(check_cdg(&tuple, &g), cdg_by_scan(&tuple, &g));
        }
    }

    #[test]
    fn engine_matches_oracle_on_tiny_graphs(g in small_graph(), dw in 1u64..30, dc in 1u64..20) {
        for k in [2, 3] {
            for cfg in [
                ConstraintConfig::with_delta_w(dw).k(k),
                ConstraintConfig::kovanen(dc).k(k),
                ConstraintConfig::hulovatyy(dc, true).k(k),
                ConstraintConfig { delta_w: Some(dw), ..ConstraintConfig::paranjape(dw) }.k(k),
            ] {
                prop_assert_eq!(count_motifs(&g, &cfg).unwrap(), brute_force_count(&g, &cfg, false).unwrap());
            }
        }
    }

    #[test]
    fn codes_ignore_node_renaming(
        code_index in 0usize..696,
        perm_seed in any::<u64>(),
    ) {
        let codes = enumerate_codes(4, NodeSpec::AtMost(4));
        let code = &codes[code_index];
        let events = decode(code.digits()).unwrap();
        // an injective renaming into a sparse id space
        let mut ids: Vec<u64> = (0..4).map(|i| perm_seed.rotate_left(i * 16) ^ (i as u64 * 7919)).collect();
        ids.sort_unstable();
        ids.dedup();
        prop_assume!(ids.len() == 4);
        let renamed: Vec<(u64, u64)> = events
            .iter()
            .map(|&(a, b)| (ids[(a as usize + perm_seed as usize) % 4], ids[(b as usize + perm_seed as usize) % 4]))
            .collect();
        prop_assert_eq!(&canonical_code(&renamed).unwrap(), code);
        prop_assert_eq!(&canonical_code(&events).unwrap(), code);
    }

    #[test]
    fn only_c_regime_makes_window_redundant(
        dc in 1u64..100,
        dw in 1u64..400,
        m in 2usize..6,
        gaps in prop::collection::vec(1u64..120, 5),
    ) {
        prop_assume!(constraint_regime(dc, dw, m).unwrap() == Regime::OnlyC);
        let mut times = vec![0u64];
        for g in gaps.iter().take(m - 1) {
            times.push(times.last().unwrap() + g);
        }
        let c = ConstraintConfig::with_delta_c(dc);
        let w = ConstraintConfig::with_delta_w(dw);
        if check_timing(&times, &c).unwrap().is_empty() {
            prop_assert!(!check_timing(&times, &w).unwrap().contains(&Violation::TimingW));
        }
    }
}

#[test]
fn decode_and_canonical_are_inverse() {
    let mut by_code = HashMap::new();
    for code in enumerate_codes(4, NodeSpec::AtMost(4)) {
        let events = decode(code.digits()).unwrap();
        assert_eq!(canonical_code(&events).unwrap(), code);
        by_code.insert(code.to_string(), events);
    }
    assert_eq!(by_code.len(), 696);
}
