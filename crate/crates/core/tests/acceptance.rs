//! Acceptance checks. Prints one PASS/FAIL/SKIP line per criterion and exits
//! nonzero if any check fails.
//!
//! The optional dataset check reads the CollegeMsg edge list from the path in
//! `TMOTIF_COLLEGEMSG` (whitespace-separated `src dst unix_time` rows).

use std::fs::File;
use std::io::BufReader;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use tmotif::{
    archetypes, brute_force_count, check_timing, constraint_regime, count_motifs,
    count_motifs_with, enumerate_codes, load_edge_list, random_graph, validate, ConstraintConfig,
    CountTable, EngineOptions, FixtureSpec, NodeSpec, PairSequence, Regime, TemporalGraph,
};

type Outcome = Result<String, String>;
type Check = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn class_counts() -> Outcome {
    let cases = [
        (3, NodeSpec::Exactly(2), 4),
        (3, NodeSpec::Exactly(3), 32),
        (3, NodeSpec::AtMost(3), 36),
        (4, NodeSpec::AtMost(3), 216),
        (4, NodeSpec::Exactly(4), 480),
        (4, NodeSpec::AtMost(4), 696),
    ];
    let mut seen = Vec::new();
    for (k, spec, want) in cases {
        let got = enumerate_codes(k, spec).len();
        ensure(got == want, || format!("k={k} {spec:?}: {got} != {want}"))?;
        seen.push(got.to_string());
    }
    Ok(seen.join("/"))
}

fn bijection() -> Outcome {
    for (k, letters) in [(3usize, 2u32), (4, 3)] {
        let codes = enumerate_codes(k, NodeSpec::AtMost(3));
        let mut seqs: Vec<PairSequence> = codes
            .iter()
            .map(|c| c.pair_sequence().map_err(|e| format!("{c}: {e}")))
            .collect::<Result<_, _>>()?;
        seqs.sort_by_key(|s| s.to_string());
        seqs.dedup();
        let want = 6usize.pow(letters);
        ensure(codes.len() == want && seqs.len() == want, || {
            format!(
                "k={k}: {} codes, {} distinct sequences",
                codes.len(),
                seqs.len()
            )
        })?;
    }
    Ok("36 <-> 6^2, 216 <-> 6^3".into())
}

fn worked_example() -> Outcome {
    let times = [1, 9, 10];
    let only_c = ConstraintConfig::with_delta_c(5);
    let only_w = ConstraintConfig::with_delta_w(10);
    let c_bad = !check_timing(&times, &only_c)
        .map_err(|e| e.to_string())?
        .is_empty();
    let w_ok = check_timing(&times, &only_w)
        .map_err(|e| e.to_string())?
        .is_empty();
    ensure(c_bad && w_ok, || {
        format!("only-c invalid={c_bad}, only-w valid={w_ok}")
    })?;

    // the same instance on a concrete graph, through the full validator
    let (g, _) = TemporalGraph::from_triples([(0, 1, 1), (1, 2, 9), (0, 2, 10)]);
    for (name, cfg) in [
        ("kovanen", ConstraintConfig::kovanen(5)),
        ("hulovatyy", ConstraintConfig::hulovatyy(5, true)),
    ] {
        ensure(!validate(&[0, 1, 2], &g, &cfg).is_valid(), || {
            format!("{name} accepted")
        })?;
    }
    for (name, cfg) in [
        ("paranjape", ConstraintConfig::paranjape(10)),
        ("song", ConstraintConfig::song(10)),
    ] {
        ensure(validate(&[0, 1, 2], &g, &cfg).is_valid(), || {
            format!("{name} rejected")
        })?;
    }
    Ok("{1,9,10}: Δ_C=5 invalid, Δ_W=10 valid".into())
}

fn regimes() -> Outcome {
    // ratios Δ_C/Δ_W of 0.5, 0.66, 1.0 and 0.33 over Δ_W = 3000
    let cases = [
        (3, 1500, Regime::OnlyC),
        (3, 1980, Regime::Both),
        (3, 3000, Regime::OnlyW),
        (4, 990, Regime::OnlyC),
    ];
    for (m, dc, want) in cases {
        let got = constraint_regime(dc, 3000, m).map_err(|e| e.to_string())?;
        ensure(got == want, || format!("m={m} Δ_C={dc}: {got} != {want}"))?;
    }
    Ok("OnlyC, Both, OnlyW, OnlyC".into())
}

const SEEDS: u64 = 100;
const ORACLE_DELTA_W: u64 = 600;

fn fixture(seed: u64) -> TemporalGraph {
    random_graph(&FixtureSpec {
        seed,
        ..Default::default()
    })
}

fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let mut instances = 0;
    let mut runs = 0;
    for seed in 0..SEEDS {
        let g = fixture(seed);
        for k in [3, 4] {
            for (name, cfg) in archetypes(k, ORACLE_DELTA_W) {
                let engine = count_motifs(&g, &cfg).map_err(|e| e.to_string())?;
                let oracle = brute_force_count(&g, &cfg, false).map_err(|e| e.to_string())?;
                ensure(engine == oracle, || {
                    format!(
                        "seed {seed} k={k} {name}: engine {} vs oracle {}",
                        engine.total(),
                        oracle.total()
                    )
                })?;
                instances += engine.total();
                runs += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < Duration::from_secs(60), || {
        format!("took {elapsed:.1?}")
    })?;
    Ok(format!(
        "{SEEDS} seeds, {runs} runs, {instances} instances in {elapsed:.1?}"
    ))
}

fn at_most(table: &CountTable, bound: &CountTable) -> Result<(), String> {
    for (code, n) in table.iter() {
        let b = bound.get(code);
        ensure(n <= b, || format!("{code}: {n} > {b}"))?;
    }
    Ok(())
}

fn monotonicity() -> Outcome {
    let mut checks = 0;
    for seed in 0..SEEDS {
        let g = fixture(seed);
        for k in [3, 4] {
            for (name, cfg) in archetypes(k, ORACLE_DELTA_W) {
                let base = count_motifs(&g, &cfg).map_err(|e| e.to_string())?;
                let mut tighter = Vec::new();
                if let Some(dc) = cfg.delta_c {
                    tighter.push(ConstraintConfig {
                        delta_c: Some((dc / 2).max(1)),
                        ..cfg.clone()
                    });
                }
                for flag in 0..3 {
                    let mut t = cfg.clone();
                    match flag {
                        0 => t.consecutive = true,
                        1 => t.cdg = true,
                        _ => t.static_induced = true,
                    }
                    if t != cfg {
                        tighter.push(t);
                    }
                }
                for t in tighter {
                    let table = count_motifs(&g, &t).map_err(|e| e.to_string())?;
                    at_most(&table, &base)
                        .map_err(|e| format!("seed {seed} {name} -> {t}: {e}"))?;
                    checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} tightened tables"))
}

fn determinism() -> Outcome {
    let g = fixture(42);
    for (name, cfg) in archetypes(4, ORACLE_DELTA_W) {
        let csv = |w| {
            count_motifs_with(&g, &cfg, EngineOptions::workers(w))
                .map(|t| t.to_csv())
                .map_err(|e| e.to_string())
        };
        let one = csv(1)?;
        for w in [2, 8] {
            ensure(csv(w)? == one, || format!("{name}: workers={w} differs"))?;
        }
    }
    Ok("workers 1, 2, 8 byte-identical over 12 archetypes".into())
}

fn cdg_vacuity() -> Outcome {
    let g = random_graph(&FixtureSpec {
        unique_edges: true,
        ..Default::default()
    });
    let repeated = g.static_edge_count() != g.event_count();
    ensure(!repeated, || "fixture repeats an ordered edge".into())?;
    let mut nonzero = 0;
    for k in [3, 4] {
        let vanilla = ConstraintConfig::with_delta_c(1500).k(k).nodes(k);
        let cdg = ConstraintConfig {
            cdg: true,
            ..vanilla.clone()
        };
        let a = count_motifs(&g, &vanilla).map_err(|e| e.to_string())?;
        let b = count_motifs(&g, &cdg).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("k={k}: tables differ"))?;
        nonzero += a.total();
    }
    ensure(nonzero > 0, || "fixture produced no instances".into())?;
    Ok(format!("{nonzero} instances, identical tables"))
}

/// `None` when the dataset is not available.
fn college_msg() -> Option<Outcome> {
    let path = std::env::var_os("TMOTIF_COLLEGEMSG")?;
    Some((|| {
        let file = File::open(&path).map_err(|e| format!("{}: {e}", path.to_string_lossy()))?;
        let (g, _) = load_edge_list(BufReader::new(file)).map_err(|e| e.to_string())?;
        let mut totals = Vec::new();
        for (consecutive, want) in [(false, 1_590_000.0), (true, 2_550.0)] {
            let cfg = ConstraintConfig {
                consecutive,
                ..ConstraintConfig::with_delta_c(1500)
            };
            let opts =
                EngineOptions::workers(std::thread::available_parallelism().map_or(1, |n| n.get()));
            let table = count_motifs_with(&g, &cfg, opts).map_err(|e| e.to_string())?;
            let got = table.restrict(NodeSpec::Exactly(3)).total() as f64;
            let rel = (got - want) / want;
            ensure(rel.abs() <= 0.05, || {
                format!(
                    "consecutive={consecutive}: {got} vs {want} ({:+.1}%)",
                    rel * 100.0
                )
            })?;
            totals.push(format!("{got}"));
        }
        Ok(format!("3n3e totals {}", totals.join(" / ")))
    })())
}

fn main() -> ExitCode {
    let checks: [Check; 8] = [
        ("motif class counts", class_counts),
        ("pair-sequence bijection", bijection),
        ("worked timing example", worked_example),
        ("regime classifier", regimes),
        ("engine/oracle equivalence", oracle_equivalence),
        ("monotonicity", monotonicity),
        ("worker determinism", determinism),
        ("cdg vacuity", cdg_vacuity),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        match check() {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    match college_msg() {
        None => println!("SKIP collegemsg reproduction: TMOTIF_COLLEGEMSG not set"),
        Some(Ok(detail)) => println!("PASS collegemsg reproduction: {detail}"),
        Some(Err(why)) => {
            failed += 1;
            println!("FAIL collegemsg reproduction: {why}");
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
