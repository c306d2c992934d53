use std::collections::BTreeSet;
use std::fs::{self, File};
use std::io::{self, BufReader, Read, Write};
use std::path::{Path, PathBuf};

use clap::Parser;
use tmotif::{
    brute_force_count, count_motifs_with, enumerate_codes, heatmap_3e, intermediate_histogram,
    load_edge_list, pair_group_totals, proportion_deltas, proportion_deltas_csv, random_graph,
    rank_deltas, rank_deltas_csv, timespan_histogram, CodeFilter, ConstraintConfig, CountTable,
    EngineOptions, FixtureSpec, Fraction, MotifCode, NodeSpec, TemporalGraph,
};

use crate::args::{Cli, Command, ConfigArgs, FilterArgs, InputArgs, RunArgs, TableSource};
use crate::manifest::{sha256_hex, Invocation, OutputFile, RunManifest};
use crate::CliError;

/// Files produced by one subcommand plus what the manifest should record.
#[derive(Default)]
struct Outputs {
    files: Vec<(String, String)>,
    input: Option<String>,
    config: Option<String>,
    seed: Option<u64>,
}

impl Outputs {
    fn one(name: &str, content: String) -> Self {
        Outputs {
            files: vec![(name.to_string(), content)],
            ..Default::default()
        }
    }

    fn with_input(mut self, input: String) -> Self {
        self.input = Some(input);
        self
    }

    fn with_config(mut self, cfg: &ConstraintConfig) -> Self {
        self.config = Some(cfg.to_string());
        self
    }
}

pub fn run(cli: Cli, invocation: &Invocation) -> Result<(), CliError> {
    if let Command::Replay { manifest } = &cli.command {
        return replay(manifest, cli.out.as_deref());
    }
    let name = cli.command.name();
    let outputs = execute(cli.command)?;
    emit(name, outputs, cli.out.as_deref(), invocation)?;
    Ok(())
}

fn execute(command: Command) -> Result<Outputs, CliError> {
    match command {
        Command::Stats { input } => {
            let (g, src) = load_graph(&input)?;
            Ok(Outputs::one("stats.csv", g.stats()?.to_csv()).with_input(src))
        }
        Command::Classes {
            k,
            at_most,
            exactly,
            pairs,
        } => classes(k, at_most, exactly, pairs),
        Command::Count {
            input,
            config,
            run,
            regime,
            oracle,
            allow_large,
        } => {
            let (g, src) = load_graph(&input)?;
            let cfg = build_config(&config)?;
            if regime {
                let text = cfg
                    .regime()
                    .map_or_else(|| "none".to_string(), |r| r.to_string());
                return Ok(Outputs::one("regime.txt", format!("{text}\n"))
                    .with_input(src)
                    .with_config(&cfg));
            }
            let table = count_motifs_with(&g, &cfg, engine_options(&run))?;
            if oracle {
                let reference = brute_force_count(&g, &cfg, allow_large)?;
                check_oracle(&table, &reference)?;
                eprintln!("oracle agrees: {} instances", table.total());
            }
            let table = restrict(table, &run);
            Ok(Outputs::one("counts.csv", table.to_csv())
                .with_input(src)
                .with_config(&cfg))
        }
        Command::Compare {
            before,
            after,
            exact_nodes,
        } => {
            let mut a = read_table(&before)?;
            let mut b = read_table(&after)?;
            if let Some(n) = exact_nodes {
                a = a.restrict(NodeSpec::Exactly(n));
                b = b.restrict(NodeSpec::Exactly(n));
            }
            let ranks = rank_deltas(&a, &b)?;
            let props = proportion_deltas(&a, &b)?;
            Ok(Outputs {
                files: vec![
                    ("ranks.csv".into(), rank_deltas_csv(&ranks)),
                    ("proportions.csv".into(), proportion_deltas_csv(&props)),
                ],
                input: Some(format!("{} {}", before.display(), after.display())),
                ..Default::default()
            })
        }
        Command::Pairs {
            source,
            config,
            run,
        } => {
            let (table, out) = table_from(&source, &config, &run)?;
            let totals = pair_group_totals(&table)?;
            Ok(Outputs {
                files: vec![("pairs.csv".into(), totals.to_csv())],
                ..out
            })
        }
        Command::Heatmap {
            source,
            config,
            run,
        } => {
            let (table, out) = table_from(&source, &config, &run)?;
            let matrix = heatmap_3e(&table)?;
            Ok(Outputs {
                files: vec![("heatmap.csv".into(), matrix.to_csv())],
                ..out
            })
        }
        Command::Intermediate {
            input,
            config,
            run,
            filter,
            bins,
        } => {
            let (g, src) = load_graph(&input)?;
            let cfg = build_config(&config)?;
            let filter = code_filter(&filter, &run, &cfg)?;
            let hist = intermediate_histogram(&g, &filter, &cfg, bins, engine_options(&run))?;
            let files = (1..cfg.k_events - 1)
                .map(|j| (format!("positions_e{}.csv", j + 1), hist.to_csv(j)))
                .collect();
            Ok(Outputs {
                files,
                ..Outputs::default().with_input(src).with_config(&cfg)
            })
        }
        Command::Spans {
            input,
            config,
            run,
            filter,
            bin_width,
        } => {
            let (g, src) = load_graph(&input)?;
            let cfg = build_config(&config)?;
            let filter = code_filter(&filter, &run, &cfg)?;
            let hist = timespan_histogram(&g, &filter, &cfg, bin_width, engine_options(&run))?;
            Ok(Outputs::one("spans.csv", hist.to_csv())
                .with_input(src)
                .with_config(&cfg))
        }
        Command::Fixtures {
            nodes,
            events,
            horizon,
            seed,
            unique_edges,
        } => {
            if nodes < 2 {
                return Err(CliError::Usage("--nodes must be at least 2".into()));
            }
            if horizon == 0 {
                return Err(CliError::Usage("--horizon must be positive".into()));
            }
            let g = random_graph(&FixtureSpec {
                nodes,
                events,
                horizon,
                seed,
                unique_edges,
            });
            let mut buf = Vec::new();
            g.write_edge_list(&mut buf)?;
            let text = String::from_utf8(buf).expect("edge lists are ASCII");
            Ok(Outputs {
                seed: Some(seed),
                ..Outputs::one("fixture.txt", text)
            })
        }
        Command::Replay { .. } => Err(CliError::Usage("a manifest cannot replay a replay".into())),
    }
}

fn classes(
    k: usize,
    at_most: Option<usize>,
    exactly: Option<usize>,
    pairs: bool,
) -> Result<Outputs, CliError> {
    if k == 0 {
        return Err(CliError::Usage("--k must be at least 1".into()));
    }
    let spec = match (at_most, exactly) {
        (_, Some(n)) => NodeSpec::Exactly(n),
        (Some(n), None) => NodeSpec::AtMost(n),
        (None, None) => NodeSpec::AtMost(k + 1),
    };
    let mut text = String::new();
    for code in enumerate_codes(k, spec) {
        if pairs {
            let seq = code
                .pair_sequence()
                .map_or_else(|_| "-".to_string(), |s| s.to_string());
            text.push_str(&format!("{code},{seq}\n"));
        } else {
            text.push_str(&format!("{code}\n"));
        }
    }
    Ok(Outputs::one("classes.txt", text))
}

fn check_oracle(engine: &CountTable, reference: &CountTable) -> Result<(), CliError> {
    if engine == reference {
        return Ok(());
    }
    let diffs: Vec<String> = engine
        .iter()
        .filter(|&(code, n)| reference.get(code) != n)
        .take(5)
        .map(|(code, n)| format!("{code}: engine {n}, reference {}", reference.get(code)))
        .collect();
    Err(CliError::Domain(format!(
        "engine and brute-force counts differ ({})",
        diffs.join("; ")
    )))
}

fn engine_options(run: &RunArgs) -> EngineOptions {
    EngineOptions::workers(run.workers.max(1))
}

fn restrict(table: CountTable, run: &RunArgs) -> CountTable {
    match run.exact_nodes {
        Some(n) => table.restrict(NodeSpec::Exactly(n)),
        None => table,
    }
}

fn code_filter(
    args: &FilterArgs,
    run: &RunArgs,
    cfg: &ConstraintConfig,
) -> Result<CodeFilter, CliError> {
    let mut chosen: Option<BTreeSet<MotifCode>> = None;
    if !args.codes.is_empty() {
        let codes = args
            .codes
            .iter()
            .map(|c| {
                c.parse::<MotifCode>()
                    .map_err(|e| CliError::Usage(format!("--code {c}: {e}")))
            })
            .collect::<Result<_, _>>()?;
        chosen = Some(codes);
    }
    if let Some(n) = run.exact_nodes {
        let exact: BTreeSet<MotifCode> = enumerate_codes(cfg.k_events, NodeSpec::Exactly(n))
            .into_iter()
            .collect();
        chosen = Some(match chosen {
            Some(c) => c.intersection(&exact).cloned().collect(),
            None => exact,
        });
    }
    Ok(chosen.map_or(CodeFilter::All, CodeFilter::Only))
}

/// Config file contents first, then flags, so flags win.
fn build_config(args: &ConfigArgs) -> Result<ConstraintConfig, CliError> {
    let mut text = match &args.config {
        Some(path) => fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
        None => String::new(),
    };
    let mut set = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            text.push_str(&format!("\n{key}={v}"));
        }
    };
    set("delta_c", args.delta_c.map(|v| v.to_string()));
    set("delta_w", args.delta_w.map(|v| v.to_string()));
    set("consecutive", args.consecutive.map(|v| v.to_string()));
    set("cdg", args.cdg.map(|v| v.to_string()));
    set("induced", args.induced.map(|v| v.to_string()));
    set("k", args.k.map(|v| v.to_string()));
    set("max_nodes", args.max_nodes.map(|v| v.to_string()));
    Ok(text.parse()?)
}

fn parse_slice(s: &str) -> Result<(Fraction, Fraction), CliError> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| CliError::Usage(format!("--slice `{s}`: expected START:END")))?;
    Ok((a.trim().parse()?, b.trim().parse()?))
}

fn load_graph_from(
    path: &Path,
    bin: Option<u64>,
    slice: Option<&str>,
) -> Result<(TemporalGraph, String), CliError> {
    let (mut g, report) = if path == Path::new("-") {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        load_edge_list(text.as_bytes())?
    } else {
        let file =
            File::open(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        load_edge_list(BufReader::new(file))
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?
    };
    if report.self_loops > 0 {
        eprintln!("tmotif: dropped {} self-loop events", report.self_loops);
    }
    if let Some(w) = bin {
        g = g.degrade_resolution(w)?;
    }
    if let Some(s) = slice {
        let (lo, hi) = parse_slice(s)?;
        g = g.slice_by_fraction(lo, hi)?;
    }
    Ok((g, path.display().to_string()))
}

fn load_graph(args: &InputArgs) -> Result<(TemporalGraph, String), CliError> {
    load_graph_from(&args.input, args.bin, args.slice.as_deref())
}

fn read_table(path: &Path) -> Result<CountTable, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    CountTable::from_csv(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn table_from(
    source: &TableSource,
    config: &ConfigArgs,
    run: &RunArgs,
) -> Result<(CountTable, Outputs), CliError> {
    if let Some(path) = &source.table {
        let table = restrict(read_table(path)?, run);
        let out = Outputs {
            input: Some(path.display().to_string()),
            config: table.config.as_ref().map(ToString::to_string),
            ..Default::default()
        };
        return Ok((table, out));
    }
    let path = source
        .input
        .as_ref()
        .ok_or_else(|| CliError::Usage("an edge list or --table is required".into()))?;
    let (g, src) = load_graph_from(path, source.bin, source.slice.as_deref())?;
    let cfg = build_config(config)?;
    let table = restrict(count_motifs_with(&g, &cfg, engine_options(run))?, run);
    Ok((table, Outputs::default().with_input(src).with_config(&cfg)))
}

/// Writes outputs to `out` with a manifest, or to stdout.
fn emit(
    subcommand: &str,
    outputs: Outputs,
    out: Option<&Path>,
    invocation: &Invocation,
) -> Result<(), CliError> {
    let Some(dir) = out else {
        let stdout = io::stdout();
        let mut lock = stdout.lock();
        let many = outputs.files.len() > 1;
        for (name, content) in &outputs.files {
            if many {
                writeln!(lock, "# file: {name}")?;
            }
            lock.write_all(content.as_bytes())?;
        }
        return Ok(());
    };
    fs::create_dir_all(dir).map_err(|e| CliError::Usage(format!("{}: {e}", dir.display())))?;
    let mut files = Vec::new();
    for (name, content) in &outputs.files {
        fs::write(dir.join(name), content)?;
        files.push(OutputFile {
            file: name.clone(),
            sha256: sha256_hex(content.as_bytes()),
        });
    }
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        subcommand: subcommand.to_string(),
        argv: invocation.argv.clone(),
        cwd: invocation.cwd.clone(),
        input: outputs.input,
        config: outputs.config,
        out_dir: fs::canonicalize(dir)?.display().to_string(),
        seed: outputs.seed,
        outputs: files,
    };
    manifest.write(dir)
}

fn replay(path: &Path, out: Option<&Path>) -> Result<(), CliError> {
    let recorded = RunManifest::read(path)?;
    // resolve a user-supplied target before moving to the recorded directory
    let target: PathBuf = match out {
        Some(p) => std::path::absolute(p)?,
        None => PathBuf::from(&recorded.out_dir),
    };
    let cli = Cli::try_parse_from(
        std::iter::once("tmotif".to_string()).chain(recorded.argv.iter().cloned()),
    )
    .map_err(|e| CliError::Usage(format!("manifest argv does not parse: {e}")))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(CliError::Usage("a manifest cannot replay a replay".into()));
    }
    std::env::set_current_dir(&recorded.cwd)
        .map_err(|e| CliError::Usage(format!("recorded directory {}: {e}", recorded.cwd)))?;
    let invocation = Invocation {
        argv: recorded.argv.clone(),
        cwd: recorded.cwd.clone(),
    };
    let name = cli.command.name();
    let outputs = execute(cli.command)?;
    // compare before writing so a diverging replay leaves the recorded files alone
    let fresh: Vec<OutputFile> = outputs
        .files
        .iter()
        .map(|(file, content)| OutputFile {
            file: file.clone(),
            sha256: sha256_hex(content.as_bytes()),
        })
        .collect();
    if fresh != recorded.outputs {
        let changed: Vec<&str> = fresh
            .iter()
            .filter(|f| !recorded.outputs.contains(f))
            .map(|f| f.file.as_str())
            .collect();
        return Err(CliError::Domain(format!(
            "replay differs from the recorded run: {}",
            if changed.is_empty() {
                "file set changed".to_string()
            } else {
                changed.join(", ")
            }
        )));
    }
    emit(name, outputs, Some(&target), &invocation)?;
    eprintln!(
        "replayed {} file(s) into {}: identical",
        fresh.len(),
        target.display()
    );
    Ok(())
}
