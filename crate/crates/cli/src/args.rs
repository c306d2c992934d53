use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "tmotif",
    version,
    about = "Temporal motif counting under configurable constraints"
)]
pub struct Cli {
    /// Write outputs and a run manifest into this directory instead of stdout.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dataset statistics of an edge list.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// List motif codes with k events.
    Classes {
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Codes on at most this many nodes (default k+1).
        #[arg(long, conflicts_with = "exactly")]
        at_most: Option<usize>,
        /// Codes on exactly this many nodes.
        #[arg(long)]
        exactly: Option<usize>,
        /// Append each code's event-pair sequence.
        #[arg(long)]
        pairs: bool,
    },
    /// Count motif instances into a table.
    Count {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
        /// Print which timing bound binds and exit.
        #[arg(long)]
        regime: bool,
        /// Recount with the brute-force reference and fail on any difference.
        #[arg(long)]
        oracle: bool,
        /// Let the reference counter run on inputs above its size guard.
        #[arg(long, requires = "oracle")]
        allow_large: bool,
    },
    /// Rank and proportion changes between two count tables.
    Compare {
        before: PathBuf,
        after: PathBuf,
        /// Compare only codes on exactly this many nodes.
        #[arg(long)]
        exact_nodes: Option<usize>,
    },
    /// Event-pair type tallies.
    Pairs {
        #[command(flatten)]
        source: TableSource,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Histograms of where intermediate events fall within each motif.
    Intermediate {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long, default_value_t = 20)]
        bins: usize,
    },
    /// Histogram of motif timespans (last minus first event).
    Spans {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        filter: FilterArgs,
        /// Bin width in seconds.
        #[arg(long)]
        bin_width: u64,
    },
    /// 6x6 matrix of three-event motif counts by event-pair sequence.
    Heatmap {
        #[command(flatten)]
        source: TableSource,
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Generate a seeded random edge list.
    Fixtures {
        #[arg(long, default_value_t = 20)]
        nodes: u64,
        #[arg(long, default_value_t = 200)]
        events: usize,
        /// Timestamps are drawn from [0, horizon).
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use every ordered edge at most once.
        #[arg(long)]
        unique_edges: bool,
    },
    /// Re-run a recorded manifest and check its outputs are byte-identical.
    Replay { manifest: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Stats { .. } => "stats",
            Command::Classes { .. } => "classes",
            Command::Count { .. } => "count",
            Command::Compare { .. } => "compare",
            Command::Pairs { .. } => "pairs",
            Command::Intermediate { .. } => "intermediate",
            Command::Spans { .. } => "spans",
            Command::Heatmap { .. } => "heatmap",
            Command::Fixtures { .. } => "fixtures",
            Command::Replay { .. } => "replay",
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Edge list with `source target time` rows; `-` reads stdin.
    pub input: PathBuf,
    /// Floor timestamps to multiples of this many seconds.
    #[arg(long, value_name = "SECONDS")]
    pub bin: Option<u64>,
    /// Keep events in the given fraction range of the time-ordered list,
    /// e.g. `0:0.1` or `1/2:1`.
    #[arg(long, value_name = "START:END")]
    pub slice: Option<String>,
}

/// Either an edge list to count, or a saved count table.
#[derive(Debug, Args)]
pub struct TableSource {
    #[arg(required_unless_present = "table", conflicts_with = "table")]
    pub input: Option<PathBuf>,
    /// Read a count table CSV instead of counting.
    #[arg(long)]
    pub table: Option<PathBuf>,
    #[arg(long, value_name = "SECONDS")]
    pub bin: Option<u64>,
    #[arg(long, value_name = "START:END")]
    pub slice: Option<String>,
}

/// Flags mirror the configuration keys; they override values from `--config`.
#[derive(Debug, Args, Default)]
pub struct ConfigArgs {
    /// Configuration file of `key=value` lines.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Maximum gap between consecutive motif events, seconds.
    #[arg(long)]
    pub delta_c: Option<u64>,
    /// Maximum first-to-last span, seconds.
    #[arg(long)]
    pub delta_w: Option<u64>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub consecutive: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub cdg: Option<bool>,
    #[arg(long, num_args = 0..=1, default_missing_value = "true", value_name = "BOOL")]
    pub induced: Option<bool>,
    /// Events per motif.
    #[arg(long)]
    pub k: Option<usize>,
    /// Largest number of motif nodes.
    #[arg(long)]
    pub max_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Keep only codes on exactly this many nodes.
    #[arg(long)]
    pub exact_nodes: Option<usize>,
}

#[derive(Debug, Args)]
pub struct FilterArgs {
    /// Only instances of these codes (repeatable); default all.
    #[arg(long = "code", value_name = "CODE")]
    pub codes: Vec<String>,
}
