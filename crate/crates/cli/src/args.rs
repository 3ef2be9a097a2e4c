//! Flag definitions.

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "paoneshot",
    version,
    about = "Simulate growing preferential-attachment networks and estimate the attachment function from a single snapshot"
)]
pub struct Cli {
    /// Worker-thread cap for simulation batches (default: the
    /// PAONESHOT_THREADS environment variable, else all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Simulate the growth model and write edge lists, traces, or event
    /// sequences.
    Simulate(SimulateArgs),
    /// Estimate the attachment function from a snapshot or trace.
    Estimate(EstimateArgs),
    /// Fit a parametric form to an estimate or a degree distribution.
    Fit(FitArgs),
    /// Consistency diagnostics against closed-form expectations.
    Diagnose(DiagnoseArgs),
}

/// One parametric attachment form; exactly one must be given.
#[derive(Args, Debug, Clone)]
pub struct AttachmentArgs {
    /// Power-law attachment A_k = max(k,1)^ALPHA.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Log-damped attachment A_k = max(k,1)/(1 + BETA·ln max(k,1)).
    #[arg(long)]
    pub beta: Option<f64>,
    /// Linear attachment A_k = k + C.
    #[arg(long, value_name = "C")]
    pub linear: Option<f64>,
}

#[derive(Args, Debug)]
pub struct SimulateArgs {
    /// Total time-steps T (defaults to sequence length + 1 with
    /// --sequence).
    #[arg(short = 'T', long = "steps", visible_alias = "T")]
    pub steps: Option<u64>,

    /// Per-step probability of adding a node instead of an edge.
    #[arg(long)]
    pub p: Option<f64>,

    /// Replay node/edge tokens from this file instead of drawing with --p.
    #[arg(long, value_name = "PATH", conflicts_with = "p")]
    pub sequence: Option<String>,

    #[command(flatten)]
    pub attachment: AttachmentArgs,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Number of independent runs; replicate i uses a seed derived from
    /// (--seed, i) and writes to paths suffixed with `.ri`.
    #[arg(long, default_value_t = 1)]
    pub replicates: usize,

    /// Write the final snapshot as a timed edge list (`src dst step`);
    /// `-` for standard output. Default output when no other sink is given.
    #[arg(long, value_name = "PATH")]
    pub edges_out: Option<String>,

    /// Write the full growth trace (`N` / `E src dst` lines).
    #[arg(long, value_name = "PATH")]
    pub trace_out: Option<String>,

    /// Write the endpoint-free event sequence (`N` / `E` lines).
    #[arg(long, value_name = "PATH")]
    pub events_out: Option<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Baseline,
    Oneshot,
    OneshotBinned,
    Mle,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputKind {
    /// Untimed edge list: a final snapshot.
    Edges,
    /// Timed edge list: a growth trace ordered by timestamp.
    TimedEdges,
    /// Trace file of `N` / `E src dst` lines.
    Trace,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(long, value_enum)]
    pub method: Method,

    /// Input path (`-` for standard input).
    #[arg(short = 'i', long)]
    pub input: String,

    #[arg(long, value_enum, default_value_t = InputKind::Edges)]
    pub input_kind: InputKind,

    /// Output path (`-` for standard output).
    #[arg(short = 'o', long, default_value = "-")]
    pub output: String,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Simulations per round (one-shot methods).
    #[arg(short = 'M', long = "simulations", default_value_t = 50)]
    pub simulations: usize,

    /// Update rounds per repetition (one-shot methods).
    #[arg(short = 'S', long = "rounds", default_value_t = 5)]
    pub rounds: usize,

    /// Repetitions of the whole round loop (one-shot methods).
    #[arg(short = 'R', long = "repetitions", default_value_t = 5)]
    pub repetitions: usize,

    /// Override the simulation node probability (default: estimated from
    /// the observed totals).
    #[arg(long)]
    pub sim_p: Option<f64>,

    /// Override the simulated time-steps (default: N + E - 1).
    #[arg(long)]
    pub sim_steps: Option<u64>,

    /// Geometric bin-width ratio (oneshot-binned).
    #[arg(long, default_value_t = 2.0)]
    pub bin_ratio: f64,

    /// Convergence tolerance on relative value change (mle).
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,

    #[arg(long, default_value_t = 1_000)]
    pub max_iter: usize,

    /// Merge events sharing a timestamp into one step (mle on timed-edges).
    #[arg(long)]
    pub collapse_timestamps: bool,

    /// Rescale the estimate to 1 at the reference degree before writing.
    #[arg(long)]
    pub normalize: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitFormArg {
    /// Power-law attachment exponent from an estimate file.
    Alpha,
    /// Log-damping coefficient from an estimate file.
    Beta,
    /// Degree-distribution tail exponent from an edge list.
    Gamma,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitInputKind {
    /// Estimate file written by `estimate` (CSV or JSON).
    Estimate,
    Edges,
    TimedEdges,
    Trace,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    #[arg(long, value_enum)]
    pub form: FitFormArg,

    #[arg(short = 'i', long)]
    pub input: String,

    #[arg(long, value_enum, default_value_t = FitInputKind::Estimate)]
    pub input_kind: FitInputKind,

    #[arg(short = 'o', long, default_value = "-")]
    pub output: String,

    /// Weigh points by 1/sd² in log space (alpha).
    #[arg(long)]
    pub weighted: bool,

    /// Smallest degree included in the tail (gamma).
    #[arg(long)]
    pub k_min: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tool {
    /// Mean-tail to mean-count ratio across replicates, normalized at
    /// degree 1; proportional to the attachment function at small degrees.
    Ratio,
    /// Empirical degree fractions against the closed-form asymptotic
    /// distribution for linear attachment.
    Pi,
    /// Sliding-window node-rate series from an event sequence.
    Pt,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceKind {
    Events,
    Trace,
}

#[derive(Args, Debug)]
pub struct DiagnoseArgs {
    #[arg(long, value_enum)]
    pub tool: Tool,

    #[command(flatten)]
    pub attachment: AttachmentArgs,

    /// Node probability (ratio, pi).
    #[arg(long)]
    pub p: Option<f64>,

    /// Total time-steps per replicate (ratio, pi).
    #[arg(short = 'T', long = "steps", visible_alias = "T")]
    pub steps: Option<u64>,

    /// Linear-attachment offset c (pi); shorthand for --linear.
    #[arg(long, value_name = "C")]
    pub c: Option<f64>,

    /// Replicates to average over (default 100 for ratio, 20 for pi).
    #[arg(long)]
    pub replicates: Option<usize>,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Largest degree reported (ratio, pi).
    #[arg(long, default_value_t = 20)]
    pub max_degree: u64,

    /// Event or trace file (pt).
    #[arg(short = 'i', long)]
    pub input: Option<String>,

    #[arg(long, value_enum, default_value_t = SequenceKind::Events)]
    pub input_kind: SequenceKind,

    /// Window half-width (pt).
    #[arg(long, default_value_t = 500)]
    pub window: u64,

    #[arg(short = 'o', long, default_value = "-")]
    pub output: String,

    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}
