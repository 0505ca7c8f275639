//! `noncoherent`: capacity, rate regions, simulations and oracles for
//! non-coherent network coding channels.

mod commands;
mod error;
mod oracle;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use error::CliError;

/// Thread count for parallel sweeps and simulations.
pub const THREADS_VAR: &str = "NONCOHERENT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "noncoherent", version, about = "Non-coherent network coding channels over GF(q)")]
struct Cli {
    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Capacity of the point-to-point subspace channel.
    Capacity(CapacityArgs),
    /// CSV of capacity / log2 q over a list of field sizes.
    Sweep(SweepArgs),
    /// Optimal input-dimension support versus the large-q prediction.
    Support(SupportArgs),
    /// Two-source rate region and its outer bounds.
    Region(RegionArgs),
    /// Monte-Carlo run of the two-source lifted code.
    MacSim(MacSimArgs),
    /// Monte-Carlo histogram of the received subspace dimension.
    Simulate(SimulateArgs),
    /// Capacity bounds.
    #[command(subcommand)]
    Bounds(BoundsCommand),
    /// Exact counts, linear algebra and exhaustive checks.
    #[command(subcommand)]
    Oracle(oracle::OracleCommand),
    /// Capacity against the coding-vector rate over a grid of q.
    Table1(Table1Args),
}

#[derive(Subcommand, Debug)]
enum BoundsCommand {
    /// Lower and upper bounds for the erasure channel.
    Erasure(ErasureArgs),
}

/// Parameters shared by point-to-point commands.
#[derive(Args, Debug, Clone, Copy, Serialize)]
pub struct ChannelArgs {
    /// Field size (prime power).
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "camelCase")]
pub enum Method {
    Optimize,
    #[value(name = "exactT")]
    ExactT,
    Asymptotic,
}

#[derive(Args, Debug, Serialize)]
pub struct CapacityArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// Kuhn-Tucker residual tolerance.
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = Method::Optimize)]
    pub method: Method,
}

#[derive(Args, Debug, Serialize)]
pub struct SweepArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
    /// Comma-separated prime powers.
    #[arg(long, value_delimiter = ',', value_parser = parse_q, default_value = "2,3,4,5,7,8,9,11,13,16")]
    pub qlist: Vec<u64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Args, Debug, Serialize)]
pub struct SupportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Also estimate the field size from which the support matches, over these q.
    #[arg(long, value_delimiter = ',', value_parser = parse_q)]
    pub qlist: Option<Vec<u64>>,
}

#[derive(Args, Debug, Serialize)]
pub struct RegionArgs {
    #[arg(long)]
    pub m1: usize,
    #[arg(long)]
    pub m2: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
    /// Emit the boundary polygons as CSV instead of JSON.
    #[arg(long)]
    pub csv: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct MacSimArgs {
    #[arg(long)]
    pub d1: usize,
    #[arg(long)]
    pub d2: usize,
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long)]
    pub n: usize,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
    /// Rows of the first input (defaults to d1).
    #[arg(long)]
    pub m1: Option<usize>,
    /// Rows of the second input (defaults to d2).
    #[arg(long)]
    pub m2: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = noncoherent::rng::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub channel: ChannelArgs,
    /// File with the input-dimension distribution α_0, α_1, …
    #[arg(long)]
    pub dist: Option<PathBuf>,
    /// Use the erasure channel with this `v:p,…` law for N (needs n = m).
    #[arg(long)]
    pub erasure: Option<String>,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = noncoherent::rng::DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Debug, Serialize)]
pub struct ErasureArgs {
    #[arg(long, value_parser = parse_q)]
    pub q: u64,
    #[arg(long = "T")]
    #[serde(rename = "T")]
    pub t: usize,
    #[arg(long)]
    pub m: usize,
    /// Law of the number of received packets, as `v:p,v:p,…`.
    #[arg(long)]
    pub dist: String,
}

#[derive(Args, Debug, Serialize)]
pub struct Table1Args {
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Block lengths; by default one with T ≤ 2m and one with T > 2m.
    #[arg(long = "T", value_delimiter = ',')]
    #[serde(rename = "T")]
    pub t: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_q, default_value = "2,4,8,16,32,64,128,256")]
    pub qlist: Vec<u64>,
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

fn parse_q(s: &str) -> Result<u64, String> {
    noncoherent::formats::parse_field_order(s, noncoherent::formats::MAX_PARAM_Q).map_err(|e| e.to_string())
}

fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_VAR) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{THREADS_VAR} must be a positive integer, got {v:?}")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(format!("{THREADS_VAR}: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<String, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Capacity(a) => commands::capacity(&a),
        Command::Sweep(a) => commands::sweep(&a),
        Command::Support(a) => commands::support(&a),
        Command::Region(a) => commands::region(&a),
        Command::MacSim(a) => commands::mac_sim(&a),
        Command::Simulate(a) => commands::simulate(&a),
        Command::Bounds(BoundsCommand::Erasure(a)) => commands::bounds_erasure(&a),
        Command::Oracle(c) => oracle::run(&c),
        Command::Table1(a) => commands::table1(&a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| output::emit(out.as_deref(), &text).map_err(CliError::from));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
