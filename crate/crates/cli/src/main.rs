//! `susyent` command-line tool: builds model descriptors and runs spectrum,
//! locality, duality, thermal and oracle scans, writing CSV tables.
//!
//! Exit codes: 0 success, 2 validation failure, 3 numerical guard tripped.
//! Failures print one line `error code=<Code> exit=<n> message="..."` on
//! stderr.

mod commands;
mod table;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use susyent::models::Boundary;
use susyent::MapChoice;

#[derive(Parser)]
#[command(name = "susyent", version, about = "Gaussian-state entanglement scans for supersymmetric quadratic models")]
struct Cli {
    /// Worker threads for independent scan points (0 = one per core).
    #[arg(long, global = true, default_value_t = 0)]
    jobs: usize,

    /// Lift the dense-size guard (and default the honeycomb to 45x45).
    /// Full-scale scans take hours.
    #[arg(long, global = true)]
    full_scale: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model and write its descriptor.
    Model(ModelArgs),
    /// One-particle spectrum from both sides, descending.
    Spectrum(SpectrumArgs),
    /// Weight of the image of one site under an identification map.
    Locality(LocalityArgs),
    /// Entanglement spectra of subsystems and of their duals.
    DualityScan(DualityArgs),
    /// Thermal eigenvalues of both sides and their products.
    Thermal(ThermalArgs),
    /// Compare Gaussian entropies with exact Fock-space ones.
    OracleCheck(OracleArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum BuilderName {
    Oscillator,
    TwoMode,
    KitaevChain,
    Honeycomb,
}

#[derive(Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    builder: BuilderName,
    /// Chain length.
    #[arg(long, default_value_t = 30)]
    n: usize,
    /// Chain hopping `t`.
    #[arg(long, default_value_t = 0.35)]
    t: f64,
    /// Chain chemical potential `μ` (> 0).
    #[arg(long, default_value_t = 1.0)]
    mu: f64,
    #[arg(long, default_value_t = Boundary::Open)]
    boundary: Boundary,
    /// Honeycomb extent (default 15, or 45 with --full-scale).
    #[arg(long)]
    l1: Option<usize>,
    #[arg(long)]
    l2: Option<usize>,
    /// Honeycomb couplings `j_x,j_y,j_z`.
    #[arg(long, value_delimiter = ',', default_value = "1,1,2.5")]
    j: Vec<f64>,
    /// Two-mode bosonic squeezing.
    #[arg(long, default_value_t = 0.3)]
    r_b: f64,
    /// Two-mode fermionic squeezing (< π/4).
    #[arg(long, default_value_t = 0.2)]
    r_f: f64,
    /// Descriptor path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Build the full system and print every invariant check.
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
pub struct SpectrumArgs {
    /// Model descriptor.
    model: PathBuf,
    /// CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct LocalityArgs {
    model: PathBuf,
    /// Source site, 1-based.
    #[arg(long)]
    site: usize,
    #[arg(long, default_value = "L1")]
    map: MapChoice,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DualityArgs {
    model: PathBuf,
    /// Subsystem sizes `a..b` (inclusive) or a single `m`: parallelogram side
    /// for honeycomb models, block length for everything else.
    #[arg(long)]
    m: Option<String>,
    /// Lower-left cell `x,y` of the honeycomb parallelograms.
    #[arg(long, value_delimiter = ',', default_value = "0,0")]
    anchor: Vec<usize>,
    /// First site (1-based) of the blocks of non-lattice models.
    #[arg(long, default_value_t = 1)]
    start: usize,
    /// Map carrying each subsystem to its dual; its source side sets the
    /// statistics of the subsystems.
    #[arg(long, default_value = "L1_inv")]
    map: MapChoice,
    /// Additional Rényi orders.
    #[arg(long, value_delimiter = ',')]
    renyi: Vec<f64>,
    /// Report entropies in bits instead of nats.
    #[arg(long)]
    bits: bool,
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// File prefix: writes `<name>_aggregate.csv` and `<name>_modes.csv`.
    #[arg(long, default_value = "duality")]
    name: String,
}

#[derive(Args)]
pub struct ThermalArgs {
    model: PathBuf,
    /// Inverse temperatures.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    beta: Vec<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
pub struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of fermionic modes.
    #[arg(long, default_value_t = 4)]
    n: usize,
    /// Cut as 1-based sites `i,j,...`; repeatable. Default: every contiguous cut.
    #[arg(long)]
    cut: Vec<String>,
    /// Check the two-mode bosonic ground state instead.
    #[arg(long)]
    bosonic: bool,
    #[arg(long, default_value_t = 0.5)]
    r_b: f64,
    #[arg(long, default_value_t = 60)]
    cutoff: usize,
}

/// Global options every command sees.
pub struct Context {
    pub jobs: usize,
    pub full_scale: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = Context { jobs: cli.jobs, full_scale: cli.full_scale };
    let result = match cli.command {
        Command::Model(a) => commands::model(&ctx, a),
        Command::Spectrum(a) => commands::spectrum(&ctx, a),
        Command::Locality(a) => commands::locality(&ctx, a),
        Command::DualityScan(a) => commands::duality_scan(&ctx, a),
        Command::Thermal(a) => commands::thermal(&ctx, a),
        Command::OracleCheck(a) => commands::oracle_check(&ctx, a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let record = commands::ErrorRecord::from_anyhow(&e);
            eprintln!("{record}");
            ExitCode::from(record.exit)
        }
    }
}
