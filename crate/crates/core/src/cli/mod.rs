//! Command-line front end. Every subcommand writes one JSON document (or a
//! CSV table) and maps its outcome onto the exit codes below.

mod commands;

use crate::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fermibound", version, about = "Fermionic monogamy and product-state bounds with numerical checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// JSON input (bound query, graph, or Hamiltonian depending on the subcommand).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Worker threads; defaults to the rayon global pool.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Comparison slack (or mean-field convergence tolerance for ground-cert).
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Also evaluate the variants supported line by line by the proofs.
    #[arg(long, global = true)]
    pub strict_proof: bool,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate closed-form bounds for a query file.
    Bounds(BoundsArgs),
    /// Check the per-site monogamy bound on random states (or the witness state).
    VerifyMonogamy(MonogamyArgs),
    /// Ground-state energy against the best mean-field product state.
    GroundCert(GroundArgs),
    /// Separable approximation of random qudit states by measure-and-condition.
    DefinettiApprox(DefinettiArgs),
    /// Two-site distances of the saturating witness state.
    Witness(WitnessArgs),
}

#[derive(Debug, Clone, Args)]
pub struct BoundsArgs {
    /// Comma-separated theorem tags overriding the query's list.
    #[arg(long, value_delimiter = ',')]
    pub theorems: Vec<String>,
}

#[derive(Debug, Clone, Args)]
pub struct MonogamyArgs {
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub p: usize,
    /// star | ring | path | complete | kM (complete on the first M sites) | bipartite:A
    #[arg(long, default_value = "star")]
    pub graph: String,
    /// Use the witness state with the first part given by --v1.
    #[arg(long)]
    pub witness: bool,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub v1: Vec<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct GroundArgs {
    /// spinless | spinful (ignored with --input)
    #[arg(long, default_value = "spinless")]
    pub family: String,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long, default_value_t = 2)]
    pub length: usize,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub u: f64,
    /// Open boundary conditions.
    #[arg(long)]
    pub open: bool,
    #[arg(long, default_value_t = 16)]
    pub restarts: usize,
    #[arg(long, default_value_t = 500)]
    pub max_iters: usize,
    /// Comma-separated vertex cover; the minimum cover by default.
    #[arg(long, value_delimiter = ',')]
    pub cover: Option<Vec<usize>>,
    /// Sweep U over these values (lattice families only).
    #[arg(long, value_delimiter = ',', conflicts_with = "sweep_t", allow_hyphen_values = true)]
    pub sweep_u: Option<Vec<f64>>,
    /// Sweep t over these values (lattice families only).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub sweep_t: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Args)]
pub struct DefinettiArgs {
    #[arg(long, default_value_t = 4)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// star | ring | path | complete | bipartite:A
    #[arg(long, default_value = "star")]
    pub graph: String,
    /// Draw product states instead of Hilbert-Schmidt random states.
    #[arg(long)]
    pub product: bool,
}

#[derive(Debug, Clone, Args)]
pub struct WitnessArgs {
    #[arg(long, default_value_t = 5)]
    pub n: usize,
    #[arg(long, value_delimiter = ',', default_value = "0")]
    pub v1: Vec<usize>,
}

/// Rendered output plus the exit code it implies.
pub struct Outcome {
    pub json: serde_json::Value,
    pub csv: Option<Vec<u8>>,
    pub code: i32,
}

pub fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::Numerical(_) => EXIT_VIOLATION,
        _ => EXIT_INPUT,
    }
}

/// Runs a parsed command and returns its output and exit code.
pub fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    if let Some(tol) = g.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Error::InvalidArgument(format!("--tol must be positive, got {tol}")));
        }
    }
    crate::par::with_threads(g.threads, || match &cli.command {
        Command::Bounds(a) => commands::bounds(g, a),
        Command::VerifyMonogamy(a) => commands::verify_monogamy(g, a),
        Command::GroundCert(a) => commands::ground_cert(g, a),
        Command::DefinettiApprox(a) => commands::definetti(g, a),
        Command::Witness(a) => commands::witness(g, a),
    })?
}

fn emit(g: &GlobalOpts, outcome: &Outcome) -> Result<()> {
    let bytes = match (g.format, &outcome.csv) {
        (Format::Csv, Some(csv)) => csv.clone(),
        _ => {
            let mut s = serde_json::to_string_pretty(&outcome.json)?;
            s.push('\n');
            s.into_bytes()
        }
    };
    match &g.out {
        Some(path) => std::fs::write(path, bytes)?,
        None => std::io::stdout().write_all(&bytes)?,
    }
    Ok(())
}

/// Entry point for the binary: parses `args`, runs, prints, returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    match execute(&cli).and_then(|o| emit(&cli.global, &o).map(|_| o.code)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}
