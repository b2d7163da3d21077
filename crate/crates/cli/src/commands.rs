//! Argument surface and dispatch for the `entangle` binary.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use entangle_core::{entanglement_report, random_pure_state, schmidt_decompose, CMatrix};

use crate::report::{sig15, ReportFile};
use crate::statefile::{parse_part_a, StateFile};
use crate::verify::{self, Suite, VerifyConfig};
use crate::{map_core_error, CliError};

#[derive(Parser)]
#[command(
    name = "entangle",
    version,
    about = "Bipartite pure-state entanglement toolkit",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Compute an entanglement report for a state file
    Measure(MeasureArgs),
    /// Print the Schmidt spectrum (and optionally the local bases)
    Schmidt(SchmidtArgs),
    /// Generate a seeded random state file
    Random(RandomArgs),
    /// Run randomized verification campaigns
    Verify(VerifyArgs),
}

#[derive(Args)]
pub struct MeasureArgs {
    /// Input state file (JSON)
    pub state_path: PathBuf,
    /// 1-based factor indices forming side A, e.g. "1,3"
    /// (required for files with three or more factors)
    #[arg(long)]
    pub part_a: Option<String>,
    /// Report format
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the report here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Omit the timestamp (byte-reproducible output)
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Args)]
pub struct SchmidtArgs {
    /// Input state file (JSON, exactly two factors)
    pub state_path: PathBuf,
    /// Also print the two Schmidt bases
    #[arg(long)]
    pub bases: bool,
}

#[derive(Args)]
pub struct RandomArgs {
    /// Dimension of side A
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub dim_a: u64,
    /// Dimension of side B
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..=1024))]
    pub dim_b: u64,
    /// Seed (falls back to ENTANGLE_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output state file path
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct VerifyArgs {
    /// Which campaign to run
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    pub suite: SuiteArg,
    /// Trials per suite
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Largest subsystem dimension drawn
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u64).range(2..=32))]
    pub max_dim: u64,
    /// Base seed (falls back to ENTANGLE_SEED, then 0)
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pass/fail tolerance
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Worker threads
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=256))]
    pub jobs: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Equivalence,
    Invariance,
    Monotonicity,
    Majorization,
    All,
}

impl SuiteArg {
    fn selection(self) -> Option<Suite> {
        match self {
            SuiteArg::Equivalence => Some(Suite::Equivalence),
            SuiteArg::Invariance => Some(Suite::Invariance),
            SuiteArg::Monotonicity => Some(Suite::Monotonicity),
            SuiteArg::Majorization => Some(Suite::Majorization),
            SuiteArg::All => None,
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Measure(args) => cmd_measure(args),
        Command::Schmidt(args) => cmd_schmidt(args),
        Command::Random(args) => cmd_random(args),
        Command::Verify(args) => cmd_verify(args),
    }
}

fn resolve_seed(explicit: Option<u64>) -> Result<u64, CliError> {
    if let Some(seed) = explicit {
        return Ok(seed);
    }
    match std::env::var("ENTANGLE_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            CliError::Parse(format!("ENTANGLE_SEED '{text}' is not an unsigned integer"))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(CliError::Parse(format!("ENTANGLE_SEED is unreadable: {e}"))),
    }
}

fn cmd_measure(args: MeasureArgs) -> Result<(), CliError> {
    let (state, raw) = StateFile::load(&args.state_path)?;
    let part_a = args.part_a.as_deref().map(parse_part_a).transpose()?;
    let psi = state.to_pure_state(part_a.as_deref())?;
    let report = entanglement_report(&psi).map_err(map_core_error)?;
    let timestamp =
        (!args.no_timestamp).then(|| chrono::Utc::now().to_rfc3339());
    let file = ReportFile::new(&report, &raw, state.dims.clone(), part_a, timestamp);
    let rendered = match args.format {
        OutputFormat::Json => file.to_json(),
        OutputFormat::Text => file.to_text(),
    };
    match &args.out {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn cmd_schmidt(args: SchmidtArgs) -> Result<(), CliError> {
    let (state, _raw) = StateFile::load(&args.state_path)?;
    if state.dims.len() != 2 {
        return Err(CliError::Parse(format!(
            "schmidt needs a two-factor file, got {} factors; cut longer registers with \
             `measure --part-a`",
            state.dims.len()
        )));
    }
    let psi = state.to_pure_state(None)?;
    let sd = schmidt_decompose(&psi).map_err(map_core_error)?;
    println!("schmidt rank: {}", sd.schmidt_rank());
    let lambdas: Vec<String> = sd.lambdas().iter().map(|l| sig15(*l)).collect();
    println!("lambda: {}", lambdas.join(", "));
    if args.bases {
        print_basis("basis A (columns are Schmidt vectors)", sd.basis_a());
        print_basis("basis B (columns are Schmidt vectors)", sd.basis_b());
    }
    Ok(())
}

fn print_basis(label: &str, basis: &CMatrix) {
    println!("{label}:");
    for row in basis.rows() {
        let cells: Vec<String> =
            row.iter().map(|z| format!("({}, {})", sig15(z.re), sig15(z.im))).collect();
        println!("  {}", cells.join("  "));
    }
}

fn cmd_random(args: RandomArgs) -> Result<(), CliError> {
    let seed = resolve_seed(args.seed)?;
    let psi = random_pure_state(args.dim_a as usize, args.dim_b as usize, seed);
    StateFile::from_pure_state(&psi).save(&args.out)
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    if !args.tolerance.is_finite() || args.tolerance <= 0.0 {
        return Err(CliError::Parse("--tolerance must be positive".into()));
    }
    let cfg = VerifyConfig {
        trials: args.trials,
        max_dim: args.max_dim as usize,
        seed: resolve_seed(args.seed)?,
        tolerance: args.tolerance,
        jobs: args.jobs as usize,
    };
    verify::run(args.suite.selection(), &cfg)
}
