//! latticeforge: lattice toolkit runs from the command line.
//!
//! Subcommands map onto the library crates: catalog inspection, theta and
//! flatness evaluation, nested code construction, space-time code analysis
//! and simulation, compute-and-forward rates and singularity sweeps, and
//! wiretap sublattice assessment. Every JSON output embeds the resolved
//! config, the seed, and the tool version; identical config and seed give
//! byte-identical output at any `--threads` setting, so wall time is
//! reported on stderr only.

mod cmd_cf;
mod cmd_lattice;
mod cmd_stc;
mod cmd_wiretap;
mod config;
mod error;
mod inputs;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{pick, FileConfig, RunSettings};
use error::{CliError, Result};
use output::Format;
use std::path::PathBuf;
use std::time::Instant;

/// Default budget for lattice point enumerations.
const DEFAULT_CAP: u64 = 2_000_000;

#[derive(Parser)]
#[command(
    name = "latticeforge",
    version,
    about = "Lattice coding toolkit: catalog queries, theta series, nested codes, space-time codes, compute-and-forward, wiretap bounds"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// JSON config: a file path or an inline object. Explicit flags
    /// override config fields.
    #[arg(long, global = true, value_name = "PATH|JSON")]
    config: Option<String>,
    /// Seed for randomized experiments (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file (stdout when omitted).
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Output format; csv only for tabular reports.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Worker threads for parallel trial execution.
    #[arg(long, global = true, env = "LATTICEFORGE_THREADS")]
    threads: Option<usize>,
    /// Budget for lattice point enumerations.
    #[arg(long, global = true)]
    cap: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Catalog lattice inspection and lattice-level evaluations.
    Lattice {
        #[command(subcommand)]
        cmd: LatticeCmd,
    },
    /// Theta series of a catalog lattice (same as `lattice theta`).
    Theta(cmd_lattice::ThetaArgs),
    /// Flatness factor over a variance grid (same as `lattice flatness`).
    Flatness(cmd_lattice::FlatnessArgs),
    /// Nested code construction (same as `lattice nested`).
    Nested(cmd_lattice::NestedArgs),
    /// Space-time code analysis and simulation.
    Stc {
        #[command(subcommand)]
        cmd: StcCmd,
    },
    /// Compute-and-forward rates and simulation.
    Cf {
        #[command(subcommand)]
        cmd: CfCmd,
    },
    /// Wiretap coset code assessment.
    Wiretap {
        #[command(subcommand)]
        cmd: WiretapCmd,
    },
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Dimension, minimum, volume, and kissing number of a catalog lattice.
    Info(cmd_lattice::InfoArgs),
    /// Theta series evaluations.
    Theta(cmd_lattice::ThetaArgs),
    /// Flatness factor over a variance grid.
    Flatness(cmd_lattice::FlatnessArgs),
    /// Nested code pair: index, rate, coset leaders, optional shaping NSM.
    Nested(cmd_lattice::NestedArgs),
}

#[derive(Subcommand)]
enum StcCmd {
    /// Design criteria and decoding partition of a named code.
    Analyze(cmd_stc::AnalyzeArgs),
    /// Seeded codeword-error-rate sweep.
    Simulate(cmd_stc::SimulateArgs),
}

#[derive(Subcommand)]
enum CfCmd {
    /// Computation rate and coefficient selection for fixed gains.
    Rates(cmd_cf::RatesArgs),
    /// Seeded relay singularity sweep over an SNR grid.
    Simulate(cmd_cf::SimulateArgs),
}

#[derive(Subcommand)]
enum WiretapCmd {
    /// Eavesdropper decoding bound for one coset code.
    Bound(cmd_wiretap::BoundArgs),
    /// Ranking table over candidate sublattice transforms.
    Compare(cmd_wiretap::CompareArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Lattice { cmd: LatticeCmd::Info(_) } => "lattice info",
            Command::Lattice { cmd: LatticeCmd::Theta(_) } | Command::Theta(_) => "theta",
            Command::Lattice { cmd: LatticeCmd::Flatness(_) } | Command::Flatness(_) => "flatness",
            Command::Lattice { cmd: LatticeCmd::Nested(_) } | Command::Nested(_) => "nested",
            Command::Stc { cmd: StcCmd::Analyze(_) } => "stc analyze",
            Command::Stc { cmd: StcCmd::Simulate(_) } => "stc simulate",
            Command::Cf { cmd: CfCmd::Rates(_) } => "cf rates",
            Command::Cf { cmd: CfCmd::Simulate(_) } => "cf simulate",
            Command::Wiretap { cmd: WiretapCmd::Bound(_) } => "wiretap bound",
            Command::Wiretap { cmd: WiretapCmd::Compare(_) } => "wiretap compare",
        }
    }
}

/// Normalizes a command name for the config `command` echo check: the
/// `lattice` prefix of the aliased evaluations is optional.
pub fn canonical_command(name: &str) -> String {
    let squeezed = name.split_whitespace().collect::<Vec<_>>().join(" ");
    match squeezed.as_str() {
        "lattice theta" => "theta".into(),
        "lattice flatness" => "flatness".into(),
        "lattice nested" => "nested".into(),
        other => other.to_string(),
    }
}

fn dispatch(command: &Command, cfg: &FileConfig, run: &RunSettings) -> Result<String> {
    match command {
        Command::Lattice { cmd: LatticeCmd::Info(a) } => cmd_lattice::info(a, cfg, run),
        Command::Lattice { cmd: LatticeCmd::Theta(a) } | Command::Theta(a) => {
            cmd_lattice::theta(a, cfg, run)
        }
        Command::Lattice { cmd: LatticeCmd::Flatness(a) } | Command::Flatness(a) => {
            cmd_lattice::flatness(a, cfg, run)
        }
        Command::Lattice { cmd: LatticeCmd::Nested(a) } | Command::Nested(a) => {
            cmd_lattice::nested(a, cfg, run)
        }
        Command::Stc { cmd: StcCmd::Analyze(a) } => cmd_stc::analyze(a, cfg, run),
        Command::Stc { cmd: StcCmd::Simulate(a) } => cmd_stc::simulate(a, cfg, run),
        Command::Cf { cmd: CfCmd::Rates(a) } => cmd_cf::rates(a, cfg, run),
        Command::Cf { cmd: CfCmd::Simulate(a) } => cmd_cf::simulate(a, cfg, run),
        Command::Wiretap { cmd: WiretapCmd::Bound(a) } => cmd_wiretap::bound(a, cfg, run),
        Command::Wiretap { cmd: WiretapCmd::Compare(a) } => cmd_wiretap::compare(a, cfg, run),
    }
}

fn run(cli: &Cli) -> Result<()> {
    let cfg = FileConfig::load(cli.global.config.as_deref())?;
    cfg.check_command(cli.command.name())?;

    let threads = pick(cli.global.threads, cfg.get_usize("threads")?);
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    }

    let format = match pick(cli.global.format, cfg.get_string("format")?.map(|s| Format::parse_name(&s)).transpose()?) {
        Some(f) => f,
        None => Format::Json,
    };
    let run = RunSettings {
        seed: pick(cli.global.seed, cfg.get_u64("seed")?).unwrap_or(0),
        format,
        cap: pick(cli.global.cap, cfg.get_u64("cap")?).unwrap_or(DEFAULT_CAP),
    };
    let out = pick(
        cli.global.out.clone(),
        cfg.get_string("out")?.map(PathBuf::from),
    );

    let body = dispatch(&cli.command, &cfg, &run)?;
    output::write_output(out.as_ref(), &body)
}

fn main() {
    let started = Instant::now();
    let cli = Cli::parse();
    let code = match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    };
    eprintln!("wall_time_s {:.3}", started.elapsed().as_secs_f64());
    std::process::exit(code);
}
