//! `egb`: command-line front end for egb-core.
//!
//! Exit codes: 0 success, 1 input error, 2 partial validation.

mod analysis;
mod config;
mod eggbeater;
mod freegroup;
mod schema;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use config::RunConfig;

#[derive(Parser, Debug)]
#[command(name = "egb", version, about = "Egg-beater fixed points, Z_p persistence invariants and bounds")]
struct Cli {
    /// Line-oriented `key=value` file; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Run sequentially instead of on the thread pool.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(clap::Args, Debug, Default)]
pub struct EggArgs {
    #[arg(long)]
    pub p: Option<String>,
    #[arg(long = "L")]
    pub l: Option<String>,
    /// Comma-separated `μ_1,…,μ_p`; found by parameter search when omitted.
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    /// A rational, a comma list, or `auto` (smallest lattice values from the threshold on).
    #[arg(long)]
    pub lambda: Option<String>,
    /// Number of lattice values for `--lambda auto`.
    #[arg(long)]
    pub count: Option<String>,
    /// Denominator bound for the parameter search.
    #[arg(long)]
    pub bound: Option<String>,
    /// Output directory for per-λ CSV tables and `summary.json`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(clap::Args, Debug)]
pub struct PlanarArgs {
    #[arg(long)]
    pub mu: Option<String>,
    #[arg(long)]
    pub nu: Option<String>,
    #[arg(long)]
    pub lambda: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum BarcodeCmd {
    /// Barcode of a filtered complex file.
    Decompose { file: PathBuf },
    /// Bottleneck distance between two barcode files.
    Bottleneck { a: PathBuf, b: PathBuf },
    /// Spreads and full-power verdict of a Z_p-module file.
    Mu {
        file: PathBuf,
        #[arg(long = "zeta-index")]
        zeta_index: Option<String>,
    },
}

#[derive(clap::Args, Debug)]
pub struct BoundsArgs {
    #[arg(long)]
    pub p: Option<String>,
    /// Built-in fixture name (`p2`); ignored when `--file` is given.
    #[arg(long)]
    pub fixture: Option<String>,
    /// Model input JSON: `{"p": 2, "tuples": [{"action": "3/2", "degree": 0}]}`.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Fixture λ values: comma list or `auto`.
    #[arg(long)]
    pub lambda: Option<String>,
    /// Lipschitz constant of the autonomous-vanishing invariant.
    #[arg(long)]
    pub k: Option<String>,
    #[arg(long = "epsilon-frac")]
    pub epsilon_frac: Option<String>,
    /// Betti numbers of the stabilizing factor, e.g. `1,2,1`.
    #[arg(long)]
    pub stabilize: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum FreeGroupCmd {
    /// Free reduction of a word such as `a^2 b a^-1`.
    Reduce { word: String },
    /// Whether two words are conjugate.
    Conjugate { a: String, b: String },
    /// Word of an itinerary: the canonical loop for `--m/--n`, or a JSON segment list.
    Itinerary {
        #[arg(long)]
        m: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Self-intersection number `si(m, n)`.
    Si { m: u64, n: u64 },
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate and validate all 2^{2p} fixed points.
    Eggbeater(EggArgs),
    /// The four fixed points of the planar variant.
    #[command(name = "eggbeater-2d")]
    Eggbeater2d(PlanarArgs),
    #[command(subcommand)]
    Barcode(BarcodeCmd),
    /// `w`-spread of an equivariant complex file.
    Spread {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    Bounds(BoundsArgs),
    #[command(subcommand)]
    Freegroup(FreeGroupCmd),
}

/// Outcome of a command: text for stdout and whether validation was complete.
pub struct Output {
    pub text: String,
    pub complete: bool,
}

impl Output {
    pub fn ok(text: String) -> Self {
        Self { text, complete: true }
    }
}

pub fn exec(sequential: bool) -> egb_core::par::Execution {
    if sequential {
        egb_core::par::Execution::Sequential
    } else {
        egb_core::par::Execution::Parallel
    }
}

pub fn write_file(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cli: Cli) -> Result<Output> {
    let cfg = RunConfig::load(cli.config.as_deref())?;
    let ex = exec(cli.sequential);
    match cli.command {
        Command::Eggbeater(a) => eggbeater::run(&cfg, a, ex),
        Command::Eggbeater2d(a) => eggbeater::run_2d(&cfg, a),
        Command::Barcode(c) => analysis::barcode(&cfg, c, ex),
        Command::Spread { file, out } => analysis::spread(&file, out.as_deref(), ex),
        Command::Bounds(a) => analysis::bounds(&cfg, a, ex),
        Command::Freegroup(c) => freegroup::run(c),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.complete {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
