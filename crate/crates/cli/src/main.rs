//! `knotoid`: batch front end for the Gauss-code engine.
//!
//! Every subcommand prints one JSON object per input record, in input
//! order. Exit status: 0 success, 1 invalid input, 2 inconclusive verdict or
//! failed check, 3 budget misconfiguration.

mod budget;
mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use budget::BudgetArgs;

#[derive(Parser, Debug)]
#[command(name = "knotoid", version, about = "Gauss-code engine for plus-welded knotoids")]
pub struct Cli {
    /// TOML file with default budget values (max_nodes, max_depth, max_chords)
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Human-readable output instead of JSON lines
    #[arg(long, global = true)]
    pub pretty: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone, Default)]
pub struct InputArgs {
    /// File with one code per line or a JSON array; `-` reads stdin
    pub path: Option<PathBuf>,
    /// Inline code, may repeat
    #[arg(long = "code")]
    pub codes: Vec<String>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlternationArg {
    Cyclic,
    Linear,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OpArg {
    Change,
    Virtualize,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FPlusArg {
    #[default]
    Strict,
    Permissive,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check that every record is a valid Gauss code
    Validate {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Warping-degree report per code
    Invariants {
        #[command(flatten)]
        input: InputArgs,
        /// Also check the degree identities on each code
        #[arg(long)]
        check: bool,
        #[arg(long, value_enum, default_value = "cyclic")]
        alternation: AlternationArg,
    },
    /// Bounded search for a certificate to the trivial code
    Simplify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        budget: BudgetArgs,
        /// Write certificates here
        #[arg(long)]
        cert_out: Option<PathBuf>,
        /// Endpoint move reading; `permissive` is experimental
        #[arg(long, value_enum, default_value = "strict")]
        fplus: FPlusArg,
    },
    /// Unknotting upper bounds by crossing changes or virtualizations
    Unknot {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "change")]
        op: OpArg,
        /// Largest modification set searched (default: number of chords)
        #[arg(long)]
        max_k: Option<usize>,
        #[command(flatten)]
        budget: BudgetArgs,
        #[arg(long)]
        cert_out: Option<PathBuf>,
    },
    /// Warping degree of the virtual closure
    Closure {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print codes, one per line
    Enumerate {
        #[arg(long)]
        chords: usize,
        /// Number of random codes instead of the exhaustive list
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Drop codes with a repeated canonical key
        #[arg(long)]
        dedupe: bool,
        /// Largest chord count allowed for exhaustive listing
        #[arg(long, default_value_t = knotoid_core::enumerate::DEFAULT_CEILING)]
        ceiling: usize,
    },
    /// Replay certificates from a JSON file (one object or an array)
    VerifyCert {
        /// Certificate file; `-` reads stdin
        path: PathBuf,
    },
    /// Run property suites over a corpus
    Check {
        /// Suite name or `all`
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest chord count of the generated corpus
        #[arg(long, default_value_t = 3)]
        chords: usize,
        /// Random codes with 1..=chords chords instead of the exhaustive corpus
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "cyclic")]
        alternation: AlternationArg,
        /// Check these codes instead of a generated corpus
        #[command(flatten)]
        input: InputArgs,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match commands::run(&cli, &mut out) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(commands::Status::Invalid as u8)
        }
    }
}
