//! `aitgl`: reproducible experiments over the aitgl constructions.
//!
//! Every subcommand writes a JSON-lines trace (one record per event, a
//! `{"summary": ...}` record last) and prints a short human-readable summary.
//! Exit status: 0 on success, 2 when a game rule or a checked invariant is
//! broken, 1 on usage and I/O errors.

mod commands;
mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use output::TRACE_DIR_VAR;

#[derive(Debug, Parser)]
#[command(
    name = "aitgl",
    version,
    about = "Budgeted prefix-complexity constructions at desk scale"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the strings printed by short programs given their length.
    Enumerate(EnumerateArgs),
    /// Trim an enumerated set down to a leafless set of bounded width.
    Trim(TrimArgs),
    /// Replay a leafless set through the online path-token algorithm.
    Tokens(TokensArgs),
    /// Play the recursive painter strategy against an opponent.
    Play(PlayArgs),
    /// Budgeted complexity estimates over a window of prefix lengths.
    Estimate(EstimateArgs),
}

#[derive(Debug, Args)]
pub struct OutArgs {
    /// Trace file (JSON lines). `$AITGL_TRACE_DIR` relocates it.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    /// Maximum program length.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=12))]
    pub k: u32,
    /// Step budget per run.
    #[arg(long, value_parser = clap::value_parser!(u64).range(0..=1_000_000_000_000))]
    pub budget: u64,
    /// Longest string to enumerate.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=24))]
    pub max_len: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["from_machine", "from_file"])))]
pub struct TrimArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub w: u32,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=24))]
    pub depth: u32,
    /// Number of enumeration steps (dovetailing rounds, or list items).
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1_000_000))]
    pub horizon: u32,
    /// Enumerate strings printed by programs of length at most K.
    #[arg(long, value_name = "K", value_parser = clap::value_parser!(u32).range(2..=12))]
    pub from_machine: Option<u32>,
    /// A JSON array of `{"s": bits, "len": n}`, one item per step.
    #[arg(long, value_name = "PATH")]
    pub from_file: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderSpec {
    Shortlex,
    File,
    Shuffle(u64),
}

fn parse_order(s: &str) -> Result<OrderSpec, String> {
    match s {
        "shortlex" => Ok(OrderSpec::Shortlex),
        "file" => Ok(OrderSpec::File),
        _ => s
            .strip_prefix("shuffle:")
            .ok_or_else(|| "expected shortlex, file or shuffle:SEED".to_string())?
            .parse()
            .map(OrderSpec::Shuffle)
            .map_err(|e| format!("bad seed: {e}")),
    }
}

#[derive(Debug, Args)]
pub struct TokensArgs {
    /// A JSON array of `{"s": bits, "len": n}`.
    #[arg(long, value_name = "PATH")]
    pub input: PathBuf,
    /// shortlex | file | shuffle:SEED
    #[arg(long, default_value = "shortlex", value_parser = parse_order)]
    pub order: OrderSpec,
    /// Token capacity; defaults to the width of the input.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub w: Option<u32>,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BobSpec {
    Blind(usize),
    Pass,
    Copycat,
    File(PathBuf),
    Mirror,
    Zeros,
    Ones,
    Hunter,
    Random(u64),
}

/// Largest program-length bound accepted for the blind opponent.
pub const MAX_BLIND_F: usize = 12;

fn parse_bob(s: &str) -> Result<BobSpec, String> {
    let simple = match s {
        "pass" => Some(BobSpec::Pass),
        "copycat" => Some(BobSpec::Copycat),
        "mirror" => Some(BobSpec::Mirror),
        "zeros" => Some(BobSpec::Zeros),
        "ones" => Some(BobSpec::Ones),
        "hunter" => Some(BobSpec::Hunter),
        _ => None,
    };
    if let Some(b) = simple {
        return Ok(b);
    }
    if let Some(f) = s.strip_prefix("blind:") {
        let f: usize = f.parse().map_err(|e| format!("bad program bound: {e}"))?;
        if f > MAX_BLIND_F {
            return Err(format!("program bound {f} exceeds {MAX_BLIND_F}"));
        }
        return Ok(BobSpec::Blind(f));
    }
    if let Some(seed) = s.strip_prefix("random:") {
        return seed
            .parse()
            .map(BobSpec::Random)
            .map_err(|e| format!("bad seed: {e}"));
    }
    if let Some(path) = s.strip_prefix("file:") {
        return Ok(BobSpec::File(path.into()));
    }
    Err(
        "expected blind:F, pass, copycat, file:PATH, mirror, zeros, ones, hunter or random:SEED"
            .into(),
    )
}

#[derive(Debug, Args)]
pub struct PlayArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=16))]
    pub w: u32,
    /// blind:F | pass | copycat | file:PATH | mirror | zeros | ones | hunter | random:SEED
    #[arg(long, value_parser = parse_bob)]
    pub bob: BobSpec,
    /// Number of plies (Alice moves first).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=1_000_000))]
    pub horizon: u32,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeqSpec {
    Zeros,
    Alt,
    GameTrace(PathBuf),
}

fn parse_seq(s: &str) -> Result<SeqSpec, String> {
    match s {
        "zeros" => Ok(SeqSpec::Zeros),
        "alt" => Ok(SeqSpec::Alt),
        _ => s
            .strip_prefix("game-trace:")
            .map(|p| SeqSpec::GameTrace(p.into()))
            .ok_or_else(|| "expected zeros, alt or game-trace:PATH".into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EstimateMode {
    #[value(name = "M")]
    M,
    #[value(name = "Minf-seq")]
    MinfSeq,
    #[value(name = "Minf-str")]
    MinfStr,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// zeros | alt | game-trace:PATH (the lex-first green chain of a `play` trace)
    #[arg(long, value_parser = parse_seq)]
    pub seq: SeqSpec,
    #[arg(long, value_enum)]
    pub mode: EstimateMode,
    /// Window start (`Minf-seq`); for `Minf-str` the string is the prefix of
    /// this length. Defaults to 1.
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=100_000))]
    pub n_lo: Option<u32>,
    /// Window end; defaults to 16, or the chain length for game traces.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..=100_000))]
    pub n_hi: Option<u32>,
    /// Longest program considered; defaults to N_HI + 2.
    #[arg(long, value_parser = clap::value_parser!(u32).range(2..=100_002))]
    pub k_max: Option<u32>,
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(0..=1_000_000_000_000))]
    pub budget: u64,
    #[command(flatten)]
    pub out: OutArgs,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{flag}: {message}")]
    Usage { flag: &'static str, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Input { path: PathBuf, message: String },
    #[error("invariant {name} broken at step {step}: {detail}")]
    Breach {
        name: &'static str,
        step: usize,
        detail: String,
    },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    pub fn input(path: &Path, message: impl ToString) -> Self {
        CliError::Input {
            path: path.to_path_buf(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Breach { .. } => 2,
            _ => 1,
        }
    }
}

/// Parses `args` and runs the command; returns the process exit code.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
