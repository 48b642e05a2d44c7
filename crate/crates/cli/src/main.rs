mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wf_core::verify::Suite;

/// Walsh-Fourier analysis on the truncated dyadic group.
#[derive(Debug, Parser)]
#[command(name = "wf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Block-endpoint spectrum of a family of indices in one band.
    Spectrum {
        /// Band exponent: members satisfy 2^s <= n < 2^(s+1).
        #[arg(long)]
        s: u32,
        /// Comma-separated family members.
        #[arg(long, value_delimiter = ',', required = true)]
        family: Vec<u64>,
    },
    /// Exact scaled kernel values on G_M.
    Kernel {
        #[arg(long = "type", value_enum)]
        kind: KernelKind,
        #[arg(long)]
        n: u64,
        #[arg(long = "M")]
        scale: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a named brute-force suite; exit 1 if any case fails.
    Verify {
        #[arg(long)]
        suite: Suite,
        #[arg(long = "M")]
        scale: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Weighted maximal function of Fejer means over an index sequence.
    Maximal {
        /// Index sequence, one per line.
        #[arg(long)]
        seq_file: PathBuf,
        #[arg(long, value_enum)]
        weight: Weight,
        /// Weights phi_0, phi_1, ... by band, one per line (for --weight custom).
        #[arg(long)]
        phi_file: Option<PathBuf>,
        /// Input grid function (index,value CSV).
        #[arg(long)]
        input: PathBuf,
        /// Where to write the maximal function grid.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Ratio curve of the divergence martingale across grid scales.
    Counterexample {
        /// `alt-bits` or `file:<path>` with one index per line.
        #[arg(long)]
        family: String,
        /// `const:<v>`, `card2` or `file:<path>` with one weight per band.
        #[arg(long)]
        phi: String,
        #[arg(long, value_delimiter = ',', required = true)]
        scales: Vec<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KernelKind {
    Dirichlet,
    DirichletPow2,
    Fejer,
    FejerPow2,
    Gat,
    Lemma4Rhs,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Weight {
    Card,
    Log2,
    Var,
    Custom,
}

/// A failed run: exit code 1 for a verification failure, 2 for bad input.
#[derive(Debug)]
pub enum Failure {
    Verification,
    Usage(String),
}

impl From<wf_core::WfError> for Failure {
    fn from(e: wf_core::WfError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("WF_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Usage(format!("WF_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Spectrum { s, family } => commands::spectrum(s, &family),
        Command::Kernel {
            kind,
            n,
            scale,
            format,
            out,
        } => commands::kernel(kind, n, scale, format, out.as_deref()),
        Command::Verify { suite, scale, seed } => commands::verify(suite, scale, seed),
        Command::Maximal {
            seq_file,
            weight,
            phi_file,
            input,
            out,
        } => commands::maximal(&seq_file, weight, phi_file.as_deref(), &input, out.as_deref()),
        Command::Counterexample {
            family,
            phi,
            scales,
            out,
        } => commands::counterexample(&family, &phi, &scales, out.as_deref()),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
