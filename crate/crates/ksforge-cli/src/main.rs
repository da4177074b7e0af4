//! `ksforge`: command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
//! 3 search truncated by a budget.

mod commands;
mod report;
mod sources;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ksforge::budget::Budget;
use report::Format;

#[derive(Parser, Debug)]
#[command(name = "ksforge", version, about = "Pauli-group Kochen-Specker structures: IDs, kernels, proofs, rays, parity proofs")]
pub struct Cli {
    #[command(flatten)]
    pub job: JobArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct JobArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(short = 'o', long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Wall-clock budget for searches, in seconds.
    #[arg(long, global = true, env = "KSFORGE_SECONDS")]
    pub seconds: Option<f64>,
    /// Node budget for searches.
    #[arg(long, global = true)]
    pub nodes: Option<u64>,
}

impl JobArgs {
    pub fn budget(&self) -> Budget {
        Budget { max_nodes: self.nodes, wall: self.seconds.map(std::time::Duration::from_secs_f64) }
    }

    fn validate(&self) -> Result<(), String> {
        if self.seconds.is_some_and(|s| !(s > 0.0 && s.is_finite())) {
            return Err("--seconds must be positive".into());
        }
        if self.nodes == Some(0) {
            return Err("--nodes must be positive".into());
        }
        if self.workers == Some(0) {
            return Err("--workers must be positive".into());
        }
        Ok(())
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Identity products.
    #[command(subcommand)]
    Ids(commands::IdsCmd),
    /// Composite Kernel Structures.
    #[command(subcommand)]
    Cks(commands::CksCmd),
    /// Kernels and proof generation.
    #[command(subcommand)]
    Kernel(commands::KernelCmd),
    /// Observable-based proofs.
    #[command(subcommand)]
    Proof(commands::ProofCmd),
    /// The ray-basis set generated by a proof.
    Rays(commands::RaysArgs),
    /// Parity proofs.
    #[command(subcommand)]
    Parity(commands::ParityCmd),
    /// Basis (or ray) colourability.
    Color(commands::ColorArgs),
    /// Built-in structures.
    #[command(subcommand)]
    Catalog(commands::CatalogCmd),
    /// Pentagon inequalities.
    #[command(subcommand)]
    Pentagon(commands::PentagonCmd),
}

/// Errors that end a command before it produces a report.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Invalid(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    ExitCode::from(run(cli) as u8)
}

fn run(cli: Cli) -> i32 {
    if let Err(e) = cli.job.validate() {
        eprintln!("error: {e}");
        return 2;
    }
    if let Some(w) = cli.job.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            eprintln!("error: {e}");
            return 2;
        }
    }
    let outcome = match commands::dispatch(&cli.command, &cli.job) {
        Ok(o) => o,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            return 2;
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("invalid: {m}");
            return 1;
        }
    };
    let body = match outcome.render(cli.job.format) {
        Ok(b) => b,
        Err(m) => {
            eprintln!("error: {m}");
            return 2;
        }
    };
    let written = match &cli.job.output {
        Some(p) => std::fs::write(p, &body).map_err(|e| format!("{}: {e}", p.display())),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(m) = written {
        eprintln!("error: {m}");
        return 2;
    }
    outcome.status.code()
}
