//! `twofactor`: generate graphs, build templates, certify parameters, and
//! embed or verify cycle families.
//!
//! Exit codes: 0 ok, 2 parse or I/O error, 3 infeasible spec, 4 missing
//! capability, 5 stage or strict-gate failure, 6 verification failure.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twofactor::Mode;

use crate::error::CliError;
use crate::report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "twofactor", version, about = "Embed prescribed 2-factors into pseudorandom graphs")]
pub struct Cli {
    /// strict (default) or practical.
    #[arg(long, global = true)]
    pub mode: Option<Mode>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Flat key=value file; flags override it.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Main output file; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Report file; stderr when absent.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report_format: ReportFormat,
    /// Leave timing fields out of the report.
    #[arg(long, global = true)]
    pub no_timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Sample G(n, p) as an edge list.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Embed a cycle family (padded to n) as a 2-factor.
    Embed(EmbedArgs),
    /// Embed cycles with lengths in [4, L].
    EmbedShort(EmbedArgs),
    /// Embed cycles longer than L.
    EmbedLong(EmbedArgs),
    /// Build a flexible template.
    Template {
        #[arg(long)]
        m: usize,
        /// LPS prime; defaults to p_R of the configuration.
        #[arg(long, conflicts_with = "random")]
        p_r: Option<u64>,
        /// Random template of this degree instead of LPS.
        #[arg(long)]
        random: Option<usize>,
        /// Sampled deletions when the flexible set is too large to enumerate.
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Estimate lambda and sample the discrepancy inequality.
    Certify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
    },
    /// Check an embedding against a graph and a spec.
    Verify {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
    },
    /// Split the vertices into 2^k parts keeping every degree.
    Partition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        p: Option<f64>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct EmbedArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub spec: PathBuf,
    /// Edge density; the graph's own density when absent.
    #[arg(long)]
    pub p: Option<f64>,
    /// Spectral parameter; estimated in strict mode when absent.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// greedy, exact or none.
    #[arg(long)]
    pub provider: Option<String>,
}

fn emit_report(cli: &Cli, report: &RunReport) -> Result<(), CliError> {
    let timings = !cli.no_timings;
    let text = match cli.report_format {
        ReportFormat::Text => report.to_text(timings),
        ReportFormat::Json => report.to_json(timings),
    };
    match &cli.report {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => {
            eprint!("{text}");
            Ok(())
        }
    }
}

fn main() {
    let cli = Cli::parse();
    let mut report = RunReport::default();
    let code = match commands::run(&cli, &mut report) {
        Ok(()) => {
            report.push("status", "ok");
            error::exit::OK
        }
        Err(e) => {
            let code = e.exit_code();
            report.push("status", "error");
            if let Some(stage) = e.stage() {
                report.push("stage", stage);
            }
            report.push("error", e.to_string());
            report.push("exit_code", code);
            if cli.report.is_some() {
                eprintln!("error: {e}");
            }
            code
        }
    };
    if let Err(e) = emit_report(&cli, &report) {
        eprintln!("error: {e}");
    }
    std::process::exit(code);
}
