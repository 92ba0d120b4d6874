//! Argument parsing and dispatch for the `lamp` binary.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{
    self, asm, bench::BenchConfig, metric::MetricMode, run::RunArgs, table::Search, Output,
};
use crate::error::Result;
use crate::style::Style;

#[derive(Debug, Parser)]
#[command(
    name = "lamp",
    version,
    about = "Vector-logic quality metric, associative tables and the LAMP simulator"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Quality metric of a query against one associator.
    Metric {
        #[arg(long)]
        m: String,
        #[arg(long)]
        a: String,
        #[arg(long, value_enum, default_value_t = MetricMode::Vector)]
        mode: MetricMode,
    },
    /// Best rows of a table for a query vector (may contain x).
    Query {
        table: PathBuf,
        #[arg(long)]
        m: String,
        /// Also list the k best rows.
        #[arg(long)]
        top: Option<usize>,
    },
    /// Fault lookup: closest dictionary rows to an observed response.
    Diag {
        table: PathBuf,
        #[arg(long)]
        response: String,
        #[arg(long)]
        top: Option<usize>,
    },
    /// Assemble, disassemble or emit the builtin query program.
    #[command(subcommand)]
    Asm(AsmCommand),
    /// Run a program on the 4x4 grid and dump the final state.
    Run(RunCli),
    /// Measure vector-logic table queries against a scalar baseline.
    Bench(BenchCli),
}

#[derive(Debug, Subcommand)]
pub enum AsmCommand {
    /// Assemble source into a program binary.
    Build {
        source: PathBuf,
        /// Defaults to the source path with a .bin extension.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Disassemble a program binary.
    Dump { binary: PathBuf },
    /// Emit the builtin query program for cell 0,0.
    Builtin {
        #[arg(long)]
        rows: usize,
        /// Write here instead of stdout; a .bin path gets the binary.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RunCli {
    /// Program binary or assembler source.
    pub program: Option<PathBuf>,
    /// Run the builtin query program on cell 0,0 instead of PROGRAM.
    #[arg(long)]
    pub builtin_query: bool,
    /// A-matrix from a binary table file, as [R,C=]FILE; no cell means all cells.
    #[arg(long = "table", value_name = "[R,C=]FILE")]
    pub tables: Vec<String>,
    /// Register preload, as [R,C:]REG=BITS; no cell means all cells.
    #[arg(long = "load", value_name = "[R,C:]REG=BITS")]
    pub loads: Vec<String>,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_cycles: u64,
    /// Print one line per executed cell per cycle.
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Baseline {
    Scalar,
    None,
}

#[derive(Debug, Args)]
pub struct BenchCli {
    #[arg(long, default_value_t = 4096)]
    pub n: usize,
    #[arg(long, default_value_t = 100_000)]
    pub rows: usize,
    #[arg(long, default_value_t = 3)]
    pub iters: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    #[arg(long, value_enum, default_value_t = Baseline::Scalar)]
    pub baseline: Baseline,
}

/// Runs one parsed command; `echo` is the command line recorded in the report.
pub fn execute(cli: &Cli, echo: &str, style: Style) -> Result<Output> {
    match &cli.command {
        Command::Metric { m, a, mode } => commands::metric::metric(m, a, *mode, echo, style),
        Command::Query { table, m, top } => {
            commands::table::search(Search::Query, table, m, *top, echo, style)
        }
        Command::Diag {
            table,
            response,
            top,
        } => commands::table::search(Search::Diagnose, table, response, *top, echo, style),
        Command::Asm(AsmCommand::Build { source, output }) => {
            asm::build(source, output.as_deref(), echo)
        }
        Command::Asm(AsmCommand::Dump { binary }) => asm::dump(binary, echo),
        Command::Asm(AsmCommand::Builtin { rows, output }) => {
            asm::builtin(*rows, output.as_deref(), echo)
        }
        Command::Run(r) => commands::run::run(
            &RunArgs {
                program: r.program.clone(),
                builtin_query: r.builtin_query,
                tables: r.tables.clone(),
                loads: r.loads.clone(),
                max_cycles: r.max_cycles,
                trace: r.trace,
            },
            echo,
            style,
        ),
        Command::Bench(b) => commands::bench::bench(
            &BenchConfig {
                n: b.n,
                rows: b.rows,
                iters: b.iters,
                seed: b.seed,
                threads: b.threads,
                baseline: b.baseline == Baseline::Scalar,
            },
            echo,
            style,
        ),
    }
}

/// The text written to stdout for `format`.
pub fn render(out: &Output, format: Format) -> String {
    match format {
        Format::Text => out.text.clone(),
        Format::Tsv => out.report.to_tsv(),
        Format::Json => out.report.to_json() + "\n",
    }
}
