//! Argument parsing, dispatch and the exit-code contract.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::catalog::{self, CatalogError};
use crate::report::Report;
use crate::run::{self, RunError, RunOptions};

pub const EXIT_OK: u8 = 0;
pub const EXIT_FALSIFIED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_ENVIRONMENT: u8 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Tsv,
}

#[derive(Debug, Parser)]
#[command(name = "optcurve", version, about = "Optimal curves over small-discriminant finite fields")]
pub struct Cli {
    /// Worker threads (0: one per core).
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Write the report here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Exit 1 when the report carries a falsification or unexpected flag.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Catalog file; needs a `<file>.sha256` sidecar. Overrides OPTCURVE_CATALOG.
    #[arg(long, global = true)]
    pub catalog: Option<PathBuf>,
    /// Add wall-clock timings to the report (output is then not reproducible).
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List prime powers q <= qmax with discriminant d.
    Enumerate {
        #[arg(short, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
    },
    /// Check the printed optimal elliptic and genus-2 rows, or search them.
    Tables {
        #[arg(short, allow_negative_numbers = true)]
        d: i64,
        /// Search bound when the catalog has no printed rows for d.
        #[arg(long, default_value_t = 1_000)]
        qmax: u64,
    },
    /// Look for optimal genus-4 double covers of a maximal genus-2 curve.
    ScanGenus4 {
        #[arg(short, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
    },
    /// Count the quintic superelliptic families over d = -19 fields.
    ScanSuperelliptic {
        /// The sweep is quartic in q per field; 150 covers 47, 61 and 137.
        #[arg(long, default_value_t = 150)]
        qmax: u64,
        /// Sweep every gamma instead of one per fifth-power class.
        #[arg(long)]
        full_gamma: bool,
    },
    /// Check every catalogued hermitian lattice and its generators.
    VerifyLattices,
    /// Re-derive the printed numeric bounds and order comparisons.
    AuditBounds {
        #[arg(long, default_value_t = 10_000)]
        qmax: u64,
    },
}

fn needs_catalog(c: &Command) -> bool {
    matches!(c, Command::Tables { .. } | Command::VerifyLattices | Command::AuditBounds { .. })
}

pub fn execute(cli: &Cli) -> Result<Report, (u8, String)> {
    let opts = RunOptions { threads: cli.threads, timings: cli.timings };
    let cat = if needs_catalog(&cli.command) {
        Some(catalog::resolve(cli.catalog.as_deref()).map_err(|e: CatalogError| (EXIT_ENVIRONMENT, e.to_string()))?)
    } else {
        None
    };
    let cat = || cat.as_ref().expect("catalog loaded");
    let res = match &cli.command {
        Command::Enumerate { d, qmax } => run::enumerate(*d, *qmax, &opts),
        Command::Tables { d, qmax } => run::tables(cat(), *d, *qmax, &opts),
        Command::ScanGenus4 { d, qmax } => run::scan_genus4(*d, *qmax, &opts),
        Command::ScanSuperelliptic { qmax, full_gamma } => run::scan_superelliptic(*qmax, *full_gamma, &opts),
        Command::VerifyLattices => run::verify_lattices(cat(), &opts),
        Command::AuditBounds { qmax } => run::audit_bounds(cat(), *qmax, &opts),
    };
    res.map_err(|e| match e {
        RunError::Usage(m) => (EXIT_USAGE, m),
        RunError::Compute(m) => (EXIT_ENVIRONMENT, m),
    })
}

pub fn render(report: &Report, format: Format) -> String {
    match format {
        Format::Json => report.to_json(),
        Format::Tsv => report.to_tsv(),
    }
}

/// Parses `args`, runs, writes the report and maps the outcome to an exit code.
pub fn main_with<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err((code, msg)) => {
            eprintln!("optcurve: {msg}");
            return ExitCode::from(code);
        }
    };
    let text = render(&report, cli.format);
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        eprintln!("optcurve: {e}");
        return ExitCode::from(EXIT_ENVIRONMENT);
    }
    for a in &report.alerts {
        eprintln!("{}: {}: {}", serde_json::to_value(a.kind).unwrap().as_str().unwrap(), a.subject, a.message);
    }
    if cli.strict && report.blocking_alerts() > 0 {
        ExitCode::from(EXIT_FALSIFIED)
    } else {
        ExitCode::from(EXIT_OK)
    }
}
