//! Command-line front end: file formats, JSON reports and the `mubh` subcommands.

pub mod commands;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mubh_core::spectral::Family;

use crate::commands::{CliError, Source, What};

#[derive(Debug, Parser)]
#[command(
    name = "mubh",
    version,
    about = "Mutually unbiased Bush-type Hadamard matrices and their association schemes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build and certify m mutually unbiased Bush-type Hadamard matrices of order 4n².
    Construct {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Build one of the schemes and write it with a certification report.
    BuildScheme(BuildArgs),
    /// Check user-supplied matrices or a scheme file.
    Verify {
        #[arg(long, value_enum)]
        what: WhatArg,
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Also write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Recover the Hadamard family from a five-class scheme file.
    Extract {
        #[arg(long)]
        scheme: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct BuildArgs {
    /// 3, 5, 8 or fusion4.
    #[arg(long)]
    pub family: String,
    #[arg(long, requires = "m", conflicts_with = "input")]
    pub n: Option<usize>,
    #[arg(long, requires = "n")]
    pub m: Option<usize>,
    /// Directory of H_1.mat … H_m.mat to use instead of --n/--m.
    #[arg(long = "in", required_unless_present = "n")]
    pub input: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Report path; defaults to the scheme file with a .json extension.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WhatArg {
    Mubh,
    Scheme,
}

pub fn execute(cli: Cli) -> Result<serde_json::Value, CliError> {
    match cli.command {
        Command::Construct { n, m, out } => commands::construct(n, m, &out),
        Command::BuildScheme(a) => {
            let family: Family =
                a.family.parse().map_err(|e: mubh_core::spectral::SpectralError| CliError::Usage(e.to_string()))?;
            let source = match (a.input, a.n, a.m) {
                (Some(dir), _, _) => Source::Dir(dir),
                (None, Some(n), Some(m)) => Source::Params { n, m },
                _ => return Err(CliError::Usage("give --n and --m, or --in DIR".into())),
            };
            commands::build_scheme(family, &source, &a.out, a.report.as_deref())
        }
        Command::Verify { what, files, report } => {
            let what = match what {
                WhatArg::Mubh => What::Mubh,
                WhatArg::Scheme => What::Scheme,
            };
            let doc = commands::verify(what, &files)?;
            if let Some(path) = report {
                format::write_file(&path, &report::to_text(&doc)).map_err(|e| CliError::Usage(e.to_string()))?;
            }
            Ok(doc)
        }
        Command::Extract { scheme, n, m, out } => commands::extract(&scheme, n, m, &out),
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli) {
        Ok(doc) => {
            println!("{}", summary(&doc));
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn summary(doc: &serde_json::Value) -> String {
    let field = |k: &str| doc.get(k).map(|v| v.to_string()).unwrap_or_default();
    format!(
        "{} {} ({} ms)",
        field("command").trim_matches('"'),
        field("verdict").trim_matches('"'),
        field("elapsed_ms")
    )
}
