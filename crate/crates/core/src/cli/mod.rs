//! Command-line surface: germ files in, deterministic reports out.

mod commands;
mod corpus;
mod germfile;
mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use crate::catalog::ComponentRole;
use crate::germ::Convention;

pub use corpus::{corpus_file, CORPUS};
pub use germfile::{emit_germ_file, parse_germ_file, ParseError};
pub use report::{machine_block, Report, MACHINE_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_DISAGREEMENT: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "qgdeform", version, about = "Exact deformation invariants of surface germs along a curve")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Validate a germ file.
    Check { file: PathBuf },
    /// Degree of the line bundle part on each component.
    Degree {
        file: PathBuf,
        #[arg(long, default_value = "theorem")]
        convention: Convention,
    },
    /// Global smoothability verdict.
    Verdict {
        file: PathBuf,
        #[arg(long, default_value = "theorem")]
        convention: Convention,
    },
    /// Resolution chain of the cyclic quotient 1/n(1,a).
    Hj { n: u64, a: u64 },
    /// Local graph of a point type, e.g. `cusp-graph cusp4 3 3 inf --role pq_inf`.
    CuspGraph {
        kind: String,
        params: Vec<String>,
        #[arg(long)]
        role: Option<ComponentRole>,
        /// Print only the graph in DOT format.
        #[arg(long)]
        dot: bool,
    },
    /// Normal form and first-order deformations of a point type.
    T1 {
        kind: String,
        params: Vec<String>,
        #[arg(long)]
        role: Option<ComponentRole>,
    },
    /// Compare every graph-derived quantity with its closed form.
    Verify {
        #[arg(long, default_value_t = 8)]
        pmax: u64,
        #[arg(long, default_value_t = 8)]
        qmax: u64,
        #[arg(long, default_value_t = 8)]
        rmax: u64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Write the bundled germ files.
    Examples {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

/// Exit code and captured output of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

/// Runs one command. `argv[0]` is the program name.
pub fn run_command<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, text)
            } else {
                Outcome::ok(text)
            };
        }
    };
    commands::dispatch(cli.cmd)
}
