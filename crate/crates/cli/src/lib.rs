//! The `skyharness` command line: validate a project, plan stories, run or
//! import traces, and query reports, traceability, claims and gaps.
//!
//! Exit codes: 0 success or all-pass, 1 test failure or unsupported claim,
//! 2 usage, validation or other errors (including stories that await an
//! imported trace), 3 fidelity-gate violation.

mod commands;
mod render;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use skyharness::model::ArtifactRef;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GATE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "skyharness", version, about = "Requirements-driven testing across levels of fidelity")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// Project directory (reqs/, vv/, tests/, stories/, claims/).
    #[arg(long, global = true, default_value = ".")]
    pub project: PathBuf,
    /// Artifact store; defaults to $SKYHARNESS_STORE, then <project>/store.
    #[arg(long, global = true)]
    pub store: Option<PathBuf>,
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check every artifact and cross-reference.
    Validate,
    /// Materialize a story for a test and store it.
    Plan {
        test: String,
        #[arg(long, default_value = "desk-sim")]
        backend: String,
        #[arg(long, default_value_t = 1)]
        lof: i64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Scenario id; may be omitted when the test has exactly one.
        #[arg(long)]
        scenario: Option<String>,
        /// Simulator override, repeatable: --config tau=0.4
        #[arg(long = "config", value_name = "KEY=VALUE")]
        config: Vec<String>,
    },
    /// Execute a stored story, analyze the trace and record the result.
    Run { story: String },
    /// Show (or build) the report for a trace or report id.
    Report {
        id: String,
        /// Emit the trace as CSV instead.
        #[arg(long)]
        csv: bool,
    },
    /// Follow traceability links from an artifact.
    Trace {
        /// kind:id, e.g. requirement:R1
        start: ArtifactRef,
        /// Comma-separated link types, e.g. verifies,materializes,produced,analyzed
        #[arg(long, value_delimiter = ',')]
        path: Vec<String>,
        /// Follow links from target to source.
        #[arg(long)]
        backward: bool,
    },
    /// Evaluate a safety claim against the recorded evidence.
    Claim { claim: String },
    /// Compare two traces of the same story.
    Gap { a: String, b: String },
    /// Print the field-test protocol for a LoF-3 story.
    Protocol { story: String },
    /// Import an externally recorded trace and analyze it.
    Import {
        file: PathBuf,
        #[arg(long)]
        story: String,
        /// Defaults to the story's level.
        #[arg(long)]
        lof: Option<i64>,
    },
    /// Record that a test's component-level (LoF-0) tests pass.
    Attest {
        test: String,
        #[arg(long, default_value = "component tests pass")]
        note: String,
    },
    /// List the fidelity ledger.
    Ledger,
}

/// Parses `args` and runs the command, writing to `out` and `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    match commands::dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            commands::exit_code(&e)
        }
    }
}
