//! Command-line front end for `arithdyn`.
//!
//! [`run`] parses arguments, executes one subcommand and returns the text
//! to print together with the exit code, so tests can drive it in-process.
//! Exit codes: 0 success, 1 a reproduction or audit check failed,
//! 2 invalid input, 3 budget exhausted or result inconclusive.

pub mod commands;
pub mod parse;
pub mod report;
mod reproduce;

use arithdyn::places::{Field, HeightKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::ffi::OsString;
use std::path::PathBuf;

pub use parse::{parse_list, parse_map, parse_point, ExprAst, InputError, ParseError};
pub use report::{Format, Report, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "arithdyn", version, about = "Heights, orbits and degree growth of rational maps over Q and Q(t)")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Base field; defaults to qt when an input mentions t, else q.
    #[arg(long, global = true, value_enum)]
    pub field: Option<FieldArg>,
    /// Height; defaults to weil over q and moriwaki over qt.
    #[arg(long, global = true, value_enum)]
    pub height: Option<HeightArg>,
    /// Orbit length, degree-sequence length or step cap, per subcommand.
    #[arg(long = "n", global = true)]
    pub n: Option<usize>,
    #[arg(long, global = true)]
    pub window: Option<usize>,
    #[arg(long = "quad-tol", global = true, default_value_t = 1e-8)]
    pub quad_tol: f64,
    #[arg(long = "bit-budget", global = true)]
    pub bit_budget: Option<u64>,
    #[arg(long, global = true, default_value_t = 0x5eed)]
    pub seed: u64,
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// Height sequence as CSV (orbit and alpha only).
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Q,
    Qt,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Q => Field::Q,
            FieldArg::Qt => Field::Qt,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum HeightArg {
    Weil,
    Geom,
    Moriwaki,
}

impl From<HeightArg> for HeightKind {
    fn from(h: HeightArg) -> HeightKind {
        match h {
            HeightArg::Weil => HeightKind::Weil,
            HeightArg::Geom => HeightKind::Geometric,
            HeightArg::Moriwaki => HeightKind::Moriwaki,
        }
    }
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Height of one or more points.
    Height {
        points: Vec<String>,
        /// Corpus file with one point per line.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Heights along an orbit.
    Orbit { map: String, point: String },
    /// Arithmetic degree of an orbit, compared with λ₁.
    Alpha {
        map: String,
        point: String,
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
    },
    /// Dynamical and arithmetic dynamical degrees.
    Lambda {
        maps: Vec<String>,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Corpus file with one map per line.
        #[arg(long)]
        file: Option<PathBuf>,
    },
    /// Canonical height of a point under a morphism.
    Canonical { map: String, point: String },
    /// Count points of bounded height.
    Northcott {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long = "max-coeff", default_value_t = 3)]
        max_coeff: u32,
        #[arg(long = "max-tdeg", default_value_t = 1)]
        max_tdeg: u32,
        /// A number or `log(k)`.
        #[arg(long, default_value = "0")]
        bound: String,
    },
    /// Fundamental-inequality audit over random monomial maps.
    Audit {
        #[arg(long, default_value_t = 50)]
        count: usize,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0.05)]
        slack: f64,
    },
    /// Re-run a bundled worked example with pass/fail checks.
    Reproduce {
        #[arg(value_enum)]
        name: Bundle,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Bundle {
    #[value(name = "exam-func-1")]
    ExamFunc1,
    #[value(name = "exam-func-2")]
    ExamFunc2,
    RelativeDegree,
    Northcott,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Parse `args` (including the program name) and run the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    match commands::execute(&cli) {
        Ok((report, status)) => Outcome {
            code: status.code(),
            stdout: report.render(),
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
