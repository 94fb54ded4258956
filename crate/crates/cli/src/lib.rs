//! Command-line front end: argument parsing, exit codes and output
//! formatting. The binary in `main.rs` only forwards to [`run`].

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const OK: i32 = 0;
    /// The derivation decided that no scheme exists.
    pub const NO_MIRACLE: i32 = 1;
    /// Bad flags, unparsable expressions, unreadable or invalid files.
    pub const USAGE: i32 = 2;
    /// The question cannot be decided in this representation.
    pub const REPRESENTATION: i32 = 3;
    pub const INTERNAL: i32 = 4;
    /// A scheme disagreed with the oracle or with a closed form.
    pub const MISMATCH: i32 = 5;
}

#[derive(Debug, Parser)]
#[command(name = "mahler", version, about = "Congruence schemes mod m for sections of F = S + R F(q^m)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// The functional equation `F = S + R F(q^m)` and the section index.
#[derive(Debug, Clone, Args)]
pub struct EquationArgs {
    /// Modulus and sectioning base, at least 2.
    #[arg(long)]
    pub m: usize,
    /// Section index, 0 <= i < m.
    #[arg(long)]
    pub i: usize,
    /// Inhomogeneous term S(q); may use the placeholder m.
    #[arg(long = "S", value_name = "EXPR")]
    pub s: String,
    /// Multiplier R(q); may use the placeholder m.
    #[arg(long = "R", value_name = "EXPR")]
    pub r: String,
    /// Value of F(0), needed when R(0) = 1 and S(0) = 0 with S nonzero.
    #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
    pub f0: Option<String>,
}

/// Equation flags that are optional because a scheme file may stand in.
#[derive(Debug, Clone, Args)]
pub struct OptionalEquationArgs {
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub i: Option<usize>,
    #[arg(long = "S", value_name = "EXPR")]
    pub s: Option<String>,
    #[arg(long = "R", value_name = "EXPR")]
    pub r: Option<String>,
    #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
    pub f0: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derive the congruence F_i(q) = E(q) + P(q) F_i(q^m) (mod m).
    Derive {
        #[command(flatten)]
        eq: EquationArgs,
        /// Write the certified scheme to this file.
        #[arg(long, value_name = "PATH")]
        json: Option<PathBuf>,
    },
    /// Evaluate f_i(n) mod m from a scheme file or inline equation flags.
    Coeff {
        #[arg(long, value_name = "PATH", conflicts_with_all = ["m", "i", "s", "r", "f0"])]
        scheme: Option<PathBuf>,
        #[command(flatten)]
        eq: OptionalEquationArgs,
        #[arg(long)]
        n: u64,
    },
    /// Derive, then compare the first N section coefficients with the oracle.
    Verify {
        /// Verify this scheme file against the equation in its provenance.
        #[arg(long, value_name = "PATH", conflicts_with_all = ["m", "i", "s", "r", "f0"])]
        scheme: Option<PathBuf>,
        #[command(flatten)]
        eq: OptionalEquationArgs,
        #[arg(long = "N", value_name = "COUNT")]
        count: usize,
    },
    /// Try every (m, i) in a range and tabulate the verdicts.
    Scan {
        #[arg(long)]
        m_from: usize,
        #[arg(long)]
        m_to: usize,
        #[arg(long = "S", value_name = "EXPR")]
        s: String,
        #[arg(long = "R", value_name = "EXPR")]
        r: String,
        #[arg(long, value_name = "RATIONAL", allow_hyphen_values = true)]
        f0: Option<String>,
        /// `all`, `last`, an integer, or an expression in m such as `m-1`.
        #[arg(long, default_value = "all")]
        i: String,
        /// Oracle check length for each scheme found (0 disables).
        #[arg(long = "N", value_name = "COUNT", default_value_t = 200)]
        count: usize,
        /// Print a JSON array instead of a table.
        #[arg(long)]
        json: bool,
        /// Evaluate cells one at a time.
        #[arg(long)]
        sequential: bool,
    },
    /// Print a closed-form scheme and check it against the derivation.
    Known {
        #[arg(long, value_name = "A|B|C")]
        prop: mahler_core::KnownLabel,
        #[arg(long)]
        m: usize,
    },
}

/// Parse `args` (including the program name) and execute; returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return exit::USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return exit::OK;
        }
    };
    commands::dispatch(cli.command, out, err)
}
