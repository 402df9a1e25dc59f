mod commands;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dzeta::Sign;

use output::CliError;

#[derive(Parser, Debug)]
#[command(name = "dzeta", version, about = "Signed double zeta values: reduction, evaluation and verification")]
struct Cli {
    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Working precision for numeric evaluation.
    #[arg(long, global = true, env = "DZETA_PRECISION", default_value = "dd")]
    precision: Precision,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    F32,
    F64,
    Dd,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::F32 => "f32",
            Precision::F64 => "f64",
            Precision::Dd => "dd",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Direct,
    Reduced,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    Finite,
    Symmetric,
    Shuffle,
    Stuffle,
    Parfrac,
    Tailbound,
    All,
}

#[derive(clap::Args, Debug, Clone, Copy)]
pub struct Params {
    pub s: u32,
    pub t: u32,
    /// Outer sign: +1, -1, +, -, p or m.
    #[arg(allow_hyphen_values = true)]
    pub sigma: Sign,
    /// Inner sign.
    #[arg(allow_hyphen_values = true)]
    pub tau: Sign,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce an odd-weight value to single zeta values.
    Reduce {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Also compute the classical unsigned reduction and compare.
        #[arg(long)]
        compare_euler: bool,
        /// Use the classical special-case formula instead of the signed one.
        #[arg(long)]
        classical: bool,
        /// In LaTeX, rewrite even zeta values as rational multiples of powers of pi.
        #[arg(long)]
        pi_powers: bool,
    },
    /// Evaluate numerically with a rigorous error bound.
    Eval {
        #[command(flatten)]
        params: Params,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value = "both")]
        method: Method,
        #[arg(long, default_value = "text")]
        format: Format,
        /// Ceiling on the truncation point of the direct sum.
        #[arg(long, default_value_t = commands::CLI_MAX_TERMS)]
        max_terms: u64,
    },
    /// Check the exact finite identities over a parameter grid.
    Verify {
        suite: Suite,
        #[arg(long, default_value_t = 4)]
        max_s: u32,
        #[arg(long, default_value_t = 4)]
        max_t: u32,
        #[arg(long = "max-N", default_value_t = 20)]
        max_n: u64,
        #[arg(long, default_value_t = dzeta::identities::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value = "text")]
        format: Format,
    },
    /// Tabulate every reducible value up to a weight.
    Table {
        max_weight: u32,
        /// Tolerance for the reduced evaluation (and the direct one unless
        /// --direct-tol is given).
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long)]
        direct_tol: Option<f64>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long, default_value_t = commands::CLI_MAX_TERMS)]
        max_terms: u64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut out = output::Sink::new(cli.out.as_deref());
    let precision = cli.precision;
    let verdict = match cli.command {
        Command::Reduce { params, format, compare_euler, classical, pi_powers } => {
            commands::reduce(&mut out, precision, params, format, compare_euler, classical, pi_powers)?
        }
        Command::Eval { params, tol, method, format, max_terms } => {
            commands::eval(&mut out, precision, params, tol, method, format, max_terms)?
        }
        Command::Verify { suite, max_s, max_t, max_n, seed, format } => {
            verify::run(&mut out, precision, verify::Grid { suite, max_s, max_t, max_n, seed }, format)?
        }
        Command::Table { max_weight, tol, direct_tol, format, max_terms } => {
            commands::table(&mut out, precision, max_weight, tol, direct_tol, format, max_terms)?
        }
    };
    out.finish()?;
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
