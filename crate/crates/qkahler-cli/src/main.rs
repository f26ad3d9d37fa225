//! `qkahler`: batch driver for the quantum Kähler engine.
//!
//! Every command writes one document to stdout (or `--out`). Exit codes:
//! 0 when all checks pass, 2 when a verification fails, 3 when a result
//! is unstable under the cutoff, 1 for usage and other errors.

mod commands;
mod output;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

use qkahler::qarith::gauss::rat_to_f64;
use qkahler::qarith::parse_rational;
use qkahler::Error;

#[derive(Parser, Debug)]
#[command(
    name = "qkahler",
    version,
    about = "Exact checks and spectra for quantum Kähler geometry"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the identity suites and emit a JSON report.
    Verify {
        /// Rank of the local calculus; runs only the local suites.
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum of a Laplacian or Dirac operator on the Podleś sphere.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
        #[arg(long, value_enum, default_value_t = OperatorArg::Dbar)]
        operator: OperatorArg,
        /// Report the Dirac operator instead of its Laplacian.
        #[arg(long)]
        dirac: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Index of the Dolbeault-Dirac operator, checked for cutoff stability.
    Index {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        twist: i64,
    },
    /// Sections, cohomology, curvature and index of the line bundle of degree k.
    Bundle {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[command(flatten)]
        common: Common,
    },
    /// Dimensions of the local exterior algebra by bidegree.
    Dims {
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Peter-Weyl blocks of the coordinate algebra up to a word-length cutoff.
    Blocks {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Deformation parameter, a positive rational such as 4/5.
    #[arg(long, default_value = "4/5", value_parser = parse_q)]
    q: BigRational,
    #[arg(long, default_value_t = 4)]
    cutoff: usize,
    #[arg(long, value_enum, default_value_t = Mode::Exact)]
    mode: Mode,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Exact arithmetic at the given rational q.
    Exact,
    /// Double precision at the given q, with Haar data rounded from exact values.
    Numeric,
    /// Rational functions in q; the value of --q is ignored.
    Symbolic,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Numeric => "numeric",
            Mode::Symbolic => "symbolic",
        }
    }
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorArg {
    Dbar,
    Del,
    D,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

fn parse_q(text: &str) -> Result<BigRational, String> {
    let q = parse_rational(text).map_err(|e| e.to_string())?;
    if rat_to_f64(&q) <= 0.0 {
        return Err(format!("q must be positive, got {text}"));
    }
    Ok(q)
}

/// What a command produced.
pub struct Outcome {
    pub text: String,
    pub passed: bool,
}

fn emit(text: &str, out: Option<&PathBuf>) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (result, out) = match &cli.command {
        Command::Verify { n, common } => (commands::verify(common, *n), common.out.clone()),
        Command::Spectrum {
            common,
            twist,
            operator,
            dirac,
            format,
        } => (
            commands::spectrum(common, *twist, *operator, *dirac, *format),
            common.out.clone(),
        ),
        Command::Index { common, twist } => (commands::index(common, *twist), common.out.clone()),
        Command::Bundle { k, common } => (commands::bundle(common, *k), common.out.clone()),
        Command::Dims { n, format, out } => (commands::dims(*n, *format), out.clone()),
        Command::Blocks { common } => (commands::blocks(common), common.out.clone()),
    };
    match result {
        Ok(outcome) => {
            if let Err(e) = emit(&outcome.text, out.as_ref()) {
                eprintln!("qkahler: cannot write output: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(if outcome.passed { 0 } else { 2 })
        }
        Err(e) => {
            let record = commands::error_record(&e);
            let _ = emit(&record, out.as_ref());
            eprintln!("qkahler: {e}");
            ExitCode::from(match e {
                Error::Cutoff(_) => 3,
                Error::Build { .. } => 2,
                _ => 1,
            })
        }
    }
}
