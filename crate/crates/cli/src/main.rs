//! `dvgauss`: batch front end emitting CSV/JSON tables for discrete-variable
//! Gaussian states.
//!
//! Exit codes: 0 ok, 2 bad arguments, 3 IO failure, 4 invariant failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use output::{Format, EXIT_USAGE};

fn parse_atom(s: &str) -> Result<f64, String> {
    let bad = || format!("invalid number '{s}'");
    if s.eq_ignore_ascii_case("pi") {
        Ok(std::f64::consts::PI)
    } else if let Some(arg) = s.strip_prefix("sqrt") {
        let inner = arg.trim_start_matches('(').trim_end_matches(')');
        Ok(inner.parse::<f64>().map_err(|_| bad())?.sqrt())
    } else {
        s.parse::<f64>().map_err(|_| bad())
    }
}

/// Parses a real number; also accepts `pi`, `sqrtX` / `sqrt(X)`, one `a/b`
/// quotient of those and a leading `-`.
fn parse_real(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let (sign, body) = match t.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, t),
    };
    let v = match body.split_once('/') {
        Some((num, den)) => parse_atom(num)? / parse_atom(den)?,
        None => parse_atom(body)?,
    };
    if v.is_finite() {
        Ok(sign * v)
    } else {
        Err(format!("non-finite number '{s}'"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "dvgauss", version, about = "Discrete-variable Gaussian states: tables and checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Common {
    /// Output path; `-` writes to stdout.
    #[arg(long, default_value = "-")]
    out: String,
    /// Fixed decimals for floats (default: 17 significant digits).
    #[arg(long)]
    digits: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// key=value file mirroring the flags; explicit flags win.
    #[arg(long, value_name = "FILE")]
    #[allow(dead_code)] // consumed before parsing
    config: Option<PathBuf>,
}

/// `σ11,σ12,σ22` for one mode or ten upper-triangle entries in `(q1,q2,p1,p2)` order for two.
#[derive(Args, Debug)]
struct SigmaArg {
    #[arg(long, value_delimiter = ',', num_args = 1, action = ArgAction::Set,
          allow_hyphen_values = true, value_parser = parse_real)]
    sigma: Vec<f64>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Purity of ϱ_σ over dimensions next to the limit 1/√det σ.
    #[command(args_override_self = true)]
    PurityTable {
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long, value_delimiter = ',', num_args = 1, action = ArgAction::Set, default_value = "3,5,7,9")]
        dims: Vec<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues of ϱ_σ, descending.
    #[command(args_override_self = true)]
    Spectrum {
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Thermal spectrum against the truncated geometric law.
    #[command(args_override_self = true)]
    Thermal {
        #[arg(long, value_parser = parse_real)]
        nu: f64,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Eigenvalues of [q,p] − i d/2π sorted by modulus (imaginary parts).
    #[command(args_override_self = true)]
    Commutator {
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Wigner grid of ϱ_σ, or of the normalised theta function g_κ.
    #[command(args_override_self = true)]
    Wigner {
        #[arg(long, value_delimiter = ',', num_args = 1, action = ArgAction::Set,
              allow_hyphen_values = true, value_parser = parse_real, conflicts_with = "kappa",
              required_unless_present = "kappa")]
        sigma: Option<Vec<f64>>,
        #[arg(long, value_parser = parse_real)]
        kappa: Option<f64>,
        /// Phase-space center for `--sigma` (2 or 4 coordinates).
        #[arg(long, value_delimiter = ',', num_args = 1, action = ArgAction::Set,
              allow_hyphen_values = true, value_parser = parse_real, requires = "sigma")]
        center: Option<Vec<f64>>,
        #[arg(long)]
        dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Deviation ‖Û ϱ_σ Û† − ϱ_{SσSᵀ}‖ over dimensions.
    #[command(args_override_self = true)]
    Transform {
        #[arg(long = "A", allow_hyphen_values = true, value_parser = parse_real, conflicts_with = "squeeze")]
        a: Option<f64>,
        /// `re,im`
        #[arg(long = "B", value_delimiter = ',', num_args = 1, action = ArgAction::Set,
              allow_hyphen_values = true, value_parser = parse_real, conflicts_with = "squeeze")]
        b: Option<Vec<f64>>,
        /// `s,theta`: A = 0, B = i s e^{iθ}.
        #[arg(long, value_delimiter = ',', num_args = 1, action = ArgAction::Set,
              allow_hyphen_values = true, value_parser = parse_real)]
        squeeze: Option<Vec<f64>>,
        #[command(flatten)]
        sigma: SigmaArg,
        #[arg(long, value_delimiter = ',', num_args = 1, action = ArgAction::Set,
              default_value = "5,7,9,11,13,15")]
        dims: Vec<usize>,
        /// frobenius, spectral or both.
        #[arg(long, default_value = "spectral")]
        norm: String,
        #[command(flatten)]
        common: Common,
    },
    /// Runs the invariant suite; exits 4 if any check fails.
    #[command(args_override_self = true)]
    Check {
        #[command(flatten)]
        common: Common,
    },
}

fn main() -> ExitCode {
    let args = match config::expand_args(std::env::args_os().collect()) {
        Ok(a) => a,
        Err(f) => {
            eprintln!("dvgauss: {}", f.message);
            return ExitCode::from(f.code);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match commands::run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("dvgauss: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
