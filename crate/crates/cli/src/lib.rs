//! The `terminus` command line: quadrature runs, limits by shadow,
//! terminations, adequality and shadows of Levi-Civita expressions, and the
//! epsilontic check.
//!
//! [`run_cli`] does all the work and returns the exit code together with the
//! rendered output, so it can be driven in-process.

mod commands;
mod render;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use terminus::numeric::parse_rational;
use terminus::Rational;

pub use commands::CliError;

/// Exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const PARSE: i32 = 1;
    pub const DOMAIN: i32 = 2;
    pub const BUDGET: i32 = 3;
    pub const INTERNAL: i32 = 4;
}

/// The JSON schema that every `--json` output validates against.
pub const OUTPUT_SCHEMA: &str = include_str!("../schema/output.schema.json");

#[derive(Debug, Parser)]
#[command(name = "terminus", version, about = "Limits as shadows, Gregory's quadrature, Levi-Civita numbers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Emit a single JSON document instead of plain text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Truncation window for series in the Levi-Civita field.
    #[arg(long, global = true, value_name = "W", default_value = "16", value_parser = positive_rational)]
    pub window: Rational,

    /// Bits of precision for square roots and interval rounding.
    #[arg(long, global = true, value_name = "P", value_parser = clap::value_parser!(u32).range(1..=65_536))]
    pub precision: Option<u32>,

    /// Coefficients of Levi-Civita numbers; `auto` switches to intervals
    /// when an exact square root does not exist.
    #[arg(long, global = true, value_enum, default_value_t = Mode::Auto)]
    pub mode: Mode,

    /// Number of expansion terms to print.
    #[arg(long, global = true, value_name = "K", default_value_t = 6)]
    pub terms: usize,

    /// Fractional digits in decimal renderings.
    #[arg(long, global = true, value_name = "D", default_value_t = 12,
          value_parser = clap::value_parser!(u32).range(0..=1000))]
    pub digits: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Auto,
    Exact,
    Interval,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PresetArg {
    Squares,
    Hexagons,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run Gregory's iteration until the areas agree to within a tolerance.
    Quadrature(QuadratureArgs),
    /// Limit of a sequence as the shadow of its value at ω.
    Limit {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Common shadow of two sequences at ω, or the gap between them.
    Terminate {
        #[arg(long, allow_hyphen_values = true)]
        lower: String,
        #[arg(long, allow_hyphen_values = true)]
        upper: String,
    },
    /// Whether two Levi-Civita numbers differ by an infinitesimal.
    Adequal {
        #[arg(allow_hyphen_values = true)]
        lhs: String,
        #[arg(allow_hyphen_values = true)]
        rhs: String,
    },
    /// Shadow (standard part) of a Levi-Civita number.
    Shadow {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Sample |e(n) - L| < eps for n up to a bound.
    Epscheck {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, allow_hyphen_values = true, value_parser = rational)]
        limit: Rational,
        #[arg(long, value_delimiter = ',', required = true, value_parser = positive_rational)]
        eps: Vec<Rational>,
        #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
        nmax: u64,
    },
}

#[derive(Debug, Args)]
pub struct QuadratureArgs {
    /// Named starting polygons around the unit circle.
    #[arg(long, value_enum, conflicts_with_all = ["i0", "c0"])]
    pub preset: Option<PresetArg>,
    /// Starting inscribed area.
    #[arg(long, value_parser = positive_rational, requires = "c0")]
    pub i0: Option<Rational>,
    /// Starting circumscribed area.
    #[arg(long, value_parser = positive_rational, requires = "i0")]
    pub c0: Option<Rational>,
    #[arg(long, default_value = "1e-10", value_parser = positive_rational)]
    pub tol: Rational,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: u64,
    /// Print the history as exact tab-separated rationals.
    #[arg(long)]
    pub tsv: bool,
}

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

fn positive_rational(text: &str) -> Result<Rational, String> {
    let q = rational(text)?;
    if q > Rational::from_integer(0.into()) {
        Ok(q)
    } else {
        Err(format!("must be positive, got {text}"))
    }
}

/// Exit code and output streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// A successful run: the plain rendering and the JSON document.
#[derive(Debug, Clone)]
pub struct Report {
    pub plain: String,
    pub json: Value,
}

pub fn run_cli<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let argv: Vec<std::ffi::OsString> = argv.into_iter().map(Into::into).collect();
    let wants_json = argv.iter().skip(1).any(|a| a == "--json");
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => return usage_outcome(e, wants_json),
    };
    let command = commands::name(&cli.command);
    match commands::run(&cli) {
        Ok(report) => Outcome {
            code: exit::OK,
            stdout: if cli.json {
                format!("{}\n", serde_json::to_string_pretty(&report.json).expect("serializable"))
            } else {
                report.plain
            },
            stderr: String::new(),
        },
        Err(err) => error_outcome(command, &err, cli.json),
    }
}

fn usage_outcome(e: clap::Error, json: bool) -> Outcome {
    if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
        return Outcome {
            code: exit::OK,
            stdout: e.to_string(),
            stderr: String::new(),
        };
    }
    let text = e.to_string();
    let text = text.trim_end();
    let err = CliError::new(exit::PARSE, "usage", text.strip_prefix("error: ").unwrap_or(text));
    error_outcome("usage", &err, json)
}

fn error_outcome(command: &str, err: &CliError, json: bool) -> Outcome {
    let stderr = format!("error[{}]: {}\n", err.kind, err.message);
    let stdout = if json {
        let mut doc = json!({
            "command": command,
            "status": "error",
            "error": { "kind": err.kind, "message": err.message, "exit_code": err.code },
        });
        if let (Some(extra), Some(obj)) = (&err.details, doc.as_object_mut()) {
            for (k, v) in extra.as_object().into_iter().flatten() {
                obj.insert(k.clone(), v.clone());
            }
        }
        format!("{}\n", serde_json::to_string_pretty(&doc).expect("serializable"))
    } else {
        err.plain.clone().unwrap_or_default()
    };
    Outcome {
        code: err.code,
        stdout,
        stderr,
    }
}
