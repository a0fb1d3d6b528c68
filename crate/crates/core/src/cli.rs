//! Command-line front end.
//!
//! [`run`] takes the argument list and returns exit code and captured output,
//! so the binary is a two-line wrapper and tests need no subprocesses.
//!
//! Exit codes: 0 success, 1 usage or malformed input, 2 not found,
//! 3 precision failure.

use std::fmt::Write as _;

use clap::{Parser, Subcommand, ValueEnum};
use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::arith::{format_scientific, make_context, parse_decimal};
use crate::factor::{factor_primitive_with, FactorizationResult};
use crate::identify::{identify_form_with, FormKind, IdentifyError, TranscendentalForm};
use crate::minpoly::{
    digits_required, epsilon_bound, reconstruct_with, MinpolyError, ReconstructOptions,
    ReconstructionReport,
};
use crate::oracle::brute_force_min_relation;
use crate::polynomial::IntPolynomial;
use crate::relation::{find_relation, RelationError, RelationOutcome, RelationParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NOT_FOUND: i32 = 2;
pub const EXIT_PRECISION: i32 = 3;

const PSLQ_DIGITS: u32 = 50;
const PSLQ_GUARD: u32 = 10;

#[derive(Debug, Parser)]
#[command(
    name = "pslq-minpoly",
    version,
    about = "Integer relations and minimal polynomials from decimal approximations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// PSLQ parameter gamma (default 2).
    #[arg(long, global = true)]
    pub gamma: Option<String>,
    /// PSLQ parameter tau (default sqrt 2).
    #[arg(long, global = true)]
    pub tau: Option<String>,
    /// Working precision in significant decimal digits.
    #[arg(long, global = true)]
    pub digits: Option<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Kv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormArg {
    Asin,
    Acos,
    Log,
}

impl From<FormArg> for FormKind {
    fn from(f: FormArg) -> FormKind {
        match f {
            FormArg::Asin => FormKind::Arcsin,
            FormArg::Acos => FormKind::Arccos,
            FormArg::Log => FormKind::Log,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimal polynomial of an algebraic number from a decimal approximation.
    Minpoly {
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        height: String,
    },
    /// Minimal polynomial of f(beta) given beta, for f = sin, cos or exp.
    Identify {
        #[arg(long, value_enum)]
        form: FormArg,
        #[arg(long, allow_hyphen_values = true)]
        value: String,
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        height: String,
    },
    /// Factor an integer polynomial through its real roots.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        poly: String,
    },
    /// Accuracy bound and decimal digits needed for degree n, height N.
    Digits {
        #[arg(long)]
        degree: u32,
        #[arg(long)]
        height: String,
    },
    /// Integer relation of a real vector.
    Pslq {
        /// Comma-separated decimals.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        height: String,
        /// Detection threshold; defaults to the zero threshold.
        #[arg(long)]
        epsilon: Option<String>,
    },
    /// Exhaustive shortest-relation search (debugging).
    #[command(hide = true)]
    Oracle {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        #[arg(long)]
        cap: u32,
        #[arg(long)]
        tolerance: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliOutput {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CliOutput {
    fn ok(stdout: String) -> Self {
        Self::with_code(EXIT_OK, stdout)
    }

    fn with_code(exit_code: i32, stdout: String) -> Self {
        CliOutput {
            exit_code,
            stdout,
            stderr: String::new(),
        }
    }
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "usage",
            message: message.into(),
        }
    }

    fn render(&self, format: Format) -> CliOutput {
        let stderr = match format {
            Format::Text => format!("error: {}\n", self.message),
            Format::Kv => format!("error={}\nkind={}\n", self.message, self.kind),
            Format::Json => format!(
                "{}\n",
                json!({ "error": self.message, "kind": self.kind, "exit_code": self.code })
            ),
        };
        CliOutput {
            exit_code: self.code,
            stdout: String::new(),
            stderr,
        }
    }
}

impl From<MinpolyError> for Failure {
    fn from(e: MinpolyError) -> Self {
        if e.is_precision_failure() {
            Failure {
                code: EXIT_PRECISION,
                kind: "precision",
                message: e.to_string(),
            }
        } else {
            Failure::usage(e.to_string())
        }
    }
}

impl From<IdentifyError> for Failure {
    fn from(e: IdentifyError) -> Self {
        match e {
            IdentifyError::Minpoly(e) => e.into(),
            e => Failure::usage(e.to_string()),
        }
    }
}

impl From<RelationError> for Failure {
    fn from(e: RelationError) -> Self {
        match e {
            RelationError::PrecisionExhausted { .. } => Failure {
                code: EXIT_PRECISION,
                kind: "precision",
                message: e.to_string(),
            },
            e => Failure::usage(e.to_string()),
        }
    }
}

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I) -> CliOutput
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CliOutput {
                    exit_code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CliOutput::ok(text)
            };
        }
    };
    let format = cli.format;
    execute(&cli).unwrap_or_else(|f| f.render(format))
}

fn execute(cli: &Cli) -> Result<CliOutput, Failure> {
    match &cli.command {
        Command::Minpoly {
            value,
            degree,
            height,
        } => {
            let approx = decimal(value, "value")?;
            let report = reconstruct_with(&approx, *degree, positive(height)?, &options(cli)?)?;
            Ok(render_report(&report, cli.format))
        }
        Command::Identify {
            form,
            value,
            degree,
            height,
        } => {
            let beta = decimal(value, "value")?;
            let form = TranscendentalForm::new((*form).into(), beta, *degree, positive(height)?);
            let report = identify_form_with(&form, &options(cli)?)?;
            Ok(render_report(&report, cli.format))
        }
        Command::Factor { poly } => {
            let p: IntPolynomial = poly.parse().map_err(|e: crate::polynomial::PolyError| {
                Failure::usage(e.to_string())
            })?;
            let result = factor_primitive_with(&p, &options(cli)?)
                .map_err(|e| Failure::usage(e.to_string()))?;
            Ok(CliOutput::ok(render_factorization(&result, cli.format)))
        }
        Command::Digits { degree, height } => {
            if *degree == 0 {
                return Err(Failure::usage("degree must be at least 1"));
            }
            let height = positive(height)?;
            let digits = digits_required(*degree, &height);
            let ctx = make_context(digits.max(20) + 10, 10).expect("valid precision");
            let eps = format_scientific(&epsilon_bound(*degree, &height, &ctx), 6);
            let out = match cli.format {
                Format::Text => format!("epsilon: {eps}\ndigits: {digits}\n"),
                Format::Kv => format!(
                    "degree={degree}\nheight={height}\nepsilon={eps}\ndigits={digits}\n"
                ),
                Format::Json => format!(
                    "{}\n",
                    json!({
                        "degree": degree,
                        "height": height.to_string(),
                        "epsilon": eps,
                        "digits": digits,
                    })
                ),
            };
            Ok(CliOutput::ok(out))
        }
        Command::Pslq {
            vector,
            height,
            epsilon,
        } => pslq(cli, vector, height, epsilon.as_deref()),
        Command::Oracle {
            vector,
            cap,
            tolerance,
        } => {
            let ctx = make_context(cli.digits.unwrap_or(PSLQ_DIGITS), PSLQ_GUARD)
                .map_err(|e| Failure::usage(e.to_string()))?;
            let x = decimal_vector(vector)?
                .iter()
                .map(|q| ctx.from_rational(q))
                .collect::<Vec<_>>();
            let tol = ctx.from_rational(&decimal(tolerance, "tolerance")?);
            let found = brute_force_min_relation(&x, *cap, &tol)
                .map_err(|e| Failure::usage(e.to_string()))?;
            Ok(match found {
                Some(r) => CliOutput::ok(format!("{r}\n")),
                None => CliOutput::with_code(EXIT_NOT_FOUND, "none\n".to_string()),
            })
        }
    }
}

fn decimal(text: &str, what: &str) -> Result<Rational, Failure> {
    parse_decimal(text).map_err(|_| Failure::usage(format!("{what}: malformed decimal {text:?}")))
}

fn decimal_vector(text: &str) -> Result<Vec<Rational>, Failure> {
    text.split(',')
        .map(|v| decimal(v.trim(), "vector"))
        .collect()
}

fn positive(text: &str) -> Result<Integer, Failure> {
    match text.trim().parse::<Integer>() {
        Ok(n) if n > 0 => Ok(n),
        _ => Err(Failure::usage(format!(
            "height must be a positive integer, got {text:?}"
        ))),
    }
}

fn options(cli: &Cli) -> Result<ReconstructOptions, Failure> {
    Ok(ReconstructOptions {
        gamma: cli.gamma.as_deref().map(|g| decimal(g, "gamma")).transpose()?,
        tau: cli.tau.as_deref().map(|t| decimal(t, "tau")).transpose()?,
        digits: cli.digits,
        min_degree: None,
    })
}

fn render_report(report: &ReconstructionReport, format: Format) -> CliOutput {
    let code = if report.is_found() {
        EXIT_OK
    } else {
        EXIT_NOT_FOUND
    };
    let out = match format {
        Format::Text => format!("{report}\n"),
        Format::Kv => report.to_kv(),
        Format::Json => format!("{}\n", report.to_json()),
    };
    CliOutput::with_code(code, out)
}

fn render_factorization(r: &FactorizationResult, format: Format) -> String {
    match format {
        Format::Text => format!("{r}\n"),
        Format::Kv => {
            let mut out = format!("content={}\n", r.content);
            for (f, m) in &r.factors {
                let _ = writeln!(out, "factor={f};multiplicity={m}");
            }
            let residual = r.residual.as_ref().map(|p| p.to_string()).unwrap_or_default();
            let _ = writeln!(out, "residual={residual}");
            out
        }
        Format::Json => {
            let factors: Vec<Value> = r
                .factors
                .iter()
                .map(|(f, m)| json!({ "factor": f.to_string(), "multiplicity": m }))
                .collect();
            format!(
                "{}\n",
                json!({
                    "content": r.content.to_string(),
                    "factors": factors,
                    "residual": r.residual.as_ref().map(|p| p.to_string()),
                })
            )
        }
    }
}

fn pslq(cli: &Cli, vector: &str, height: &str, epsilon: Option<&str>) -> Result<CliOutput, Failure> {
    let ctx = make_context(cli.digits.unwrap_or(PSLQ_DIGITS), PSLQ_GUARD)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let x: Vec<_> = decimal_vector(vector)?
        .iter()
        .map(|q| ctx.from_rational(q))
        .collect();
    let eps = match epsilon {
        Some(e) => ctx.from_rational(&decimal(e, "epsilon")?),
        None => ctx.zero_threshold(),
    };
    let mut params = RelationParams::new(positive(height)?, eps, &ctx);
    if let Some(g) = &cli.gamma {
        params.gamma = ctx.from_rational(&decimal(g, "gamma")?);
    }
    if let Some(t) = &cli.tau {
        params.tau = ctx.from_rational(&decimal(t, "tau")?);
    }
    let search = find_relation(&x, &params, &ctx)?;
    let (code, outcome, relation, residual, bound) = match &search.outcome {
        RelationOutcome::Found { relation, residual } => (
            EXIT_OK,
            "found",
            Some(relation.to_string()),
            Some(format_scientific(residual, 6)),
            None,
        ),
        RelationOutcome::NoRelationWithinHeight { lower_bound } => (
            EXIT_NOT_FOUND,
            "no_relation_within_height",
            None,
            None,
            Some(format_scientific(lower_bound, 6)),
        ),
        RelationOutcome::IterationCapReached { lower_bound } => (
            EXIT_NOT_FOUND,
            "iteration_cap_reached",
            None,
            None,
            Some(format_scientific(lower_bound, 6)),
        ),
    };
    let out = match cli.format {
        Format::Text => match (&relation, &bound) {
            (Some(r), _) => format!("{r}\niterations: {}\n", search.iterations),
            (None, Some(b)) => format!(
                "no relation with height <= {height}\nnorm lower bound: {b}\niterations: {}\n",
                search.iterations
            ),
            _ => unreachable!(),
        },
        Format::Kv => {
            let mut out = String::new();
            if let Some(r) = &relation {
                let _ = writeln!(out, "relation={r}");
            }
            if let Some(r) = &residual {
                let _ = writeln!(out, "residual={r}");
            }
            if let Some(b) = &bound {
                let _ = writeln!(out, "lower_bound={b}");
            }
            let _ = writeln!(out, "iterations={}", search.iterations);
            let _ = writeln!(out, "iteration_cap={}", search.iteration_cap);
            let _ = writeln!(out, "outcome={outcome}");
            out
        }
        Format::Json => format!(
            "{}\n",
            json!({
                "relation": relation,
                "residual": residual,
                "lower_bound": bound,
                "iterations": search.iterations,
                "iteration_cap": search.iteration_cap,
                "outcome": outcome,
            })
        ),
    };
    Ok(CliOutput::with_code(code, out))
}
