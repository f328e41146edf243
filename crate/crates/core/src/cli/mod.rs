//! The `zcohom` command line: argument parsing, input resolution and
//! report rendering. Everything returns strings so runs can be compared
//! byte for byte.

mod commands;
pub mod docs;

use std::path::Path;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::cohomology::{DEFAULT_MAX_DEGREE, MAX_MONOID_ORDER};
use crate::exactalg::PresentedAbelianGroup;
use crate::monoid::{builtin, MonoidError, MonoidWithZero, BUILTIN_MONOIDS};
use crate::natsys::{bar_system, enumerate_zero_modules, from_zero_module, trivial_z, NaturalSystem};

pub use docs::{CoefficientDocument, IntEntry, MapDocument, MonoidDocument};

/// Seed used by randomized checks when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 7;

/// Bound on free-generator images when enumerating 0-modules on `Z`.
pub const Z_ACTION_BOUND: u32 = 1;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CliError {
    #[error("{input}: parse error at line {line}, column {column}: {message}")]
    Parse {
        input: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid monoid: {0}")]
    Monoid(MonoidError),
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Io(String),
    #[error("{0} (pass --force to run anyway)")]
    Guardrail(String),
    #[error("computation failed: {0}")]
    Math(String),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Parser, Debug)]
#[command(name = "zcohom", version, about = "0-cohomology of finite monoids with zero")]
pub struct Cli {
    /// List builtin monoids and coefficient systems, then exit.
    #[arg(long)]
    pub list_builtins: bool,
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Args, Debug, Clone)]
pub struct MonoidArg {
    /// Builtin name or path to a monoid JSON document.
    #[arg(long)]
    pub monoid: String,
}

#[derive(Args, Debug, Clone)]
pub struct Budget {
    #[arg(long)]
    pub max_degree: Option<usize>,
    /// Skip the size guardrails.
    #[arg(long)]
    pub force: bool,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Check that a table is a monoid with zero.
    Validate {
        #[command(flatten)]
        monoid: MonoidArg,
    },
    /// List the nerve sets Ner_0 … Ner_N.
    Nerve {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long, default_value_t = DEFAULT_MAX_DEGREE)]
        max_degree: usize,
    },
    /// H^0 … H^N with the given coefficients.
    Cohomology {
        #[command(flatten)]
        monoid: MonoidArg,
        /// Builtin coefficient name or path to a coefficient JSON document.
        #[arg(long, default_value = "trivial-Z")]
        coeff: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Cohomology over a coefficient battery, as c.d. evidence.
    CdProbe {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long, default_value = "default")]
        battery: String,
        #[command(flatten)]
        budget: Budget,
    },
    /// Exactness of the augmented bar complex at every object.
    ResolutionCheck {
        #[command(flatten)]
        monoid: MonoidArg,
        #[command(flatten)]
        budget: Budget,
    },
    /// Compare the cochain complex with Hom(B_•, D) through Ψ.
    PsiCheck {
        #[command(flatten)]
        monoid: MonoidArg,
        #[arg(long, default_value = "trivial-Z")]
        coeff: String,
        #[command(flatten)]
        budget: Budget,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
    /// Decide 0-cancellativity.
    ZeroCancellative {
        #[command(flatten)]
        monoid: MonoidArg,
    },
}

/// What a finished command produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: u8,
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

/// A rendered report plus whether every check in it passed.
pub(crate) struct Report {
    pub text: String,
    pub json: serde_json::Value,
    pub passed: bool,
    /// Diagnostics that must not disturb stdout (timing).
    pub note: Option<String>,
}

pub fn run(cli: &Cli) -> Outcome {
    if cli.list_builtins {
        let r = commands::list_builtins();
        return render(cli.format, Ok(r));
    }
    let Some(command) = &cli.command else {
        return Outcome {
            stdout: String::new(),
            stderr: "error: no subcommand given (try --help)\n".into(),
            code: EXIT_INPUT,
        };
    };
    render(cli.format, commands::dispatch(command))
}

fn render(format: Format, result: Result<Report, CliError>) -> Outcome {
    match result {
        Ok(r) => {
            let stdout = match format {
                Format::Text => r.text,
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&r.json).expect("reports serialize");
                    s.push('\n');
                    s
                }
            };
            Outcome {
                stdout,
                stderr: r.note.map(|n| format!("{n}\n")).unwrap_or_default(),
                code: if r.passed { EXIT_OK } else { EXIT_CHECK_FAILED },
            }
        }
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: match e {
                CliError::Math(_) => EXIT_CHECK_FAILED,
                _ => EXIT_INPUT,
            },
        },
    }
}

/// A builtin name, or a path to a monoid document.
pub fn load_monoid(spec: &str) -> Result<MonoidWithZero, CliError> {
    if let Some(m) = builtin(spec) {
        return Ok(m);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Invalid(format!(
            "{spec:?} is neither a builtin monoid ({}) nor a readable file",
            BUILTIN_MONOIDS.join(", ")
        )));
    }
    let text = docs::read_file(path)?;
    MonoidDocument::parse(&text, spec)?.to_monoid()
}

/// Builtin coefficient kinds, for `--list-builtins` and error messages.
pub const BUILTIN_COEFFICIENTS: [&str; 4] = [
    "trivial-Z",
    "zero-module:<z2|z3|zN>:<identity|zero|label>",
    "zero-module:z:<identity|zero|label>",
    "bar:<degree>",
];

/// A builtin coefficient name, or a path to a coefficient document.
/// Returns the display name alongside the system.
pub fn load_coefficients(m: &MonoidWithZero, spec: &str) -> Result<(String, NaturalSystem), CliError> {
    if spec == "trivial-Z" {
        return Ok((spec.into(), trivial_z(m)));
    }
    if let Some(k) = spec.strip_prefix("bar:") {
        let k: usize = k
            .parse()
            .map_err(|_| CliError::Invalid(format!("bar degree {k:?} is not a number")))?;
        return Ok((spec.into(), bar_system(m, k)));
    }
    if let Some(rest) = spec.strip_prefix("zero-module:") {
        let (tag, label) = rest
            .split_once(':')
            .ok_or_else(|| CliError::Invalid(format!("expected zero-module:<group>:<label>, got {spec:?}")))?;
        let (group, bound) = match tag {
            "z" => (PresentedAbelianGroup::free(1), Some(Z_ACTION_BOUND)),
            _ => {
                let n: u64 = tag
                    .strip_prefix('z')
                    .and_then(|n| n.parse().ok())
                    .filter(|&n| n >= 2)
                    .ok_or_else(|| CliError::Invalid(format!("unknown group tag {tag:?} (use z, z2, z3, …)")))?;
                (PresentedAbelianGroup::cyclic(n), None)
            }
        };
        let modules = enumerate_zero_modules(m, &group, bound).map_err(|e| CliError::Invalid(e.to_string()))?;
        let labels: Vec<String> = modules.iter().map(|z| z.label(m)).collect();
        return match labels.iter().position(|l| l == label) {
            Some(i) => {
                let d = from_zero_module(m, &modules[i]).map_err(|e| CliError::Invalid(e.to_string()))?;
                Ok((spec.into(), d))
            }
            None => Err(CliError::Invalid(format!(
                "no 0-module {label:?} on {tag}; available: {}",
                labels.join(" | ")
            ))),
        };
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(CliError::Invalid(format!(
            "{spec:?} is neither a builtin coefficient system ({}) nor a readable file",
            BUILTIN_COEFFICIENTS.join(", ")
        )));
    }
    let text = docs::read_file(path)?;
    let d = CoefficientDocument::parse(&text, spec)?.to_system(m)?;
    Ok((spec.into(), d))
}

fn check_budget(m: &MonoidWithZero, degree: usize, budget_force: bool) -> Result<(), CliError> {
    if budget_force {
        return Ok(());
    }
    if degree > DEFAULT_MAX_DEGREE {
        return Err(CliError::Guardrail(format!(
            "--max-degree {degree} exceeds the limit {DEFAULT_MAX_DEGREE}"
        )));
    }
    if m.order() > MAX_MONOID_ORDER {
        return Err(CliError::Guardrail(format!(
            "monoid has {} elements, more than the limit {MAX_MONOID_ORDER}",
            m.order()
        )));
    }
    Ok(())
}
