//! Batch front door: reads JSON problem files, runs classifications,
//! frame analyses and theorem checks, and emits deterministic reports.
//!
//! Exit codes: 0 — pass, 1 — check failed (or the family is not a
//! J-fusion frame for `analyze`), 2 — invalid input or flag misuse.

mod commands;
mod problem;
mod report;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use krein_core::PencilProjection;

use commands::{IdentityArgs, Outcome, RandomArgs};
use problem::{parse_operator, parse_problem, validate, Problem, Variant};
use report::Report;

/// Input-level failure; always maps to exit code 2.
#[derive(Debug)]
pub struct CliError {
    message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> CliError {
        CliError {
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

#[derive(Parser)]
#[command(
    name = "krein-frames",
    version,
    about = "Fusion-frame analysis in finite-dimensional Krein spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Which {
    Onb,
    Union,
    Sum,
    Identity,
    Bessel,
    Douglas,
    Dual,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Projection {
    #[default]
    Ambient,
    JOrthogonal,
}

impl Projection {
    fn to_core(self) -> PencilProjection {
        match self {
            Projection::Ambient => PencilProjection::Ambient,
            Projection::JOrthogonal => PencilProjection::JOrthogonal,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Classify each named subspace: sign class, Gramian spectrum, γ and
    /// the angle to the neutral cone.
    Classify {
        #[arg(long)]
        file: PathBuf,
        /// Override the file's tolerance.
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Frame analysis: index split, bounds, tightness, Parseval flag, ζ.
    Analyze {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        tol: Option<f64>,
        /// Override the file's frame-operator variant.
        #[arg(long, value_enum)]
        variant: Option<Variant>,
        /// Projection used inside the bound pencil.
        #[arg(long, value_enum, default_value_t)]
        pencil_projection: Projection,
    },
    /// Theorem checks; `--which` selects the check.
    Check {
        #[arg(long, value_enum)]
        which: Which,
        /// Primary problem file (all checks except douglas).
        #[arg(long)]
        file: Option<PathBuf>,
        /// Second problem file (union, sum).
        #[arg(long)]
        file2: Option<PathBuf>,
        /// Left operator file (douglas).
        #[arg(long)]
        op_a: Option<PathBuf>,
        /// Right operator file (douglas).
        #[arg(long)]
        op_b: Option<PathBuf>,
        /// Comma-separated member indices (identity).
        #[arg(long)]
        subset: Option<String>,
        /// Comma-separated vector entries (identity).
        #[arg(long)]
        vector: Option<String>,
        /// Number of random (subset, vector) draws (identity).
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum)]
        variant: Option<Variant>,
    },
    /// Emit a random J-fusion frame problem file on standard output;
    /// identical arguments produce identical bytes.
    Random {
        /// Diagonal signature, e.g. `1,1,-1`.
        #[arg(long)]
        signs: String,
        /// Dimensions of the positive members, e.g. `2,1`.
        #[arg(long, default_value = "")]
        dims_plus: String,
        /// Dimensions of the negative members.
        #[arg(long, default_value = "")]
        dims_minus: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::invalid(format!("{}: {e}", path.display())))
}

fn load_problem(path: &Path, tol: Option<f64>, variant: Option<Variant>) -> Result<(Problem, Vec<u8>), CliError> {
    let bytes = read_file(path)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| CliError::invalid(format!("{}: not valid UTF-8", path.display())))?;
    let file = parse_problem(&text)?;
    let mut problem = validate(&file)?;
    if let Some(tol) = tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::invalid("--tol must be a positive number"));
        }
        problem.tolerance = tol;
    }
    if let Some(variant) = variant {
        problem.variant = variant;
    }
    Ok((problem, bytes))
}

fn parse_i8_list(text: &str) -> Result<Vec<i8>, CliError> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.trim_start_matches('+')
                .parse::<i8>()
                .map_err(|_| CliError::invalid(format!("cannot parse `{t}` as a sign")))
        })
        .collect()
}

fn parse_usize_list(text: &str) -> Result<Vec<usize>, CliError> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| CliError::invalid(format!("cannot parse `{t}` as an index")))
        })
        .collect()
}

fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<f64>()
                .map_err(|_| CliError::invalid(format!("cannot parse `{t}` as a number")))
        })
        .collect()
}

fn emit(report: &Report) -> bool {
    print!("{}", report.render());
    eprintln!(
        "krein-frames {}: {}",
        report.command,
        if report.verdict { "pass" } else { "fail" }
    );
    for line in &report.diagnostics {
        eprintln!("  {line}");
    }
    report.verdict
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Classify { file, tol } => {
            let (problem, bytes) = load_problem(&file, tol, None)?;
            let outcome = commands::classify(&problem);
            Ok(emit(&wrap("classify", &problem, &[&bytes], outcome)))
        }
        Command::Analyze {
            file,
            tol,
            variant,
            pencil_projection,
        } => {
            let (problem, bytes) = load_problem(&file, tol, variant)?;
            let outcome = commands::analyze(&problem, pencil_projection.to_core())?;
            Ok(emit(&wrap("analyze", &problem, &[&bytes], outcome)))
        }
        Command::Check {
            which,
            file,
            file2,
            op_a,
            op_b,
            subset,
            vector,
            trials,
            seed,
            tol,
            variant,
        } => {
            if which == Which::Douglas {
                let (Some(op_a), Some(op_b)) = (op_a, op_b) else {
                    return Err(CliError::invalid(
                        "check --which douglas needs --op-a and --op-b",
                    ));
                };
                let bytes_a = read_file(&op_a)?;
                let bytes_b = read_file(&op_b)?;
                let a = parse_operator(&String::from_utf8_lossy(&bytes_a))?;
                let b = parse_operator(&String::from_utf8_lossy(&bytes_b))?;
                let tolerance = tol.unwrap_or(krein_core::DEFAULT_TOL);
                let outcome = commands::check_douglas(&a, &b, tolerance)?;
                let report = Report {
                    command: "check-douglas",
                    input_digest: report::digest(&[&bytes_a, &bytes_b]),
                    tolerance,
                    variant: None,
                    verdict: outcome.verdict,
                    payload: outcome.payload,
                    diagnostics: outcome.diagnostics,
                };
                return Ok(emit(&report));
            }

            let Some(file) = file else {
                return Err(CliError::invalid("this check needs --file"));
            };
            let (problem, bytes) = load_problem(&file, tol, variant)?;
            match which {
                Which::Onb => {
                    let outcome = commands::check_onb(&problem)?;
                    Ok(emit(&wrap("check-onb", &problem, &[&bytes], outcome)))
                }
                Which::Union | Which::Sum => {
                    let Some(file2) = file2 else {
                        return Err(CliError::invalid("union and sum checks need --file2"));
                    };
                    let (second, bytes2) = load_problem(&file2, tol, variant)?;
                    let (name, outcome): (&'static str, Outcome) = if which == Which::Union {
                        ("check-union", commands::check_union(&problem, &second)?)
                    } else {
                        ("check-sum", commands::check_sum(&problem, &second)?)
                    };
                    Ok(emit(&wrap(name, &problem, &[&bytes, &bytes2], outcome)))
                }
                Which::Identity => {
                    let subset = subset.as_deref().map(parse_usize_list).transpose()?;
                    let vector = vector.as_deref().map(parse_f64_list).transpose()?;
                    let args = IdentityArgs {
                        subset,
                        vector,
                        trials,
                        seed,
                    };
                    let outcome = commands::check_identity(&problem, &args)?;
                    Ok(emit(&wrap("check-identity", &problem, &[&bytes], outcome)))
                }
                Which::Bessel => {
                    let outcome = commands::check_bessel(&problem)?;
                    Ok(emit(&wrap("check-bessel", &problem, &[&bytes], outcome)))
                }
                Which::Dual => {
                    let outcome = commands::check_dual(&problem)?;
                    Ok(emit(&wrap("check-dual", &problem, &[&bytes], outcome)))
                }
                Which::Douglas => unreachable!("handled above"),
            }
        }
        Command::Random {
            signs,
            dims_plus,
            dims_minus,
            seed,
        } => {
            let args = RandomArgs {
                signs: parse_i8_list(&signs)?,
                dims_plus: parse_usize_list(&dims_plus)?,
                dims_minus: parse_usize_list(&dims_minus)?,
                seed,
            };
            let text = commands::random_problem(&args)?;
            print!("{text}");
            Ok(true)
        }
    }
}

fn wrap(command: &'static str, problem: &Problem, inputs: &[&[u8]], outcome: Outcome) -> Report {
    Report {
        command,
        input_digest: report::digest(inputs),
        tolerance: problem.tolerance,
        variant: Some(problem.variant.as_str()),
        verdict: outcome.verdict,
        payload: outcome.payload,
        diagnostics: outcome.diagnostics,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
