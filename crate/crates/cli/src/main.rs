//! `vfenergy`: batch front end for the spectrum, radial, symmetrization and
//! verification experiments. Reports are JSON; radial eigenfunctions can also
//! be written as CSV.

mod commands;
mod config;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use vfenergy::parse::{FieldSpec, ProfileSpec, QuadSpec};
use vfenergy::quadrature::QuadKind;
use vfenergy::Error;

use config::{
    CommandConfig, RadialConfig, Restrict, RunConfig, SpectrumConfig, SymmetrizeConfig, UsageError, VerifyConfig,
    SCHEMA,
};

const WORKERS_ENV: &str = "VFENERGY_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "vfenergy", version, about = "Energy of vector fields on spheres and warped products")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Option<Command>,
    /// Run a configuration saved with --dump-config
    #[arg(long)]
    config: Option<PathBuf>,
    /// Print the resolved configuration as JSON and exit
    #[arg(long, global = true)]
    dump_config: bool,
    /// Write the JSON report to this file instead of stdout
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rayleigh–Ritz spectrum of the rough Laplacian on S^n(1/k)
    Spectrum(SpectrumArgs),
    /// Radial eigenproblem on a rotationally symmetric profile
    Radial(RadialArgs),
    /// Average a field over a group and check the averaging laws
    Symmetrize(SymmetrizeArgs),
    /// Run the acceptance suite; exits nonzero on any failure
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum QuadChoice {
    Product,
    Mc,
}

#[derive(Args, Debug)]
struct QuadArgs {
    /// Quadrature rule (default: product for n <= 3, Monte Carlo otherwise)
    #[arg(long, value_enum)]
    quad: Option<QuadChoice>,
    /// Product-rule resolution
    #[arg(long, requires = "quad")]
    res: Option<usize>,
    /// Monte Carlo node count
    #[arg(long, requires = "quad")]
    count: Option<usize>,
}

impl QuadArgs {
    fn resolve(&self, seed: u64) -> Result<Option<QuadSpec>, UsageError> {
        let bad = |reason: &str| UsageError {
            field: "quad".into(),
            reason: reason.into(),
        };
        match self.quad {
            None => Ok(None),
            Some(QuadChoice::Product) => {
                if self.count.is_some() {
                    return Err(bad("--count applies to --quad mc"));
                }
                let res = self.res.ok_or_else(|| bad("--quad product needs --res"))?;
                Ok(Some(QuadSpec(QuadKind::Product { res })))
            }
            Some(QuadChoice::Mc) => {
                if self.res.is_some() {
                    return Err(bad("--res applies to --quad product"));
                }
                let count = self.count.ok_or_else(|| bad("--quad mc needs --count"))?;
                Ok(Some(QuadSpec(QuadKind::MonteCarlo { count, seed })))
            }
        }
    }
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    #[command(flatten)]
    quad: QuadArgs,
    /// `hopf` or `zero-mean:v1,...,v(n+1)`
    #[arg(long)]
    restrict: Option<Restrict>,
    /// Number of Ritz values reported
    #[arg(long, default_value_t = 20)]
    eigs: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct RadialArgs {
    /// `round:k=K`, `perturbed:k=K,eps=E` or `file:PATH` (CSV with header s,f)
    #[arg(long)]
    profile: ProfileSpec,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 2000)]
    grid: usize,
    #[arg(long, default_value_t = 3)]
    eigs: usize,
    /// Comparison curvature (default: the round k, else the largest admissible)
    #[arg(long)]
    k: Option<f64>,
    /// Write the eigenfunctions as CSV `s,h1,h2,...`
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SymmetrizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    k: f64,
    /// `proj:w`, `killing:xy`, `hopf:i` or `poly:PATH`
    #[arg(long)]
    field: FieldSpec,
    /// `finite:reflect:C`, `rot:I,J:COUNT`, `isotropy:v:COUNT:seed=S` or `haar:COUNT:seed=S`
    #[arg(long)]
    group: String,
    #[command(flatten)]
    quad: QuadArgs,
    /// Random points for the pointwise checks
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Criterion numbers (default: all)
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<usize>,
}

fn build_config(cli: Cli) -> Result<RunConfig, UsageError> {
    let mut cfg = match (cli.config, cli.command) {
        (Some(path), _) => {
            let text = std::fs::read_to_string(&path).map_err(|e| UsageError {
                field: "config".into(),
                reason: format!("{}: {e}", path.display()),
            })?;
            RunConfig::from_json(&text)?
        }
        (None, Some(cmd)) => RunConfig {
            command: match cmd {
                Command::Spectrum(a) => CommandConfig::Spectrum(SpectrumConfig {
                    n: a.n,
                    k: a.k,
                    degree: a.degree,
                    quad: a.quad.resolve(a.seed)?,
                    restrict: a.restrict,
                    eigs: a.eigs,
                    seed: a.seed,
                }),
                Command::Radial(a) => CommandConfig::Radial(RadialConfig {
                    profile: a.profile,
                    n: a.n,
                    grid: a.grid,
                    eigs: a.eigs,
                    k: a.k,
                    csv: a.csv,
                }),
                Command::Symmetrize(a) => CommandConfig::Symmetrize(SymmetrizeConfig {
                    n: a.n,
                    k: a.k,
                    field: a.field,
                    group: a.group,
                    quad: a.quad.resolve(a.seed)?,
                    samples: a.samples,
                    seed: a.seed,
                }),
                Command::Verify(a) => CommandConfig::Verify(VerifyConfig { criteria: a.criteria }),
            },
            output: None,
        },
        (None, None) => {
            return Err(UsageError {
                field: "command".into(),
                reason: "give a subcommand or --config".into(),
            })
        }
    };
    if cli.output.is_some() {
        cfg.output = cli.output;
    }
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    schema: &'static str,
    claim: &'static str,
    config: &'a RunConfig,
    result: T,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    schema: &'static str,
    config: &'a RunConfig,
    error: ErrorRecord,
}

#[derive(Serialize)]
struct ErrorRecord {
    kind: &'static str,
    message: String,
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Domain(_) | Error::OffSphere { .. } => "domain",
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::InvalidArgument { .. } => "invalid-argument",
        Error::ZeroNorm => "zero-norm",
        Error::NonFinite { .. } => "non-finite",
        Error::NotPositiveDefinite { .. } => "not-positive-definite",
        Error::RuleTooCoarse(_) => "rule-too-coarse",
        Error::UnsupportedDimension { .. } => "unsupported-dimension",
        Error::ExactModeRequired(_) => "exact-mode-required",
        Error::Precondition(_) => "precondition",
        Error::Convergence { .. } => "convergence",
        Error::RicciHypothesis { .. } => "ricci-hypothesis",
        Error::Parse { .. } => "parse",
        Error::Io(_) => "io",
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), String> {
    match &cfg.output {
        Some(path) => std::fs::write(path, format!("{text}\n")).map_err(|e| format!("{}: {e}", path.display())),
        // a closed pipe downstream is not our failure
        None => {
            let _ = writeln!(std::io::stdout(), "{text}");
            Ok(())
        }
    }
}

fn report<T: Serialize>(cfg: &RunConfig, claim: &'static str, result: T) -> String {
    serde_json::to_string_pretty(&Report {
        schema: SCHEMA,
        claim,
        config: cfg,
        result,
    })
    .expect("report serializes")
}

/// Runs the configured command; returns the JSON text and whether all
/// checks passed (only `verify` turns a failed check into a failed exit).
fn execute(cfg: &RunConfig) -> Result<(String, bool), Error> {
    Ok(match &cfg.command {
        CommandConfig::Spectrum(c) => {
            let (claim, out) = commands::spectrum(c)?;
            (report(cfg, claim, out), true)
        }
        CommandConfig::Radial(c) => {
            let (claim, out) = commands::radial(c)?;
            (report(cfg, claim, out), true)
        }
        CommandConfig::Symmetrize(c) => {
            let (claim, out) = commands::symmetrize_cmd(c)?;
            (report(cfg, claim, out), true)
        }
        CommandConfig::Verify(c) => {
            let out = commands::verify(c);
            for r in &out.criteria {
                eprintln!("{}", r.summary_line());
            }
            let passed = out.passed;
            (report(cfg, "acceptance-suite", out), passed)
        }
    })
}

fn configure_workers() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = match raw.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(UsageError {
                field: WORKERS_ENV.into(),
                reason: format!("expected a positive integer, got `{raw}`"),
            })
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError {
            field: WORKERS_ENV.into(),
            reason: e.to_string(),
        })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let dump = cli.dump_config;
    let cfg = match configure_workers().and_then(|_| build_config(cli)) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if dump {
        let _ = writeln!(std::io::stdout(), "{}", cfg.to_json());
        return ExitCode::SUCCESS;
    }
    let (text, ok) = match execute(&cfg) {
        Ok(out) => out,
        Err(e) => {
            let usage = matches!(
                e,
                Error::InvalidArgument { .. } | Error::Parse { .. } | Error::DimensionMismatch { .. } | Error::Io(_)
            );
            let text = serde_json::to_string_pretty(&ErrorReport {
                schema: SCHEMA,
                config: &cfg,
                error: ErrorRecord {
                    kind: error_kind(&e),
                    message: e.to_string(),
                },
            })
            .expect("error report serializes");
            eprintln!("error: {e}");
            let _ = emit(&cfg, &text);
            return ExitCode::from(if usage { 2 } else { 1 });
        }
    };
    if let Err(e) = emit(&cfg, &text) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
