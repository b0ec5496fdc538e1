//! Command-line front end.
//!
//! Exit codes: 0 success, 2 usage, parse or I/O error, 3 a mathematical
//! precondition failed, 4 the audit recorded a violation or failure.
//! Results go to standard output and diagnostics to standard error.

mod matrix_file;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use matrix_file::{matrix_to_json, parse_matrix, read_matrix};

use crate::antinorms::{kp_antinorm, partial_fidelity, schatten_antinorm};
use crate::audit::{report_to_json, run_audit, AuditConfig, EnvDimSource};
use crate::bipartite::{
    partial_trace_a, partial_trace_b, twirl_oracle_a, twirl_oracle_b, BipartiteOperator,
};
use crate::channels::kraus_to_stinespring;
use crate::entropy::{unified_entropy, EntropyParams, DENSITY_TRACE_TOL};
use crate::format::significant15;
use crate::linalg::{kron, ComplexMatrix, HERMITIAN_TOL};
use crate::norms::kp_norm;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Parse(String),
    #[error(transparent)]
    Precondition(#[from] crate::Error),
    #[error("audit found {violations} violation(s) and {failures} failure(s)")]
    AuditFailed { violations: usize, failures: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) | CliError::Parse(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::AuditFailed { .. } => 4,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "partrace",
    version,
    about = "Norms, anti-norms and entropies under partial trace, with a seeded inequality audit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Evaluate one scalar on matrix files and print it with 15 significant digits.
    #[command(subcommand)]
    Compute(Compute),
    /// Partial trace of a bipartite operator, printed as a matrix file.
    Ptrace(PtraceArgs),
    /// Apply the channel given by Kraus operators to a matrix.
    Apply(ApplyArgs),
    /// Run the seeded inequality audit and write a JSON report.
    Audit(AuditArgs),
}

#[derive(Subcommand, Debug)]
pub enum Compute {
    /// (k,p)-norm; Schatten p-norm when --k is omitted.
    Norm {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        /// Exponent p >= 1, or "inf".
        #[arg(long, value_parser = parse_exponent, allow_negative_numbers = true)]
        p: f64,
    },
    /// (k,p)-anti-norm with p in (0, 1]; Schatten anti-norm (p in (0, 1] or p < 0) when --k is omitted.
    Antinorm {
        file: PathBuf,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, value_parser = parse_exponent, allow_negative_numbers = true)]
        p: f64,
        /// Zero-pad the spectrum to this dimension (requires --k).
        #[arg(long)]
        ambient: Option<usize>,
    },
    /// Unified (alpha, s)-entropy; s = 0 is Renyi, s = 1 Tsallis, alpha = 1 von Neumann.
    Entropy {
        file: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        s: f64,
    },
    /// k-th partial fidelity of two density matrices.
    Fidelity {
        rho: PathBuf,
        sigma: PathBuf,
        #[arg(long)]
        k: usize,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Subsystem {
    A,
    B,
}

#[derive(Args, Debug)]
pub struct PtraceArgs {
    pub file: PathBuf,
    #[arg(long)]
    pub dim_a: usize,
    #[arg(long)]
    pub dim_b: usize,
    /// Subsystem to trace out.
    #[arg(long, value_enum)]
    pub over: Subsystem,
    /// Also compute the Pauli-twirl form and print its maximum deviation
    /// from the embedded partial trace to standard error.
    #[arg(long)]
    pub oracle: bool,
}

#[derive(Args, Debug)]
pub struct ApplyArgs {
    pub file: PathBuf,
    /// Kraus operator files; they must satisfy sum K†K = I.
    #[arg(long, num_args = 1.., required = true)]
    pub kraus: Vec<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EnvDimArg {
    ChoiRank,
    Dilation,
}

#[derive(Args, Debug)]
pub struct AuditArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Comma-separated "MxN" pairs.
    #[arg(long, value_parser = parse_dims_list)]
    pub dims: Option<DimsList>,
    /// Report path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Restrict to these case ids (repeatable or comma-separated).
    #[arg(long = "case", value_delimiter = ',')]
    pub cases: Vec<String>,
    /// Relative tolerance for a violation.
    #[arg(long, default_value_t = 1e-9)]
    pub tolerance: f64,
    /// Environment dimension used in channel bounds.
    #[arg(long, value_enum, default_value_t = EnvDimArg::ChoiRank)]
    pub env_dim: EnvDimArg,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimsList(pub Vec<(usize, usize)>);

/// A real exponent, or `inf` / `infinity`.
pub fn parse_exponent(s: &str) -> Result<f64, String> {
    match s.to_ascii_lowercase().as_str() {
        "inf" | "+inf" | "infinity" => Ok(f64::INFINITY),
        "-inf" | "-infinity" => Ok(f64::NEG_INFINITY),
        other => other
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("not a number: {s:?}")),
    }
}

/// `"2x2,3x2"` into dimension pairs.
pub fn parse_dims_list(s: &str) -> Result<DimsList, String> {
    let pairs = s
        .split(',')
        .map(|tok| {
            let tok = tok.trim();
            let (m, n) = tok
                .split_once(['x', 'X'])
                .ok_or_else(|| format!("expected MxN, got {tok:?}"))?;
            let m: usize = m.parse().map_err(|_| format!("bad dimension in {tok:?}"))?;
            let n: usize = n.parse().map_err(|_| format!("bad dimension in {tok:?}"))?;
            if m == 0 || n == 0 {
                return Err(format!("dimensions must be positive in {tok:?}"));
            }
            Ok((m, n))
        })
        .collect::<Result<Vec<_>, String>>()?;
    Ok(DimsList(pairs))
}

fn print_line(text: &str) -> Result<(), CliError> {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes())
        .and_then(|_| out.flush())
        .map_err(|e| CliError::Io(format!("standard output: {e}")))
}

fn run_compute(cmd: Compute) -> Result<(), CliError> {
    let value = match cmd {
        Compute::Norm { file, k, p } => {
            let q = read_matrix(&file)?;
            let m = q.ensure_square()?;
            kp_norm(&q, k.unwrap_or(m), p)?
        }
        Compute::Antinorm {
            file,
            k,
            p,
            ambient,
        } => {
            let q = read_matrix(&file)?;
            match k {
                Some(k) => kp_antinorm(&q, k, p, HERMITIAN_TOL, ambient)?,
                None if ambient.is_some() => {
                    return Err(CliError::Usage("--ambient requires --k".into()));
                }
                None => schatten_antinorm(&q, p, HERMITIAN_TOL)?,
            }
        }
        Compute::Entropy { file, alpha, s } => {
            let rho = read_matrix(&file)?;
            unified_entropy(&rho, EntropyParams::new(alpha, s)?, DENSITY_TRACE_TOL)?
        }
        Compute::Fidelity { rho, sigma, k } => {
            let rho = read_matrix(&rho)?;
            let sigma = read_matrix(&sigma)?;
            partial_fidelity(&rho, &sigma, k, HERMITIAN_TOL)?
        }
    };
    print_line(&format!("{}\n", significant15(value)))
}

fn run_ptrace(args: PtraceArgs) -> Result<(), CliError> {
    let q = read_matrix(&args.file)?;
    let w = BipartiteOperator::new(q, args.dim_a, args.dim_b)?;
    let reduced = match args.over {
        Subsystem::B => partial_trace_b(&w),
        Subsystem::A => partial_trace_a(&w),
    };
    if args.oracle {
        let (oracle, embedded) = match args.over {
            Subsystem::B => (
                twirl_oracle_b(&w),
                kron(&reduced, &ComplexMatrix::identity(args.dim_b)),
            ),
            Subsystem::A => (
                twirl_oracle_a(&w),
                kron(&ComplexMatrix::identity(args.dim_a), &reduced),
            ),
        };
        eprintln!(
            "oracle deviation: {}",
            significant15(oracle.max_abs_diff(&embedded))
        );
    }
    print_line(&matrix_to_json(&reduced))
}

fn run_apply(args: ApplyArgs) -> Result<(), CliError> {
    let q = read_matrix(&args.file)?;
    let kraus = args
        .kraus
        .iter()
        .map(|p| read_matrix(p))
        .collect::<Result<Vec<_>, _>>()?;
    let channel = kraus_to_stinespring(&kraus)?;
    print_line(&matrix_to_json(&channel.apply(&q)?))
}

fn run_audit_cmd(args: AuditArgs) -> Result<(), CliError> {
    let defaults = AuditConfig::default();
    let config = AuditConfig {
        base_seed: args.seed,
        trials_per_case: args.trials,
        dims: args.dims.map_or(defaults.dims.clone(), |d| d.0),
        tolerance: args.tolerance,
        env_dim_source: match args.env_dim {
            EnvDimArg::ChoiRank => EnvDimSource::ChoiRank,
            EnvDimArg::Dilation => EnvDimSource::Dilation,
        },
        cases: if args.cases.is_empty() {
            None
        } else {
            Some(args.cases)
        },
        ..defaults
    };
    // an unusable configuration is a flag error
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let report = run_audit(&config).map_err(|e| CliError::Usage(e.to_string()))?;
    let text = report_to_json(&report);
    match &args.out {
        Some(path) => {
            fs::write(path, &text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?
        }
        None => print_line(&text)?,
    }
    for case in report.cases.iter().filter(|c| !c.passed()) {
        eprintln!(
            "{}: {} violation(s), {} failure(s){}",
            case.id,
            case.violations,
            case.failures,
            case.first_failure
                .as_deref()
                .map(|f| format!("; first: {f}"))
                .unwrap_or_default()
        );
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::AuditFailed {
            violations: report.total_violations(),
            failures: report.total_failures(),
        })
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Compute(c) => run_compute(c),
        Command::Ptrace(a) => run_ptrace(a),
        Command::Apply(a) => run_apply(a),
        Command::Audit(a) => run_audit_cmd(a),
    }
}

/// Parses `args` (program name first), runs the command and maps the
/// outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
