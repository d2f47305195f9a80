//! Command-line front end for the `cvenn` toolkit. Every subcommand is a
//! thin composition of library calls plus file I/O; no numerics are
//! implemented here.
//!
//! Exit codes: 0 on success, 1 on a domain error (the error name is printed
//! to the diagnostic stream), 2 on a usage error.

pub mod format;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use cvenn::decompose::{
    gellmann_decompose, pauli_decompose, polarization_decompose, DecomposeError,
};
use cvenn::entropy::{self, EntropyReport};
use cvenn::linalg::{LinalgError, LogBase};
use cvenn::projection::{project_to_cvenn, ProjectionError, SolverConfig};
use cvenn::scan::{scan_family, ScanError, ScanRow};
use cvenn::states::{
    isotropic, max_entangled, random_density, werner, StateError,
};
use cvenn::tasks::{
    hashing_bound, merging_report, randomness_rates, sdc_capacity, uncertainty_bound,
    MergeDirection, TaskError, TaskReport, Unit, UncertaintySetting,
};
use cvenn::witness::{eval_witness, geometric_witness, log_witness, WitnessError};
use cvenn::FamilyKind;

use format::{load_operator, load_state, save_operator, save_state, FileKind};

/// Errors surfaced by the CLI; domain errors pass through transparently so
/// their module-level names appear on the diagnostic stream.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("Io: {0}")]
    Io(String),
    #[error("KindMismatch: expected a file of kind `{expected}`, found `{found}`")]
    KindMismatch { expected: FileKind, found: FileKind },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Witness(#[from] WitnessError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
    #[error(transparent)]
    Task(#[from] TaskError),
    #[error(transparent)]
    Scan(#[from] ScanError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Argument-level problems detected after parsing (missing family
/// parameters, malformed dimension strings); reported as usage errors.
#[derive(Debug)]
struct UsageError(String);

enum Failure {
    Usage(UsageError),
    Domain(CliError),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl<E: Into<CliError>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

#[derive(Parser)]
#[command(
    name = "cvenn",
    version,
    about = "Detect and quantify bipartite states with negative conditional von Neumann entropy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a state from a named family to a matrix file
    Gen(GenArgs),
    /// Print the entropy report of a state
    Entropy(EntropyArgs),
    /// Construct and evaluate witness operators
    #[command(subcommand)]
    Witness(WitnessCmd),
    /// Expand a witness into tensor products of local observables
    Decompose(DecomposeArgs),
    /// Evaluate a witness and the conditional entropy across a family
    Scan(ScanArgs),
    /// Operational consequences of negative conditional entropy
    #[command(subcommand)]
    Task(TaskCmd),
    /// Find the closest state with non-negative conditional entropy
    Project(ProjectArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum BaseArg {
    Bits,
    Nats,
}

impl From<BaseArg> for LogBase {
    fn from(base: BaseArg) -> Self {
        match base {
            BaseArg::Bits => LogBase::Bits,
            BaseArg::Nats => LogBase::Nats,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum GenFamily {
    /// Two-qubit Werner state (requires --p)
    Werner,
    /// Two-qudit isotropic state (requires --alpha and --dim)
    Isotropic,
    /// Maximally entangled state (requires --dim)
    Maxent,
    /// Hilbert-Schmidt random state (requires --dims, optional --seed)
    Random,
}

#[derive(Args)]
struct GenArgs {
    /// State family to draw from
    #[arg(long, value_enum)]
    family: GenFamily,
    /// Werner mixing parameter in [0, 1]
    #[arg(long)]
    p: Option<f64>,
    /// Isotropic mixing parameter in [-1/(d^2-1), 1]
    #[arg(long)]
    alpha: Option<f64>,
    /// Local dimension
    #[arg(long)]
    dim: Option<usize>,
    /// Bipartite dimensions as AxB (e.g. 2x3)
    #[arg(long)]
    dims: Option<String>,
    /// RNG seed for --family random
    #[arg(long)]
    seed: Option<u64>,
    /// Output file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EntropyArgs {
    /// State file
    #[arg(long)]
    state: PathBuf,
    /// Logarithm base for the report
    #[arg(long, value_enum, default_value = "bits")]
    base: BaseArg,
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// Logarithmic witness of a full-rank state
    Log(WitnessLogArgs),
    /// Geometric witness from the closest-member projection
    Geometric(WitnessGeometricArgs),
    /// Expectation value of a stored witness on a state
    Eval(WitnessEvalArgs),
}

#[derive(Args)]
struct WitnessLogArgs {
    /// State file (must be full rank)
    #[arg(long)]
    state: PathBuf,
    /// Logarithm base of the witness entries
    #[arg(long, value_enum, default_value = "bits")]
    base: BaseArg,
    /// Output operator file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct WitnessGeometricArgs {
    /// State file (the state to be detected)
    #[arg(long)]
    state: PathBuf,
    /// Feasibility tolerance for the projection solver
    #[arg(long)]
    tol: Option<f64>,
    /// Output operator file for the witness
    #[arg(long)]
    out: PathBuf,
    /// Output state file for the closest member (default: <out>.sigma.json)
    #[arg(long)]
    sigma_out: Option<PathBuf>,
}

#[derive(Args)]
struct WitnessEvalArgs {
    /// Operator file
    #[arg(long)]
    witness: PathBuf,
    /// State file
    #[arg(long)]
    state: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum BasisArg {
    Pauli,
    Gellmann,
    Polarization,
}

#[derive(Args)]
struct DecomposeArgs {
    /// Operator file
    #[arg(long)]
    witness: PathBuf,
    /// Local operator basis
    #[arg(long, value_enum)]
    basis: BasisArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScanFamilyArg {
    Werner,
    Isotropic,
}

#[derive(Args)]
struct ScanArgs {
    /// Family to sweep
    #[arg(long, value_enum)]
    family: ScanFamilyArg,
    /// Local dimension of the family
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Number of grid points (endpoints included)
    #[arg(long, default_value_t = 201)]
    points: usize,
    /// Operator file evaluated at every grid point
    #[arg(long)]
    witness: PathBuf,
    /// Logarithm base for the cond_entropy column
    #[arg(long, value_enum, default_value = "bits")]
    base: BaseArg,
    /// Output CSV file
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    AToB,
    BToA,
}

#[derive(Subcommand)]
enum TaskCmd {
    /// Superdense-coding capacity
    Sdc(TaskStateArgs),
    /// State-merging cost
    Merge(MergeArgs),
    /// Entropic uncertainty bound with quantum memory
    Uncertainty(UncertaintyArgs),
    /// Distributed-randomness rate bounds
    Randomness(TaskStateArgs),
    /// Hashing bound on one-way distillable entanglement
    Distill(TaskStateArgs),
}

#[derive(Args)]
struct TaskStateArgs {
    /// State file
    #[arg(long)]
    state: PathBuf,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct MergeArgs {
    /// State file
    #[arg(long)]
    state: PathBuf,
    /// Which party merges their share
    #[arg(long, value_enum, default_value = "a-to-b")]
    direction: DirectionArg,
    /// Logarithm base for the cost
    #[arg(long, value_enum, default_value = "bits")]
    base: BaseArg,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct UncertaintyArgs {
    /// State file
    #[arg(long)]
    state: PathBuf,
    /// Operator file for the first observable (measured on subsystem A)
    #[arg(long)]
    obs_x: PathBuf,
    /// Operator file for the second observable (measured on subsystem A)
    #[arg(long)]
    obs_y: PathBuf,
    /// Emit the report as JSON instead of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct ProjectArgs {
    /// State file
    #[arg(long)]
    state: PathBuf,
    /// Feasibility tolerance for the solver
    #[arg(long)]
    tol: Option<f64>,
    /// Output state file for the closest member
    #[arg(long)]
    out: PathBuf,
}

/// Parses `argv` and runs the requested command, writing results to `out`
/// and diagnostics to `err`. Returns the process exit code.
pub fn run_from<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    2
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(Failure::Usage(UsageError(msg))) => {
            let _ = writeln!(err, "usage error: {msg}");
            2
        }
        Err(Failure::Domain(e)) => {
            let _ = writeln!(err, "{e}");
            1
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Gen(args) => cmd_gen(args, out),
        Command::Entropy(args) => cmd_entropy(args, out),
        Command::Witness(WitnessCmd::Log(args)) => cmd_witness_log(args, out, err),
        Command::Witness(WitnessCmd::Geometric(args)) => cmd_witness_geometric(args, out, err),
        Command::Witness(WitnessCmd::Eval(args)) => cmd_witness_eval(args, out),
        Command::Decompose(args) => cmd_decompose(args, out),
        Command::Scan(args) => cmd_scan(args, out),
        Command::Task(task) => cmd_task(task, out),
        Command::Project(args) => cmd_project(args, out, err),
    }
}

fn parse_dims(text: &str) -> Result<(usize, usize), UsageError> {
    let parts: Vec<&str> = text.split('x').collect();
    let bad = || UsageError(format!("--dims must look like AxB (e.g. 2x3), got `{text}`"));
    if parts.len() != 2 {
        return Err(bad());
    }
    let da: usize = parts[0].trim().parse().map_err(|_| bad())?;
    let db: usize = parts[1].trim().parse().map_err(|_| bad())?;
    if da == 0 || db == 0 {
        return Err(bad());
    }
    Ok((da, db))
}

fn require<T>(value: Option<T>, what: &str, family: &str) -> Result<T, UsageError> {
    value.ok_or_else(|| UsageError(format!("{what} is required for --family {family}")))
}

fn cmd_gen(args: GenArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let state = match args.family {
        GenFamily::Werner => werner(require(args.p, "--p", "werner")?)?,
        GenFamily::Isotropic => {
            let alpha = require(args.alpha, "--alpha", "isotropic")?;
            let dim = require(args.dim, "--dim", "isotropic")?;
            isotropic(alpha, dim)?
        }
        GenFamily::Maxent => {
            let dim = require(args.dim, "--dim", "maxent")?;
            if dim < 2 {
                return Err(UsageError("--dim must be at least 2 for --family maxent".into()).into());
            }
            max_entangled(dim)
        }
        GenFamily::Random => {
            let dims = parse_dims(&require(args.dims, "--dims", "random")?)?;
            random_density(dims, args.seed.unwrap_or(0))
        }
    };
    save_state(&args.out, &state)?;
    let _ = writeln!(out, "saved state to {}", args.out.display());
    Ok(())
}

fn write_entropy_report(
    out: &mut dyn Write,
    report: &EntropyReport<f64>,
    base: LogBase,
) -> std::io::Result<()> {
    writeln!(out, "base: {base}")?;
    writeln!(out, "s_joint: {:.4}", report.s_joint)?;
    writeln!(out, "s_a: {:.4}", report.s_a)?;
    writeln!(out, "s_b: {:.4}", report.s_b)?;
    writeln!(out, "s_a_given_b: {:.4}", report.s_a_given_b)?;
    writeln!(out, "s_b_given_a: {:.4}", report.s_b_given_a)?;
    writeln!(out, "in_cvenn: {}", report.in_cvenn)
}

fn cmd_entropy(args: EntropyArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let state = load_state(&args.state)?;
    let base: LogBase = args.base.into();
    let report = entropy::entropy_report(&state, base);
    let _ = write_entropy_report(out, &report, base);
    Ok(())
}

fn cmd_witness_log(
    args: WitnessLogArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let state = load_state(&args.state)?;
    let base: LogBase = args.base.into();
    let w = log_witness(&state, base)?;
    if entropy::is_cvenn(&state, base) {
        let _ = writeln!(
            err,
            "warning: the source state has non-negative conditional entropy; \
             this operator will not detect it"
        );
    }
    save_operator(&args.out, &w)?;
    let _ = writeln!(out, "saved operator to {}", args.out.display());
    let _ = writeln!(out, "min_eigenvalue: {:.4}", w.min_eigenvalue());
    let _ = writeln!(out, "is_witness: {}", w.is_witness());
    Ok(())
}

fn default_sigma_path(out: &Path) -> PathBuf {
    let stem = out
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sigma".into());
    out.with_file_name(format!("{stem}.sigma.json"))
}

fn solver_config(tol: Option<f64>) -> SolverConfig<f64> {
    let mut config = SolverConfig::default();
    if let Some(tol) = tol {
        config.violation_tolerance = tol;
    }
    config
}

fn cmd_witness_geometric(
    args: WitnessGeometricArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let state = load_state(&args.state)?;
    let result = project_to_cvenn(&state, &solver_config(args.tol))?;
    if !result.converged {
        let _ = writeln!(
            err,
            "warning: projection stopped at its iteration budget (violation {:.3e})",
            result.violation
        );
    }
    let w = geometric_witness(&state, &result.sigma_c)?;
    let sigma_path = args.sigma_out.unwrap_or_else(|| default_sigma_path(&args.out));
    save_state(&sigma_path, &result.sigma_c)?;
    save_operator(&args.out, &w)?;
    let _ = writeln!(out, "distance: {:.4}", result.distance);
    let _ = writeln!(out, "saved closest member to {}", sigma_path.display());
    let _ = writeln!(out, "saved operator to {}", args.out.display());
    Ok(())
}

fn cmd_witness_eval(args: WitnessEvalArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let w = load_operator(&args.witness)?;
    let state = load_state(&args.state)?;
    let value = eval_witness(&w, &state)?;
    let _ = writeln!(out, "witness_value: {value:.4}");
    let _ = writeln!(out, "detected: {}", value < 0.0);
    Ok(())
}

fn cmd_decompose(args: DecomposeArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let w = load_operator(&args.witness)?;
    let decomposition = match args.basis {
        BasisArg::Pauli => pauli_decompose(&w)?,
        BasisArg::Gellmann => gellmann_decompose(&w)?,
        BasisArg::Polarization => polarization_decompose(&w)?,
    };
    let _ = writeln!(out, "{}", decomposition.to_text());
    Ok(())
}

fn cmd_scan(args: ScanArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let w = load_operator(&args.witness)?;
    let kind = match args.family {
        ScanFamilyArg::Werner => FamilyKind::Werner,
        ScanFamilyArg::Isotropic => FamilyKind::Isotropic,
    };
    let rows = scan_family(kind, args.dim, &w, args.points, args.base.into())?;
    write_csv(&args.out, &rows)?;
    let _ = writeln!(out, "wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn write_csv(path: &Path, rows: &[ScanRow<f64>]) -> Result<(), CliError> {
    let mut text = String::from("param,witness_value,cond_entropy\n");
    for row in rows {
        // 17 significant digits: enough to reconstruct each f64 exactly.
        text.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            row.param, row.witness_value, row.cond_entropy
        ));
    }
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("writing {}: {e}", path.display())))
}

fn unit_str(unit: Unit) -> &'static str {
    match unit {
        Unit::Bits => "bits",
        Unit::Nats => "nats",
        Unit::Qubits => "qubits",
        Unit::Ebits => "ebits",
        Unit::Dimensionless => "",
    }
}

fn report_json(report: &TaskReport<f64>) -> serde_json::Value {
    serde_json::json!({
        "task": report.task.to_string(),
        "inputs": report
            .inputs
            .iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v.clone())))
            .collect::<serde_json::Map<_, _>>(),
        "values": report
            .values
            .iter()
            .map(|&(name, value, unit)| {
                serde_json::json!({"name": name, "value": value, "unit": unit_str(unit)})
            })
            .collect::<Vec<_>>(),
        "flags": report
            .flags
            .iter()
            .map(|&(k, v)| (k.to_string(), serde_json::Value::Bool(v)))
            .collect::<serde_json::Map<_, _>>(),
    })
}

fn emit_report(report: &TaskReport<f64>, json: bool, out: &mut dyn Write) {
    if json {
        let _ = writeln!(out, "{}", report_json(report));
    } else {
        let _ = writeln!(out, "{}", report.to_text());
    }
}

fn cmd_task(task: TaskCmd, out: &mut dyn Write) -> Result<(), Failure> {
    match task {
        TaskCmd::Sdc(args) => {
            let state = load_state(&args.state)?;
            emit_report(&sdc_capacity(&state)?, args.json, out);
        }
        TaskCmd::Merge(args) => {
            let state = load_state(&args.state)?;
            let direction = match args.direction {
                DirectionArg::AToB => MergeDirection::AToB,
                DirectionArg::BToA => MergeDirection::BToA,
            };
            emit_report(
                &merging_report(&state, direction, args.base.into()),
                args.json,
                out,
            );
        }
        TaskCmd::Uncertainty(args) => {
            let state = load_state(&args.state)?;
            let obs_x = load_operator(&args.obs_x)?;
            let obs_y = load_operator(&args.obs_y)?;
            let setting = UncertaintySetting::new(obs_x, obs_y)?;
            emit_report(&uncertainty_bound(&setting, &state)?, args.json, out);
        }
        TaskCmd::Randomness(args) => {
            let state = load_state(&args.state)?;
            emit_report(&randomness_rates(&state), args.json, out);
        }
        TaskCmd::Distill(args) => {
            let state = load_state(&args.state)?;
            emit_report(&hashing_bound(&state), args.json, out);
        }
    }
    Ok(())
}

fn cmd_project(args: ProjectArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), Failure> {
    let state = load_state(&args.state)?;
    let result = project_to_cvenn(&state, &solver_config(args.tol))?;
    if !result.converged {
        let _ = writeln!(
            err,
            "warning: projection stopped at its iteration budget (violation {:.3e})",
            result.violation
        );
    }
    save_state(&args.out, &result.sigma_c)?;
    let _ = writeln!(out, "saved closest member to {}", args.out.display());
    let _ = writeln!(out, "distance: {:.4}", result.distance);
    let _ = writeln!(out, "violation: {:.3e}", result.violation);
    let _ = writeln!(out, "iterations: {}", result.iterations);
    let _ = writeln!(out, "converged: {}", result.converged);
    Ok(())
}
