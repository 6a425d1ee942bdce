//! Command-line workbench for teleportation through noisy entangled
//! channels: exposure sweeps, figure data, channel matrices, entanglement
//! reports, fidelities, classical thresholds and decomposition checks.
//!
//! Exit codes: 0 success, 1 invalid arguments or domain, 2 internal
//! consistency or numerical failure.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use qteleport::channels::{analytic_channel, initial_resource, lindblad_evolve, NoiseKind, NoiseSpec};
use qteleport::decomp::{
    optimal_ensemble, separable_ensemble, verify_ensemble, wootters_decomposition, Ensemble,
};
use qteleport::entanglement::{concurrence_mixed, pmax_numeric, report_mixed, report_pure};
use qteleport::qstate::{hermitian_eigensystem, ComplexMatrix, DensityOperator, PureState};
use qteleport::teleport::{
    average_fidelity, average_fidelity_closed_form, classical_threshold_kt, fidelity_at,
    InputAngles,
};
use qteleport::Error;

use qteleport_cli::config::{parse_config_file, parse_grid, OutputSet};
use qteleport_cli::figures::emit_figure_data;
use qteleport_cli::output::{format_significant, sweep_csv, sweep_json, OutputFormat, Record};
use qteleport_cli::sweep::{run_sweep, SweepConfig, SweepRow};

#[derive(Parser)]
#[command(
    name = "qteleport",
    version,
    about = "Teleportation fidelity and entanglement workbench for noisy EPR and W channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format (default csv)
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Write output to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Quadrature grid as NxM polar x azimuthal nodes (default 64x64)
    #[arg(long, global = true)]
    grid: Option<String>,
    /// Seed for the product-state search restarts (default 42)
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Sweep a channel over an exposure grid and emit one row per point
    Sweep(SweepArgs),
    /// Write the curve files behind one of the summary figures
    EmitFigure {
        /// Figure number: 2, 3 or 4
        #[arg(long)]
        figure: u8,
        /// Directory for the curve files (created if missing)
        #[arg(long, default_value = "figures")]
        dir: PathBuf,
    },
    /// Emit a channel state as matrix exchange JSON
    ChannelMatrix {
        /// Channel kind (x, y, z, isotropic, xz, xy, yz, zx, zy, yx, w)
        #[arg(long)]
        noise: String,
        /// Noise exposure kappa*t
        #[arg(long)]
        kt: f64,
        /// Integrate the master equation instead of using the closed form
        #[arg(long)]
        integrate: bool,
        /// Fixed integration steps for --integrate
        #[arg(long, default_value_t = 400)]
        steps: usize,
    },
    /// Entanglement report for a channel state or a matrix JSON file
    Entangle {
        /// Channel kind producing the state (two-qubit kinds only)
        #[arg(long, conflicts_with = "input")]
        noise: Option<String>,
        /// Noise exposure kappa*t
        #[arg(long, conflicts_with = "input", requires = "noise")]
        kt: Option<f64>,
        /// Read the state from a matrix exchange JSON file instead
        #[arg(long)]
        input: Option<PathBuf>,
    },
    /// Teleportation fidelity through a channel: averaged or at one input
    Fidelity {
        #[arg(long)]
        noise: String,
        #[arg(long)]
        kt: f64,
        /// Polar angle of a single input state (with --phi)
        #[arg(long, requires = "phi")]
        theta: Option<f64>,
        /// Azimuthal angle of a single input state (with --theta)
        #[arg(long, requires = "theta")]
        phi: Option<f64>,
    },
    /// Exposure at which the average fidelity crosses the classical bound
    Threshold {
        #[arg(long)]
        noise: String,
    },
    /// Build a pure-state decomposition and verify it reconstructs the state
    VerifyDecomposition {
        #[arg(long)]
        noise: String,
        #[arg(long)]
        kt: f64,
        /// Decomposition family to construct
        #[arg(long, value_enum, default_value_t = FamilyArg::Optimal)]
        family: FamilyArg,
    },
}

#[derive(clap::Args)]
struct SweepArgs {
    /// Channel kind to sweep
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    kt_min: Option<f64>,
    #[arg(long)]
    kt_max: Option<f64>,
    #[arg(long)]
    kt_step: Option<f64>,
    /// Comma-separated subset of avg_fidelity, concurrence, eof, groverian, ppt
    #[arg(long)]
    outputs: Option<String>,
    /// Key=value file supplying defaults for any of the flags
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Optimal,
    Separable,
    General,
}

/// Failure carrying its process exit code: usage errors exit 1, internal
/// consistency or numerical errors exit 2.
enum Failure {
    Usage(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidArgument(m) | Error::OutOfDomain(m) => Failure::Usage(m),
            Error::Numerical(m) => Failure::Internal(m),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> CmdResult {
    let format: OutputFormat = cli.format.map(Into::into).unwrap_or(OutputFormat::Csv);
    let grid = match &cli.grid {
        Some(text) => Some(parse_grid(text)?),
        None => None,
    };
    let seed = cli.seed;
    let out = cli.out.clone();
    match cli.command {
        Command::Sweep(args) => {
            cmd_sweep(args, cli.format.map(Into::into), grid, out)
        }
        Command::EmitFigure { figure, dir } => cmd_emit_figure(figure, &dir),
        Command::ChannelMatrix { noise, kt, integrate, steps } => {
            cmd_channel_matrix(&noise, kt, integrate, steps, out.as_deref())
        }
        Command::Entangle { noise, kt, input } => {
            cmd_entangle(noise.as_deref(), kt, input.as_deref(), format, seed, out.as_deref())
        }
        Command::Fidelity { noise, kt, theta, phi } => {
            cmd_fidelity(&noise, kt, theta.zip(phi), format, grid, out.as_deref())
        }
        Command::Threshold { noise } => cmd_threshold(&noise, format, out.as_deref()),
        Command::VerifyDecomposition { noise, kt, family } => {
            cmd_verify_decomposition(&noise, kt, family, format, out.as_deref())
        }
    }
}

fn write_output(text: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            Failure::Usage(format!("cannot write '{}': {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn parse_kind(name: &str) -> Result<NoiseKind, Failure> {
    NoiseKind::parse(name).map_err(Into::into)
}

fn cmd_sweep(
    args: SweepArgs,
    flag_format: Option<OutputFormat>,
    flag_grid: Option<(usize, usize)>,
    flag_out: Option<PathBuf>,
) -> CmdResult {
    let file = match &args.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                Failure::Usage(format!("cannot read '{}': {e}", path.display()))
            })?;
            parse_config_file(&text)?
        }
        None => Default::default(),
    };
    let noise = match (&args.noise, file.noise) {
        (Some(name), _) => parse_kind(name)?,
        (None, Some(kind)) => kind,
        (None, None) => {
            return Err(Failure::Usage(
                "sweep needs a channel: pass --noise or a config file with a noise key".into(),
            ))
        }
    };
    let outputs = match &args.outputs {
        Some(list) => OutputSet::parse(list)?,
        None => file.outputs.unwrap_or_default(),
    };
    let (n_theta, n_phi) = flag_grid.or(file.grid).unwrap_or((64, 64));
    let config = SweepConfig {
        noise_kind: noise,
        kt_min: args.kt_min.or(file.kt_min).unwrap_or(0.0),
        kt_max: args.kt_max.or(file.kt_max).unwrap_or(1.0),
        kt_step: args.kt_step.or(file.kt_step).unwrap_or(0.01),
        outputs,
        format: flag_format.or(file.format).unwrap_or(OutputFormat::Csv),
        n_theta,
        n_phi,
    };
    let rows = run_sweep(&config)?;
    let text = match config.format {
        OutputFormat::Csv => sweep_csv(&rows, &config.outputs),
        OutputFormat::Json => sweep_json(&rows, &config.outputs),
    };
    write_output(&text, flag_out.or(file.out).as_deref())?;
    let bad: Vec<&SweepRow> = rows.iter().filter(|r| !r.is_consistent()).collect();
    if let Some(row) = bad.first() {
        return Err(Failure::Internal(format!(
            "quadrature and closed-form fidelity disagree beyond 1e-8 on {} row(s); first at kappa_t = {}",
            bad.len(),
            format_significant(row.kappa_t)
        )));
    }
    Ok(())
}

fn cmd_emit_figure(figure: u8, dir: &Path) -> CmdResult {
    let files = emit_figure_data(figure, dir)?;
    for path in files {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_channel_matrix(
    noise: &str,
    kt: f64,
    integrate: bool,
    steps: usize,
    out: Option<&Path>,
) -> CmdResult {
    let kind = parse_kind(noise)?;
    let spec = NoiseSpec::new(kind, kt)?;
    let rho = if integrate {
        lindblad_evolve(&initial_resource(kind), kind, kt, steps)?
    } else {
        analytic_channel(&spec)?
    };
    let mut text = rho.matrix().to_json_string();
    text.push('\n');
    write_output(&text, out)
}

fn load_density(path: &Path) -> Result<DensityOperator, Failure> {
    let bytes =
        fs::read(path).map_err(|e| Failure::Usage(format!("cannot read '{}': {e}", path.display())))?;
    let matrix = ComplexMatrix::from_json_slice(&bytes)?;
    DensityOperator::new(matrix).map_err(Into::into)
}

fn cmd_entangle(
    noise: Option<&str>,
    kt: Option<f64>,
    input: Option<&Path>,
    format: OutputFormat,
    seed: Option<u64>,
    out: Option<&Path>,
) -> CmdResult {
    let (rho, label, kt_field) = match (noise, input) {
        (Some(name), None) => {
            let kt = kt.ok_or_else(|| Failure::Usage("entangle needs --kt with --noise".into()))?;
            let spec = NoiseSpec::new(parse_kind(name)?, kt)?;
            (analytic_channel(&spec)?, name.to_string(), Some(kt))
        }
        (None, Some(path)) => (load_density(path)?, path.display().to_string(), None),
        _ => {
            return Err(Failure::Usage(
                "entangle needs either --noise with --kt or --input".into(),
            ))
        }
    };
    if rho.n_qubits() != 2 {
        return Err(Failure::Usage(format!(
            "entanglement report covers two-qubit states; '{label}' has {}",
            rho.n_qubits()
        )));
    }
    let report = match extract_pure(&rho)? {
        Some(psi) => {
            let report = report_pure(&psi)?;
            let numeric = pmax_numeric(&psi, 32, seed.unwrap_or(42))?;
            let closed = report.pmax.expect("pure report carries pmax");
            if (numeric - closed).abs() > 1e-8 {
                return Err(Failure::Internal(format!(
                    "product-overlap search ({}) disagrees with the closed form ({})",
                    format_significant(numeric),
                    format_significant(closed)
                )));
            }
            report
        }
        None => report_mixed(&rho)?,
    };
    let mut rec = Record::new().text("state", &label);
    if let Some(kt) = kt_field {
        rec = rec.number("kappa_t", kt);
    }
    let text = rec
        .number("concurrence", report.concurrence)
        .number("eof", report.eof)
        .number("groverian", report.groverian)
        .optional("pmax", report.pmax)
        .number("ppt_min_eig", report.ppt_min_eig)
        .render(format);
    write_output(&text, out)
}

/// Dominant eigenvector when the state is numerically pure (unit purity to
/// 1e-10), so the report can include the product-overlap measure.
fn extract_pure(rho: &DensityOperator) -> Result<Option<PureState>, Failure> {
    let purity = rho.matrix().mul(rho.matrix()).trace().re;
    if purity < 1.0 - 1e-10 {
        return Ok(None);
    }
    let (_, vecs) = hermitian_eigensystem(rho.matrix())?;
    let amps: Vec<_> = (0..rho.dim()).map(|i| vecs.at(i, 0)).collect();
    Ok(Some(PureState::from_unnormalized(amps).map_err(Failure::from)?))
}

fn cmd_fidelity(
    noise: &str,
    kt: f64,
    angles: Option<(f64, f64)>,
    format: OutputFormat,
    grid: Option<(usize, usize)>,
    out: Option<&Path>,
) -> CmdResult {
    let kind = parse_kind(noise)?;
    let spec = NoiseSpec::new(kind, kt)?;
    let rec = Record::new().text("noise", noise).number("kappa_t", kt);
    let text = match angles {
        Some((theta, phi)) => {
            let rho = analytic_channel(&spec)?;
            let f = fidelity_at(&rho, InputAngles::new(theta, phi)?)?;
            rec.number("theta", theta).number("phi", phi).number("fidelity", f).render(format)
        }
        None => {
            let closed = average_fidelity_closed_form(&spec);
            let quad = if kind == NoiseKind::WSameAxisX {
                eprintln!(
                    "warning: column 'avg_fidelity_quadrature' is not defined for the three-qubit w channel; emitting null"
                );
                None
            } else {
                let (n_theta, n_phi) = grid.unwrap_or((64, 64));
                let rho = analytic_channel(&spec)?;
                Some(average_fidelity(&rho, n_theta, n_phi)?)
            };
            let text = rec
                .optional("avg_fidelity_quadrature", quad)
                .number("avg_fidelity_closed", closed)
                .render(format);
            if let Some(q) = quad {
                if (q - closed).abs() > 1e-8 {
                    write_output(&text, out)?;
                    return Err(Failure::Internal(format!(
                        "quadrature ({}) and closed form ({}) disagree beyond 1e-8",
                        format_significant(q),
                        format_significant(closed)
                    )));
                }
            }
            text
        }
    };
    write_output(&text, out)
}

fn cmd_threshold(noise: &str, format: OutputFormat, out: Option<&Path>) -> CmdResult {
    let kind = parse_kind(noise)?;
    let text = Record::new()
        .text("noise", noise)
        .number("classical_threshold_kt", classical_threshold_kt(kind))
        .render(format);
    write_output(&text, out)
}

fn cmd_verify_decomposition(
    noise: &str,
    kt: f64,
    family: FamilyArg,
    format: OutputFormat,
    out: Option<&Path>,
) -> CmdResult {
    let kind = parse_kind(noise)?;
    let spec = NoiseSpec::new(kind, kt)?;
    let rho = analytic_channel(&spec)?;
    let (family_name, ensemble): (&str, Ensemble) = match family {
        FamilyArg::Optimal => ("optimal", optimal_ensemble(&spec)?),
        FamilyArg::Separable => ("separable", separable_ensemble(&spec)?),
        FamilyArg::General => ("general", wootters_decomposition(&rho)?),
    };
    let (residual, concurrences) = verify_ensemble(&ensemble, &rho)?;
    let mean: f64 = ensemble
        .members
        .iter()
        .zip(&concurrences)
        .map(|((w, _), c)| w * c)
        .sum();
    let mixed = concurrence_mixed(&rho)?;
    let text = Record::new()
        .text("noise", noise)
        .number("kappa_t", kt)
        .text("family", family_name)
        .number("members", ensemble.members.len() as f64)
        .number("residual", residual)
        .number("mean_member_concurrence", mean)
        .number("mixed_concurrence", mixed)
        .render(format);
    write_output(&text, out)?;
    if residual > 1e-10 {
        return Err(Failure::Internal(format!(
            "ensemble does not reconstruct the state: residual {}",
            format_significant(residual)
        )));
    }
    if (mean - mixed).abs() > 1e-8 {
        return Err(Failure::Internal(format!(
            "mean member concurrence {} disagrees with the state's concurrence {}",
            format_significant(mean),
            format_significant(mixed)
        )));
    }
    Ok(())
}
