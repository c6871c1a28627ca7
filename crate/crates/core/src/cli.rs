//! Command-line front end. `run` parses argv, validates every flag, then
//! computes and writes output. Exit codes: 0 success, 1 check failure,
//! 2 usage or input error.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::extremum::inequality_scan;
use crate::fock::{commutator_check, ModeLattice};
use crate::format::{csv_row, transition_csv, transition_svg};
use crate::kinematics::{
    accel_velocity_ratio, four_acceleration, four_momentum, four_velocity, DeviceState, FourVector,
    ParticleKinematics, ThreeVector,
};
use crate::modes::{exponent_routes, phi_mode, Branch, ExponentRoutes, ModeSpec};
use crate::pde::{residual_sweep, SweepConfig};
use crate::transition::{
    classicality_threshold, macro_state_ln_bound, transition_curve, ObjectModel, Spacing,
};
use crate::units::{
    planck_mass, ConstantsReport, PhysicalConstants, UnitContext, ROUNDED_PLANCK_MASS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Commutator deviation accepted by `fock-check`.
pub const FOCK_TOLERANCE: f64 = 1e-12;
/// Slope window accepted by `pde-residual`.
pub const SLOPE_WINDOW: (f64, f64) = (1.8, 2.2);

pub const SCAN_CSV_HEADER: &str = "beta,theta,x,gammaF,bound";
pub const PDE_CSV_HEADER: &str = "t,x,y,z,v0,v1,v2,v3,abs_residual,rel_residual,h";

#[derive(Debug, Parser)]
#[command(
    name = "maxaccel",
    version,
    about = "Maximal-acceleration scalar field toolkit",
    arg_required_else_help = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print physical constants and derived scales.
    Constants(ConstantsArgs),
    /// Four-vectors and a·v/a for given particle and device kinematics.
    Kinematics(KinematicsArgs),
    /// Seeded scan of the lower bound on a·v/a.
    InequalityScan(ScanArgs),
    /// Evaluate one mode function in log-domain form.
    ModeEval(ModeEvalArgs),
    /// Finite-difference residual sweep of the 8-D field equation.
    PdeResidual(PdeArgs),
    /// Many-body suppression curve and classicality threshold.
    Transition(TransitionArgs),
    /// Canonical commutators on a truncated Fock space.
    FockCheck(FockArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Units {
    Si,
    Dimensionless,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum BranchArg {
    Pos,
    Neg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpacingArg {
    Log,
    Linear,
}

#[derive(Debug, Args)]
struct ConstantsArgs {
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct ParticleArgs {
    /// Particle mass (kg in SI units).
    #[arg(long, allow_negative_numbers = true)]
    mass: f64,
    /// Spatial momentum.
    #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
    p: [f64; 3],
    /// Proper acceleration magnitude a.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    aproper: f64,
    /// Spatial part of the four-acceleration.
    #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
    a: [f64; 3],
    /// Device velocity dx/dt.
    #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
    u: [f64; 3],
}

#[derive(Debug, Args)]
struct KinematicsArgs {
    #[command(flatten)]
    particle: ParticleArgs,
    #[arg(long, value_enum, default_value = "si")]
    units: Units,
}

#[derive(Debug, Args)]
struct ScanArgs {
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Write the violations CSV here instead of stdout.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ModeEvalArgs {
    #[command(flatten)]
    particle: ParticleArgs,
    /// Spacetime point (ct, x, y, z).
    #[arg(long, value_parser = parse_vec4, default_value = "0,0,0,0", allow_hyphen_values = true)]
    x: [f64; 4],
    #[arg(long, value_enum, default_value = "pos")]
    branch: BranchArg,
    /// Dimensionless ρ₀; selects dimensionless units.
    #[arg(long)]
    rho0: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
}

#[derive(Debug, Args)]
struct PdeArgs {
    #[arg(long, default_value_t = 1.0)]
    m: f64,
    #[arg(long, default_value_t = 0.1)]
    rho0: f64,
    #[arg(long, default_value_t = 1e-3)]
    h: f64,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.1)]
    margin: f64,
    /// Largest accepted relative residual.
    #[arg(long, default_value_t = 1e-3)]
    tolerance: f64,
    /// Write per-point residuals as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TransitionArgs {
    #[arg(long, default_value_t = 1.0)]
    n_min: f64,
    #[arg(long, default_value_t = 1e26)]
    n_max: f64,
    #[arg(long, default_value_t = 100)]
    points: usize,
    #[arg(long, value_enum, default_value = "log")]
    spacing: SpacingArg,
    #[arg(long, default_value_t = 1.0)]
    alpha: f64,
    #[arg(long, default_value_t = 0.0)]
    accel_ratio: f64,
    #[arg(long, default_value_t = -3.0, allow_negative_numbers = true)]
    cutoff_log10: f64,
    /// Planck mass in kg; fixes G.
    #[arg(long, default_value_t = ROUNDED_PLANCK_MASS)]
    planck_mass: f64,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FockArgs {
    #[arg(long, default_value_t = 3)]
    modes: usize,
    #[arg(long, default_value_t = 4)]
    cutoff: usize,
    #[arg(long, default_value_t = 1.0)]
    cell_volume: f64,
}

fn parse_components<const N: usize>(s: &str) -> std::result::Result<[f64; N], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != N {
        return Err(format!("expected {N} comma-separated numbers, got {s:?}"));
    }
    let mut out = [0.0; N];
    for (slot, p) in out.iter_mut().zip(parts) {
        let v: f64 = p.parse().map_err(|_| format!("not a number: {p:?}"))?;
        if !v.is_finite() {
            return Err(format!("not finite: {p:?}"));
        }
        *slot = v;
    }
    Ok(out)
}

fn parse_vec3(s: &str) -> std::result::Result<[f64; 3], String> {
    parse_components::<3>(s)
}

fn parse_vec4(s: &str) -> std::result::Result<[f64; 4], String> {
    parse_components::<4>(s)
}

/// Failure modes of a subcommand, mapped onto exit codes.
enum Failure {
    Input(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn positive(name: &'static str, v: f64) -> std::result::Result<(), Error> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be positive, got {v}")))
    }
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> std::io::Result<()> {
    let text = serde_json::to_string(value).map_err(std::io::Error::other)?;
    writeln!(out, "{text}")
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let result = match &cli.command {
        Command::Constants(a) => constants(a, out),
        Command::Kinematics(a) => kinematics(a, out),
        Command::InequalityScan(a) => scan(a, out),
        Command::ModeEval(a) => mode_eval(a, out),
        Command::PdeResidual(a) => pde_residual(a, out),
        Command::Transition(a) => transition(a, out),
        Command::FockCheck(a) => fock_check(a, out),
    };
    match result {
        Ok(code) => code,
        Err(Failure::Input(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn constants(a: &ConstantsArgs, out: &mut dyn Write) -> Outcome {
    let ctx = UnitContext::si(PhysicalConstants::default(), a.alpha);
    let report = ConstantsReport::new(&ctx)?;
    json_line(out, &report)?;
    Ok(EXIT_OK)
}

fn particle(p: &ParticleArgs) -> std::result::Result<(ParticleKinematics, DeviceState), Error> {
    let part = ParticleKinematics {
        mass: p.mass,
        momentum3: p.p.into(),
        proper_accel: p.aproper,
        accel3: p.a.into(),
    };
    part.validate()?;
    Ok((part, DeviceState::moving(ThreeVector::from(p.u))))
}

#[derive(Serialize)]
struct KinematicsReport {
    units: &'static str,
    gamma: f64,
    four_velocity: [f64; 4],
    four_acceleration: [f64; 4],
    four_momentum: [f64; 4],
    accel_velocity_ratio: f64,
}

fn kinematics(a: &KinematicsArgs, out: &mut dyn Write) -> Outcome {
    let (part, dev) = particle(&a.particle)?;
    let (c, units) = match a.units {
        Units::Si => (PhysicalConstants::default().c, "si"),
        Units::Dimensionless => (1.0, "dimensionless"),
    };
    let report = KinematicsReport {
        units,
        gamma: dev.gamma(c)?,
        four_velocity: four_velocity(&dev, c)?.to_array(),
        four_acceleration: four_acceleration(&part)?.to_array(),
        four_momentum: four_momentum(&part, c)?.to_array(),
        accel_velocity_ratio: accel_velocity_ratio(&part, &dev, c)?,
    };
    json_line(out, &report)?;
    Ok(EXIT_OK)
}

fn scan(a: &ScanArgs, out: &mut dyn Write) -> Outcome {
    let result = inequality_scan(a.samples, a.seed, a.tolerance)?;
    let mut text = String::from(SCAN_CSV_HEADER);
    text.push('\n');
    for v in &result.violations {
        let s = v.scenario;
        text.push_str(&csv_row(&[s.beta, s.theta, s.x, v.gamma_f, v.bound]));
        text.push('\n');
    }
    match &a.csv {
        Some(path) => std::fs::write(path, &text)?,
        None => out.write_all(text.as_bytes())?,
    }
    Ok(if result.violations.is_empty() {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}

#[derive(Serialize)]
struct ModeReport {
    units: &'static str,
    alpha: f64,
    branch: &'static str,
    log_mag: f64,
    phase: f64,
    support: bool,
    exponent_routes: ExponentRoutes,
}

fn mode_eval(a: &ModeEvalArgs, out: &mut dyn Write) -> Outcome {
    positive("alpha", a.alpha)?;
    let (part, dev) = particle(&a.particle)?;
    let (ctx, units) = match a.rho0 {
        Some(r) => {
            positive("rho0", r)?;
            (
                UnitContext::dimensionless(r).with_alpha(a.alpha),
                "dimensionless",
            )
        }
        None => (UnitContext::si(PhysicalConstants::default(), a.alpha), "si"),
    };
    ctx.validate()?;
    let (branch, name) = match a.branch {
        BranchArg::Pos => (Branch::Positive, "pos"),
        BranchArg::Neg => (Branch::Negative, "neg"),
    };
    let spec = ModeSpec::new(ctx, part, branch);
    let v = four_velocity(&dev, ctx.c())?;
    let amp = phi_mode(&spec, FourVector::from(a.x), v)?;
    let report = ModeReport {
        units,
        alpha: a.alpha,
        branch: name,
        log_mag: amp.log_mag,
        phase: amp.phase,
        support: amp.support,
        exponent_routes: exponent_routes(&spec, &dev)?,
    };
    json_line(out, &report)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct PdeReport<'a> {
    #[serde(flatten)]
    summary: &'a crate::pde::SweepSummary,
    tolerance: f64,
    passed: bool,
}

fn pde_residual(a: &PdeArgs, out: &mut dyn Write) -> Outcome {
    positive("tolerance", a.tolerance)?;
    let sc = SweepConfig {
        mass: a.m,
        rho0: a.rho0,
        h: a.h,
        points: a.points,
        seed: a.seed,
        margin: a.margin,
        ..SweepConfig::default()
    };
    let result = residual_sweep(&sc)?;
    let s = &result.summary;
    let passed = s.max_rel_residual < a.tolerance
        && s.slope_min >= SLOPE_WINDOW.0
        && s.slope_max <= SLOPE_WINDOW.1;
    if let Some(path) = &a.csv {
        let mut text = String::from(PDE_CSV_HEADER);
        text.push('\n');
        for r in &result.rows {
            let mut cells = r.point.to_vec();
            cells.extend([r.abs_residual, r.relative_residual, r.h]);
            text.push_str(&csv_row(&cells));
            text.push('\n');
        }
        std::fs::write(path, text)?;
    }
    json_line(
        out,
        &PdeReport {
            summary: s,
            tolerance: a.tolerance,
            passed,
        },
    )?;
    Ok(if passed { EXIT_OK } else { EXIT_CHECK_FAILED })
}

#[derive(Serialize)]
struct TransitionReport {
    alpha: f64,
    accel_ratio: f64,
    planck_mass: f64,
    nucleon_mass: f64,
    avogadro: f64,
    avogadro_ln_magnitude: f64,
    avogadro_log10_magnitude: f64,
    cutoff_log10: f64,
    threshold_n: f64,
    points: usize,
}

fn transition(a: &TransitionArgs, out: &mut dyn Write) -> Outcome {
    positive("planck-mass", a.planck_mass)?;
    if !(a.cutoff_log10.is_finite() && a.cutoff_log10 < 0.0) {
        return Err(Error::invalid(
            "cutoff-log10",
            format!("must be negative, got {}", a.cutoff_log10),
        )
        .into());
    }
    let constants = PhysicalConstants::default().with_planck_mass(a.planck_mass);
    let ctx = UnitContext::si(constants, a.alpha);
    ctx.validate()?;
    let template = ObjectModel {
        accel_ratio: a.accel_ratio,
        ..ObjectModel::from_context(&ctx, 1.0)
    };
    template.validate()?;
    let spacing = match a.spacing {
        SpacingArg::Log => Spacing::Log,
        SpacingArg::Linear => Spacing::Linear,
    };
    let curve = transition_curve(a.n_min, a.n_max, a.points, spacing, &template, &ctx)?;
    let ln_cutoff = a.cutoff_log10 * std::f64::consts::LN_10;
    let threshold_n = classicality_threshold(&template, &ctx, ln_cutoff)?;
    let avogadro = ObjectModel {
        n_nucleons: constants.avogadro,
        ..template
    };
    let avogadro_ln = macro_state_ln_bound(&avogadro, &ctx)?;

    if let Some(path) = &a.csv {
        std::fs::write(path, transition_csv(&curve))?;
    }
    if let Some(path) = &a.svg {
        std::fs::write(path, transition_svg(&curve, a.cutoff_log10))?;
    }
    let report = TransitionReport {
        alpha: a.alpha,
        accel_ratio: a.accel_ratio,
        planck_mass: planck_mass(&ctx)?,
        nucleon_mass: constants.nucleon_mass,
        avogadro: constants.avogadro,
        avogadro_ln_magnitude: avogadro_ln,
        avogadro_log10_magnitude: avogadro_ln / std::f64::consts::LN_10,
        cutoff_log10: a.cutoff_log10,
        threshold_n,
        points: curve.samples.len(),
    };
    json_line(out, &report)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct FockReport {
    max_deviation: f64,
    subspace_dim: usize,
    modes: usize,
    cutoff: usize,
    cell_volume: f64,
}

fn fock_check(a: &FockArgs, out: &mut dyn Write) -> Outcome {
    let lattice = ModeLattice::line(a.modes, a.cell_volume)?;
    let report = commutator_check(&lattice, a.cutoff)?;
    json_line(
        out,
        &FockReport {
            max_deviation: report.max_deviation,
            subspace_dim: report.subspace_dim,
            modes: a.modes,
            cutoff: a.cutoff,
            cell_volume: a.cell_volume,
        },
    )?;
    Ok(if report.max_deviation < FOCK_TOLERANCE {
        EXIT_OK
    } else {
        EXIT_CHECK_FAILED
    })
}
