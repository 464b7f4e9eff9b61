//! Batch front end: parses configuration, dispatches subcommands, and emits
//! deterministic CSV/JSON artifacts.
//!
//! Point results go to stdout; table artifacts go to `--out` with a
//! `.meta.json` sidecar echoing the resolved parameters. stderr carries
//! structured JSON errors and warnings only, so stdout stays machine-clean.
//! Exit codes: 2 configuration/parse, 3 domain violation, 4 convergence
//! failure.

mod output;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use qmeng_core::engine::{
    efficiency_report, log_spaced_grid, measurement_ledger, sweep_gamma, MeasurementCyclePoint,
};
use qmeng_core::model::{DimensionlessGroups, RawConfig, ALPHA};
use qmeng_core::otto::{maximize_otto_power, otto_ledger, CycleLedger};
use qmeng_core::radiation::{
    gamma_cubature, gamma_paper_estimate, gamma_radial, record_overlap, CutoffSpec, GammaResult,
    Window,
};
use qmeng_core::spin::{pulse_amplitudes, spin_expectations, PulseSpec, Sign};

use output::{csv_line, g17, write_atomic, write_sidecar};

#[derive(Parser)]
#[command(
    name = "qmeng",
    version,
    about = "Spin-1/2 measurement-engine simulator: Otto baseline, pulse stroke, radiated record cost",
    after_help = "Environment: QMENG_THREADS caps the quadrature worker count.\n\
                  Flags override values from --config; see README for file schemas."
)]
struct Cli {
    /// JSON configuration: physical keys {"Bz0","Bz1","By","beta","t0","mass","alpha"}
    /// or a {"dimensionless": {...}} block (not both)
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for file artifacts (created if missing)
    #[arg(long, global = true, default_value = ".", value_name = "DIR")]
    out: PathBuf,

    /// Format for point results on stdout
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Thermal Otto baseline: ledger, efficiency, and the power optimum
    Otto(OttoArgs),
    /// Dump the pulse trajectory (amplitudes and spin expectations) to pulse.csv
    Pulse(PulseArgs),
    /// Measurement cycle: ledger, the three efficiencies, and the record cost
    Measure(MeasureArgs),
    /// Record cost Gamma and overlap: single point, or a grid to gamma_sweep.csv
    Gamma(GammaArgs),
    /// Optimal compression ratio over a gamma grid, to sweep.csv
    Sweep(SweepArgs),
    /// Reproduce the trade-off figures: fig1.csv and fig2.csv
    Figs(SweepArgs),
}

#[derive(Args)]
struct OttoArgs {
    /// Compression ratio Bz(0)/Bz(1) in (0, 1]
    #[arg(long)]
    b: Option<f64>,
    /// Cold-bath polarization p+ - p- in [0, 1]
    #[arg(long)]
    polarization: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Initial {
    Plus,
    Minus,
}

#[derive(Args)]
struct PulseArgs {
    /// Tilt of the pulse axis as cos(theta) in (0, 1]
    #[arg(long)]
    cos_theta: Option<f64>,
    /// Tilt angle theta in radians (alternative to --cos-theta)
    #[arg(long, conflicts_with = "cos_theta")]
    theta: Option<f64>,
    /// Pulse angle omega * t0
    #[arg(long)]
    omega_t0: Option<f64>,
    /// Number of sample intervals over [0, t0]
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    /// Initial basis state
    #[arg(long, value_enum, default_value_t = Initial::Plus)]
    initial: Initial,
}

#[derive(Args)]
struct CutoffArgs {
    /// Ultraviolet cutoff Lambda/(2 omega)
    #[arg(long, default_value_t = 10.0)]
    cutoff_ratio: f64,
    /// Gauss-Legendre points per radial panel (minimum 64)
    #[arg(long, default_value_t = 64)]
    radial_points: usize,
    /// Polar node count on the sphere (even, minimum 32)
    #[arg(long, default_value_t = 32)]
    polar_points: usize,
    /// Azimuthal node count on the sphere (even, minimum 64)
    #[arg(long, default_value_t = 64)]
    azimuth_points: usize,
    /// Switching window for the spectra
    #[arg(long, value_enum, default_value_t = WindowArg::Sharp)]
    window: WindowArg,
    /// Ramp duration for --window smooth-turnon, in units of 1/omega
    #[arg(long)]
    ramp_time: Option<f64>,
    /// Relative tolerance for the node-doubling convergence check
    #[arg(long, default_value_t = 1e-6)]
    rel_tol: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum WindowArg {
    Sharp,
    SmoothTurnon,
}

impl CutoffArgs {
    fn to_spec(&self) -> Result<CutoffSpec, CliError> {
        let window = match self.window {
            WindowArg::Sharp => Window::Sharp,
            WindowArg::SmoothTurnon => {
                let ramp_time = self.ramp_time.ok_or_else(|| {
                    CliError::config("--window smooth-turnon requires --ramp-time")
                })?;
                Window::SmoothTurnon { ramp_time }
            }
        };
        let spec = CutoffSpec {
            lambda_over_2omega: self.cutoff_ratio,
            radial_points: self.radial_points,
            angular_points: (self.polar_points, self.azimuth_points),
            window,
            rel_tol: self.rel_tol,
        };
        spec.validate()?;
        Ok(spec)
    }
}

#[derive(Args)]
struct MeasureArgs {
    /// Compression ratio Bz(0)/Bz(1) in (0, 1]
    #[arg(long)]
    b: Option<f64>,
    /// Tilt of the pulse axis as cos(theta) in (0, 1]
    #[arg(long)]
    cos_theta: Option<f64>,
    /// Tilt angle theta in radians (alternative to --cos-theta)
    #[arg(long, conflicts_with = "cos_theta")]
    theta: Option<f64>,
    /// Pulse angle omega * t0
    #[arg(long)]
    omega_t0: Option<f64>,
    /// Measurement-duration parameter; must equal omega_t0 * cos(theta).
    /// If --omega-t0 is omitted it is derived from this value
    #[arg(long)]
    gamma: Option<f64>,
    /// Cold-bath polarization p+ - p- in [0, 1]
    #[arg(long)]
    polarization: Option<f64>,
    /// Record cost Gamma supplied directly; omitted means: compute it from
    /// the radiation record
    #[arg(long)]
    gamma_value: Option<f64>,
    /// Radiation-coupling scale hbar*omega/(m c^2)
    #[arg(long)]
    rad_scale: Option<f64>,
    #[command(flatten)]
    cutoff: CutoffArgs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Radial,
    Cubature,
    Both,
}

#[derive(Args)]
struct GammaArgs {
    /// Tilt of the pulse axis as cos(theta) in (0, 1]
    #[arg(long)]
    cos_theta: Option<f64>,
    /// Tilt angle theta in radians (alternative to --cos-theta)
    #[arg(long, conflicts_with = "cos_theta")]
    theta: Option<f64>,
    /// Pulse angle omega * t0
    #[arg(long)]
    omega_t0: Option<f64>,
    /// Radiation-coupling scale hbar*omega/(m c^2)
    #[arg(long)]
    rad_scale: Option<f64>,
    /// Integration route
    #[arg(long, value_enum, default_value_t = Method::Radial)]
    method: Method,
    /// Grid of tilt angles theta (radians, comma-separated); any grid flag
    /// switches to sweep mode writing gamma_sweep.csv
    #[arg(long, value_delimiter = ',')]
    theta_grid: Option<Vec<f64>>,
    /// Grid of pulse angles omega * t0 (comma-separated)
    #[arg(long, value_delimiter = ',')]
    omega_t0_grid: Option<Vec<f64>>,
    /// Grid of cutoff ratios Lambda/(2 omega) (comma-separated)
    #[arg(long, value_delimiter = ',')]
    cutoff_grid: Option<Vec<f64>>,
    #[command(flatten)]
    cutoff: CutoffArgs,
}

#[derive(Args)]
struct SweepArgs {
    /// Smallest gamma of the log-spaced grid
    #[arg(long, default_value_t = 0.1)]
    gamma_min: f64,
    /// Largest gamma of the log-spaced grid
    #[arg(long, default_value_t = 1000.0)]
    gamma_max: f64,
    /// Number of grid points
    #[arg(long, default_value_t = 60)]
    count: usize,
    /// Explicit gamma grid (comma-separated); overrides min/max/count
    #[arg(long, value_delimiter = ',')]
    gamma_grid: Option<Vec<f64>>,
}

#[derive(Copy, Clone)]
enum Kind {
    Config,
    Domain,
    Convergence,
    Io,
}

struct CliError {
    kind: Kind,
    message: String,
}

impl CliError {
    fn config(message: impl Into<String>) -> Self {
        Self {
            kind: Kind::Config,
            message: message.into(),
        }
    }

    fn io(err: std::io::Error, what: &str) -> Self {
        Self {
            kind: Kind::Io,
            message: format!("{what}: {err}"),
        }
    }

    fn exit_code(&self) -> u8 {
        match self.kind {
            Kind::Config | Kind::Io => 2,
            Kind::Domain => 3,
            Kind::Convergence => 4,
        }
    }

    fn stderr_json(&self) -> String {
        let kind = match self.kind {
            Kind::Config => "config",
            Kind::Domain => "domain",
            Kind::Convergence => "convergence",
            Kind::Io => "io",
        };
        json!({"error": {"kind": kind, "message": self.message}}).to_string()
    }
}

impl From<qmeng_core::Error> for CliError {
    fn from(err: qmeng_core::Error) -> Self {
        use qmeng_core::Error as E;
        let kind = match err {
            E::Config(_) => Kind::Config,
            E::Domain { .. }
            | E::DegenerateField
            | E::UnsupportedInitialState
            | E::CoordinateSingularity { .. }
            | E::StepTooLarge { .. } => Kind::Domain,
            E::Unconverged { .. } | E::OptimizerFailed { .. } => Kind::Convergence,
        };
        Self {
            kind,
            message: err.to_string(),
        }
    }
}

fn warn(message: &str) {
    eprintln!("{}", json!({"warning": message}));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|()| run(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("{}", err.stderr_json());
            ExitCode::from(err.exit_code())
        }
    }
}

/// QMENG_THREADS caps the rayon worker count; unset leaves the default.
fn init_threads() -> Result<(), CliError> {
    match std::env::var("QMENG_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(()),
        Err(e) => Err(CliError::config(format!("QMENG_THREADS: {e}"))),
        Ok(raw) => {
            let n: usize = raw.parse().map_err(|_| {
                CliError::config(format!(
                    "QMENG_THREADS must be a positive integer, got {raw:?}"
                ))
            })?;
            if n == 0 {
                return Err(CliError::config("QMENG_THREADS must be >= 1"));
            }
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .map_err(|e| CliError::config(format!("thread pool: {e}")))
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let config_groups = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::io(e, &format!("reading {}", path.display())))?;
            Some(RawConfig::parse(&text)?.into_groups()?)
        }
        None => None,
    };
    let ctx = Context {
        out: cli.out,
        format: cli.format,
        config: config_groups,
    };
    match cli.command {
        Command::Otto(args) => run_otto(&ctx, &args),
        Command::Pulse(args) => run_pulse(&ctx, &args),
        Command::Measure(args) => run_measure(&ctx, &args),
        Command::Gamma(args) => run_gamma(&ctx, &args),
        Command::Sweep(args) => run_sweep(&ctx, &args),
        Command::Figs(args) => run_figs(&ctx, &args),
    }
}

struct Context {
    out: PathBuf,
    format: Format,
    config: Option<DimensionlessGroups>,
}

impl Context {
    fn artifact_dir(&self) -> Result<&Path, CliError> {
        fs::create_dir_all(&self.out)
            .map_err(|e| CliError::io(e, &format!("creating {}", self.out.display())))?;
        Ok(&self.out)
    }

    /// Flag value, else config value, else a hard error naming the flag.
    fn resolve(
        &self,
        flag: Option<f64>,
        pick: impl Fn(&DimensionlessGroups) -> f64,
        name: &str,
    ) -> Result<f64, CliError> {
        flag.or(self.config.as_ref().map(pick)).ok_or_else(|| {
            CliError::config(format!(
                "missing --{name} (no flag given and no --config value)"
            ))
        })
    }

    fn resolve_cos_theta(
        &self,
        cos_theta: Option<f64>,
        theta: Option<f64>,
    ) -> Result<f64, CliError> {
        self.resolve(
            cos_theta.or(theta.map(f64::cos)),
            |g| g.cos_theta,
            "cos-theta",
        )
    }

    /// Groups with flag overrides applied on top of the config (if any);
    /// omega and alpha are inherited from the config when present.
    fn merge_groups(
        &self,
        b: f64,
        cos_theta: f64,
        omega_t0: f64,
        polarization: f64,
        rad_scale: f64,
    ) -> Result<DimensionlessGroups, CliError> {
        let groups = DimensionlessGroups {
            b,
            cos_theta,
            omega: self.config.as_ref().map_or(1.0, |g| g.omega),
            omega_t0,
            gamma: omega_t0 * cos_theta,
            polarization,
            rad_scale,
            alpha: self.config.as_ref().map_or(ALPHA, |g| g.alpha),
        };
        groups.validate()?;
        Ok(groups)
    }
}

fn emit_json(value: &serde_json::Value) {
    println!("{value:#}");
}

// ---------------------------------------------------------------- otto ----

const OTTO_CSV_HEADER: &str = "E0,E1,E2,E3,W01,Q12,W23,Q30,efficiency,b_star,power_star";

fn ledger_fields(ledger: &CycleLedger) -> Vec<String> {
    let mut fields: Vec<String> = ledger.node_energies.iter().copied().map(g17).collect();
    fields.extend([
        g17(ledger.w01),
        g17(ledger.q12),
        g17(ledger.w23),
        g17(ledger.q30),
        g17(ledger.efficiency),
    ]);
    fields
}

fn run_otto(ctx: &Context, args: &OttoArgs) -> Result<(), CliError> {
    let b = ctx.resolve(args.b, |g| g.b, "b")?;
    let polarization = ctx.resolve(args.polarization, |g| g.polarization, "polarization")?;
    let ledger = otto_ledger(b, polarization)?;
    let (b_star, power_star) = maximize_otto_power()?;

    match ctx.format {
        Format::Json => {
            let mut value = serde_json::to_value(ledger).expect("ledger serializes");
            value["b_star"] = json!(b_star);
            value["power_star"] = json!(power_star);
            emit_json(&value);
        }
        Format::Csv => {
            let mut fields = ledger_fields(&ledger);
            fields.extend([g17(b_star), g17(power_star)]);
            println!("{OTTO_CSV_HEADER}");
            println!("{}", csv_line(&fields));
        }
    }
    Ok(())
}

// --------------------------------------------------------------- pulse ----

const PULSE_CSV_HEADER: &str = "t,re_psi_plus,im_psi_plus,psi_minus,sx_prime,sy_prime,sz_prime";

fn run_pulse(ctx: &Context, args: &PulseArgs) -> Result<(), CliError> {
    let cos_theta = ctx.resolve_cos_theta(args.cos_theta, args.theta)?;
    let omega_t0 = ctx.resolve(args.omega_t0, |g| g.omega_t0, "omega-t0")?;
    if args.samples < 2 {
        return Err(CliError::config("--samples must be >= 2"));
    }
    let sign = match args.initial {
        Initial::Plus => Sign::Plus,
        Initial::Minus => Sign::Minus,
    };
    // frequencies in units of omega: the time column is omega * t
    let spec = PulseSpec::new(cos_theta, 1.0, omega_t0)?;

    let mut lines = Vec::with_capacity(args.samples + 2);
    lines.push(PULSE_CSV_HEADER.to_string());
    for i in 0..=args.samples {
        let t = omega_t0 * i as f64 / args.samples as f64;
        let amps = pulse_amplitudes(t, &spec)?;
        let (sx, sy, sz) = spin_expectations(t, &spec, sign)?;
        lines.push(csv_line(&[
            g17(t),
            g17(amps.psi_plus.re),
            g17(amps.psi_plus.im),
            g17(amps.psi_minus),
            g17(sx),
            g17(sy),
            g17(sz),
        ]));
    }

    let dir = ctx.artifact_dir()?;
    let path = dir.join("pulse.csv");
    write_atomic(&path, &(lines.join("\n") + "\n"))
        .map_err(|e| CliError::io(e, "writing pulse.csv"))?;
    write_sidecar(
        &path,
        "pulse",
        json!({
            "cos_theta": cos_theta,
            "omega_t0": omega_t0,
            "samples": args.samples,
            "initial": match sign { Sign::Plus => "plus", Sign::Minus => "minus" },
        }),
    )
    .map_err(|e| CliError::io(e, "writing pulse sidecar"))?;
    Ok(())
}

// ------------------------------------------------------------- measure ----

fn run_measure(ctx: &Context, args: &MeasureArgs) -> Result<(), CliError> {
    let b = ctx.resolve(args.b, |g| g.b, "b")?;
    let cos_theta = ctx.resolve_cos_theta(args.cos_theta, args.theta)?;
    let polarization = ctx.resolve(args.polarization, |g| g.polarization, "polarization")?;
    let rad_scale = ctx
        .resolve(args.rad_scale, |g| g.rad_scale, "rad-scale")
        .unwrap_or(1e-3);

    // omega_t0 and gamma are tied by gamma = omega_t0 * cos(theta): accept
    // either, derive the other, reject an inconsistent pair
    let omega_t0 = match (
        args.omega_t0.or(ctx.config.as_ref().map(|g| g.omega_t0)),
        args.gamma,
    ) {
        (Some(wt), Some(gamma)) => {
            let derived = wt * cos_theta;
            if (gamma / derived - 1.0).abs() > 1e-9 {
                return Err(CliError {
                    kind: Kind::Domain,
                    message: format!(
                        "--gamma = {gamma} conflicts with omega_t0 * cos(theta) = {derived}"
                    ),
                });
            }
            wt
        }
        (Some(wt), None) => wt,
        (None, Some(gamma)) => gamma / cos_theta,
        (None, None) => {
            return Err(CliError::config(
                "missing --omega-t0 or --gamma (no flag given and no --config value)",
            ))
        }
    };

    let groups = ctx.merge_groups(b, cos_theta, omega_t0, polarization, rad_scale)?;
    let (gamma_value, gamma_source) = match args.gamma_value {
        Some(value) => {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(CliError {
                    kind: Kind::Domain,
                    message: format!("--gamma-value must be finite and >= 0, got {value}"),
                });
            }
            (value, "supplied")
        }
        None => {
            let cutoff = args.cutoff.to_spec()?;
            (gamma_radial(&groups, &cutoff)?.gamma_value, "computed")
        }
    };

    let point = MeasurementCyclePoint::from_groups(&groups, gamma_value)?;
    let ledger = measurement_ledger(&point)?;
    let report = efficiency_report(&point)?;

    match ctx.format {
        Format::Json => emit_json(&json!({
            "point": point,
            "ledger": ledger,
            "efficiencies": report,
            "gamma_value": gamma_value,
            "overlap": record_overlap(gamma_value),
            "gamma_source": gamma_source,
        })),
        Format::Csv => {
            let header = "b,cos_theta,omega_t0,gamma,polarization,gamma_value,overlap,\
                 eta_otto,eta_q_exact,eta_q_longtime,eta_q_corrected,\
                 E0,E1,E2,E3,W01,Q12,W23,Q30";
            let mut fields = vec![
                g17(point.b),
                g17(point.cos_theta),
                g17(point.omega_t0),
                g17(point.gamma),
                g17(point.polarization),
                g17(gamma_value),
                g17(record_overlap(gamma_value)),
                g17(report.eta_otto),
                g17(report.eta_q_exact),
                g17(report.eta_q_longtime),
                g17(report.eta_q_corrected),
            ];
            fields.extend(ledger.node_energies.iter().copied().map(g17));
            fields.extend([
                g17(ledger.w01),
                g17(ledger.q12),
                g17(ledger.w23),
                g17(ledger.q30),
            ]);
            println!("{header}");
            println!("{}", csv_line(&fields));
        }
    }
    Ok(())
}

// --------------------------------------------------------------- gamma ----

fn gamma_by_method(
    groups: &DimensionlessGroups,
    cutoff: &CutoffSpec,
    method: Method,
) -> Result<serde_json::Value, CliError> {
    let with_estimate = |result: GammaResult| -> serde_json::Value {
        let estimate = gamma_paper_estimate(groups);
        let mut value = serde_json::to_value(result).expect("gamma result serializes");
        value["gamma_order_estimate"] = json!(estimate);
        value["estimate_over_gamma"] = json!(if result.gamma_value > 0.0 {
            estimate / result.gamma_value
        } else {
            f64::NAN
        });
        value
    };
    Ok(match method {
        Method::Radial => with_estimate(gamma_radial(groups, cutoff)?),
        Method::Cubature => with_estimate(gamma_cubature(groups, cutoff)?),
        Method::Both => {
            let radial = gamma_radial(groups, cutoff)?;
            let cubature = gamma_cubature(groups, cutoff)?;
            let rel = if radial.gamma_value != 0.0 {
                (cubature.gamma_value / radial.gamma_value - 1.0).abs()
            } else {
                (cubature.gamma_value - radial.gamma_value).abs()
            };
            json!({
                "radial": with_estimate(radial),
                "cubature": with_estimate(cubature),
                "relative_difference": rel,
            })
        }
    })
}

fn run_gamma(ctx: &Context, args: &GammaArgs) -> Result<(), CliError> {
    let cutoff = args.cutoff.to_spec()?;
    let rad_scale = ctx
        .resolve(args.rad_scale, |g| g.rad_scale, "rad-scale")
        .unwrap_or(1e-3);
    // b and polarization do not enter the record cost; inherit or default
    let b = ctx.config.as_ref().map_or(0.5, |g| g.b);
    let polarization = ctx.config.as_ref().map_or(0.5, |g| g.polarization);

    let sweep_mode =
        args.theta_grid.is_some() || args.omega_t0_grid.is_some() || args.cutoff_grid.is_some();
    if !sweep_mode {
        let cos_theta = ctx.resolve_cos_theta(args.cos_theta, args.theta)?;
        let omega_t0 = ctx.resolve(args.omega_t0, |g| g.omega_t0, "omega-t0")?;
        if omega_t0 < 10.0 {
            warn(&format!(
                "omega_t0 = {omega_t0} is not deep in the long-pulse regime; \
                 the order-of-magnitude estimate column assumes omega_t0 >> 1"
            ));
        }
        let groups = ctx.merge_groups(b, cos_theta, omega_t0, polarization, rad_scale)?;
        match (ctx.format, args.method) {
            (Format::Json, method) => emit_json(&gamma_by_method(&groups, &cutoff, method)?),
            (Format::Csv, Method::Both) => {
                return Err(CliError::config(
                    "--format csv emits one result row; use --format json with --method both",
                ))
            }
            (Format::Csv, method) => {
                let result = match method {
                    Method::Radial => gamma_radial(&groups, &cutoff)?,
                    Method::Cubature => gamma_cubature(&groups, &cutoff)?,
                    Method::Both => unreachable!(),
                };
                println!("gamma,overlap,E_larmor,E_record,quad_error,gamma_order_estimate");
                println!(
                    "{}",
                    csv_line(&[
                        g17(result.gamma_value),
                        g17(result.overlap),
                        g17(result.radiated_energy_larmor),
                        g17(result.radiated_energy_record),
                        g17(result.quadrature_error_estimate),
                        g17(gamma_paper_estimate(&groups)),
                    ])
                );
            }
        }
        return Ok(());
    }

    // sweep mode: cartesian product of the grids (singletons where no grid
    // was given)
    let thetas: Vec<f64> = match &args.theta_grid {
        Some(grid) => grid.clone(),
        None => vec![ctx.resolve_cos_theta(args.cos_theta, args.theta)?.acos()],
    };
    let omega_t0s: Vec<f64> = match &args.omega_t0_grid {
        Some(grid) => grid.clone(),
        None => vec![ctx.resolve(args.omega_t0, |g| g.omega_t0, "omega-t0")?],
    };
    let ratios: Vec<f64> = match &args.cutoff_grid {
        Some(grid) => grid.clone(),
        None => vec![cutoff.lambda_over_2omega],
    };

    let mut lines =
        vec!["theta,omega_t0,lambda_ratio,gamma,overlap,E_larmor_over_E_record".to_string()];
    for &theta in &thetas {
        for &omega_t0 in &omega_t0s {
            for &ratio in &ratios {
                let groups = ctx.merge_groups(b, theta.cos(), omega_t0, polarization, rad_scale)?;
                let spec = CutoffSpec {
                    lambda_over_2omega: ratio,
                    ..cutoff
                };
                let result = gamma_radial(&groups, &spec)?;
                let energy_ratio = result.radiated_energy_larmor / result.radiated_energy_record;
                lines.push(csv_line(&[
                    g17(theta),
                    g17(omega_t0),
                    g17(ratio),
                    g17(result.gamma_value),
                    g17(result.overlap),
                    g17(energy_ratio),
                ]));
            }
        }
    }

    let dir = ctx.artifact_dir()?;
    let path = dir.join("gamma_sweep.csv");
    write_atomic(&path, &(lines.join("\n") + "\n"))
        .map_err(|e| CliError::io(e, "writing gamma_sweep.csv"))?;
    write_sidecar(
        &path,
        "gamma",
        json!({
            "theta_grid": thetas,
            "omega_t0_grid": omega_t0s,
            "cutoff_grid": ratios,
            "rad_scale": rad_scale,
            "cutoff": cutoff,
        }),
    )
    .map_err(|e| CliError::io(e, "writing gamma sidecar"))?;
    Ok(())
}

// --------------------------------------------------------------- sweep ----

fn sweep_grid(args: &SweepArgs) -> Result<Vec<f64>, CliError> {
    match &args.gamma_grid {
        Some(grid) => {
            if grid.is_empty() || grid.windows(2).any(|p| p[1] <= p[0]) || grid[0] <= 0.0 {
                return Err(CliError::config(
                    "--gamma-grid must be positive and strictly increasing",
                ));
            }
            Ok(grid.clone())
        }
        None => Ok(log_spaced_grid(args.gamma_min, args.gamma_max, args.count)?),
    }
}

fn optimized_rows(grid: &[f64]) -> Vec<qmeng_core::engine::SweepRow> {
    sweep_gamma(grid)
        .into_iter()
        .filter_map(|(gamma, row)| match row {
            Ok(row) => Some(row),
            Err(err) => {
                warn(&format!("gamma = {gamma}: {err}; row skipped"));
                None
            }
        })
        .collect()
}

fn run_sweep(ctx: &Context, args: &SweepArgs) -> Result<(), CliError> {
    let grid = sweep_grid(args)?;
    let mut lines = vec!["gamma,b_star,power_star,b_star_sqrt_gamma,power_star_gamma".to_string()];
    for row in optimized_rows(&grid) {
        lines.push(csv_line(&[
            g17(row.gamma),
            g17(row.b_star),
            g17(row.power_star),
            g17(row.b_star_sqrt_gamma),
            g17(row.power_star_gamma),
        ]));
    }
    let dir = ctx.artifact_dir()?;
    let path = dir.join("sweep.csv");
    write_atomic(&path, &(lines.join("\n") + "\n"))
        .map_err(|e| CliError::io(e, "writing sweep.csv"))?;
    write_sidecar(&path, "sweep", json!({"gamma_grid": grid}))
        .map_err(|e| CliError::io(e, "writing sweep sidecar"))?;
    Ok(())
}

// ---------------------------------------------------------------- figs ----

fn run_figs(ctx: &Context, args: &SweepArgs) -> Result<(), CliError> {
    let grid = sweep_grid(args)?;
    let rows = optimized_rows(&grid);

    let mut fig1 = vec!["gamma,b_star,ref_inv_sqrt_gamma".to_string()];
    let mut fig2 = vec!["gamma,power_star_over_Pmax,ref_inv_gamma".to_string()];
    for row in &rows {
        fig1.push(csv_line(&[
            g17(row.gamma),
            g17(row.b_star),
            g17(1.0 / row.gamma.sqrt()),
        ]));
        fig2.push(csv_line(&[
            g17(row.gamma),
            g17(row.power_star),
            g17(1.0 / row.gamma),
        ]));
    }

    let dir = ctx.artifact_dir()?;
    for (name, lines) in [("fig1.csv", fig1), ("fig2.csv", fig2)] {
        let path = dir.join(name);
        write_atomic(&path, &(lines.join("\n") + "\n"))
            .map_err(|e| CliError::io(e, &format!("writing {name}")))?;
        write_sidecar(&path, "figs", json!({"gamma_grid": grid}))
            .map_err(|e| CliError::io(e, &format!("writing {name} sidecar")))?;
    }
    Ok(())
}
