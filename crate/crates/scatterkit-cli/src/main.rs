//! scatterkit command-line front-end.
//!
//! Subcommands wire the library stages together: `simulate` runs the
//! single-bounce sweep for a scene/material pair, `calibrate` removes the
//! sounder hardware response from a raw capture, `fit` grid-searches model
//! parameters against measured angular data, `hybrid` distills BK physics
//! into an ER-form lookup table, and `validate-metal` runs the specular-only
//! plate check. Every command writes plot-ready CSV plus a `run_manifest.json`
//! reproducibility record.
//!
//! Exit codes: 0 success, 2 input/schema error, 3 simulation error,
//! 4 calibration error. `SCATTERKIT_THREADS` caps internal parallelism.

mod manifest;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use manifest::RunManifest;
use scatterkit::config;
use scatterkit::csvio;
use scatterkit::fitting::{grid_search_fit, hybrid_distill, FitConfig, FitOptions};
use scatterkit::pdp::back_to_back_calibrate;
use scatterkit::raytracer::{
    angular_spectra, rmse_spectra, simulate, simulate_metal_plate, ScatterModel, SimOptions,
};
use scatterkit::scattering::{GeometricFactor, MaterialParams, Polarization, RoughnessForm};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "scatterkit",
    version,
    about = "Diffuse-scattering simulation and parameterization toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate the scattering sweep for a scene/material pair.
    Simulate(SimulateArgs),
    /// Back-to-back calibrate a raw frequency response into a PDP.
    Calibrate(CalibrateArgs),
    /// Grid-search model parameters against measured angular data.
    Fit(FitArgs),
    /// Distill BK parameters into an ER-form (S, alpha, theta_p) table.
    Hybrid(HybridArgs),
    /// Specular-only metal-plate validation sweep.
    ValidateMetal(ValidateMetalArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Lambertian,
    Directive,
    Backscatter,
    Bk,
}

impl From<ModelArg> for ScatterModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Lambertian => ScatterModel::Lambertian,
            ModelArg::Directive => ScatterModel::Directive,
            ModelArg::Backscatter => ScatterModel::Backscatter,
            ModelArg::Bk => ScatterModel::Bk,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FactorArg {
    Beckmann,
    Ogilvy,
}

impl From<FactorArg> for GeometricFactor {
    fn from(f: FactorArg) -> Self {
        match f {
            FactorArg::Beckmann => GeometricFactor::Beckmann,
            FactorArg::Ogilvy => GeometricFactor::Ogilvy,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PolarizationArg {
    Te,
    Tm,
    Average,
}

impl From<PolarizationArg> for Polarization {
    fn from(p: PolarizationArg) -> Self {
        match p {
            PolarizationArg::Te => Polarization::Te,
            PolarizationArg::Tm => Polarization::Tm,
            PolarizationArg::Average => Polarization::Average,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RoughnessFormArg {
    Consistent,
    AsPrinted,
}

impl From<RoughnessFormArg> for RoughnessForm {
    fn from(r: RoughnessFormArg) -> Self {
        match r {
            RoughnessFormArg::Consistent => RoughnessForm::Consistent,
            RoughnessFormArg::AsPrinted => RoughnessForm::AsPrinted,
        }
    }
}

/// PDP-processing knobs shared by the simulation-driven commands.
#[derive(Debug, Args)]
struct ProcessingArgs {
    /// Threshold below the PDP peak, dB.
    #[arg(long, default_value_t = 30.0)]
    threshold_db: f64,
    /// Window half-width around the PDP peak, ns.
    #[arg(long, default_value_t = 20.0)]
    window_ns: f64,
    /// PDP bin width, ps.
    #[arg(long, default_value_t = 650.0)]
    resolution_ps: f64,
    /// PDP span, ns.
    #[arg(long, default_value_t = 100.0)]
    span_ns: f64,
}

#[derive(Debug, Args)]
struct SimModelArgs {
    /// Diffuse scattering model.
    #[arg(long, value_enum)]
    model: ModelArg,
    /// BK geometric factor.
    #[arg(long, value_enum, default_value_t = FactorArg::Beckmann)]
    factor: FactorArg,
    /// Fresnel polarization convention.
    #[arg(long, value_enum, default_value_t = PolarizationArg::Te)]
    polarization: PolarizationArg,
    /// Rayleigh reduction-factor form.
    #[arg(long, value_enum, default_value_t = RoughnessFormArg::Consistent)]
    roughness_form: RoughnessFormArg,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    /// Scene config (TOML).
    #[arg(long)]
    scene: PathBuf,
    /// Material config (TOML).
    #[arg(long)]
    material: PathBuf,
    #[command(flatten)]
    model: SimModelArgs,
    #[command(flatten)]
    processing: ProcessingArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct CalibrateArgs {
    /// Raw captured frequency response (CSV).
    #[arg(long)]
    raw: PathBuf,
    /// Cable-through reference response (CSV).
    #[arg(long)]
    reference: PathBuf,
    /// Output PDP path (CSV).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FitArgs {
    /// Fit config (TOML) naming the model, scene file, and grids.
    #[arg(long)]
    config: PathBuf,
    /// Measured angular dataset (CSV).
    #[arg(long)]
    measured: PathBuf,
    #[command(flatten)]
    processing: ProcessingArgs,
    /// Override the epsilon_r grid, comma-separated.
    #[arg(long, value_delimiter = ',')]
    epsilon_r: Option<Vec<f64>>,
    /// Override the h_rms grid (mm), comma-separated.
    #[arg(long, value_delimiter = ',')]
    h_rms_mm: Option<Vec<f64>>,
    /// Override the correlation-length grid (mm), comma-separated.
    #[arg(long, value_delimiter = ',')]
    corr_length_mm: Option<Vec<f64>>,
    /// Override the alpha_R grid, comma-separated.
    #[arg(long, value_delimiter = ',')]
    alpha_r: Option<Vec<u32>>,
    /// Override the alpha_i grid, comma-separated.
    #[arg(long, value_delimiter = ',')]
    alpha_i: Option<Vec<u32>>,
    /// Override the lambda grid, comma-separated.
    #[arg(long, value_delimiter = ',')]
    lambda: Option<Vec<f64>>,
    /// BK geometric factor.
    #[arg(long, value_enum, default_value_t = FactorArg::Beckmann)]
    factor: FactorArg,
    /// Fresnel polarization convention.
    #[arg(long, value_enum, default_value_t = PolarizationArg::Te)]
    polarization: PolarizationArg,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct HybridArgs {
    /// Relative permittivity of the surface.
    #[arg(long)]
    epsilon_r: f64,
    /// RMS roughness height, mm.
    #[arg(long)]
    h_rms_mm: f64,
    /// Correlation length, mm.
    #[arg(long)]
    corr_length_mm: f64,
    /// Carrier frequency, GHz.
    #[arg(long)]
    frequency_ghz: f64,
    /// Incidence angles in degrees, comma-separated.
    #[arg(long, value_delimiter = ',')]
    angles: Vec<f64>,
    /// BK geometric factor (Ogilvy keeps the distilled S monotone in the
    /// incidence angle).
    #[arg(long, value_enum, default_value_t = FactorArg::Ogilvy)]
    factor: FactorArg,
    /// Fresnel polarization convention.
    #[arg(long, value_enum, default_value_t = PolarizationArg::Te)]
    polarization: PolarizationArg,
    /// Output table path (CSV).
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct ValidateMetalArgs {
    /// Scene config (TOML); the wall is treated as a perfect reflector.
    #[arg(long)]
    scene: PathBuf,
    /// Measured angular dataset to score against (CSV, optional).
    #[arg(long)]
    measured: Option<PathBuf>,
    #[command(flatten)]
    processing: ProcessingArgs,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

// ---------------------------------------------------------------------------
// Exit-code plumbing
// ---------------------------------------------------------------------------

const EXIT_INPUT: u8 = 2;
const EXIT_SIMULATION: u8 = 3;
const EXIT_CALIBRATION: u8 = 4;

fn exit_code_for(e: &scatterkit::Error) -> u8 {
    use scatterkit::Error::*;
    match e {
        InvalidScene(_) | Parameter(_) | Alignment(_) | Parse { .. } | Schema(_) | Io(_)
        | Csv(_) => EXIT_INPUT,
        Geometry(_) | SeriesNonConvergence { .. } | SpanExceeded { .. } => EXIT_SIMULATION,
        CalibrationFloor { .. } | EmptyProfile(_) => EXIT_CALIBRATION,
    }
}

struct CliError {
    code: u8,
    message: String,
}

type CliResult<T> = Result<T, CliError>;

trait IntoCliResult<T> {
    fn or_exit(self, default_code: u8) -> CliResult<T>;
}

impl<T> IntoCliResult<T> for Result<T, scatterkit::Error> {
    fn or_exit(self, _default_code: u8) -> CliResult<T> {
        self.map_err(|e| CliError {
            code: exit_code_for(&e),
            message: e.to_string(),
        })
    }
}

impl<T> IntoCliResult<T> for anyhow::Result<T> {
    fn or_exit(self, default_code: u8) -> CliResult<T> {
        self.map_err(|e| CliError {
            code: default_code,
            message: format!("{e:#}"),
        })
    }
}

fn ensure_out_dir(dir: &Path) -> CliResult<()> {
    std::fs::create_dir_all(dir)
        .with_context(|| format!("creating output directory {}", dir.display()))
        .or_exit(EXIT_INPUT)
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("SCATTERKIT_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Simulate(args) => cmd_simulate(args),
        Command::Calibrate(args) => cmd_calibrate(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Hybrid(args) => cmd_hybrid(args),
        Command::ValidateMetal(args) => cmd_validate_metal(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn sim_options(model: &SimModelArgs, processing: &ProcessingArgs) -> SimOptions {
    SimOptions {
        factor: model.factor.into(),
        polarization: model.polarization.into(),
        roughness_form: model.roughness_form.into(),
        resolution_s: processing.resolution_ps * 1e-12,
        span_s: processing.span_ns * 1e-9,
    }
}

fn record_processing(m: &mut RunManifest, p: &ProcessingArgs) {
    m.option("threshold_db", p.threshold_db);
    m.option("window_ns", p.window_ns);
    m.option("resolution_ps", p.resolution_ps);
    m.option("span_ns", p.span_ns);
}

fn cmd_simulate(args: SimulateArgs) -> CliResult<()> {
    let scene = config::load_scene(&args.scene).or_exit(EXIT_INPUT)?;
    let material = config::load_material(&args.material).or_exit(EXIT_INPUT)?;
    let model: ScatterModel = args.model.model.into();
    let opts = sim_options(&args.model, &args.processing);

    let sim = simulate(&scene, &material, model, &opts).or_exit(EXIT_SIMULATION)?;
    let spectra = angular_spectra(&sim, args.processing.threshold_db, args.processing.window_ns)
        .or_exit(EXIT_SIMULATION)?;

    ensure_out_dir(&args.out)?;
    let mut man = RunManifest::new("simulate");
    man.option("model", model);
    man.option("factor", format!("{:?}", opts.factor).to_lowercase());
    man.option(
        "polarization",
        format!("{:?}", opts.polarization).to_lowercase(),
    );
    man.option(
        "roughness_form",
        format!("{:?}", opts.roughness_form).to_lowercase(),
    );
    record_processing(&mut man, &args.processing);
    man.input(&args.scene).or_exit(EXIT_INPUT)?;
    man.input(&args.material).or_exit(EXIT_INPUT)?;

    let angular_path = args.out.join("angular.csv");
    csvio::write_angular(&spectra, &angular_path).or_exit(EXIT_INPUT)?;
    man.output(&angular_path);
    for (i, rx) in sim.per_rx.iter().enumerate() {
        let pdp_path = args.out.join(format!("pdp_rx{i:02}_{}.csv", rx.label));
        csvio::write_pdp(&rx.pdp, &pdp_path).or_exit(EXIT_INPUT)?;
        man.output(&pdp_path);
    }
    man.write(&args.out).or_exit(EXIT_INPUT)?;
    println!(
        "simulated {} rx positions ({} model) -> {}",
        sim.per_rx.len(),
        model,
        angular_path.display()
    );
    Ok(())
}

fn cmd_calibrate(args: CalibrateArgs) -> CliResult<()> {
    let raw = csvio::read_freqresp(&args.raw).or_exit(EXIT_INPUT)?;
    let reference = csvio::read_freqresp(&args.reference).or_exit(EXIT_INPUT)?;
    let pdp = back_to_back_calibrate(&raw, &reference).or_exit(EXIT_CALIBRATION)?;

    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            ensure_out_dir(dir)?;
        }
    }
    csvio::write_pdp(&pdp, &args.out).or_exit(EXIT_INPUT)?;

    let mut man = RunManifest::new("calibrate");
    man.input(&args.raw).or_exit(EXIT_INPUT)?;
    man.input(&args.reference).or_exit(EXIT_INPUT)?;
    man.output(&args.out);
    let man_dir = args
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    man.write(man_dir).or_exit(EXIT_INPUT)?;
    println!("calibrated PDP ({} bins) -> {}", pdp.powers.len(), args.out.display());
    Ok(())
}

fn cmd_fit(args: FitArgs) -> CliResult<()> {
    let fit_file = config::load_fit(&args.config).or_exit(EXIT_INPUT)?;
    let scene_path = fit_file.scene_path(&args.config);
    let scene = config::load_scene(&scene_path).or_exit(EXIT_INPUT)?;
    let measured = csvio::read_angular(&args.measured).or_exit(EXIT_INPUT)?;

    let base = fit_file.build();
    let grids = FitConfig {
        model: base.model,
        epsilon_r: args.epsilon_r.unwrap_or(base.epsilon_r),
        h_rms_mm: args.h_rms_mm.unwrap_or(base.h_rms_mm),
        corr_length_t_mm: args.corr_length_mm.unwrap_or(base.corr_length_t_mm),
        alpha_r: args.alpha_r.unwrap_or(base.alpha_r),
        alpha_i: args.alpha_i.unwrap_or(base.alpha_i),
        lambda_mix: args.lambda.unwrap_or(base.lambda_mix),
    };
    let opts = FitOptions {
        sim: SimOptions {
            factor: args.factor.into(),
            polarization: args.polarization.into(),
            roughness_form: RoughnessForm::Consistent,
            resolution_s: args.processing.resolution_ps * 1e-12,
            span_s: args.processing.span_ns * 1e-9,
        },
        threshold_db: args.processing.threshold_db,
        window_ns: args.processing.window_ns,
    };

    let fit = grid_search_fit(&scene, &measured, &grids, &opts).or_exit(EXIT_SIMULATION)?;

    ensure_out_dir(&args.out)?;
    let fit_path = args.out.join("fit_result.csv");
    let trace_path = args.out.join("trace.csv");
    csvio::write_fit_result(&fit, &fit_path).or_exit(EXIT_INPUT)?;
    csvio::write_trace(&fit.trace, &trace_path).or_exit(EXIT_INPUT)?;

    let mut man = RunManifest::new("fit");
    man.option("model", grids.model);
    man.option("factor", format!("{:?}", opts.sim.factor).to_lowercase());
    man.option("candidates", fit.trace.len());
    record_processing(&mut man, &args.processing);
    man.input(&args.config).or_exit(EXIT_INPUT)?;
    man.input(&scene_path).or_exit(EXIT_INPUT)?;
    man.input(&args.measured).or_exit(EXIT_INPUT)?;
    man.output(&fit_path);
    man.output(&trace_path);
    man.write(&args.out).or_exit(EXIT_INPUT)?;

    println!(
        "best: epsilon_r={} h_rms_mm={} corr_length_t_mm={} alpha_r={} alpha_i={} lambda={} smape={:.6} ({} candidates)",
        fit.best.epsilon_r,
        fit.best.h_rms_mm,
        fit.best.corr_length_t_mm,
        fit.best.alpha_r,
        fit.best.alpha_i,
        fit.best.lambda_mix,
        fit.smape,
        fit.trace.len()
    );
    Ok(())
}

fn cmd_hybrid(args: HybridArgs) -> CliResult<()> {
    let params = MaterialParams {
        epsilon_r: args.epsilon_r,
        h_rms_mm: args.h_rms_mm,
        corr_length_t_mm: args.corr_length_mm,
        ..Default::default()
    };
    let entries = hybrid_distill(
        &params,
        args.frequency_ghz * 1e9,
        &args.angles,
        args.factor.into(),
        args.polarization.into(),
    )
    .or_exit(EXIT_SIMULATION)?;

    if let Some(dir) = args.out.parent() {
        if !dir.as_os_str().is_empty() {
            ensure_out_dir(dir)?;
        }
    }
    csvio::write_hybrid_table(&entries, &args.out).or_exit(EXIT_INPUT)?;

    let warnings = entries.iter().filter(|e| e.degenerate).count();
    let mut man = RunManifest::new("hybrid");
    man.option("epsilon_r", args.epsilon_r);
    man.option("h_rms_mm", args.h_rms_mm);
    man.option("corr_length_mm", args.corr_length_mm);
    man.option("frequency_ghz", args.frequency_ghz);
    man.option("factor", format!("{:?}", GeometricFactor::from(args.factor)).to_lowercase());
    man.option("warnings", warnings);
    man.output(&args.out);
    let man_dir = args
        .out
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    man.write(man_dir).or_exit(EXIT_INPUT)?;

    for e in &entries {
        println!(
            "theta_i={:>5.1} deg: s_eff={:.6} alpha={} theta_p={:.1} deg (fit smape {:.4}{})",
            e.theta_i_deg,
            e.s_eff,
            e.alpha_eff,
            e.theta_p_deg,
            e.fit_smape,
            if e.degenerate { ", flat pattern" } else { "" }
        );
    }
    println!("{} rows -> {} ({} warnings)", entries.len(), args.out.display(), warnings);
    Ok(())
}

fn cmd_validate_metal(args: ValidateMetalArgs) -> CliResult<()> {
    let scene = config::load_scene(&args.scene).or_exit(EXIT_INPUT)?;
    let opts = SimOptions {
        resolution_s: args.processing.resolution_ps * 1e-12,
        span_s: args.processing.span_ns * 1e-9,
        ..SimOptions::default()
    };
    let sim = simulate_metal_plate(&scene, &opts).or_exit(EXIT_SIMULATION)?;
    let spectra = angular_spectra(&sim, args.processing.threshold_db, args.processing.window_ns)
        .or_exit(EXIT_SIMULATION)?;

    ensure_out_dir(&args.out)?;
    let spectrum_path = args.out.join("metal_angular.csv");
    csvio::write_angular(&spectra, &spectrum_path).or_exit(EXIT_INPUT)?;

    let mut man = RunManifest::new("validate-metal");
    record_processing(&mut man, &args.processing);
    man.input(&args.scene).or_exit(EXIT_INPUT)?;
    man.output(&spectrum_path);

    if let Some(measured_path) = &args.measured {
        let measured = csvio::read_angular(measured_path).or_exit(EXIT_INPUT)?;
        let rmse = rmse_spectra(&measured, &spectra).or_exit(EXIT_INPUT)?;
        man.input(measured_path).or_exit(EXIT_INPUT)?;
        man.option("rmse_db", rmse);
        println!("RMSE vs measured: {rmse:.4} dB");
    }
    man.write(&args.out).or_exit(EXIT_INPUT)?;
    println!(
        "specular-only spectrum over {} rx positions -> {}",
        spectra.entries.len(),
        spectrum_path.display()
    );
    Ok(())
}
