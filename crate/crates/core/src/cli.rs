//! Command-line front end: flag/config-file parsing, dispatch to the
//! solvers and sweeps, and line-oriented `key = value` reporting.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! failure, 3 validation failure.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::analytic;
use crate::error::{Error, Result};
use crate::liouville::{
    build_liouvillian, evolve, steady_state, SteadyStateReport, COMPOSITE_DIM_CAP, DEFAULT_TOL,
    N_B_CAP,
};
use crate::model::{
    build_heff, collapse_channels, linearize, membrane_preset, RwaStatus, SystemParams,
};
use crate::observables;
use crate::quantum::{DensityMatrix, Truncation};
use crate::sweep::{figure_recipe, parse_sweep_spec, render_svg, run_sweep, write_csv, Figure};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Units {
    /// All rates as multiples of the cavity decay rate (the default).
    KappaUnits,
    /// All rates in hertz; normalized internally by kappa.
    Hertz,
}

#[derive(Debug, Parser)]
#[command(
    name = "phonon-blockade",
    version,
    about = "Steady-state simulator for phonon blockade in a quadratically coupled optomechanical system"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Photon-two-phonon coupling g.
    #[arg(long = "g", global = true)]
    g: Option<f64>,
    /// Cavity decay rate kappa.
    #[arg(long = "kappa", global = true)]
    kappa: Option<f64>,
    /// Mechanical decay rate gamma.
    #[arg(long = "gamma", global = true)]
    gamma: Option<f64>,
    /// Mechanical pump amplitude epsilon.
    #[arg(long = "epsilon", global = true)]
    epsilon: Option<f64>,
    /// Pump detuning Delta_p.
    #[arg(long = "delta-p", global = true)]
    delta_p: Option<f64>,
    /// Thermal phonon occupation of the mechanical bath.
    #[arg(long = "n-th", global = true)]
    n_th: Option<f64>,
    /// Expert override for the cavity detuning term (default 2 Delta_p).
    #[arg(long = "cavity-detuning", global = true)]
    cavity_detuning: Option<f64>,
    /// Photon Fock cutoff.
    #[arg(long = "na", global = true)]
    na: Option<usize>,
    /// Phonon Fock cutoff.
    #[arg(long = "nb", global = true)]
    nb: Option<usize>,
    /// Steady-state residual tolerance.
    #[arg(long = "tol", global = true)]
    tol: Option<f64>,
    /// Output directory for CSV/SVG files.
    #[arg(long = "outdir", global = true)]
    outdir: Option<PathBuf>,
    /// Input units: `kappa` (rates as multiples of kappa) or `hertz`.
    #[arg(long = "units", global = true)]
    units: Option<String>,
    /// Cap on sweep parallelism.
    #[arg(long = "jobs", global = true)]
    jobs: Option<usize>,
    /// Named parameter preset (`membrane`).
    #[arg(long = "preset", global = true)]
    preset: Option<String>,
    /// Plain-text `key = value` configuration file.
    #[arg(long = "config", global = true)]
    config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one steady state and report its observables.
    Solve,
    /// Run a sweep described by a spec file.
    Sweep { specfile: PathBuf },
    /// Reproduce one of the reference figures (2-6).
    Figure { which: String },
    /// Evaluate the closed-form expressions at the configured parameters.
    Analytic,
    /// Run the full property suite and report pass/fail per check.
    Validate,
}

/// Fully resolved run configuration (defaults, then config file, then
/// flags).
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    pub truncation: Truncation,
    pub tol: f64,
    pub outdir: PathBuf,
    pub units: Units,
    pub jobs: Option<usize>,
    pub preset_membrane: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            params: SystemParams::baseline(),
            truncation: Truncation::new(3, 10).expect("static size"),
            tol: DEFAULT_TOL,
            outdir: PathBuf::from("."),
            units: Units::KappaUnits,
            jobs: None,
            preset_membrane: false,
        }
    }
}

fn parse_units(s: &str) -> Result<Units> {
    match s {
        "kappa" | "kappa-units" => Ok(Units::KappaUnits),
        "hertz" | "hz" => Ok(Units::Hertz),
        other => Err(Error::InvalidParameter(format!(
            "unknown units `{other}` (expected `kappa` or `hertz`)"
        ))),
    }
}

/// Applies a `key = value` config file onto `cfg`. Unknown keys are errors.
fn apply_config_file(cfg: &mut RunConfig, path: &Path) -> Result<()> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
    let mut n_a = cfg.truncation.n_a;
    let mut n_b = cfg.truncation.n_b;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Error::InvalidParameter(format!(
                "{}:{}: expected `key = value`",
                path.display(),
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| {
            Error::InvalidParameter(format!(
                "{}:{}: bad {what} `{value}`",
                path.display(),
                lineno + 1
            ))
        };
        let parse_f64 = |v: &str| v.parse::<f64>().map_err(|_| bad("number"));
        match key {
            "g" => cfg.params.g = parse_f64(value)?,
            "kappa" => cfg.params.kappa = parse_f64(value)?,
            "gamma" => cfg.params.gamma = parse_f64(value)?,
            "epsilon" => cfg.params.epsilon = parse_f64(value)?,
            "delta_p" => cfg.params.delta_p = parse_f64(value)?,
            "n_th" => cfg.params.n_th = parse_f64(value)?,
            "cavity_detuning" => cfg.params.cavity_detuning = Some(parse_f64(value)?),
            "na" => n_a = value.parse().map_err(|_| bad("integer"))?,
            "nb" => n_b = value.parse().map_err(|_| bad("integer"))?,
            "tol" => cfg.tol = parse_f64(value)?,
            "outdir" => cfg.outdir = PathBuf::from(value),
            "units" => cfg.units = parse_units(value)?,
            "jobs" => cfg.jobs = Some(value.parse().map_err(|_| bad("integer"))?),
            other => {
                return Err(Error::InvalidParameter(format!(
                    "{}:{}: unknown config key `{other}`",
                    path.display(),
                    lineno + 1
                )))
            }
        }
    }
    cfg.truncation = Truncation::new(n_a, n_b)?;
    Ok(())
}

/// Loads the experimental preset: physical numbers in hertz, linearized to
/// kappa units, with the thermal occupation from the quoted temperature.
fn apply_membrane_preset(cfg: &mut RunConfig) -> Result<()> {
    let preset = membrane_preset();
    let (_alpha, g_eff) = linearize(&preset.physical)?;
    let kappa = preset.physical.kappa;
    cfg.params.g = g_eff / kappa;
    cfg.params.kappa = 1.0;
    cfg.params.gamma = preset.gamma / kappa;
    cfg.params.delta_p = preset.physical.delta_p() / kappa;
    cfg.params.n_th = analytic::thermal_occupation(preset.physical.omega_m, preset.temperature_k);
    cfg.preset_membrane = true;
    Ok(())
}

fn resolve_config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    if let Some(preset) = &cli.preset {
        match preset.as_str() {
            "membrane" => apply_membrane_preset(&mut cfg)?,
            other => {
                return Err(Error::InvalidParameter(format!("unknown preset `{other}`")))
            }
        }
    }
    if let Some(path) = &cli.config {
        apply_config_file(&mut cfg, path)?;
    }
    if let Some(v) = cli.g {
        cfg.params.g = v;
    }
    if let Some(v) = cli.kappa {
        cfg.params.kappa = v;
    }
    if let Some(v) = cli.gamma {
        cfg.params.gamma = v;
    }
    if let Some(v) = cli.epsilon {
        cfg.params.epsilon = v;
    }
    if let Some(v) = cli.delta_p {
        cfg.params.delta_p = v;
    }
    if let Some(v) = cli.n_th {
        cfg.params.n_th = v;
    }
    if let Some(v) = cli.cavity_detuning {
        cfg.params.cavity_detuning = Some(v);
    }
    if let Some(v) = cli.tol {
        cfg.tol = v;
    }
    if let Some(v) = &cli.outdir {
        cfg.outdir = v.clone();
    }
    if let Some(v) = &cli.units {
        cfg.units = parse_units(v)?;
    }
    if let Some(v) = cli.jobs {
        cfg.jobs = Some(v);
    }
    let n_a = cli.na.unwrap_or(cfg.truncation.n_a);
    let n_b = cli.nb.unwrap_or(cfg.truncation.n_b);
    cfg.truncation = Truncation::new(n_a, n_b)?;

    // hertz-mode inputs are normalized so kappa = 1 internally
    if cfg.units == Units::Hertz {
        let kappa = cfg.params.kappa;
        if kappa <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "kappa = {kappa} Hz must be > 0"
            )));
        }
        cfg.params.g /= kappa;
        cfg.params.gamma /= kappa;
        cfg.params.epsilon /= kappa;
        cfg.params.delta_p /= kappa;
        if let Some(cd) = cfg.params.cavity_detuning.as_mut() {
            *cd /= kappa;
        }
        cfg.params.kappa = 1.0;
    }

    cfg.params.validate()?;
    if cfg.tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tol = {} must be > 0",
            cfg.tol
        )));
    }
    Ok(cfg)
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidParameter(_) | Error::InvalidSpec(_) => EXIT_USAGE,
        _ => EXIT_NUMERICAL,
    }
}

fn solve_configured(cfg: &RunConfig) -> Result<SteadyStateReport> {
    let h = build_heff(&cfg.params, cfg.truncation)?;
    let l = build_liouvillian(&h, &collapse_channels(&cfg.params, cfg.truncation))?;
    steady_state(&l, cfg.tol)
}

fn print_preset_report(cfg: &RunConfig) -> Result<()> {
    let preset = membrane_preset();
    let (alpha, g_eff) = linearize(&preset.physical)?;
    let rwa = crate::model::check_rwa(&preset.physical, g_eff)?;
    println!("alpha_abs = {:e}", alpha.norm());
    println!("g_eff_hz = {g_eff:e}");
    println!(
        "rwa = {}",
        match rwa {
            RwaStatus::Ok => "ok",
            RwaStatus::Warning => "warning",
        }
    );
    println!("n_th = {:e}", cfg.params.n_th);
    println!("cooperativity = {:e}", analytic::cooperativity(&cfg.params));
    Ok(())
}

fn cmd_solve(cfg: &RunConfig) -> Result<()> {
    if cfg.preset_membrane {
        print_preset_report(cfg)?;
    }
    let report = solve_configured(cfg)?;
    let g2 = observables::g2_zero(&report.rho)?;
    let (mean_photons, mean_phonons) = observables::occupations(&report.rho);
    println!("g2_numeric = {g2:e}");
    println!("g2_analytic = {:e}", analytic::g2_analytic(&cfg.params));
    println!("fidelity = {:e}", observables::fidelity_f(&report.rho)?);
    println!("mean_photons = {mean_photons:e}");
    println!("mean_phonons = {mean_phonons:e}");
    println!("residual = {:e}", report.residual);
    println!("method = {}", report.method);
    println!("truncation = {}", cfg.truncation);
    Ok(())
}

fn write_outputs(cfg: &RunConfig, stem: &str, result: &crate::sweep::SweepResult) -> Result<()> {
    std::fs::create_dir_all(&cfg.outdir)?;
    let csv_path = cfg.outdir.join(format!("{stem}.csv"));
    let svg_path = cfg.outdir.join(format!("{stem}.svg"));
    write_csv(result, &csv_path)?;
    render_svg(result, &svg_path)?;
    println!("csv = {}", csv_path.display());
    println!("svg = {}", svg_path.display());
    let failed = result.rows.iter().filter(|r| r.error.is_some()).count();
    println!("rows = {}", result.rows.len());
    println!("failed_rows = {failed}");
    Ok(())
}

fn cmd_sweep(cfg: &RunConfig, specfile: &Path) -> Result<()> {
    let text = std::fs::read_to_string(specfile)
        .map_err(|e| Error::InvalidSpec(format!("cannot read {}: {e}", specfile.display())))?;
    let spec = parse_sweep_spec(&text)?;
    let result = run_sweep(&spec)?;
    write_outputs(cfg, "sweep", &result)
}

fn cmd_figure(cfg: &RunConfig, which: Figure) -> Result<()> {
    let mut spec = figure_recipe(which);
    spec.tol = cfg.tol;
    let result = run_sweep(&spec)?;
    write_outputs(cfg, &format!("fig{}", which.number()), &result)
}

fn cmd_analytic(cfg: &RunConfig) -> Result<()> {
    let sp = &cfg.params;
    let amps = analytic::steady_amplitudes(sp)?;
    println!("c01_abs = {:e}", amps.c01.norm());
    println!("c02_abs = {:e}", amps.c02.norm());
    println!("c10_abs = {:e}", amps.c10.norm());
    println!("g2_analytic = {:e}", analytic::g2_analytic(sp));
    println!("g2_resonant = {:e}", analytic::g2_resonant(sp));
    println!("cooperativity = {:e}", analytic::cooperativity(sp));
    match analytic::g2_two_phonon_resonance(sp) {
        Ok(v) => println!("g2_two_phonon_resonance = {v:e}"),
        Err(e) => println!("g2_two_phonon_resonance_error = {}", e.code()),
    }
    Ok(())
}

/// Runs the property suite; returns the number of failed checks.
fn cmd_validate(cfg: &RunConfig) -> Result<usize> {
    let mut failures = 0usize;
    let mut check = |name: &str, ok: bool| {
        println!("{name} = {}", if ok { "pass" } else { "fail" });
        if !ok {
            failures += 1;
        }
    };

    let report = solve_configured(cfg)?;
    let rho = &report.rho;
    check(
        "hermiticity",
        crate::quantum::hermiticity_deviation(&rho.data) <= 1e-10,
    );
    check(
        "unit_trace",
        (crate::quantum::trace(&rho.data).re - 1.0).abs() <= 1e-12
            && crate::quantum::trace(&rho.data).im.abs() <= 1e-12,
    );
    let min_eig = crate::quantum::eigvals_hermitian(&rho.data)?
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    check("positivity", min_eig >= -1e-8);
    check("residual", report.residual <= cfg.tol);

    // truncation convergence of the configured size: the top Fock levels
    // must be empty and doubling the phonon cutoff must not move g2 or the
    // occupation by more than 1%
    let converged = {
        let top_ok = report.top_level_population < 1e-8;
        let doubled = Truncation::new(cfg.truncation.n_a, cfg.truncation.n_b * 2).ok().filter(
            |t| t.n_b <= N_B_CAP && t.dim() <= COMPOSITE_DIM_CAP,
        );
        let growth_ok = match doubled {
            Some(dims) => {
                let bigger = RunConfig { truncation: dims, ..cfg.clone() };
                match solve_configured(&bigger) {
                    Ok(r2) => {
                        let (_, n1) = observables::occupations(rho);
                        let (_, n2) = observables::occupations(&r2.rho);
                        let occ_ok = (n2 - n1).abs() <= 0.01 * n2.abs().max(1e-300);
                        let g2_ok = match (
                            observables::g2_zero(rho),
                            observables::g2_zero(&r2.rho),
                        ) {
                            (Ok(a), Ok(b)) => (b - a).abs() <= 0.01 * b.abs().max(1e-300),
                            (Err(_), Err(_)) => true,
                            _ => false,
                        };
                        occ_ok && g2_ok
                    }
                    Err(_) => false,
                }
            }
            None => false,
        };
        top_ok && growth_ok
    };
    check("truncation_convergence", converged);

    // closed-form identities at the configured parameters
    let g2a = analytic::g2_analytic(&cfg.params);
    let at0 = SystemParams { delta_p: 0.0, ..cfg.params };
    let reduction0 =
        (analytic::g2_analytic(&at0) - analytic::g2_resonant(&at0)).abs() <= 1e-12 * g2a.max(1.0);
    let sp2 = SystemParams {
        delta_p: 2f64.sqrt() * cfg.params.g / 2.0,
        ..cfg.params
    };
    let reduction2 = match analytic::g2_two_phonon_resonance(&sp2) {
        Ok(v) => (analytic::g2_analytic(&sp2) - v).abs() <= 1e-12 * v.max(1.0),
        Err(_) => true, // closed form undefined here; nothing to compare
    };
    check("analytic_identities", reduction0 && reduction2);

    // numeric-analytic agreement holds in the weak-pump regime the closed
    // forms assume, so probe with the pump reduced to gamma/10
    let weak_agreement = {
        let weak = RunConfig {
            params: SystemParams {
                epsilon: (cfg.params.gamma / 10.0).min(cfg.params.epsilon.max(1e-12)),
                n_th: 0.0,
                ..cfg.params
            },
            ..cfg.clone()
        };
        match solve_configured(&weak).and_then(|r| observables::g2_zero(&r.rho)) {
            Ok(numeric) => {
                let reference = analytic::g2_analytic(&weak.params);
                (numeric - reference).abs() <= 0.2 * reference
            }
            Err(_) => false,
        }
    };
    check("numeric_analytic_weak_pump", weak_agreement);

    // the two steady-state routes must agree on the same generator; the
    // probe runs on a reduced space because fixed-step integration over
    // 50 slow lifetimes is costly at full size
    let methods_agree = {
        let dims = Truncation::new(2.min(cfg.truncation.n_a), 4.min(cfg.truncation.n_b))
            .unwrap_or(cfg.truncation);
        let h = build_heff(&cfg.params, dims)?;
        let l = build_liouvillian(&h, &collapse_channels(&cfg.params, dims))?;
        let t_final = 50.0 / cfg.params.kappa.min(cfg.params.gamma);
        let direct = steady_state(&l, cfg.tol)?;
        match evolve(&l, &DensityMatrix::vacuum(dims), t_final, f64::INFINITY) {
            Ok(evolved) => {
                let diff = &evolved.data - &direct.rho.data;
                crate::quantum::max_abs(&diff) <= 1e-6
            }
            Err(_) => false,
        }
    };
    check("method_agreement", methods_agree);

    Ok(failures)
}

fn dispatch(cli: &Cli, cfg: &RunConfig) -> Result<i32> {
    match &cli.command {
        Command::Solve => cmd_solve(cfg).map(|()| EXIT_OK),
        Command::Sweep { specfile } => cmd_sweep(cfg, specfile).map(|()| EXIT_OK),
        Command::Figure { which } => {
            let fig: Figure = which.parse()?;
            cmd_figure(cfg, fig).map(|()| EXIT_OK)
        }
        Command::Analytic => cmd_analytic(cfg).map(|()| EXIT_OK),
        Command::Validate => cmd_validate(cfg).map(|failures| {
            if failures == 0 {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }),
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help/version requests are not errors
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match resolve_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cfg.jobs {
        Some(jobs) => {
            let pool = match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
                Ok(p) => p,
                Err(e) => {
                    eprintln!("error: cannot build worker pool: {e}");
                    return EXIT_USAGE;
                }
            };
            pool.install(|| dispatch(&cli, &cfg))
        }
        None => dispatch(&cli, &cfg),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {} ({})", e, e.code());
            exit_code_for(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn parse(args: &[&str]) -> RunConfig {
        let mut full = vec!["phonon-blockade"];
        full.extend_from_slice(args);
        let cli = Cli::try_parse_from(&full).unwrap();
        resolve_config(&cli).unwrap()
    }

    #[test]
    fn defaults_are_the_figure_baseline() {
        let cfg = parse(&["solve"]);
        assert_eq!(cfg.params, SystemParams::baseline());
        assert_eq!(cfg.truncation, Truncation::new(3, 10).unwrap());
        assert_eq!(cfg.tol, DEFAULT_TOL);
        assert_eq!(cfg.units, Units::KappaUnits);
    }

    #[test]
    fn flags_override_defaults() {
        let cfg = parse(&["solve", "--g", "3", "--epsilon", "0.05", "--nb", "12"]);
        assert_eq!(cfg.params.g, 3.0);
        assert_eq!(cfg.params.epsilon, 0.05);
        assert_eq!(cfg.params.gamma, 0.01);
        assert_eq!(cfg.truncation.n_b, 12);
    }

    #[test]
    fn config_file_applies_and_flags_win() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "# test config\ng = 1\ngamma = 0.02\nnb = 8").unwrap();
        let path = f.path().to_str().unwrap().to_string();

        let cfg = parse(&["solve", "--config", &path]);
        assert_eq!(cfg.params.g, 1.0);
        assert_eq!(cfg.params.gamma, 0.02);
        assert_eq!(cfg.truncation.n_b, 8);

        let cfg = parse(&["solve", "--config", &path, "--g", "2"]);
        assert_eq!(cfg.params.g, 2.0);
        assert_eq!(cfg.params.gamma, 0.02);
    }

    #[test]
    fn unknown_config_key_is_rejected() {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        writeln!(f, "gg = 1").unwrap();
        let path = f.path().to_str().unwrap().to_string();
        let cli = Cli::try_parse_from(["phonon-blockade", "solve", "--config", &path]).unwrap();
        let err = resolve_config(&cli).unwrap_err();
        assert!(err.to_string().contains("gg"));
    }

    #[test]
    fn hertz_units_normalize_by_kappa() {
        let cfg = parse(&[
            "solve",
            "--units",
            "hertz",
            "--kappa",
            "20e6",
            "--g",
            "40e6",
            "--gamma",
            "2e5",
            "--epsilon",
            "2e6",
            "--delta-p",
            "0",
        ]);
        assert_eq!(cfg.params.kappa, 1.0);
        assert!((cfg.params.g - 2.0).abs() < 1e-12);
        assert!((cfg.params.gamma - 0.01).abs() < 1e-12);
        assert!((cfg.params.epsilon - 0.1).abs() < 1e-12);
    }

    #[test]
    fn membrane_preset_pipeline() {
        let cfg = parse(&["solve", "--preset", "membrane"]);
        assert!(cfg.preset_membrane);
        // g_eff = 2.45 MHz over kappa = 20 MHz
        assert!((cfg.params.g - 0.1225).abs() < 1e-9);
        assert!((cfg.params.gamma - 328.0 / 20.0e6).abs() < 1e-15);
        assert!(cfg.params.n_th > 1e-6 && cfg.params.n_th < 1e-4);
        let coop = analytic::cooperativity(&cfg.params);
        assert!(coop > 100.0, "C = {coop}");
    }

    #[test]
    fn invalid_params_are_usage_errors() {
        let cli = Cli::try_parse_from(["phonon-blockade", "validate", "--gamma", "0"]).unwrap();
        let err = resolve_config(&cli).unwrap_err();
        assert_eq!(exit_code_for(&err), EXIT_USAGE);
    }
}
