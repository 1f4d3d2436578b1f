//! Command-line front end: solve modes, export radiation patterns, sweep
//! coupled power versus PA length, and run the placement Monte Carlo.

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pass_sim::coupling::{coupled_powers, single_pa_coupled_power};
use pass_sim::error::ErrorCategory;
use pass_sim::export;
use pass_sim::farfield::{
    oracle_radiation_integral_with, ApertureBounds, FarFieldPattern, PatternCombination,
    DEFAULT_ANGLE_SAMPLES, ORACLE_PANELS,
};
use pass_sim::scenario::{OutputFormat, Scenario};
use pass_sim::sim::PlacementStudy;
use pass_sim::{PassError, Result};
use rayon::prelude::*;
use std::path::{Path, PathBuf};

#[derive(Parser)]
#[command(
    name = "pass-sim",
    version,
    about = "Pinching-antenna system model: slab modes, coupled power, far-field patterns, and link-level Monte Carlo"
)]
struct Cli {
    /// Scenario file (TOML, or JSON by extension); defaults apply if omitted
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (overrides the scenario's output.directory)
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// RNG seed (overrides the scenario's simulation.seed)
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output format (overrides the scenario's output.formats)
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the TE0 mode of the main guide and the PAs and report the modal
    /// constants
    Modes,
    /// Compute far-field patterns for one or more PA lengths
    Pattern {
        /// PA lengths in wavelengths, comma separated
        #[arg(long, default_value = "0.75,1.5,2,2.5", value_delimiter = ',')]
        lengths: Vec<f64>,
        /// Also run the quadrature oracle and report the worst deviation
        #[arg(long)]
        oracle: bool,
        /// Integrate over the physical PA core instead of the analytical
        /// strip; the discrepancy between the two conventions is printed
        #[arg(long)]
        physical_bounds: bool,
    },
    /// Sweep coupled power versus PA length
    CouplingSweep {
        /// Largest PA length in millimetres
        #[arg(long, default_value_t = 30.0)]
        max_length: f64,
        /// Number of sweep samples
        #[arg(long, default_value_t = 601)]
        points: usize,
    },
    /// Monte-Carlo spectral efficiency with grid-search placement
    Linksim {
        /// Also write a per-drop trace CSV
        #[arg(long)]
        trace: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        let code = match err.category() {
            ErrorCategory::Config => 2,
            ErrorCategory::Solver => 3,
            ErrorCategory::Degeneracy => 4,
            ErrorCategory::Io => 1,
        };
        std::process::exit(code);
    }
}

fn run(cli: Cli) -> Result<()> {
    let mut scenario = match &cli.config {
        Some(path) => Scenario::from_file(path)?,
        None => Scenario::default(),
    };
    if let Some(seed) = cli.seed {
        scenario.seed = seed;
    }
    if let Some(format) = cli.format {
        scenario.output_formats = vec![match format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
        }];
    }
    if let Some(out) = &cli.out {
        scenario.output_directory = out.display().to_string();
    }
    let out_dir = PathBuf::from(&scenario.output_directory);

    match cli.command {
        Command::Modes => cmd_modes(&scenario, &out_dir),
        Command::Pattern {
            lengths,
            oracle,
            physical_bounds,
        } => cmd_pattern(&scenario, &out_dir, &lengths, oracle, physical_bounds),
        Command::CouplingSweep { max_length, points } => {
            cmd_coupling_sweep(&scenario, &out_dir, max_length, points)
        }
        Command::Linksim { trace } => cmd_linksim(&scenario, &out_dir, trace),
    }
}

fn wants(scenario: &Scenario, format: OutputFormat) -> bool {
    scenario.output_formats.contains(&format)
}

fn cmd_modes(scenario: &Scenario, out_dir: &Path) -> Result<()> {
    let cfg = scenario.build_configuration()?;
    let entries = [
        ("main", cfg.main_geometry(), cfg.main_mode()),
        ("pa", cfg.pa_geometry(), cfg.pa_mode()),
    ];

    println!(
        "{:<6} {:>10} {:>8} {:>8} {:>8} {:>12} {:>12} {:>12} {:>12}",
        "slab", "width_mm", "V", "u", "w", "beta_x", "beta_y", "sigma", "lambda_g_mm"
    );
    for (label, geom, mode) in &entries {
        println!(
            "{:<6} {:>10.4} {:>8.4} {:>8.4} {:>8.4} {:>12.4} {:>12.4} {:>12.4} {:>12.4}",
            label,
            geom.width() * 1e3,
            mode.v_num,
            mode.u,
            mode.w,
            mode.beta_x,
            mode.beta_y,
            mode.sigma,
            mode.guided_wavelength() * 1e3,
        );
    }
    println!(
        "single-mode: yes (V = {:.4} < pi/2 = {:.4})",
        cfg.main_mode().v_num,
        std::f64::consts::FRAC_PI_2
    );

    if wants(scenario, OutputFormat::Csv) {
        let path = out_dir.join("modes.csv");
        export::write_modes_csv(&path, &scenario.header_lines(), &entries)?;
        println!("wrote {}", path.display());
    }
    if wants(scenario, OutputFormat::Json) {
        let path = out_dir.join("modes.json");
        let provenance = serde_json::to_value(scenario)
            .map_err(|e| PassError::Io(format!("scenario serialization failed: {e}")))?;
        export::write_modes_json(&path, &provenance, &entries)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn cmd_pattern(
    scenario: &Scenario,
    out_dir: &Path,
    lengths: &[f64],
    oracle: bool,
    physical_bounds: bool,
) -> Result<()> {
    if lengths.is_empty() {
        return Err(PassError::Config("--lengths must not be empty".into()));
    }
    let bounds = if physical_bounds {
        ApertureBounds::PhysicalCore
    } else {
        ApertureBounds::AnalyticStrip
    };
    for &ls_lambda in lengths {
        if ls_lambda <= 0.0 || ls_lambda.is_nan() {
            return Err(PassError::Config(format!(
                "--lengths entries must be positive, got {ls_lambda}"
            )));
        }
        let mut per_length = scenario.clone();
        per_length.pa_length_lambda = ls_lambda;
        let cfg = per_length.build_configuration()?;
        let coupling = cfg.coupling();
        let pattern = FarFieldPattern::compute_with(
            &cfg,
            &coupling,
            DEFAULT_ANGLE_SAMPLES,
            bounds,
            PatternCombination::PerPa,
        )?;

        let oracle_samples: Option<Vec<Complex64>> = if oracle {
            let samples = pattern
                .angles()
                .par_iter()
                .map(|&phi| {
                    oracle_radiation_integral_with(
                        &cfg,
                        &coupling,
                        phi,
                        bounds,
                        PatternCombination::PerPa,
                        ORACLE_PANELS,
                    )
                })
                .collect::<Result<Vec<_>>>()?;
            Some(samples)
        } else {
            None
        };

        let mut header = per_length.header_lines();
        header.push(format!(
            "pattern.bounds = {}",
            if physical_bounds {
                "physical_core"
            } else {
                "analytic_strip"
            }
        ));
        header.push(format!(
            "coupling.kappa_rad_per_m = {}",
            export::fmt_full(coupling.kappa())
        ));

        let stem = format!("pattern_ls{ls_lambda}lambda");
        if wants(scenario, OutputFormat::Csv) {
            let path = out_dir.join(format!("{stem}.csv"));
            export::write_pattern_csv(&path, &header, &pattern, oracle_samples.as_deref())?;
            println!("wrote {}", path.display());
        }
        if wants(scenario, OutputFormat::Json) {
            let path = out_dir.join(format!("{stem}.json"));
            let provenance = serde_json::to_value(&per_length)
                .map_err(|e| PassError::Io(format!("scenario serialization failed: {e}")))?;
            export::write_pattern_json(
                &path,
                &provenance,
                &cfg,
                &coupling,
                &pattern,
                oracle_samples.as_deref(),
            )?;
            println!("wrote {}", path.display());
        }

        println!(
            "Ls = {ls_lambda} lambda: peak D = {:.3}, main lobe {:.2} deg from axis",
            pattern.peak_directivity(),
            pattern.main_lobe_axis_distance().to_degrees()
        );
        if let Some(oracle_samples) = &oracle_samples {
            let scale = oracle_samples
                .iter()
                .map(|f| f.norm())
                .fold(0.0f64, f64::max);
            let worst = pattern
                .complex_pattern()
                .iter()
                .zip(oracle_samples)
                .map(|(c, o)| (c.norm() - o.norm()).abs())
                .fold(0.0f64, f64::max)
                / scale;
            println!("  max |closed - oracle| / max|oracle| = {worst:.3e}");

            // cross-convention discrepancy, reported rather than hidden
            let alt_bounds = match bounds {
                ApertureBounds::AnalyticStrip => ApertureBounds::PhysicalCore,
                ApertureBounds::PhysicalCore => ApertureBounds::AnalyticStrip,
            };
            let alt = FarFieldPattern::compute_with(
                &cfg,
                &coupling,
                DEFAULT_ANGLE_SAMPLES,
                alt_bounds,
                PatternCombination::PerPa,
            )?;
            let delta_g = pattern
                .power_pattern()
                .iter()
                .zip(alt.power_pattern())
                .map(|(a, b)| (a - b).abs())
                .fold(0.0f64, f64::max);
            println!(
                "  strip-convention discrepancy: max |G_strip - G_core| = {delta_g:.3e}"
            );
        }
    }
    Ok(())
}

fn cmd_coupling_sweep(
    scenario: &Scenario,
    out_dir: &Path,
    max_length_mm: f64,
    points: usize,
) -> Result<()> {
    if max_length_mm <= 0.0 || max_length_mm.is_nan() {
        return Err(PassError::Config(format!(
            "--max-length must be positive, got {max_length_mm}"
        )));
    }
    if points < 2 {
        return Err(PassError::Config("--points must be at least 2".into()));
    }
    let cfg = scenario.build_configuration()?;
    let coupling = cfg.coupling();

    let max_length = max_length_mm * 1e-3;
    let rows: Vec<(f64, f64, f64)> = (0..points)
        .map(|i| {
            let ls = max_length * i as f64 / (points - 1) as f64;
            let (_, ps) = coupled_powers(&coupling, ls);
            (ls, 2.0 * ps, single_pa_coupled_power(&coupling, ls))
        })
        .collect();

    let mut header = scenario.header_lines();
    header.push(format!(
        "coupling.kappa_rad_per_m = {}",
        export::fmt_full(coupling.kappa())
    ));
    header.push(format!(
        "coupling.length_mm = {}",
        export::fmt_full(coupling.coupling_length() * 1e3)
    ));

    if wants(scenario, OutputFormat::Csv) {
        let path = out_dir.join("coupling_sweep.csv");
        export::write_coupling_csv(&path, &header, &rows)?;
        println!("wrote {}", path.display());
    }
    if wants(scenario, OutputFormat::Json) {
        let path = out_dir.join("coupling_sweep.json");
        let provenance = serde_json::to_value(scenario)
            .map_err(|e| PassError::Io(format!("scenario serialization failed: {e}")))?;
        export::write_coupling_json(&path, &provenance, &coupling, &rows)?;
        println!("wrote {}", path.display());
    }

    println!(
        "kappa = {:.4} rad/m, L_c = {:.3} mm (single-PA transfer peak at {:.3} mm)",
        coupling.kappa(),
        coupling.coupling_length() * 1e3,
        std::f64::consts::PI / (2.0 * coupling.kappa()) * 1e3,
    );
    Ok(())
}

fn cmd_linksim(scenario: &Scenario, out_dir: &Path, trace: bool) -> Result<()> {
    let cfg = scenario.build_configuration()?;
    let plan = scenario.build_plan();
    let study = PlacementStudy::new(&cfg, &plan)?;
    let result = study.run()?;

    let header = scenario.header_lines();
    if wants(scenario, OutputFormat::Csv) {
        let path = out_dir.join("linksim.csv");
        export::write_linksim_csv(&path, &header, &result)?;
        println!("wrote {}", path.display());
    }
    if wants(scenario, OutputFormat::Json) {
        let path = out_dir.join("linksim.json");
        let provenance = serde_json::to_value(scenario)
            .map_err(|e| PassError::Io(format!("scenario serialization failed: {e}")))?;
        export::write_linksim_json(&path, &provenance, &result)?;
        println!("wrote {}", path.display());
    }
    if trace {
        let path = out_dir.join("linksim_trace.csv");
        export::write_trace_csv(&path, &header, &result)?;
        println!("wrote {}", path.display());
    }

    let mid = plan.snr_grid_db.len() / 2;
    println!(
        "drops = {}, seed = {}; mean R at {} dB: directional {:.3}, omni {:.3}, fixed {:.3} bit/s/Hz",
        plan.num_drops,
        plan.rng_seed,
        plan.snr_grid_db[mid],
        result.schemes[2].mean_rate[mid],
        result.schemes[1].mean_rate[mid],
        result.schemes[0].mean_rate[mid],
    );
    Ok(())
}
