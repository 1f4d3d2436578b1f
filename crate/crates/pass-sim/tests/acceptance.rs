//! Acceptance suite. Each test covers one numbered criterion and prints one
//! PASS/FAIL line (visible with `cargo test --test acceptance -- --nocapture`).

use num_complex::Complex64;
use pass_sim::coupling::{coupled_powers, PassConfiguration};
use pass_sim::farfield::{
    oracle_radiation_integral_with, total_pattern, ApertureBounds, FarFieldPattern,
    PatternCombination, DEFAULT_ANGLE_SAMPLES,
};
use pass_sim::numerics::periodic_mean;
use pass_sim::sim::{run_plan, Scheme, SimulationPlan};
use pass_sim::slab::{width_for_v, SlabGeometry};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

const N1: f64 = 1.449_137_674_618_944; // sqrt(2.1)
const N0: f64 = 1.0;
const F0: f64 = 60e9;

fn conclude(name: &str, failures: Vec<String>) {
    if failures.is_empty() {
        println!("acceptance {name}: PASS");
    } else {
        println!("acceptance {name}: FAIL");
        for f in &failures {
            println!("  - {f}");
        }
        panic!("{name} failed:\n{}", failures.join("\n"));
    }
}

fn reference_slab(v: f64) -> SlabGeometry {
    let w = width_for_v(N1, N0, F0, v).unwrap();
    SlabGeometry::new(w, N1, N0, F0).unwrap()
}

fn config(slab: SlabGeometry, ls_lambda: f64) -> PassConfiguration {
    PassConfiguration::new(slab, slab, ls_lambda * slab.wavelength(), 20.0, 40.0).unwrap()
}

#[test]
fn criterion_1_mode_solver_identities() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    for i in 0..50 {
        let v: f64 = rng.gen_range(0.3..1.55);
        let n0: f64 = rng.gen_range(1.0..1.4);
        let n1: f64 = n0 + rng.gen_range(0.2..1.0);
        let f: f64 = rng.gen_range(20e9..240e9);
        let width = width_for_v(n1, n0, f, v).unwrap();
        let geom = SlabGeometry::new(width, n1, n0, f).unwrap();
        let mode = geom.solve_te0().unwrap();
        let beta0 = geom.free_space_wavenumber();

        let r_eigen = (mode.u * mode.u.tan() - mode.w).abs();
        let r_norm = (mode.u * mode.u + mode.w * mode.w - v * v).abs();
        let rec1 = ((mode.beta_y.powi(2) + mode.beta_x.powi(2)) - (beta0 * n1).powi(2)).abs()
            / (beta0 * n1).powi(2);
        let rec2 = ((mode.sigma.powi(2) + (beta0 * n0).powi(2)) - mode.beta_x.powi(2)).abs()
            / mode.beta_x.powi(2);
        if r_eigen >= 1e-10 || r_norm >= 1e-10 {
            failures.push(format!(
                "geometry {i} (V={v:.4}): eigenvalue residuals {r_eigen:.2e}, {r_norm:.2e}"
            ));
        }
        if rec1 >= 1e-10 || rec2 >= 1e-10 {
            failures.push(format!(
                "geometry {i} (V={v:.4}): reconstruction residuals {rec1:.2e}, {rec2:.2e}"
            ));
        }
    }

    let lam = reference_slab(1.5).wavelength();
    for (v, w_lambda) in [(1.35, 0.408), (1.55, 0.470)] {
        let w = width_for_v(N1, N0, F0, v).unwrap();
        let rel = (w / lam - w_lambda).abs() / w_lambda;
        if rel >= 0.01 {
            failures.push(format!(
                "width_for_v({v}) = {:.4}λ vs {w_lambda}λ ({:.2}%)",
                w / lam,
                rel * 100.0
            ));
        }
        let geom = SlabGeometry::new(w_lambda * lam, N1, N0, F0).unwrap();
        let rel_v = (geom.normalized_frequency() - v).abs() / v;
        if rel_v >= 0.01 {
            failures.push(format!(
                "V({w_lambda}λ) = {:.4} vs {v} ({:.2}%)",
                geom.normalized_frequency(),
                rel_v * 100.0
            ));
        }
    }
    conclude("criterion 1 (mode-solver identity suite)", failures);
}

#[test]
fn criterion_2_coupling_oracle_equivalence() {
    let mut failures = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    for i in 0..20 {
        let v: f64 = rng.gen_range(0.5..1.55);
        let slab = reference_slab(v);
        let cfg = PassConfiguration::new(slab, slab, 0.01, 20.0, 40.0).unwrap();
        let closed = cfg.coupling().kappa();
        let quad = cfg.coupling_coefficient_quadrature(100_000);
        let rel = (closed - quad).abs() / quad;
        if rel >= 1e-6 {
            failures.push(format!(
                "geometry {i} (V={v:.4}): closed {closed:.8} vs quadrature {quad:.8} ({rel:.2e})"
            ));
        }
    }
    conclude("criterion 2 (coupling-coefficient oracle equivalence)", failures);
}

#[test]
fn criterion_3_coupling_length() {
    let mut failures = Vec::new();
    let coupling = config(reference_slab(1.5), 2.0).coupling();
    let lc_mm = coupling.coupling_length() * 1e3;
    if !(8.5..=11.5).contains(&lc_mm) {
        failures.push(format!("L_c = {lc_mm:.3} mm outside [8.5, 11.5] mm"));
    }
    conclude("criterion 3 (coupling length)", failures);
}

#[test]
fn criterion_4_power_conservation() {
    let mut failures = Vec::new();
    let coupling = config(reference_slab(1.5), 2.0).coupling();
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let x: f64 = rng.gen_range(0.0..0.1);
        let (pm, ps) = coupled_powers(&coupling, x);
        worst = worst.max((pm + 2.0 * ps - 1.0).abs());
    }
    if worst >= 1e-15 {
        failures.push(format!("worst |P_m + 2P_s - 1| = {worst:.2e}"));
    }
    conclude("criterion 4 (power conservation)", failures);
}

#[test]
fn criterion_5_pattern_oracle_equivalence() {
    let mut failures = Vec::new();
    let lam = reference_slab(1.5).wavelength();
    let widths = [
        ("V=1.5", reference_slab(1.5)),
        (
            "W=0.408λ",
            SlabGeometry::new(0.408 * lam, N1, N0, F0).unwrap(),
        ),
        (
            "W=0.470λ",
            SlabGeometry::new(0.470 * lam, N1, N0, F0).unwrap(),
        ),
    ];
    for (label, slab) in widths {
        for ls_lambda in [0.75, 1.5, 2.0, 2.5] {
            let cfg = config(slab, ls_lambda);
            let coupling = cfg.coupling();
            let deviations: Vec<(f64, f64)> = (0..720)
                .into_par_iter()
                .map(|k| {
                    let phi = 2.0 * PI * k as f64 / 720.0;
                    let closed = total_pattern(&cfg, &coupling, phi).unwrap();
                    let oracle = oracle_radiation_integral_with(
                        &cfg,
                        &coupling,
                        phi,
                        ApertureBounds::AnalyticStrip,
                        PatternCombination::PerPa,
                        2048,
                    )
                    .unwrap();
                    ((closed.norm() - oracle.norm()).abs(), oracle.norm())
                })
                .collect();
            let worst: f64 = deviations.iter().map(|d| d.0).fold(0.0, f64::max);
            let scale: f64 = deviations.iter().map(|d| d.1).fold(0.0, f64::max);
            let rel = worst / scale;
            if rel >= 1e-6 {
                failures.push(format!(
                    "{label}, Ls = {ls_lambda}λ: max deviation {rel:.2e}"
                ));
            }
        }
    }
    conclude("criterion 5 (pattern oracle equivalence)", failures);
}

#[test]
fn criterion_6_pattern_structure() {
    let mut failures = Vec::new();
    let slab = reference_slab(1.5);

    let mut axis_distances = Vec::new();
    let mut peaks = Vec::new();
    for ls_lambda in [0.75, 1.5, 2.0, 2.5] {
        let cfg = config(slab, ls_lambda);
        let coupling = cfg.coupling();

        // axis nulls, exactly zero
        let f0 = total_pattern(&cfg, &coupling, 0.0).unwrap();
        let fpi = total_pattern(&cfg, &coupling, PI).unwrap();
        if f0 != Complex64::ZERO || fpi != Complex64::ZERO {
            failures.push(format!(
                "Ls = {ls_lambda}λ: axis values F(0) = {f0}, F(π) = {fpi} not exactly zero"
            ));
        }

        let pattern = FarFieldPattern::compute(&cfg, &coupling, DEFAULT_ANGLE_SAMPLES).unwrap();
        if pattern.power_pattern()[0] != 0.0 {
            failures.push(format!("Ls = {ls_lambda}λ: grid sample G(0) not exactly zero"));
        }

        // mirror symmetry on the grid: angle N-k is 2π - angle k
        let n = pattern.len();
        let g = pattern.power_pattern();
        let mut worst = 0.0f64;
        for k in 1..n {
            worst = worst.max((g[k] - g[n - k]).abs());
        }
        if worst >= 1e-10 {
            failures.push(format!(
                "Ls = {ls_lambda}λ: mirror symmetry violated by {worst:.2e}"
            ));
        }

        axis_distances.push(pattern.main_lobe_axis_distance());
        peaks.push(pattern.peak_directivity());
    }

    if axis_distances.windows(2).any(|pair| pair[1] >= pair[0]) {
        failures.push(format!(
            "main-lobe axis distance not monotonically decreasing: {:?} deg",
            axis_distances
                .iter()
                .map(|a| a.to_degrees())
                .collect::<Vec<_>>()
        ));
    }
    if peaks.windows(2).any(|pair| pair[1] <= pair[0]) {
        failures.push(format!(
            "peak directivity not monotonically increasing: {peaks:?}"
        ));
    }
    conclude("criterion 6 (pattern structure)", failures);
}

#[test]
fn criterion_7_directivity_normalization() {
    let mut failures = Vec::new();
    let lam = reference_slab(1.5).wavelength();
    let widths = [
        reference_slab(1.5),
        SlabGeometry::new(0.408 * lam, N1, N0, F0).unwrap(),
        SlabGeometry::new(0.470 * lam, N1, N0, F0).unwrap(),
    ];
    for slab in widths {
        for ls_lambda in [0.75, 1.5, 2.0, 2.5] {
            let cfg = config(slab, ls_lambda);
            let coupling = cfg.coupling();
            let pattern =
                FarFieldPattern::compute(&cfg, &coupling, DEFAULT_ANGLE_SAMPLES).unwrap();
            let mean = periodic_mean(pattern.directivity());
            if (mean - 1.0).abs() >= 1e-10 {
                failures.push(format!(
                    "V = {:.3}, Ls = {ls_lambda}λ: mean D = {mean} off by {:.2e}",
                    cfg.main_mode().v_num,
                    (mean - 1.0).abs()
                ));
            }
        }
    }
    conclude("criterion 7 (directivity normalization)", failures);
}

#[test]
fn criterion_8_linksim_reproduction() {
    let mut failures = Vec::new();
    let cfg = config(reference_slab(1.5), 2.0);
    let plan = SimulationPlan::default(); // 10^4 drops, seed 42, 30..80 dB
    let result = run_plan(&cfg, &plan).unwrap();

    let fixed = result.scheme(Scheme::FixedAntenna);
    let omni = result.scheme(Scheme::OmniOptimized);
    let dir = result.scheme(Scheme::DirectionalOptimized);

    // ordering at every SNR point
    for (i, snr) in plan.snr_grid_db.iter().enumerate() {
        if !(dir.mean_rate[i] >= omni.mean_rate[i] && omni.mean_rate[i] >= fixed.mean_rate[i]) {
            failures.push(format!(
                "ordering violated at {snr} dB: dir {}, omni {}, fixed {}",
                dir.mean_rate[i], omni.mean_rate[i], fixed.mean_rate[i]
            ));
        }
    }

    // per-drop dominance, all drops
    let violations = dir
        .channel_gains
        .iter()
        .zip(&omni.channel_gains)
        .filter(|(d, o)| d < o)
        .count();
    if violations > 0 {
        failures.push(format!(
            "per-drop dominance violated for {violations} of {} drops",
            plan.num_drops
        ));
    }

    // horizontal gap >= 3 dB at mid-SNR: how much more SNR the omni-placed
    // system needs to reach the directional mean rate
    let mid = plan.snr_grid_db.len() / 2;
    let target = dir.mean_rate[mid];
    let gap = horizontal_gap_db(&plan.snr_grid_db, &omni.mean_rate, target)
        .map(|snr_needed| snr_needed - plan.snr_grid_db[mid]);
    match gap {
        Some(gap) if gap >= 3.0 => {}
        Some(gap) => failures.push(format!(
            "directional-vs-omni horizontal gap {gap:.2} dB < 3 dB at {} dB",
            plan.snr_grid_db[mid]
        )),
        None => failures.push("omni curve never reaches the directional mid-SNR rate".into()),
    }
    if let Some(gap) = gap {
        println!(
            "  (directional-vs-omni horizontal gap at {} dB: {gap:.2} dB)",
            plan.snr_grid_db[mid]
        );
    }

    conclude("criterion 8 (link-sim reproduction)", failures);
}

/// SNR (dB) at which `curve` reaches `target`, by linear interpolation on the
/// monotone rate curve.
fn horizontal_gap_db(snr_db: &[f64], curve: &[f64], target: f64) -> Option<f64> {
    for i in 1..curve.len() {
        if curve[i] >= target {
            let (x0, x1) = (snr_db[i - 1], snr_db[i]);
            let (y0, y1) = (curve[i - 1], curve[i]);
            return Some(x0 + (target - y0) / (y1 - y0) * (x1 - x0));
        }
    }
    None
}

#[test]
fn criterion_9_determinism() {
    let mut failures = Vec::new();
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("scenario.toml");
    std::fs::write(
        &config_path,
        "[simulation]\ndrops = 1000\nseed = 4242\n",
    )
    .unwrap();

    // identical invocations, byte-identical files: same config, seed, out dir
    let out = dir.path().join("out");
    let mut outputs = Vec::new();
    for run in 0..2 {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_pass-sim"))
            .args([
                "--config",
                config_path.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "linksim",
            ])
            .status()
            .expect("binary runs");
        if !status.success() {
            failures.push(format!("run {run} exited with {status}"));
        }
        outputs.push(std::fs::read_to_string(out.join("linksim.csv")).unwrap_or_default());
    }

    let data_section = |text: &str| -> String {
        text.lines()
            .skip_while(|l| l.starts_with('#'))
            .collect::<Vec<_>>()
            .join("\n")
    };
    if data_section(&outputs[0]) != data_section(&outputs[1]) {
        failures.push("data sections differ between identical runs".into());
    }
    if outputs[0] != outputs[1] {
        failures.push("full files differ between identical runs".into());
    }
    conclude("criterion 9 (determinism)", failures);
}
