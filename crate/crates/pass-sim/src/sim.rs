//! Monte-Carlo placement study: random UE drops along the guide, grid-search
//! PA placement under an omni-directional or directional channel model, and
//! spectral-efficiency curves versus transmit SNR.
//!
//! All schemes are *evaluated* with the directional closed-form channel; the
//! omni model only drives the placement decision of the scheme named after
//! it. UE drops are drawn up front from one seeded stream, so the parallel
//! drop loop is bit-for-bit reproducible and identical to a serial run.

use crate::coupling::{coupled_powers, PassConfiguration};
use crate::error::{PassError, Result};
use crate::farfield::{FarFieldPattern, DEFAULT_ANGLE_SAMPLES};
use crate::link::path_loss_constant;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Placement and averaging plan for the Monte-Carlo study.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulationPlan {
    /// Waveguide length L (m); UE x positions are uniform over [0, L].
    pub guide_length: f64,
    /// Height of the guide above the UE plane (m).
    pub ue_height: f64,
    /// Number of independent UE drops.
    pub num_drops: usize,
    /// Transmit SNR grid (dB).
    pub snr_grid_db: Vec<f64>,
    /// Placement grid resolution (m).
    pub placement_resolution: f64,
    /// Seed for the UE drop stream.
    pub rng_seed: u64,
    /// PA position of the fixed-antenna baseline (m).
    pub fixed_position: f64,
}

impl Default for SimulationPlan {
    /// The deployment described in the experiment: L = 40 m, UE plane 5 m
    /// below, 10⁴ drops, 1 cm placement grid, fixed baseline at mid-guide.
    fn default() -> Self {
        Self {
            guide_length: 40.0,
            ue_height: 5.0,
            num_drops: 10_000,
            snr_grid_db: (30..=80).step_by(5).map(f64::from).collect(),
            placement_resolution: 0.01,
            rng_seed: 42,
            fixed_position: 20.0,
        }
    }
}

/// Channel model used for the placement decision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PlacementModel {
    /// D(φ) ≡ 1: only the slant distance matters.
    Omni,
    /// Full directional pattern.
    Directional,
}

/// The three placement schemes of the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    FixedAntenna,
    OmniOptimized,
    DirectionalOptimized,
}

impl Scheme {
    pub const ALL: [Scheme; 3] = [
        Scheme::FixedAntenna,
        Scheme::OmniOptimized,
        Scheme::DirectionalOptimized,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Scheme::FixedAntenna => "fixed_antenna",
            Scheme::OmniOptimized => "omni_optimized",
            Scheme::DirectionalOptimized => "directional_optimized",
        }
    }
}

/// Per-scheme outcome: chosen placements, directional channel gains per drop,
/// and the rate curve over the SNR grid.
#[derive(Debug, Clone, Serialize)]
pub struct SchemeResult {
    pub scheme: Scheme,
    /// Mean spectral efficiency (bit/s/Hz) per SNR grid point.
    pub mean_rate: Vec<f64>,
    /// Chosen PA position per drop (m).
    pub chosen_positions: Vec<f64>,
    /// Directional-model channel gain |h|² per drop.
    pub channel_gains: Vec<f64>,
}

/// Full study outcome.
#[derive(Debug, Clone, Serialize)]
pub struct SimulationResult {
    pub plan: SimulationPlan,
    /// UE x positions, one per drop, in draw order.
    pub ue_positions: Vec<f64>,
    pub schemes: Vec<SchemeResult>,
}

impl SimulationResult {
    pub fn scheme(&self, scheme: Scheme) -> &SchemeResult {
        self.schemes
            .iter()
            .find(|s| s.scheme == scheme)
            .expect("all schemes are always simulated")
    }
}

/// Grid-search placement study over one PASS configuration.
pub struct PlacementStudy<'a> {
    plan: &'a SimulationPlan,
    pattern: FarFieldPattern,
    grid: Vec<f64>,
    /// η·2P_s, the placement-independent part of the channel gain.
    gain_scale: f64,
}

impl<'a> PlacementStudy<'a> {
    pub fn new(cfg: &'a PassConfiguration, plan: &'a SimulationPlan) -> Result<Self> {
        if plan.num_drops == 0 {
            return Err(PassError::Config("num_drops must be at least 1".into()));
        }
        if plan.snr_grid_db.is_empty() {
            return Err(PassError::Config("SNR grid must not be empty".into()));
        }
        crate::error::ensure_positive("UE height", plan.ue_height)?;
        crate::error::ensure_positive("placement resolution", plan.placement_resolution)?;
        if (plan.guide_length - cfg.guide_length()).abs() > 1e-12 {
            return Err(PassError::Config(format!(
                "plan guide length {} m disagrees with the configuration ({} m)",
                plan.guide_length,
                cfg.guide_length()
            )));
        }
        let lo = cfg.pa_length() / 2.0;
        let hi = plan.guide_length - cfg.pa_length() / 2.0;
        if !(plan.fixed_position >= lo && plan.fixed_position <= hi) {
            return Err(PassError::Config(format!(
                "fixed placement {} m outside [{lo}, {hi}] m",
                plan.fixed_position
            )));
        }
        let mut grid = Vec::new();
        let mut k = 0usize;
        loop {
            let x = lo + k as f64 * plan.placement_resolution;
            if x > hi {
                break;
            }
            grid.push(x);
            k += 1;
        }
        if grid.is_empty() {
            return Err(PassError::Config(
                "placement grid is empty; the PA does not fit the guide".into(),
            ));
        }

        let coupling = cfg.coupling();
        let pattern = FarFieldPattern::compute(cfg, &coupling, DEFAULT_ANGLE_SAMPLES)?;
        let (_, ps) = coupled_powers(&coupling, cfg.pa_length());
        let gain_scale = path_loss_constant(cfg.main_geometry().frequency()) * 2.0 * ps;
        Ok(Self {
            plan,
            pattern,
            grid,
            gain_scale,
        })
    }

    pub fn pattern(&self) -> &FarFieldPattern {
        &self.pattern
    }

    pub fn placement_grid(&self) -> &[f64] {
        &self.grid
    }

    /// Directional channel gain |h|² for a UE at (x_ue, −h) and PA at x_p.
    pub fn channel_gain(&self, x_ue: f64, x_p: f64) -> f64 {
        let dx = x_ue - x_p;
        let dy = -self.plan.ue_height;
        let r = dx.hypot(dy);
        let phi = dy.atan2(dx).rem_euclid(2.0 * PI);
        self.gain_scale * self.pattern.directivity_at(phi) / r
    }

    /// Channel gain under the omni placement model (D ≡ 1).
    pub fn channel_gain_omni(&self, x_ue: f64, x_p: f64) -> f64 {
        let r = (x_ue - x_p).hypot(self.plan.ue_height);
        self.gain_scale / r
    }

    /// Exhaustive grid search maximizing the model gain; ties break toward
    /// the smaller position.
    pub fn optimize_placement(&self, x_ue: f64, model: PlacementModel) -> f64 {
        let mut best_x = self.grid[0];
        let mut best_gain = f64::MIN;
        for &x_p in &self.grid {
            let gain = match model {
                PlacementModel::Omni => self.channel_gain_omni(x_ue, x_p),
                PlacementModel::Directional => self.channel_gain(x_ue, x_p),
            };
            if gain > best_gain {
                best_gain = gain;
                best_x = x_p;
            }
        }
        best_x
    }

    /// Runs the full study: draw drops, place per scheme, evaluate every
    /// scheme under the directional model, average rates per SNR point.
    pub fn run(&self) -> Result<SimulationResult> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.plan.rng_seed);
        let ue_positions: Vec<f64> = (0..self.plan.num_drops)
            .map(|_| rng.gen_range(0.0..self.plan.guide_length))
            .collect();

        // per-drop: (placement, directional gain) for each scheme
        let per_drop: Vec<[(f64, f64); 3]> = ue_positions
            .par_iter()
            .map(|&x_ue| {
                let x_fixed = self.plan.fixed_position;
                let x_omni = self.optimize_placement(x_ue, PlacementModel::Omni);
                let x_dir = self.optimize_placement(x_ue, PlacementModel::Directional);
                [
                    (x_fixed, self.channel_gain(x_ue, x_fixed)),
                    (x_omni, self.channel_gain(x_ue, x_omni)),
                    (x_dir, self.channel_gain(x_ue, x_dir)),
                ]
            })
            .collect();

        let snrs: Vec<f64> = self
            .plan
            .snr_grid_db
            .iter()
            .map(|db| 10f64.powf(db / 10.0))
            .collect();

        let mut schemes = Vec::with_capacity(3);
        for (idx, scheme) in Scheme::ALL.into_iter().enumerate() {
            let chosen_positions: Vec<f64> = per_drop.iter().map(|d| d[idx].0).collect();
            let channel_gains: Vec<f64> = per_drop.iter().map(|d| d[idx].1).collect();
            let mut mean_rate = Vec::with_capacity(snrs.len());
            for &snr in &snrs {
                // fixed-order serial reduction keeps results reproducible
                let sum: f64 = channel_gains
                    .iter()
                    .map(|g| (1.0 + g * snr).log2())
                    .sum();
                let mean = sum / channel_gains.len() as f64;
                if !mean.is_finite() {
                    return Err(PassError::Degenerate(format!(
                        "mean rate for {} at SNR {snr} is not finite",
                        scheme.label()
                    )));
                }
                mean_rate.push(mean);
            }
            schemes.push(SchemeResult {
                scheme,
                mean_rate,
                chosen_positions,
                channel_gains,
            });
        }

        Ok(SimulationResult {
            plan: self.plan.clone(),
            ue_positions,
            schemes,
        })
    }
}

/// Convenience wrapper: build the study and run it.
pub fn run_plan(cfg: &PassConfiguration, plan: &SimulationPlan) -> Result<SimulationResult> {
    PlacementStudy::new(cfg, plan)?.run()
}
