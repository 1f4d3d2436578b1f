//! End-to-end channel between the waveguide input port and a UE.
//!
//! The channel magnitude follows |h|² = η·2P_s·D(φ_ue)/r with the 2D
//! path-loss constant η = c/(4π²f); the phase accumulates over the guided
//! stretch up to the PAs (wavelength λ_g = 2π/β_mx) and the free-space leg
//! (wavelength λ). Radiation efficiency is taken as one: the PAs are
//! lossless, so the full coupled fraction 2P_s radiates.

use crate::constants::C_LIGHT;
use crate::coupling::{coupled_powers, PassConfiguration};
use crate::error::{PassError, Result};
use crate::farfield::FarFieldPattern;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Logarithm base for spectral efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RateLogBase {
    /// log₂: rate in bit/s/Hz. Default.
    #[default]
    Bits,
    /// Natural log: rate in nat/s/Hz, for exact replication of plots that
    /// use ln.
    Nats,
}

/// One UE served by a PASS deployment.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct LinkScenario {
    cfg: PassConfiguration,
    ue_position: (f64, f64),
    transmit_power: f64,
    noise_power: f64,
    rate_log: RateLogBase,
}

impl LinkScenario {
    pub fn new(
        cfg: PassConfiguration,
        ue_position: (f64, f64),
        transmit_power: f64,
        noise_power: f64,
    ) -> Result<Self> {
        crate::error::ensure_positive("transmit power", transmit_power)?;
        crate::error::ensure_positive("noise power", noise_power)?;
        let dx = ue_position.0 - cfg.pa_position();
        let dy = ue_position.1;
        if dx == 0.0 && dy == 0.0 {
            return Err(PassError::Degenerate(
                "UE coincides with the PA center; the channel is singular".into(),
            ));
        }
        Ok(Self {
            cfg,
            ue_position,
            transmit_power,
            noise_power,
            rate_log: RateLogBase::default(),
        })
    }

    pub fn with_rate_log(mut self, base: RateLogBase) -> Self {
        self.rate_log = base;
        self
    }

    pub fn configuration(&self) -> &PassConfiguration {
        &self.cfg
    }

    pub fn ue_position(&self) -> (f64, f64) {
        self.ue_position
    }

    pub fn transmit_power(&self) -> f64 {
        self.transmit_power
    }

    pub fn noise_power(&self) -> f64 {
        self.noise_power
    }

    /// Transmit SNR P_T/σ².
    pub fn transmit_snr(&self) -> f64 {
        self.transmit_power / self.noise_power
    }
}

/// 2D free-space path-loss constant η = c/(4π²f).
pub fn path_loss_constant(frequency: f64) -> f64 {
    C_LIGHT / (4.0 * PI * PI * frequency)
}

/// Channel magnitude, phase, and the audit components they derive from.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChannelCoefficient {
    /// |h| under the 2D propagation convention (relative gain).
    pub magnitude: f64,
    /// Phase −(2π/λ_g)r_p − (2π/λ)r wrapped to (−π, π].
    pub phase: f64,
    pub components: ChannelComponents,
}

/// Intermediate quantities of the channel computation.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ChannelComponents {
    /// 2D path-loss constant η.
    pub eta: f64,
    /// Total coupled power fraction 2P_s at x̃ = Ls.
    pub coupled_power: f64,
    /// Directivity D(φ_ue) interpolated at the UE angle.
    pub directivity: f64,
    /// UE angle from the PA center, counterclockwise from +x, in [0, 2π).
    pub ue_angle: f64,
    /// Free-space distance from the PA center to the UE.
    pub distance: f64,
    /// In-guide distance from the input port to the PA center (= x_p).
    pub guide_distance: f64,
    /// Guided wavelength 2π/β_mx.
    pub guided_wavelength: f64,
}

impl ChannelCoefficient {
    /// Recomputes |h| from the stored components.
    pub fn magnitude_from_components(&self) -> f64 {
        let c = &self.components;
        (c.eta * c.coupled_power * c.directivity / c.distance).sqrt()
    }
}

/// Channel between the waveguide input and the scenario's UE, evaluated on a
/// precomputed pattern (which must belong to the scenario's configuration).
pub fn channel(scenario: &LinkScenario, pattern: &FarFieldPattern) -> Result<ChannelCoefficient> {
    let cfg = scenario.configuration();
    let (x_ue, y_ue) = scenario.ue_position();
    let dx = x_ue - cfg.pa_position();
    let dy = y_ue;
    let r = dx.hypot(dy);
    if r == 0.0 {
        return Err(PassError::Degenerate(
            "UE coincides with the PA center; the channel is singular".into(),
        ));
    }
    let phi_ue = dy.atan2(dx).rem_euclid(2.0 * PI);
    let coupling = cfg.coupling();
    let (_, ps) = coupled_powers(&coupling, cfg.pa_length());
    let eta = path_loss_constant(cfg.main_geometry().frequency());
    let directivity = pattern.directivity_at(phi_ue);
    let magnitude = (eta * 2.0 * ps * directivity / r).sqrt();

    let lambda = cfg.main_geometry().wavelength();
    let lambda_g = cfg.main_mode().guided_wavelength();
    let r_p = cfg.pa_position();
    let raw_phase = -(2.0 * PI / lambda_g * r_p + 2.0 * PI / lambda * r);
    let phase = raw_phase - (raw_phase / (2.0 * PI)).round() * 2.0 * PI;

    Ok(ChannelCoefficient {
        magnitude,
        phase,
        components: ChannelComponents {
            eta,
            coupled_power: 2.0 * ps,
            directivity,
            ue_angle: phi_ue,
            distance: r,
            guide_distance: r_p,
            guided_wavelength: lambda_g,
        },
    })
}

/// Spectral efficiency R = log(1 + |h|²·P_T/σ²) in the scenario's log base.
pub fn spectral_efficiency(scenario: &LinkScenario, h: &ChannelCoefficient) -> f64 {
    let snr = h.magnitude * h.magnitude * scenario.transmit_snr();
    match scenario.rate_log {
        RateLogBase::Bits => (1.0 + snr).log2(),
        RateLogBase::Nats => (1.0 + snr).ln(),
    }
}
