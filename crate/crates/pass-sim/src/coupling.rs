//! Coupled-mode power transfer between the main waveguide and the two
//! symmetrically attached PAs.
//!
//! The coupling coefficient comes from the overlap of one guide's evanescent
//! tail with the other's core,
//!
//!   κ = β₀²(n1² − n0²) · I / (2 β_mx · N),
//!
//! where N = ∫|E_m|²dy normalizes the main-guide mode and I is the overlap
//! integral of the main-guide core field with the PA's evanescent tail. Both
//! closed forms are kept as separate functions so each can be checked against
//! quadrature. With phase matching (equal slab widths) the two-PA amplitudes
//! evolve as A = A₀cos(√2κx̃), B = −(jA₀/√2)sin(√2κx̃) over the coupling
//! region x̃ ∈ [0, Ls].

use crate::error::{PassError, Result};
use crate::numerics::simpson;
use crate::slab::{ModeSolution, SlabGeometry};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, SQRT_2};

/// Which of the two PAs, mirrored about the waveguide axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PaSide {
    Upper,
    Lower,
}

impl PaSide {
    fn sign(self) -> f64 {
        match self {
            PaSide::Upper => 1.0,
            PaSide::Lower => -1.0,
        }
    }
}

/// Full system description: main slab, the two identical PAs, PA length and
/// position, and the waveguide extent.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PassConfiguration {
    main_geometry: SlabGeometry,
    main_mode: ModeSolution,
    pa_geometry: SlabGeometry,
    pa_mode: ModeSolution,
    pa_length: f64,
    pa_position: f64,
    guide_length: f64,
    input_amplitude: f64,
}

impl PassConfiguration {
    /// Solves both slabs and validates the placement.
    ///
    /// The slabs must share frequency and materials. Unequal widths are
    /// allowed here (the coupling coefficient is still well defined) but the
    /// amplitude and pattern paths require phase matching and will reject a
    /// configuration with Δ ≠ 0.
    pub fn new(
        main: SlabGeometry,
        pa: SlabGeometry,
        pa_length: f64,
        pa_position: f64,
        guide_length: f64,
    ) -> Result<Self> {
        if main.frequency() != pa.frequency() {
            return Err(PassError::Config(format!(
                "main and PA slabs must share the operating frequency ({} vs {})",
                main.frequency(),
                pa.frequency()
            )));
        }
        if main.core_index() != pa.core_index() || main.clad_index() != pa.clad_index() {
            return Err(PassError::Config(
                "main and PA slabs must share core and cladding indices".into(),
            ));
        }
        crate::error::ensure_positive("PA length", pa_length)?;
        crate::error::ensure_positive("waveguide length", guide_length)?;
        if pa_position < pa_length / 2.0 || pa_position > guide_length - pa_length / 2.0 {
            return Err(PassError::Config(format!(
                "PA center {pa_position} m must lie in [Ls/2, L - Ls/2] = [{}, {}] m",
                pa_length / 2.0,
                guide_length - pa_length / 2.0
            )));
        }
        let main_mode = main.solve_te0()?;
        let pa_mode = pa.solve_te0()?;
        Ok(Self {
            main_geometry: main,
            main_mode,
            pa_geometry: pa,
            pa_mode,
            pa_length,
            pa_position,
            guide_length,
            input_amplitude: 1.0,
        })
    }

    pub fn with_input_amplitude(mut self, a0: f64) -> Result<Self> {
        crate::error::ensure_positive("input amplitude", a0)?;
        self.input_amplitude = a0;
        Ok(self)
    }

    pub fn main_geometry(&self) -> &SlabGeometry {
        &self.main_geometry
    }

    pub fn main_mode(&self) -> &ModeSolution {
        &self.main_mode
    }

    pub fn pa_geometry(&self) -> &SlabGeometry {
        &self.pa_geometry
    }

    pub fn pa_mode(&self) -> &ModeSolution {
        &self.pa_mode
    }

    /// PA length Ls (m).
    pub fn pa_length(&self) -> f64 {
        self.pa_length
    }

    /// PA center position x_p along the guide (m).
    pub fn pa_position(&self) -> f64 {
        self.pa_position
    }

    /// Waveguide length L (m).
    pub fn guide_length(&self) -> f64 {
        self.guide_length
    }

    pub fn input_amplitude(&self) -> f64 {
        self.input_amplitude
    }

    /// Transverse center of one PA: ±(W_m + W_s)/2.
    pub fn pa_center_y(&self, side: PaSide) -> f64 {
        side.sign() * 0.5 * (self.main_geometry.width() + self.pa_geometry.width())
    }

    /// Longitudinal extent of the coupling region [x_p − Ls/2, x_p + Ls/2].
    pub fn coupling_region(&self) -> (f64, f64) {
        (
            self.pa_position - self.pa_length / 2.0,
            self.pa_position + self.pa_length / 2.0,
        )
    }

    /// Phase mismatch Δ = β_sx − β_mx; zero for identical widths.
    pub fn phase_mismatch(&self) -> f64 {
        self.pa_mode.beta_x - self.main_mode.beta_x
    }

    fn require_phase_matched(&self) -> Result<()> {
        let delta = self.phase_mismatch();
        if delta != 0.0 {
            return Err(PassError::PhaseMismatch { delta });
        }
        Ok(())
    }

    /// Coupling coefficient and derived coupling length for this system.
    pub fn coupling(&self) -> CouplingSolution {
        let geom = &self.main_geometry;
        let beta0 = geom.free_space_wavenumber();
        let n1 = geom.core_index();
        let n0 = geom.clad_index();
        let numerator = overlap_integral(geom, &self.main_mode, &self.pa_geometry, &self.pa_mode);
        let denominator = normalization_integral(geom, &self.main_mode);
        let kappa = beta0 * beta0 * (n1 * n1 - n0 * n0) / (2.0 * self.main_mode.beta_x)
            * numerator
            / denominator;
        CouplingSolution {
            kappa,
            coupling_length: PI / (2.0 * SQRT_2 * kappa),
            delta: self.phase_mismatch(),
        }
    }

    /// κ by direct quadrature of the defining integral ratio, as an
    /// independent check of the closed form. Cladding tails are truncated
    /// where the evanescent factor falls below 1e−12 of its interface value.
    pub fn coupling_coefficient_quadrature(&self, panels: usize) -> f64 {
        quadrature_kappa(
            self.main_geometry.width(),
            &self.main_mode,
            self.pa_geometry.width(),
            &self.pa_mode,
            self.main_geometry.free_space_wavenumber(),
            self.main_geometry.core_index(),
            self.main_geometry.clad_index(),
            panels,
        )
    }

    /// Same quadrature with the roles of main guide and PA swapped
    /// (κ_s instead of κ_m); with equal widths reciprocity makes them equal.
    pub fn coupling_coefficient_quadrature_swapped(&self, panels: usize) -> f64 {
        quadrature_kappa(
            self.pa_geometry.width(),
            &self.pa_mode,
            self.main_geometry.width(),
            &self.main_mode,
            self.pa_geometry.free_space_wavenumber(),
            self.pa_geometry.core_index(),
            self.pa_geometry.clad_index(),
            panels,
        )
    }

    /// Mode amplitudes (A, B) at local coordinate x̃ ∈ [0, Ls] inside the
    /// coupling region.
    pub fn mode_amplitudes(
        &self,
        coupling: &CouplingSolution,
        x_tilde: f64,
    ) -> Result<(Complex64, Complex64)> {
        self.require_phase_matched()?;
        if !(0.0..=self.pa_length).contains(&x_tilde) {
            return Err(PassError::Domain(format!(
                "x_tilde = {x_tilde} m outside the coupling region [0, {}] m",
                self.pa_length
            )));
        }
        let arg = SQRT_2 * coupling.kappa * x_tilde;
        let a = Complex64::new(self.input_amplitude * arg.cos(), 0.0);
        let b = Complex64::new(0.0, -self.input_amplitude / SQRT_2 * arg.sin());
        Ok((a, b))
    }

    /// Main-guide amplitude A(x) over the whole waveguide, piecewise:
    /// constant A₀ before the PAs, cosine inside, constant after.
    pub fn amplitude_along_guide(&self, coupling: &CouplingSolution, x: f64) -> Result<Complex64> {
        self.require_phase_matched()?;
        if !(0.0..=self.guide_length).contains(&x) {
            return Err(PassError::Domain(format!(
                "x = {x} m outside the waveguide [0, {}] m",
                self.guide_length
            )));
        }
        let (start, end) = self.coupling_region();
        let a0 = self.input_amplitude;
        let value = if x < start {
            a0
        } else if x <= end {
            a0 * (SQRT_2 * coupling.kappa * (x - start)).cos()
        } else {
            a0 * (SQRT_2 * coupling.kappa * self.pa_length).cos()
        };
        Ok(Complex64::new(value, 0.0))
    }

    /// Transverse profile of the main-guide mode: cosine core, exponential
    /// cladding tails, continuous at |y| = W_m/2.
    pub fn transverse_profile_main(&self, y: f64) -> f64 {
        profile(
            self.input_amplitude,
            self.main_geometry.width(),
            &self.main_mode,
            y,
        )
    }

    /// Transverse profile of one PA mode, centered at its ±(W_m+W_s)/2 axis.
    /// The PA amplitude equals the input amplitude (equal-amplitude symmetry
    /// condition used by the overlap integral).
    pub fn transverse_profile_pa(&self, side: PaSide, y: f64) -> f64 {
        profile(
            self.input_amplitude,
            self.pa_geometry.width(),
            &self.pa_mode,
            y - self.pa_center_y(side),
        )
    }

    /// Full complex PA field B(x)·E_s(y)·e^(−jβ_sx·x); identically zero
    /// outside the coupling region, where no power has been transferred.
    pub fn pa_field(
        &self,
        coupling: &CouplingSolution,
        x: f64,
        y: f64,
        side: PaSide,
    ) -> Result<Complex64> {
        self.require_phase_matched()?;
        let (start, end) = self.coupling_region();
        if x < start || x > end {
            return Ok(Complex64::ZERO);
        }
        let envelope = (SQRT_2 * coupling.kappa * (x - start)).sin();
        let b = Complex64::new(0.0, -self.input_amplitude / SQRT_2 * envelope);
        let profile = profile(
            1.0,
            self.pa_geometry.width(),
            &self.pa_mode,
            y - self.pa_center_y(side),
        );
        let carrier = Complex64::from_polar(1.0, -self.pa_mode.beta_x * x);
        Ok(b * profile * carrier)
    }
}

/// Even-mode transverse profile centered at y = 0 with peak amplitude `a0`.
fn profile(a0: f64, width: f64, mode: &ModeSolution, y: f64) -> f64 {
    let half = width / 2.0;
    if y.abs() <= half {
        a0 * (mode.beta_y * y).cos()
    } else {
        a0 * (mode.beta_y * half).cos() * (-mode.sigma * (y.abs() - half)).exp()
    }
}

/// Closed form for ∫|E_m(y)|²dy over core and cladding, per unit amplitude:
/// W/2 + sin(β_y W)/(2β_y) + cos²(β_y W/2)/σ.
pub(crate) fn normalization_integral(geom: &SlabGeometry, mode: &ModeSolution) -> f64 {
    let w = geom.width();
    let by = mode.beta_y;
    w / 2.0 + (by * w).sin() / (2.0 * by) + (by * w / 2.0).cos().powi(2) / mode.sigma
}

/// Closed form for the overlap of the main-guide core field with the PA's
/// evanescent tail over the main core, per unit amplitude:
///
///   cos(β_sy W_s/2)·e^(−σ_s W_m/2)/(σ_s² + β_my²)
///     · [2σ_s cos(β_my W_m/2) sinh(σ_s W_m/2)
///        + 2β_my sin(β_my W_m/2) cosh(σ_s W_m/2)]
pub(crate) fn overlap_integral(
    main_geom: &SlabGeometry,
    main_mode: &ModeSolution,
    pa_geom: &SlabGeometry,
    pa_mode: &ModeSolution,
) -> f64 {
    let wm = main_geom.width();
    let ws = pa_geom.width();
    let by = main_mode.beta_y;
    let sig = pa_mode.sigma;
    let bracket = 2.0 * sig * (by * wm / 2.0).cos() * (sig * wm / 2.0).sinh()
        + 2.0 * by * (by * wm / 2.0).sin() * (sig * wm / 2.0).cosh();
    (pa_mode.beta_y * ws / 2.0).cos() * (-sig * wm / 2.0).exp() / (sig * sig + by * by) * bracket
}

/// Quadrature evaluation of κ = ω²μ₀ε₀(n1²−n0²)·I/(2β_x·N) with both
/// integrals done numerically. `a` is the guide whose mode is normalized and
/// whose core hosts the overlap; `b` supplies the evanescent tail reaching
/// across the shared interface.
#[allow(clippy::too_many_arguments)]
fn quadrature_kappa(
    width_a: f64,
    mode_a: &ModeSolution,
    width_b: f64,
    mode_b: &ModeSolution,
    beta0: f64,
    n1: f64,
    n0: f64,
    panels: usize,
) -> f64 {
    let half_a = width_a / 2.0;
    // |E_a|² over core + cladding; tails cut where e^(−σ(y−W/2)) < 1e−12
    let cutoff = half_a + (1e12f64).ln() / mode_a.sigma;
    let e_a = |y: f64| profile(1.0, width_a, mode_a, y);
    let norm = simpson(-cutoff, cutoff, panels, |y| {
        let v = e_a(y);
        v * v
    });
    // tail of guide b inside the core of a; the b core starts at the shared
    // interface y = half_a, so the tail decays over (half_a − y).
    let tail_amp = (mode_b.beta_y * width_b / 2.0).cos();
    let overlap = simpson(-half_a, half_a, panels, |y| {
        e_a(y) * tail_amp * (-mode_b.sigma * (half_a - y)).exp()
    });
    beta0 * beta0 * (n1 * n1 - n0 * n0) / (2.0 * mode_a.beta_x) * overlap / norm
}

/// Coupling coefficient with its derived coupling length and phase mismatch.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CouplingSolution {
    kappa: f64,
    coupling_length: f64,
    delta: f64,
}

impl CouplingSolution {
    /// Coupling coefficient κ (rad/m), real and positive in the symmetric
    /// phase-matched case.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// Shortest PA length for complete power transfer, L_c = π/(2√2κ).
    pub fn coupling_length(&self) -> f64 {
        self.coupling_length
    }

    /// Phase mismatch Δ = β_sx − β_mx (rad/m).
    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// Normalized powers (P_m, P_s) in the main guide and in each PA after a
/// coupling run of length x̃: P_m = cos²(√2κx̃), P_s = sin²(√2κx̃)/2.
///
/// Values of x̃ beyond Ls are allowed so PA-length sweeps can evaluate the
/// powers at x̃ = Ls directly.
pub fn coupled_powers(coupling: &CouplingSolution, x_tilde: f64) -> (f64, f64) {
    let (s, c) = (SQRT_2 * coupling.kappa * x_tilde).sin_cos();
    (c * c, s * s / 2.0)
}

/// Power coupled by a single PA in the textbook synchronous two-guide case,
/// P = sin²(κx̃). This is a reference model for comparison plots, not part of
/// the symmetric two-PA solution.
pub fn single_pa_coupled_power(coupling: &CouplingSolution, x_tilde: f64) -> f64 {
    (coupling.kappa * x_tilde).sin().powi(2)
}
