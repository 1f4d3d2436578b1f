//! Vacuum electromagnetic constants.
//!
//! `MU_0` is the classical 4π×10⁻⁷ value and `EPS_0` is derived from it via
//! c² = 1/(μ₀ε₀), so β₀ = ω√(μ₀ε₀) and ω²μ₀ε₀ = β₀² hold exactly in f64.

/// Speed of light in vacuum (m/s), exact by SI definition.
pub const C_LIGHT: f64 = 299_792_458.0;

/// Vacuum permeability (H/m).
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

/// Vacuum permittivity (F/m), 1/(μ₀c²).
pub const EPS_0: f64 = 1.0 / (MU_0 * C_LIGHT * C_LIGHT);
