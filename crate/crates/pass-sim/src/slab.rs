//! Even TE₀ mode of a symmetric dielectric slab.
//!
//! A slab of width W, core index n1 and cladding index n0 guides the
//! fundamental even TE mode whenever its normalized frequency
//! V = (β₀W/2)·√(n1² − n0²) stays below π/2. The modal constants follow from
//! the eigenvalue system
//!
//!   u·tan(u) = w,    u² + w² = V²,
//!
//! with u = β_y·W/2 and w = σ·W/2. Everything here is in SI units.

use crate::constants::{C_LIGHT, EPS_0, MU_0};
use crate::error::{PassError, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

/// Physical description of one symmetric slab at a fixed operating frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlabGeometry {
    width: f64,
    core_index: f64,
    clad_index: f64,
    frequency: f64,
}

impl SlabGeometry {
    /// Validates `width > 0`, `frequency > 0` and `n1 > n0 >= 1`.
    pub fn new(width: f64, core_index: f64, clad_index: f64, frequency: f64) -> Result<Self> {
        crate::error::ensure_positive("slab width", width)?;
        crate::error::ensure_positive("frequency", frequency)?;
        let indices_ok =
            core_index.is_finite() && clad_index >= 1.0 && core_index > clad_index;
        if !indices_ok {
            return Err(PassError::Config(format!(
                "refractive indices must satisfy n1 > n0 >= 1, got n1 = {core_index}, n0 = {clad_index}"
            )));
        }
        Ok(Self {
            width,
            core_index,
            clad_index,
            frequency,
        })
    }

    /// Builds the slab whose width gives exactly the requested normalized
    /// frequency (see [`width_for_v`]).
    pub fn for_v_number(core_index: f64, clad_index: f64, frequency: f64, v: f64) -> Result<Self> {
        let width = width_for_v(core_index, clad_index, frequency, v)?;
        Self::new(width, core_index, clad_index, frequency)
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn core_index(&self) -> f64 {
        self.core_index
    }

    pub fn clad_index(&self) -> f64 {
        self.clad_index
    }

    pub fn frequency(&self) -> f64 {
        self.frequency
    }

    /// Free-space wavenumber β₀ = 2πf√(μ₀ε₀).
    pub fn free_space_wavenumber(&self) -> f64 {
        2.0 * PI * self.frequency * (MU_0 * EPS_0).sqrt()
    }

    /// Free-space wavelength λ = c/f.
    pub fn wavelength(&self) -> f64 {
        C_LIGHT / self.frequency
    }

    /// Normalized frequency V = (β₀W/2)·√(n1² − n0²).
    pub fn normalized_frequency(&self) -> f64 {
        0.5 * self.free_space_wavenumber()
            * self.width
            * (self.core_index * self.core_index - self.clad_index * self.clad_index).sqrt()
    }

    /// Solves the even-mode eigenvalue system for this slab.
    pub fn solve_te0(&self) -> Result<ModeSolution> {
        let v = self.normalized_frequency();
        let (u, w) = solve_uw(v)?;
        let beta0 = self.free_space_wavenumber();
        let beta_y = 2.0 * u / self.width;
        let sigma = 2.0 * w / self.width;
        let beta_x = (beta0 * beta0 * self.core_index * self.core_index - beta_y * beta_y).sqrt();
        Ok(ModeSolution {
            beta_x,
            beta_y,
            sigma,
            v_num: v,
            u,
            w,
        })
    }
}

/// Inverts the V formula: the width for which `normalized_frequency` equals
/// `v_target`. Rejects the multimode regime `v_target >= pi/2`.
pub fn width_for_v(core_index: f64, clad_index: f64, frequency: f64, v_target: f64) -> Result<f64> {
    if v_target >= FRAC_PI_2 {
        return Err(PassError::Multimode { v: v_target });
    }
    if v_target <= 0.0 || v_target.is_nan() {
        return Err(PassError::NoGuidedMode { v: v_target });
    }
    let probe = SlabGeometry::new(1.0, core_index, clad_index, frequency)?;
    let beta0 = probe.free_space_wavenumber();
    Ok(2.0 * v_target / (beta0 * (core_index * core_index - clad_index * clad_index).sqrt()))
}

/// Solved TE₀ modal constants of one slab.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSolution {
    /// Longitudinal propagation constant β_x (rad/m).
    pub beta_x: f64,
    /// Transverse propagation constant β_y (rad/m).
    pub beta_y: f64,
    /// Cladding decay constant σ (1/m).
    pub sigma: f64,
    /// Normalized frequency V.
    pub v_num: f64,
    /// Normalized transverse variable u = β_y·W/2.
    pub u: f64,
    /// Normalized decay variable w = σ·W/2.
    pub w: f64,
}

impl ModeSolution {
    /// Guided wavelength λ_g = 2π/β_x.
    pub fn guided_wavelength(&self) -> f64 {
        2.0 * PI / self.beta_x
    }

    /// Effective index β_x/β₀. The solution does not store β₀, so this takes
    /// the geometry it was solved from.
    pub fn effective_index(&self, geom: &SlabGeometry) -> f64 {
        self.beta_x / geom.free_space_wavenumber()
    }
}

const MAX_BISECTIONS: usize = 200;

/// Root of u·tan(u) = √(V² − u²) on (0, min(V, π/2)).
///
/// g(u) = u·tan(u) − √(V² − u²) is strictly increasing and changes sign on
/// the bracket whenever 0 < V < π/2, so bisection cannot miss the root; a few
/// Newton steps clamped to the bracket then polish it to machine precision.
pub(crate) fn solve_uw(v: f64) -> Result<(f64, f64)> {
    if v <= 0.0 || v.is_nan() {
        return Err(PassError::NoGuidedMode { v });
    }
    if v >= FRAC_PI_2 {
        return Err(PassError::Multimode { v });
    }
    let g = |u: f64| u * u.tan() - (v * v - u * u).max(0.0).sqrt();

    let eps = 1e-9_f64.min(0.25 * v);
    let mut lo = eps;
    let mut hi = v.min(FRAC_PI_2 - 1e-9);
    if g(lo) >= 0.0 {
        // root is below eps: weakly guided limit, u ~ V
        lo = 0.0;
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        let next = 0.5 * (lo + hi);
        if (next - mid).abs() <= f64::EPSILON * mid.abs() {
            mid = next;
            break;
        }
        mid = next;
    }

    // Safeguarded Newton polish; clamps keep the iterate inside (lo, hi).
    let mut u = mid;
    for _ in 0..4 {
        let w2 = (v * v - u * u).max(0.0);
        let w = w2.sqrt();
        let cos_u = u.cos();
        let resid = u * u.tan() - w;
        let mut deriv = u.tan() + u / (cos_u * cos_u);
        if w > 0.0 {
            deriv += u / w;
        }
        if !deriv.is_finite() || deriv == 0.0 {
            break;
        }
        let next = u - resid / deriv;
        if next.is_finite() && next > 0.0 && next < v.min(FRAC_PI_2) {
            u = next;
        }
    }

    let w = (v * v - u * u).max(0.0).sqrt();
    let residual = (u * u.tan() - w).abs();
    if residual > 1e-10 * v.max(1.0) {
        return Err(PassError::SolverFailure {
            iterations: MAX_BISECTIONS,
            residual,
        });
    }
    Ok((u, w))
}

#[cfg(test)]
mod tests {
    use super::*;

    const N1: f64 = 1.449_137_674_618_944; // sqrt(2.1)
    const N0: f64 = 1.0;
    const F0: f64 = 60e9;

    fn reference_lambda() -> f64 {
        C_LIGHT / F0
    }

    /// Independent oracle: dense sign scan over u ∈ (0, min(V, π/2)) at 10⁶
    /// points followed by plain bisection on the located sign change.
    fn oracle_u(v: f64) -> f64 {
        let hi = v.min(FRAC_PI_2);
        let n = 1_000_000usize;
        let g = |u: f64| u * u.tan() - (v * v - u * u).max(0.0).sqrt();
        let at = |i: usize| 1e-12 + (hi - 2e-12) * i as f64 / (n - 1) as f64;
        let mut bracket = None;
        for i in 0..n - 1 {
            if g(at(i)) <= 0.0 && g(at(i + 1)) > 0.0 {
                bracket = Some((at(i), at(i + 1)));
                break;
            }
        }
        let (mut a, mut b) = bracket.expect("oracle found no sign change");
        for _ in 0..100 {
            let m = 0.5 * (a + b);
            if g(m) <= 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn v_number_matches_reference_widths() {
        let lam = reference_lambda();
        let g1 = SlabGeometry::new(0.408 * lam, N1, N0, F0).unwrap();
        let g2 = SlabGeometry::new(0.470 * lam, N1, N0, F0).unwrap();
        assert!((g1.normalized_frequency() - 1.35).abs() < 0.01);
        assert!((g2.normalized_frequency() - 1.55).abs() < 0.01);
    }

    #[test]
    fn v_number_is_linear_in_width() {
        let lam = reference_lambda();
        let g = SlabGeometry::new(1e-6 * lam, N1, N0, F0).unwrap();
        let g2 = SlabGeometry::new(2e-6 * lam, N1, N0, F0).unwrap();
        assert!(g.normalized_frequency() < 1e-5);
        let ratio = g2.normalized_frequency() / g.normalized_frequency();
        assert!((ratio - 2.0).abs() < 1e-12);
    }

    #[test]
    fn width_for_v_matches_reference_width() {
        // the nominal design width for V = 1.5 is quoted as 2.2 mm; the exact inversion gives ~2.27 mm
        let w = width_for_v(N1, N0, F0, 1.5).unwrap();
        assert!(
            (w - 2.2e-3).abs() / 2.2e-3 < 0.05,
            "width {} mm not within 5% of 2.2 mm",
            w * 1e3
        );
        let lam = reference_lambda();
        let w135 = width_for_v(N1, N0, F0, 1.35).unwrap();
        assert!((w135 / lam - 0.408).abs() / 0.408 < 0.01);
        let w155 = width_for_v(N1, N0, F0, 1.55).unwrap();
        assert!((w155 / lam - 0.470).abs() / 0.470 < 0.01);
    }

    #[test]
    fn width_for_v_round_trips() {
        for &v in &[0.3, 0.9, 1.35, 1.5, 1.55] {
            let w = width_for_v(N1, N0, F0, v).unwrap();
            let g = SlabGeometry::new(w, N1, N0, F0).unwrap();
            assert!((g.normalized_frequency() - v).abs() < 1e-12);
        }
    }

    #[test]
    fn width_for_v_rejects_multimode_and_nonpositive() {
        assert!(matches!(
            width_for_v(N1, N0, F0, FRAC_PI_2),
            Err(PassError::Multimode { .. })
        ));
        assert!(matches!(
            width_for_v(N1, N0, F0, 1.6),
            Err(PassError::Multimode { .. })
        ));
        assert!(matches!(
            width_for_v(N1, N0, F0, 0.0),
            Err(PassError::NoGuidedMode { .. })
        ));
    }

    #[test]
    fn geometry_rejects_invalid_fields() {
        assert!(SlabGeometry::new(0.0, N1, N0, F0).is_err());
        assert!(SlabGeometry::new(1e-3, N1, N0, -1.0).is_err());
        assert!(SlabGeometry::new(1e-3, 1.0, 1.0, F0).is_err());
        assert!(SlabGeometry::new(1e-3, 1.2, 0.5, F0).is_err());
    }

    #[test]
    fn solver_matches_dense_scan_oracle_at_v15() {
        let u = solve_uw(1.5).unwrap().0;
        let u_ref = oracle_u(1.5);
        assert!(
            (u - u_ref).abs() < 1e-9,
            "solver u {u} vs oracle {u_ref}"
        );
        // frozen from the oracle
        assert!((u - 0.915).abs() < 1e-3);
    }

    #[test]
    fn weak_guidance_limit() {
        let v = 1e-3;
        let (u, _) = solve_uw(v).unwrap();
        assert!((u / v - 1.0).abs() < 1e-5);
    }

    #[test]
    fn beta_x_increases_with_v() {
        let lam = reference_lambda();
        let m1 = SlabGeometry::new(0.408 * lam, N1, N0, F0)
            .unwrap()
            .solve_te0()
            .unwrap();
        let m2 = SlabGeometry::new(0.470 * lam, N1, N0, F0)
            .unwrap()
            .solve_te0()
            .unwrap();
        assert!(m2.beta_x > m1.beta_x);
        // spot check against the oracle at both V numbers
        let g1 = SlabGeometry::new(0.408 * lam, N1, N0, F0).unwrap();
        assert!((m1.u - oracle_u(g1.normalized_frequency())).abs() < 1e-9);
    }

    #[test]
    fn solve_rejects_multimode_and_degenerate_v() {
        let w = width_for_v(N1, N0, F0, 1.58).unwrap_err();
        assert!(matches!(w, PassError::Multimode { .. }));
        assert!(matches!(solve_uw(-1.0), Err(PassError::NoGuidedMode { .. })));
        assert!(matches!(solve_uw(0.0), Err(PassError::NoGuidedMode { .. })));
        assert!(matches!(solve_uw(1.6), Err(PassError::Multimode { .. })));
    }

    #[test]
    fn eigenvalue_residuals_and_reconstruction_identities() {
        // deterministic pseudo-random geometries across the single-mode range
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..50 {
            let v = 0.3 + 1.25 * next();
            let n1 = 1.2 + next();
            let f = (20.0 + 180.0 * next()) * 1e9;
            let w = width_for_v(n1, 1.0, f, v).unwrap();
            let geom = SlabGeometry::new(w, n1, 1.0, f).unwrap();
            let mode = geom.solve_te0().unwrap();
            let beta0 = geom.free_space_wavenumber();

            assert!((mode.u * mode.u.tan() - mode.w).abs() < 1e-10);
            assert!((mode.u * mode.u + mode.w * mode.w - v * v).abs() < 1e-10 * v * v);

            let lhs = mode.beta_y * mode.beta_y + mode.beta_x * mode.beta_x;
            let rhs = beta0 * beta0 * n1 * n1;
            assert!((lhs - rhs).abs() / rhs < 1e-12);
            let lhs2 = mode.sigma * mode.sigma + beta0 * beta0;
            let rhs2 = mode.beta_x * mode.beta_x;
            assert!((lhs2 - rhs2).abs() / rhs2 < 1e-12);

            assert!(beta0 * 1.0 < mode.beta_x && mode.beta_x < beta0 * n1);
        }
    }

    #[test]
    fn solver_is_deterministic() {
        let g = SlabGeometry::for_v_number(N1, N0, F0, 1.5).unwrap();
        let a = g.solve_te0().unwrap();
        let b = g.solve_te0().unwrap();
        assert_eq!(a.beta_x.to_bits(), b.beta_x.to_bits());
        assert_eq!(a.u.to_bits(), b.u.to_bits());
        assert_eq!(a.w.to_bits(), b.w.to_bits());
    }
}
