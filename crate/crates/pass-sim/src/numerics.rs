//! Small numerical kernels: sinc, composite Simpson quadrature, periodic
//! trapezoidal averaging.

use num_complex::Complex64;
use std::f64::consts::PI;

/// sin(x)/x with the removable singularity filled in exactly.
///
/// For |x| < 1e-6 the truncated Taylor series 1 - x²/6 + x⁴/120 is already
/// accurate to well below f64 epsilon, and sinc(0) = 1 exactly.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// sin(φ) treating the f64 constant `PI` as an exact half turn.
///
/// Angles in this crate are built from multiples and fractions of `PI`, so
/// reducing by `PI` before calling `sin` makes the axis directions
/// φ ∈ {0, π, 2π} evaluate to exactly zero, as the mathematics demands.
pub fn sin_axis_exact(phi: f64) -> f64 {
    let k = (phi / PI).round();
    let r = phi - k * PI;
    let s = r.sin();
    if (k as i64) % 2 == 0 {
        s
    } else {
        -s
    }
}

/// Composite Simpson rule with `panels` subintervals (must be even and >= 2).
pub fn simpson<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    assert!(panels >= 2 && panels.is_multiple_of(2), "panels must be even");
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Composite Simpson rule for complex-valued integrands.
pub fn simpson_c64<F: FnMut(f64) -> Complex64>(
    a: f64,
    b: f64,
    panels: usize,
    mut f: F,
) -> Complex64 {
    assert!(panels >= 2 && panels.is_multiple_of(2), "panels must be even");
    let h = (b - a) / panels as f64;
    let mut sum = f(a) + f(b);
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += f(a + i as f64 * h) * w;
    }
    sum * (h / 3.0)
}

/// Composite trapezoidal rule with `panels` subintervals.
pub fn trapezoid<F: FnMut(f64) -> f64>(a: f64, b: f64, panels: usize, mut f: F) -> f64 {
    assert!(panels >= 1);
    let h = (b - a) / panels as f64;
    let mut sum = 0.5 * (f(a) + f(b));
    for i in 1..panels {
        sum += f(a + i as f64 * h);
    }
    sum * h
}

/// Mean of samples on a uniform grid over one full period.
///
/// For a periodic integrand the trapezoidal rule on [0, 2π) collapses to the
/// plain sample mean, which is what (1/2π)∮·dφ needs.
pub fn periodic_mean(samples: &[f64]) -> f64 {
    assert!(!samples.is_empty());
    samples.iter().sum::<f64>() / samples.len() as f64
}
