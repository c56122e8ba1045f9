//! Small numeric helpers shared across modules.

/// Relative snap width used before integer rounding of endpoint formulas.
///
/// Decimal wavelength/displacement inputs are not exactly representable, so a
/// product like N*lambda/x that is an integer in exact arithmetic lands a few
/// ulps away from it in f64. Snapping within 1e-12 relative restores the
/// rational answer while staying far above accumulated rounding (~1e-15).
const SNAP_REL: f64 = 1e-12;

fn snapped(t: f64) -> Option<f64> {
    let r = t.round();
    if (t - r).abs() <= SNAP_REL * t.abs().max(1.0) {
        Some(r)
    } else {
        None
    }
}

/// Ceiling with a 1e-12-relative snap toward the nearest integer.
pub fn snap_ceil(t: f64) -> f64 {
    snapped(t).unwrap_or_else(|| t.ceil())
}

/// Floor with a 1e-12-relative snap toward the nearest integer.
pub fn snap_floor(t: f64) -> f64 {
    snapped(t).unwrap_or_else(|| t.floor())
}

/// Integer square root: largest r with r*r <= n.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}
