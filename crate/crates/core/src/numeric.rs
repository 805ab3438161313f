//! Log-space helpers for the real-valued thresholds of the constructions.

/// Relative tolerance used when snapping reals to nearby integers.
pub const SNAP: f64 = 1e-9;

/// `ceil(exp(ln_x))`, snapping values within [`SNAP`] of an integer and never
/// returning less than 1. Saturates at `usize::MAX`.
pub fn ceil_exp(ln_x: f64) -> usize {
    if ln_x.is_nan() {
        return 1;
    }
    let x = ln_x.exp();
    if !x.is_finite() || x >= usize::MAX as f64 {
        return usize::MAX;
    }
    let r = x.round();
    let c = if (x - r).abs() <= SNAP * r.max(1.0) { r } else { x.ceil() };
    (c as usize).max(1)
}

/// `ceil(p)` with snapping; zero for non-positive `p`. A count `k` satisfies
/// `k < p` exactly when `k < ceil_real(p)`.
pub fn ceil_real(p: f64) -> usize {
    if p <= 0.0 || p.is_nan() {
        return 0;
    }
    if !p.is_finite() || p >= usize::MAX as f64 {
        return usize::MAX;
    }
    let r = p.round();
    let c = if (p - r).abs() <= SNAP * r.max(1.0) { r } else { p.ceil() };
    c as usize
}

/// `floor(p)` with snapping, saturating.
pub fn floor_real(p: f64) -> usize {
    if p <= 0.0 || p.is_nan() {
        return 0;
    }
    if !p.is_finite() || p >= usize::MAX as f64 {
        return usize::MAX;
    }
    let r = p.round();
    let f = if (p - r).abs() <= SNAP * r.max(1.0) { r } else { p.floor() };
    f as usize
}

/// `a >= b` for logarithms, with absolute slack.
pub fn ln_ge(a: f64, b: f64) -> bool {
    a >= b - SNAP
}

pub fn ln_usize(k: usize) -> f64 {
    (k as f64).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snapping() {
        assert_eq!(ceil_exp((32.0f64).ln() - 5.0 * (2.0f64).ln()), 1);
        assert_eq!(ceil_exp((729.0f64).ln() - 5.0 * (3.0f64).ln()), 3);
        assert_eq!(ceil_exp(-50.0), 1);
        assert_eq!(ceil_exp(2.5f64.ln()), 3);
        assert_eq!(ceil_real(0.3), 1);
        assert_eq!(ceil_real(2.0 + 1e-12), 2);
        assert_eq!(ceil_real(-1.0), 0);
        assert_eq!(floor_real(2.0 - 1e-12), 2);
        assert_eq!(floor_real(f64::INFINITY), usize::MAX);
    }
}
