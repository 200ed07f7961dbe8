//! Floating-point comparison used by every verdict: relative `1e-9` with an
//! absolute floor of `1e-12`.

pub const REL: f64 = 1e-9;
pub const ABS: f64 = 1e-12;

/// Allowed slack when comparing against `x`.
pub fn slack(x: f64) -> f64 {
    if x.is_finite() {
        (REL * x.abs()).max(ABS)
    } else {
        ABS
    }
}

pub fn close(a: f64, b: f64) -> bool {
    if a == b {
        return true;
    }
    (a - b).abs() <= slack(a.abs().max(b.abs()))
}

/// `a ≤ b` up to tolerance.
pub fn le(a: f64, b: f64) -> bool {
    a <= b || close(a, b)
}

/// `x` is zero up to the absolute floor.
pub fn is_zero(x: f64) -> bool {
    x.abs() <= ABS
}
