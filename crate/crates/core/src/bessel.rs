//! Bessel functions of the first kind by power series.
//!
//! The mode profile only ever evaluates J0 on `[0, J0_FIRST_ZERO]`, where the
//! alternating series converges to machine precision in a handful of terms
//! with negligible cancellation.

/// First zero of J0, pinned to the pillar edge by the truncated profile.
pub const J0_FIRST_ZERO: f64 = 2.404825557695773;

/// J0(x) by power series. Full f64 accuracy for |x| up to a few.
pub fn j0(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for k in 1..=40u32 {
        term *= -q / ((k * k) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// J1(x) by power series, same domain as [`j0`].
pub fn j1(x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    for k in 1..=40u32 {
        term *= -q / ((k * (k + 1)) as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}
