use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Largest argument accepted by [`log_gamma`].
pub const LOG_GAMMA_MAX: f64 = 1e6;

const STIRLING_THRESHOLD: f64 = 10.0;

// B_{2k} / (2k (2k - 1)) for k = 1..=10.
const STIRLING_COEFFS: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// `ln Gamma(x)` for `0 < x <= 1e6`.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0 && x <= LOG_GAMMA_MAX) {
        return Err(Error::domain("log_gamma", format!("x = {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    if x >= STIRLING_THRESHOLD {
        return Ok(stirling(x));
    }
    // Shift up into the Stirling range.
    let shift = (STIRLING_THRESHOLD - x).ceil();
    let mut product = 1.0;
    let mut y = x;
    for _ in 0..shift as usize {
        product *= y;
        y += 1.0;
    }
    Ok(stirling(y) - product.ln())
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut power = inv;
    for c in STIRLING_COEFFS {
        series += c * power;
        power *= inv2;
    }
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * PI).ln() + series
}
