//! Log-domain special functions.
//!
//! Normalization constants of the packet involve `|l|!`, `sigma^(|l|+1)` and
//! `exp(-2 m^2 / sigma^2)`, which leave the range of `f64` long before the
//! parameters become physically uninteresting. Everything here therefore
//! returns logarithms, and the modified Bessel functions come with an
//! exponentially scaled variant `ln(K_nu(z) e^z)`.

mod bessel_j;
mod bessel_k;
mod bessel_k_complex;
mod gamma;
mod uniform;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use bessel_j::bessel_j;
pub use bessel_k::{
    bessel_k_ratio, k_regime, log_bessel_k, log_bessel_k_scaled, log_bessel_k_scaled_in, KRegime,
    LARGE_ARGUMENT_FACTOR, SERIES_LIMIT, UNIFORM_ORDER_LIMIT,
};
pub use bessel_k_complex::{bessel_k_complex, bessel_k_complex_scaled, bessel_k_complex_contour};
pub use gamma::log_gamma;

/// A real number stored as `sign * exp(log_abs)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogReal {
    pub log_abs: f64,
    pub sign: i8,
}

impl LogReal {
    pub const ZERO: LogReal = LogReal {
        log_abs: f64::NEG_INFINITY,
        sign: 0,
    };

    pub fn positive(log_abs: f64) -> Self {
        LogReal { log_abs, sign: 1 }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogReal {
                log_abs: x.abs().ln(),
                sign: if x > 0.0 { 1 } else { -1 },
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// May overflow to infinity or underflow to zero.
    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log_abs.exp()
    }
}

/// A complex number stored as `exp(log_abs + i phase)` with the phase
/// normalized to `(-pi, pi]`. Zero has `log_abs = -inf` and phase 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogComplex {
    pub log_abs: f64,
    pub phase: f64,
}

/// Reduce an angle to `(-pi, pi]`.
pub fn normalize_phase(phase: f64) -> f64 {
    let p = phase.rem_euclid(2.0 * PI);
    if p > PI {
        p - 2.0 * PI
    } else {
        p
    }
}

impl LogComplex {
    pub const ZERO: LogComplex = LogComplex {
        log_abs: f64::NEG_INFINITY,
        phase: 0.0,
    };

    pub fn new(log_abs: f64, phase: f64) -> Self {
        if log_abs == f64::NEG_INFINITY {
            return Self::ZERO;
        }
        LogComplex {
            log_abs,
            phase: normalize_phase(phase),
        }
    }

    pub fn from_complex(z: Complex64) -> Self {
        if z == Complex64::new(0.0, 0.0) {
            Self::ZERO
        } else {
            Self::new(z.norm().ln(), z.arg())
        }
    }

    /// `exp(w)` for a complex exponent.
    pub fn exp(w: Complex64) -> Self {
        Self::new(w.re, w.im)
    }

    pub fn is_zero(&self) -> bool {
        self.log_abs == f64::NEG_INFINITY
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar(self.log_abs.exp(), self.phase)
    }

    /// The complex logarithm `log_abs + i phase`.
    pub fn ln(&self) -> Complex64 {
        Complex64::new(self.log_abs, self.phase)
    }

    pub fn abs(&self) -> f64 {
        self.log_abs.exp()
    }

    pub fn mul(self, other: LogComplex) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_abs + other.log_abs, self.phase + other.phase)
    }

    pub fn div(self, other: LogComplex) -> Self {
        if self.is_zero() {
            return Self::ZERO;
        }
        Self::new(self.log_abs - other.log_abs, self.phase - other.phase)
    }

    pub fn conj(self) -> Self {
        Self::new(self.log_abs, -self.phase)
    }

    /// Relative distance `|a - b| / |b|`, evaluated without leaving the log
    /// domain for the common magnitude.
    pub fn relative_distance(&self, reference: &LogComplex) -> f64 {
        if reference.is_zero() {
            return if self.is_zero() { 0.0 } else { f64::INFINITY };
        }
        if self.is_zero() {
            return 1.0;
        }
        let ratio = Complex64::new(
            self.log_abs - reference.log_abs,
            normalize_phase(self.phase - reference.phase),
        )
        .exp();
        (ratio - 1.0).norm()
    }
}

/// `ln(sum_i exp(x_i))`, ignoring `-inf` entries.
pub fn log_sum_exp(xs: impl IntoIterator<Item = f64>) -> f64 {
    let xs: Vec<f64> = xs.into_iter().collect();
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

fn is_half_integer(nu: f64) -> bool {
    let twice = 2.0 * nu;
    twice.fract() == 0.0 && (twice as i64) % 2 != 0
}
