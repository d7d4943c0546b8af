//! `K_nu(z)` for complex argument in the right half-plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{is_half_integer, LogComplex};
use crate::error::{Error, Result};

pub const MAX_COMPLEX_ORDER: f64 = 64.0;
/// Bound on `|Im z| / Re z`.
pub const MAX_IMAG_RATIO: f64 = 50.0;

const REL_TOL: f64 = 1e-13;
const MAX_LEVELS: usize = 12;
const MAX_NODES: usize = 200_000;
const TAIL_CUTOFF: f64 = 50.0;

fn check_domain(nu: f64, z: Complex64) -> Result<()> {
    let ok = (0.0..=MAX_COMPLEX_ORDER).contains(&nu)
        && z.re >= (nu / 4.0).max(1.0)
        && z.im.abs() <= MAX_IMAG_RATIO * z.re
        && z.im.is_finite();
    if ok {
        Ok(())
    } else {
        Err(Error::domain("bessel_k_complex", format!("nu = {nu}, z = {z}")))
    }
}

/// `K_nu(z)` in log-polar form.
///
/// Supported for `0 <= nu <= 64`, `Re z >= max(1, nu/4)` and
/// `|Im z| <= 50 Re z`. Half-integer orders use the terminating closed form.
pub fn bessel_k_complex(nu: f64, z: Complex64) -> Result<LogComplex> {
    let scaled = bessel_k_complex_scaled(nu, z)?;
    Ok(LogComplex::new(scaled.log_abs - z.re, scaled.phase - z.im))
}

/// `K_nu(z) e^z` in log-polar form.
pub fn bessel_k_complex_scaled(nu: f64, z: Complex64) -> Result<LogComplex> {
    check_domain(nu, z)?;
    if is_half_integer(nu) {
        return Ok(half_integer_scaled(nu, z));
    }
    contour_scaled(nu, z)
}

/// `K_nu(z) e^z` from the contour integral alone, for any order in range.
pub fn bessel_k_complex_contour(nu: f64, z: Complex64) -> Result<LogComplex> {
    check_domain(nu, z)?;
    contour_scaled(nu, z)
}

fn half_integer_scaled(nu: f64, z: Complex64) -> LogComplex {
    let n = (nu - 0.5).round() as usize;
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=n {
        let (nf, kf) = (n as f64, k as f64);
        term *= (nf + kf) * (nf - kf + 1.0) / (kf * 2.0 * z);
        sum += term;
    }
    let prefactor = LogComplex::from_complex((PI / (2.0 * z)).sqrt());
    prefactor.mul(LogComplex::from_complex(sum))
}

/// Path `t(s) = s - i arg(z) tanh(k (s - c))`.
///
/// `v = Im t` runs from `arg z` at `s -> -inf` to `-arg z` at `s -> +inf`,
/// the directions in which `z cosh t` grows along the positive real axis.
/// The path is analytic, passes through the saddle of `-z cosh t + nu t`
/// and leaves it close to the steepest-descent direction, so the
/// trapezoidal rule converges geometrically without cancellation.
struct Contour {
    z: Complex64,
    nu: f64,
    u0: f64,
    alpha: f64,
    k: f64,
    centre: f64,
    width: f64,
}

impl Contour {
    fn new(nu: f64, z: Complex64) -> Self {
        let alpha = z.arg();
        let t0 = (Complex64::new(nu, 0.0) / z).asinh();
        let curvature = z * t0.cosh();
        let width = 1.0 / curvature.norm().sqrt();
        let mut contour = Contour {
            z,
            nu,
            u0: t0.re,
            alpha,
            k: 0.0,
            centre: t0.re,
            width,
        };
        if alpha == 0.0 {
            return contour;
        }
        // Steepest descent: -z cosh(t0) dt^2 real and negative.
        let slope = (0.5 * (PI - (-curvature).arg())).tan();
        let r = (-t0.im / alpha).clamp(-0.999, 0.999);
        let k_max = 1.0 / width;
        let k_min = 0.05 * k_max;
        let k = if slope.is_finite() && slope < 0.0 {
            (-slope / (alpha * (1.0 - r * r))).clamp(k_min, k_max)
        } else {
            k_min
        };
        contour.k = k;
        contour.centre = t0.re - r.atanh() / k;
        contour
    }

    /// Exponent `-z (cosh t - 1) + nu t` and `dt/ds` at `s = u0 + width u`.
    fn sample(&self, u: f64) -> (Complex64, Complex64) {
        let s = self.u0 + self.width * u;
        let th = (self.k * (s - self.centre)).tanh();
        let v = -self.alpha * th;
        let dv = -self.alpha * self.k * (1.0 - th * th);
        let t = Complex64::new(s, v);
        let half = (0.5 * t).sinh();
        let exponent = -self.z * 2.0 * half * half + self.nu * t;
        (exponent, Complex64::new(1.0, dv))
    }

    /// Trapezoidal sum with step `h` in `u`, rescaled by `exp(-shift)`.
    /// Returns `(sum, shift)`.
    fn trapezoid(&self, h: f64) -> Result<(Complex64, f64)> {
        let mut samples: Vec<(Complex64, Complex64)> = vec![self.sample(0.0)];
        for direction in [1.0, -1.0] {
            let mut peak = samples[0].0.re;
            let mut k = 1usize;
            loop {
                let u = direction * h * k as f64;
                let s = self.sample(u);
                peak = peak.max(s.0.re);
                let below = peak - s.0.re;
                samples.push(s);
                if (below > TAIL_CUTOFF && u.abs() > 4.0) || !s.0.re.is_finite() {
                    break;
                }
                k += 1;
                if samples.len() > MAX_NODES {
                    return Err(Error::NonConvergence {
                        function: "bessel_k_complex",
                        detail: format!("integrand tail not reached, nu = {}, z = {}", self.nu, self.z),
                    });
                }
            }
        }
        let shift = samples
            .iter()
            .map(|s| s.0.re)
            .filter(|x| x.is_finite())
            .fold(f64::NEG_INFINITY, f64::max);
        let sum: Complex64 = samples
            .iter()
            .filter(|s| s.0.re.is_finite())
            .map(|(e, dt)| (e - shift).exp() * dt)
            .sum();
        Ok((sum * h, shift))
    }
}

fn contour_scaled(nu: f64, z: Complex64) -> Result<LogComplex> {
    if z.im < 0.0 {
        return contour_scaled(nu, z.conj()).map(LogComplex::conj);
    }
    let contour = Contour::new(nu, z);
    let mut h = 1.0;
    let (mut sum, mut shift) = contour.trapezoid(h)?;
    for _ in 0..MAX_LEVELS {
        h *= 0.5;
        let (next, next_shift) = contour.trapezoid(h)?;
        let previous = sum * (shift - next_shift).exp();
        let change = (next - previous).norm() / next.norm();
        sum = next;
        shift = next_shift;
        if change < REL_TOL {
            let value = LogComplex::from_complex(sum * 0.5 * contour.width);
            return Ok(LogComplex::new(value.log_abs + shift, value.phase));
        }
    }
    Err(Error::NonConvergence {
        function: "bessel_k_complex",
        detail: format!("oscillation budget exceeded, nu = {nu}, z = {z}"),
    })
}
