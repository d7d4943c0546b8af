//! Adaptive quadrature with log-domain weights.
//!
//! Integrands return an [`IntegrandSample`]: the logarithm of a positive
//! weight and an observable factor. Each subregion is summed relative to its
//! largest log-weight, and partial sums are rescaled whenever a region with a
//! larger weight appears, so integrals like `int x^200 e^-x dx` never leave
//! the range of `f64`. Results carry their own `log_scale`.

mod adaptive;
mod rules;
mod tanh_sinh;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use adaptive::{integrate_1d, integrate_2d};
pub use tanh_sinh::{exp_sinh, tanh_sinh};

/// Values that can be integrated: a vector space over `f64` with a norm.
pub trait QuadValue: Copy + Send + Sync + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn norm(&self) -> f64;
    fn is_finite(&self) -> bool;
    /// Componentwise absolute value.
    fn abs(&self) -> Self;
    /// Zero every component smaller than `tol` times the same component of
    /// `reference`.
    fn chop(self, reference: &Self, tol: f64) -> Self;
}

fn chop_f64(x: f64, reference: f64, tol: f64) -> f64 {
    if x.abs() <= tol * reference.abs() {
        0.0
    } else {
        x
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn norm(&self) -> f64 {
        self.abs()
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn chop(self, reference: &Self, tol: f64) -> Self {
        chop_f64(self, *reference, tol)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn norm(&self) -> f64 {
        Complex64::norm(*self)
    }
    fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
    fn abs(&self) -> Self {
        Complex64::new(self.re.abs(), self.im.abs())
    }
    fn chop(self, reference: &Self, tol: f64) -> Self {
        Complex64::new(chop_f64(self.re, reference.re, tol), chop_f64(self.im, reference.im, tol))
    }
}

/// Fixed-size vectors are integrated componentwise; the norm is the largest
/// component so that relative tolerances apply to the dominant one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Components<const N: usize>(pub [f64; N]);

impl<const N: usize> Add for Components<N> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Components<N> {
    type Output = Self;
    fn sub(mut self, o: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(o.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Components<N> {
    type Output = Self;
    fn mul(mut self, s: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= s;
        }
        self
    }
}

impl<const N: usize> QuadValue for Components<N> {
    fn zero() -> Self {
        Components([0.0; N])
    }
    fn norm(&self) -> f64 {
        self.0.iter().fold(0.0f64, |m, a| m.max(a.abs()))
    }
    fn is_finite(&self) -> bool {
        self.0.iter().all(|a| a.is_finite())
    }
    fn abs(&self) -> Self {
        Components(self.0.map(f64::abs))
    }
    fn chop(mut self, reference: &Self, tol: f64) -> Self {
        for (a, r) in self.0.iter_mut().zip(reference.0) {
            *a = chop_f64(*a, r, tol);
        }
        self
    }
}

/// One integrand evaluation: the integrand is `exp(log_weight) * value`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegrandSample<V> {
    pub log_weight: f64,
    pub value: V,
}

impl<V: QuadValue> IntegrandSample<V> {
    pub fn new(log_weight: f64, value: V) -> Self {
        IntegrandSample { log_weight, value }
    }

    pub fn zero() -> Self {
        IntegrandSample {
            log_weight: f64::NEG_INFINITY,
            value: V::zero(),
        }
    }
}

/// A plain function value as a sample: the sign goes into `value`.
impl From<f64> for IntegrandSample<f64> {
    fn from(x: f64) -> Self {
        if x == 0.0 {
            IntegrandSample::zero()
        } else {
            IntegrandSample::new(x.abs().ln(), x.signum())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Rule {
    /// Gauss-Kronrod on finite intervals, exp-sinh on semi-infinite ones.
    Auto,
    /// Adaptive Gauss-Kronrod everywhere, mapping infinite ranges to `[0, 1)`.
    GaussKronrod,
    /// Double-exponential substitution (tanh-sinh or exp-sinh).
    DoubleExponential,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    /// Absolute tolerance in units of `exp(log_scale)` of the result.
    pub abs_tol: f64,
    pub max_subdivisions: usize,
    /// Trapezoidal nodes for azimuthal averages of `phi`-dependent integrands.
    pub azimuthal_nodes: usize,
    pub rule: Rule,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            rel_tol: 1e-9,
            abs_tol: 1e-30,
            max_subdivisions: 1_000_000,
            azimuthal_nodes: 8,
            rule: Rule::Auto,
        }
    }
}

impl QuadratureSpec {
    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_max_subdivisions(mut self, n: usize) -> Self {
        self.max_subdivisions = n;
        self
    }

    pub fn with_rule(mut self, rule: Rule) -> Self {
        self.rule = rule;
        self
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        if !(self.rel_tol > 0.0) || !(self.abs_tol >= 0.0) || self.max_subdivisions == 0 {
            return Err(crate::Error::InvalidParameter(format!("quadrature spec {self:?}")));
        }
        Ok(())
    }
}

/// Integration range for one-dimensional integrals.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Interval {
    Finite(f64, f64),
    /// `[a, +inf)`
    UpperInfinite(f64),
}

/// Axis-aligned rectangle `[x0, x1] x [y0, y1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rectangle {
    pub x: (f64, f64),
    pub y: (f64, f64),
}

impl Rectangle {
    pub fn new(x: (f64, f64), y: (f64, f64)) -> Self {
        Rectangle { x, y }
    }
}

/// Integral `exp(log_scale) * value` with absolute error `exp(log_scale) * error`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<V> {
    pub log_scale: f64,
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

impl<V: QuadValue> QuadResult<V> {
    /// The integral itself; may overflow or underflow for extreme scales.
    pub fn value(&self) -> V {
        if self.log_scale == f64::NEG_INFINITY {
            return V::zero();
        }
        self.value * self.log_scale.exp()
    }

    pub fn abs_error(&self) -> f64 {
        if self.log_scale == f64::NEG_INFINITY {
            return 0.0;
        }
        self.error * self.log_scale.exp()
    }

    pub fn relative_error(&self) -> f64 {
        let n = self.value.norm();
        if n == 0.0 {
            if self.error == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            self.error / n
        }
    }

    /// `ln |value|` for scalar results, without leaving the log domain.
    pub fn log_norm(&self) -> f64 {
        self.log_scale + self.value.norm().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn components_norm_is_max() {
        let c = Components([1.0, -3.0, 2.0]);
        assert_eq!(c.norm(), 3.0);
        assert_eq!((c + c).0, [2.0, -6.0, 4.0]);
    }

    #[test]
    fn sample_from_signed_value() {
        let s: IntegrandSample<f64> = (-2.0).into();
        assert_eq!(s.value, -1.0);
        assert!((s.log_weight - 2f64.ln()).abs() < 1e-16);
        let z: IntegrandSample<f64> = 0.0.into();
        assert_eq!(z.log_weight, f64::NEG_INFINITY);
    }

    #[test]
    fn rejects_bad_spec() {
        assert!(QuadratureSpec::default().with_rel_tol(0.0).validate().is_err());
        assert!(QuadratureSpec::default().with_max_subdivisions(0).validate().is_err());
    }
}
