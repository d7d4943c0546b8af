//! Position-space wave function: the exact solution, its paraxial limit, a
//! direct Fourier transform used as an oracle, and finite-difference checks.
//!
//! Fields are carried as `psi = F(x) e^{-i pbar.x}`; the envelope `F` varies on
//! the packet scale while the carrier oscillates on the Compton scale, so
//! stencils and comparisons work with `F` and apply the carrier analytically.

use std::f64::consts::{FRAC_PI_2, LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{Boost, FourVector};
use crate::packet::{MomentumPoint, Packet, PacketParams};
use crate::quadrature::{integrate_2d, IntegrandSample, QuadratureSpec};
use crate::specfun::{bessel_j, bessel_k_complex_scaled, log_bessel_k_scaled, log_gamma, LogComplex};

/// Default finite-difference step in units of the Compton wavelength.
pub const DEFAULT_STEP: f64 = 1e-3;
/// Points in a decay-law fit.
pub const DECAY_SAMPLES: usize = 11;
/// Smallest distance, in Compton wavelengths, at which the decay law is fitted.
pub const DECAY_MIN_DISTANCE: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpacetimePoint {
    pub t: f64,
    pub rho: f64,
    pub phi_r: f64,
    pub z: f64,
}

impl SpacetimePoint {
    /// Negative `rho` is folded into the azimuth.
    pub fn new(t: f64, rho: f64, phi_r: f64, z: f64) -> Self {
        let (rho, phi_r) = if rho < 0.0 { (-rho, phi_r + PI) } else { (rho, phi_r) };
        SpacetimePoint {
            t,
            rho,
            phi_r: phi_r.rem_euclid(2.0 * PI),
            z,
        }
    }

    pub fn origin() -> Self {
        Self::new(0.0, 0.0, 0.0, 0.0)
    }

    pub fn from_four_vector(x: &FourVector) -> Self {
        Self::new(x.t, x.x.hypot(x.y), x.y.atan2(x.x), x.z)
    }

    pub fn four_vector(&self) -> FourVector {
        let (s, c) = self.phi_r.sin_cos();
        FourVector::new(self.t, self.rho * c, self.rho * s, self.z)
    }

    /// `x.x = t^2 - rho^2 - z^2`.
    pub fn square(&self) -> f64 {
        self.t * self.t - self.rho * self.rho - self.z * self.z
    }

    pub fn boosted(&self, b: Boost) -> Self {
        Self::from_four_vector(&b.apply(&self.four_vector()))
    }

    fn shifted(&self, axis: usize, h: f64) -> Self {
        let mut v = self.four_vector().to_array();
        v[axis] += h;
        Self::from_four_vector(&FourVector::from_array(v))
    }
}

/// `(1/m) sqrt((pbar + i x sigma^2)^2)`, the single invariant the exact field
/// depends on besides `rho` and `phi_r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Varsigma {
    pub value: Complex64,
    /// `value - 1`, kept separately because it is tiny near the packet centre.
    pub minus_one: Complex64,
}

/// `pbar.x = eps_bar t - pbar z`.
pub fn carrier_phase(params: &PacketParams, x: &SpacetimePoint) -> f64 {
    params.eps_bar() * x.t - params.pbar * x.z
}

pub fn varsigma(params: &PacketParams, x: &SpacetimePoint) -> Result<Varsigma> {
    let PacketParams { sigma, m, .. } = *params;
    let s2 = sigma * sigma;
    // w / m^2 - 1
    let delta = Complex64::new(-s2 * s2 * x.square(), 2.0 * s2 * carrier_phase(params, x)) / (m * m);
    let w = delta + 1.0;
    if w.im == 0.0 && w.re <= 0.0 {
        return Err(Error::BranchCut { re: w.re, im: w.im });
    }
    let value = w.sqrt();
    if !(value.re > 0.0) {
        return Err(Error::BranchCut { re: w.re, im: w.im });
    }
    Ok(Varsigma {
        value,
        minus_one: delta / (value + 1.0),
    })
}

/// The exact field with its constant prefactor evaluated once.
#[derive(Debug, Clone, Copy)]
pub struct ExactField {
    pub params: PacketParams,
    log_prefactor: f64,
}

impl ExactField {
    pub fn new(params: &PacketParams) -> Result<Self> {
        params.validate()?;
        let l = f64::from(params.abs_ell());
        let log_prefactor = -0.5 * LN_2 - PI.ln() - 0.5 * log_gamma(l + 1.0)? + (l + 1.0) * params.sigma.ln()
            - 0.5 * log_bessel_k_scaled(l + 1.0, params.bessel_argument())?;
        Ok(ExactField {
            params: *params,
            log_prefactor,
        })
    }

    /// `psi e^{i pbar.x}`.
    pub fn envelope(&self, x: &SpacetimePoint) -> Result<LogComplex> {
        let PacketParams { ell, sigma, m, .. } = self.params;
        let l = self.params.abs_ell();
        if l != 0 && x.rho == 0.0 {
            return Ok(LogComplex::new(f64::NEG_INFINITY, 0.0));
        }
        let s2 = sigma * sigma;
        let v = varsigma(&self.params, x)?;
        let arg = v.value * (m * m / s2);
        let k = bessel_k_complex_scaled(f64::from(l) + 1.0, arg)?;
        // -(vs - 1) m^2/s^2 + i pbar.x, expanded so the carrier cancels exactly
        let delta = v.minus_one * (v.value + 1.0);
        let residual = delta * delta * (m * m) / (2.0 * s2 * (v.value + 1.0) * (v.value + 1.0));
        let exponent = residual + s2 * x.square() / 2.0;
        let lf = f64::from(l);
        let radial = if l == 0 { 0.0 } else { lf * x.rho.ln() };
        let log = Complex64::new(self.log_prefactor + radial, lf * FRAC_PI_2 + f64::from(ell) * x.phi_r)
            - (lf + 1.0) * v.value.ln()
            + k.ln()
            + exponent;
        Ok(LogComplex::exp(log))
    }

    pub fn psi(&self, x: &SpacetimePoint) -> Result<LogComplex> {
        let f = self.envelope(x)?;
        Ok(LogComplex::new(f.log_abs, f.phase - carrier_phase(&self.params, x)))
    }
}

/// The exact solution at `x`.
pub fn psi_exact(params: &PacketParams, x: &SpacetimePoint) -> Result<LogComplex> {
    ExactField::new(params)?.psi(x)
}

/// Direct numerical transform of the momentum-space packet. The azimuthal
/// integral is done analytically and leaves a Bessel `J` on the radial axis.
pub fn fourier_oracle(params: &PacketParams, x: &SpacetimePoint, spec: &QuadratureSpec) -> Result<LogComplex> {
    let packet = Packet::new(*params)?;
    let l = params.abs_ell() as i32;
    let PacketParams { pbar, m, .. } = *params;
    let eps_bar = params.eps_bar();
    let weight = |q: &MomentumPoint| q.p_perp.ln() - 2.0 * (2.0 * PI).ln() + packet.log_abs_psi(q) - (2.0 * q.energy(m)).ln();
    let r = integrate_2d(
        |p_perp, p_z| {
            let q = MomentumPoint::new(p_perp, 0.0, p_z);
            let j = match bessel_j(l, p_perp * x.rho) {
                Ok(j) => j,
                Err(_) => return IntegrandSample::new(f64::NAN, Complex64::new(f64::NAN, 0.0)),
            };
            let eps = q.energy(m);
            let d_eps = (p_perp * p_perp + (p_z - pbar) * (p_z + pbar)) / (eps + eps_bar);
            let phase = (p_z - pbar) * x.z - d_eps * x.t;
            IntegrandSample::new(weight(&q), Complex64::from_polar(j, phase))
        },
        packet.domain(1.0),
        spec,
    )?;
    if r.value.norm() == 0.0 || r.log_scale == f64::NEG_INFINITY {
        return Ok(LogComplex::new(f64::NEG_INFINITY, 0.0));
    }
    let v = LogComplex::from_complex(r.value);
    let extra = f64::from(l) * FRAC_PI_2 + f64::from(params.ell) * x.phi_r - carrier_phase(params, x);
    Ok(LogComplex::new(v.log_abs + r.log_scale, v.phase + extra))
}

/// `t_d = eps_bar / sigma^2`.
pub fn diffraction_time(params: &PacketParams) -> f64 {
    params.eps_bar() / (params.sigma * params.sigma)
}

/// `sigma_perp(t) = sqrt(1 + (t/t_d)^2) / sigma`.
pub fn beam_width(params: &PacketParams, t: f64) -> f64 {
    (t / diffraction_time(params)).hypot(1.0) / params.sigma
}

/// `rho^2 + (eps_bar/m)^2 (z - u t)^2`.
pub fn paraxial_radius_squared(params: &PacketParams, x: &SpacetimePoint) -> f64 {
    let eps_bar = params.eps_bar();
    let u = params.pbar / eps_bar;
    let dz = x.z - u * x.t;
    x.rho * x.rho + (eps_bar / params.m * dz).powi(2)
}

/// Envelope of the Laguerre-Gaussian limit. The phase convention `i^|l|`
/// matches the exact field so both can be compared pointwise for either sign
/// of `l`.
pub fn paraxial_envelope(params: &PacketParams, x: &SpacetimePoint) -> LogComplex {
    let PacketParams { ell, sigma, m, .. } = *params;
    let l = params.abs_ell();
    if l != 0 && x.rho == 0.0 {
        return LogComplex::new(f64::NEG_INFINITY, 0.0);
    }
    let lf = f64::from(l);
    let tau = x.t / diffraction_time(params);
    let width = beam_width(params, x.t);
    let radial = if l == 0 { 0.0 } else { lf * (x.rho / width).ln() };
    let log_gamma_l = log_gamma(lf + 1.0).expect("|l| within range");
    let log_abs = -0.5 * log_gamma_l - 0.5 * (2.0 * m).ln() + 1.5 * (sigma.ln() - 0.5 * PI.ln()) + radial
        - 0.75 * tau.mul_add(tau, 1.0).ln();
    let r2 = paraxial_radius_squared(params, x);
    let gauss = Complex64::new(1.0, -tau) * (-r2 / (2.0 * width * width));
    let phase = lf * FRAC_PI_2 + f64::from(ell) * x.phi_r - (lf + 1.5) * tau.atan();
    LogComplex::exp(Complex64::new(log_abs, phase) + gauss)
}

/// Paraxial wave function at `x`.
pub fn psi_paraxial(params: &PacketParams, x: &SpacetimePoint) -> LogComplex {
    let f = paraxial_envelope(params, x);
    LogComplex::new(f.log_abs, f.phase - carrier_phase(params, x))
}

/// Which field a stencil is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FieldModel {
    Exact,
    Paraxial,
}

/// `|(d_t^2 - grad^2 + m^2) psi| / (m^2 |psi|)` by three-point differences
/// along `t, x, y, z` with step `h`.
pub fn kg_residual(params: &PacketParams, x: &SpacetimePoint, h: f64) -> Result<f64> {
    kg_residual_of(FieldModel::Exact, params, x, h)
}

pub fn kg_residual_of(model: FieldModel, params: &PacketParams, x: &SpacetimePoint, h: f64) -> Result<f64> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("step {h}")));
    }
    let exact = match model {
        FieldModel::Exact => Some(ExactField::new(params)?),
        FieldModel::Paraxial => None,
    };
    let envelope = |p: &SpacetimePoint| match &exact {
        Some(e) => e.envelope(p),
        None => Ok(paraxial_envelope(params, p)),
    };
    let centre = envelope(x)?;
    if centre.is_zero() {
        return Err(Error::InvalidParameter("residual undefined where the field vanishes".into()));
    }
    let m2 = params.m * params.m;
    // carrier phase advance for a unit step along each axis
    let theta = [params.eps_bar(), 0.0, 0.0, -params.pbar];
    let sign = [1.0, -1.0, -1.0, -1.0];
    let mut total = Complex64::new(m2, 0.0);
    for axis in 0..4 {
        let ratio = |s: f64| -> Result<Complex64> {
            let f = envelope(&x.shifted(axis, s * h))?;
            Ok(Complex64::from_polar((f.log_abs - centre.log_abs).exp(), f.phase - centre.phase))
        };
        let forward = ratio(1.0)? * Complex64::from_polar(1.0, -theta[axis] * h);
        let backward = ratio(-1.0)? * Complex64::from_polar(1.0, theta[axis] * h);
        total += sign[axis] * (forward + backward - 2.0) / (h * h);
    }
    Ok(total.norm() / m2)
}

/// Least-squares slope of `ln |psi|` against the interval `sqrt(-x.x)` along a
/// spacelike ray, sampled at equally spaced distances in `[s1, s2]` Compton
/// wavelengths.
pub fn decay_slope(params: &PacketParams, direction: &SpacetimePoint, range: (f64, f64)) -> Result<f64> {
    let (s1, s2) = range;
    if !(s1 >= DECAY_MIN_DISTANCE && s2 > s1 && s2.is_finite()) {
        return Err(Error::InvalidParameter(format!("decay range [{s1}, {s2}]")));
    }
    let d = direction.four_vector();
    let norm2 = -d.dot(&d);
    if !(norm2 > 0.0) {
        return Err(Error::InvalidParameter("decay direction must be spacelike".into()));
    }
    let unit = d * (1.0 / norm2.sqrt());
    let field = ExactField::new(params)?;
    let lambda_c = 1.0 / params.m;
    let mut points = Vec::with_capacity(DECAY_SAMPLES);
    for i in 0..DECAY_SAMPLES {
        let s = (s1 + (s2 - s1) * i as f64 / (DECAY_SAMPLES - 1) as f64) * lambda_c;
        let x = SpacetimePoint::from_four_vector(&(unit * s));
        points.push((s, field.psi(&x)?.log_abs));
    }
    Ok(fit_slope(&points))
}

/// Ordinary least-squares slope.
pub fn fit_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}
