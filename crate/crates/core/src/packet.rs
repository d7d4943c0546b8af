//! Momentum-space vortex packet and the measure used for every average.

use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinematics::{on_shell, Boost, FourVector};
use crate::quadrature::{integrate_2d, IntegrandSample, QuadResult, QuadValue, QuadratureSpec, Rectangle};
use crate::specfun::{log_bessel_k_scaled, log_gamma, normalize_phase, LogComplex};

/// Width of the integration window in units of the Gaussian scale.
const WINDOW: f64 = 10.0;

/// `(l, sigma, pbar, m)`: OAM, invariant momentum width, mean longitudinal
/// momentum and mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PacketParams {
    pub ell: i32,
    pub sigma: f64,
    pub pbar: f64,
    pub m: f64,
}

impl PacketParams {
    pub fn new(ell: i32, sigma: f64, pbar: f64, m: f64) -> Result<Self> {
        let p = PacketParams { ell, sigma, pbar, m };
        p.validate()?;
        Ok(p)
    }

    /// Unit mass.
    pub fn natural(ell: i32, sigma: f64, pbar: f64) -> Result<Self> {
        Self::new(ell, sigma, pbar, 1.0)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > 0.0 && self.sigma.is_finite()) {
            return Err(Error::InvalidParameter(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {}", self.m)));
        }
        if !self.pbar.is_finite() {
            return Err(Error::InvalidParameter(format!("pbar must be finite, got {}", self.pbar)));
        }
        Ok(())
    }

    pub fn abs_ell(&self) -> u32 {
        self.ell.unsigned_abs()
    }

    pub fn eps_bar(&self) -> f64 {
        self.pbar.hypot(self.m)
    }

    pub fn mean_momentum(&self) -> FourVector {
        on_shell(self.pbar, self.m)
    }

    /// Argument `2 m^2 / sigma^2` of the normalizing Bessel functions.
    pub fn bessel_argument(&self) -> f64 {
        2.0 * self.m * self.m / (self.sigma * self.sigma)
    }

    /// `|l| sigma^2 / m^2`.
    pub fn paraxiality(&self) -> f64 {
        f64::from(self.abs_ell()) * (self.sigma / self.m).powi(2)
    }

    pub fn boosted(&self, b: Boost) -> Self {
        PacketParams {
            pbar: b.apply_pz(self.pbar, self.m),
            ..*self
        }
    }

    pub fn with_ell(&self, ell: i32) -> Self {
        PacketParams { ell, ..*self }
    }
}

/// A momentum in cylindrical coordinates; the energy is always recomputed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumPoint {
    pub p_perp: f64,
    pub phi_p: f64,
    pub p_z: f64,
}

impl MomentumPoint {
    pub fn new(p_perp: f64, phi_p: f64, p_z: f64) -> Self {
        MomentumPoint {
            p_perp,
            phi_p: phi_p.rem_euclid(2.0 * PI),
            p_z,
        }
    }

    pub fn from_cartesian(p: [f64; 3]) -> Self {
        Self::new(p[0].hypot(p[1]), p[1].atan2(p[0]), p[2])
    }

    pub fn energy(&self, m: f64) -> f64 {
        (self.p_perp * self.p_perp + self.p_z * self.p_z + m * m).sqrt()
    }

    pub fn cartesian(&self) -> [f64; 3] {
        let (s, c) = self.phi_p.sin_cos();
        [self.p_perp * c, self.p_perp * s, self.p_z]
    }

    pub fn magnitude(&self) -> f64 {
        self.p_perp.hypot(self.p_z)
    }

    pub fn four_momentum(&self, m: f64) -> FourVector {
        let [x, y, z] = self.cartesian();
        FourVector::new(self.energy(m), x, y, z)
    }

    pub fn boosted(&self, b: Boost, m: f64) -> Self {
        let p = b.apply(&self.four_momentum(m));
        MomentumPoint { p_z: p.z, ..*self }
    }
}

/// A packet with its normalization constant evaluated once.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Packet {
    pub params: PacketParams,
    log_norm: f64,
}

impl Packet {
    pub fn new(params: PacketParams) -> Result<Self> {
        params.validate()?;
        let l = f64::from(params.abs_ell());
        // e^{-m^2/sigma^2} / sqrt(K(2m^2/sigma^2)) = 1 / sqrt(K e^{2m^2/sigma^2})
        let log_k = log_bessel_k_scaled(l + 1.0, params.bessel_argument())?;
        let log_norm = 1.5 * LN_2 + PI.ln() - (l + 1.0) * params.sigma.ln() - 0.5 * log_gamma(l + 1.0)? - 0.5 * log_k;
        Ok(Packet { params, log_norm })
    }

    /// Logarithm of the constant prefactor of the wave function.
    pub fn log_normalization(&self) -> f64 {
        self.log_norm
    }

    /// `(p - pbar)^2`, the Minkowski square of the momentum offset, which is
    /// non-positive on shell. Written so that no large terms cancel.
    pub fn offset_square(&self, q: &MomentumPoint) -> f64 {
        let PacketParams { pbar, m, .. } = self.params;
        let eps = q.energy(m);
        let eps_bar = self.params.eps_bar();
        let dz = q.p_z - pbar;
        let p2 = q.p_perp * q.p_perp;
        let d_eps = (p2 + dz * (q.p_z + pbar)) / (eps + eps_bar);
        d_eps * d_eps - p2 - dz * dz
    }

    /// `ln |psi(p)|`.
    pub fn log_abs_psi(&self, q: &MomentumPoint) -> f64 {
        let l = self.params.abs_ell();
        let radial = if l == 0 { 0.0 } else { f64::from(l) * q.p_perp.ln() };
        let s2 = self.params.sigma * self.params.sigma;
        self.log_norm + radial + self.offset_square(q) / (2.0 * s2)
    }

    /// The momentum-space wave function.
    pub fn log_psi_momentum(&self, q: &MomentumPoint) -> LogComplex {
        LogComplex::new(self.log_abs_psi(q), f64::from(self.params.ell) * q.phi_p)
    }

    /// Log-density of the measure `p_perp / (2 pi)^2 |psi|^2 / (2 eps)` on
    /// `(p_perp, p_z)`, the azimuth already integrated out.
    pub fn measure_log_weight(&self, q: &MomentumPoint) -> f64 {
        q.p_perp.ln() - 2.0 * (2.0 * PI).ln() + 2.0 * self.log_abs_psi(q) - (2.0 * q.energy(self.params.m)).ln()
    }

    /// Rectangle in `(p_perp, p_z)` outside of which `|psi|^power` is
    /// negligible.
    pub fn domain(&self, power: f64) -> Rectangle {
        let PacketParams { sigma, m, pbar, .. } = self.params;
        let s = (2.0 / power).sqrt();
        let half_z = WINDOW * sigma * s * self.params.eps_bar() / m;
        let centre = sigma * s * f64::from(self.params.abs_ell()).sqrt();
        let half_perp = WINDOW * sigma * s;
        Rectangle::new(((centre - half_perp).max(0.0), centre + half_perp), (pbar - half_z, pbar + half_z))
    }

    /// `<f>` for a function of `(p_perp, p_z)` only.
    pub fn average_axial<V: QuadValue>(&self, f: impl Fn(f64, f64) -> V, spec: &QuadratureSpec) -> Result<QuadResult<V>> {
        integrate_2d(
            |p_perp, p_z| {
                let q = MomentumPoint::new(p_perp, 0.0, p_z);
                IntegrandSample::new(self.measure_log_weight(&q), f(p_perp, p_z))
            },
            self.domain(2.0),
            spec,
        )
    }

    /// `<f>` under the normalized measure. The azimuth is averaged with
    /// `spec.azimuthal_nodes` trapezoidal nodes, exact for trigonometric
    /// polynomials of lower degree. Node sums that cancel to roundoff are set
    /// to zero so symmetric integrals do not chase noise.
    pub fn average<V: QuadValue>(&self, f: impl Fn(&MomentumPoint) -> V, spec: &QuadratureSpec) -> Result<QuadResult<V>> {
        let n = spec.azimuthal_nodes.max(1);
        let step = 2.0 * PI / n as f64;
        integrate_2d(
            |p_perp, p_z| {
                let mut acc = V::zero();
                let mut size = V::zero();
                for k in 0..n {
                    let q = MomentumPoint::new(p_perp, (k as f64 + 0.5) * step, p_z);
                    let v = f(&q);
                    acc = acc + v;
                    size = size + v.abs();
                }
                let acc = acc.chop(&size, 8.0 * n as f64 * f64::EPSILON);
                let q = MomentumPoint::new(p_perp, 0.0, p_z);
                IntegrandSample::new(self.measure_log_weight(&q), acc * (1.0 / n as f64))
            },
            self.domain(2.0),
            spec,
        )
    }

    /// Total phase accumulated around a circle of radius `circuit_radius`
    /// in the transverse momentum plane, in units of `2 pi`.
    pub fn phase_winding(&self, circuit_radius: f64, p_z: f64) -> Result<i32> {
        if !(circuit_radius > 0.0) {
            return Err(Error::InvalidParameter(format!("circuit radius {circuit_radius}")));
        }
        let n = 8 * self.params.abs_ell() as usize + 16;
        let phase = |k: usize| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            self.log_psi_momentum(&MomentumPoint::new(circuit_radius, phi, p_z)).phase
        };
        let total: f64 = (0..n).map(|k| normalize_phase(phase(k + 1) - phase(k))).sum();
        Ok((total / (2.0 * PI)).round() as i32)
    }
}

/// `int d^3p / (2 pi)^3 / (2 eps) psi_b^* psi_a`.
///
/// Packets with different OAM are orthogonal through the azimuthal integral,
/// which vanishes identically; the equal case integrates the radial measure.
pub fn overlap(a: &PacketParams, b: &PacketParams, spec: &QuadratureSpec) -> Result<Complex64> {
    let close = |x: f64, y: f64| (x - y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1e-300);
    if !(close(a.sigma, b.sigma) && close(a.m, b.m) && (a.pbar == b.pbar || close(a.pbar, b.pbar))) {
        return Err(Error::ParameterMismatch(format!("{a:?} vs {b:?}")));
    }
    if a.ell != b.ell {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let r = Packet::new(*a)?.average_axial(|_, _| 1.0, spec)?;
    Ok(Complex64::new(r.value(), 0.0))
}
