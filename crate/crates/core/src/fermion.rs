//! Dirac bispinors in helicity states and the electron packet's moments.
//!
//! Standard (Dirac) representation. The spinor `omega` is quantized along the
//! packet's mean momentum, not along the integration variable `p`.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::observables::{paraxial_warning, paraxiality};
use crate::packet::{MomentumPoint, Packet, PacketParams};
use crate::quadrature::{Components, QuadratureSpec};

type C = Complex64;
const ZERO: C = C::new(0.0, 0.0);
const ONE: C = C::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Helicity {
    #[serde(rename = "+1/2")]
    Plus,
    #[serde(rename = "-1/2")]
    Minus,
}

impl Helicity {
    pub fn lambda(self) -> f64 {
        match self {
            Helicity::Plus => 0.5,
            Helicity::Minus => -0.5,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Helicity::Plus => Helicity::Minus,
            Helicity::Minus => Helicity::Plus,
        }
    }

    /// `+1/2` for non-negative `x`.
    pub fn from_sign(x: f64) -> Self {
        if x < 0.0 {
            Helicity::Minus
        } else {
            Helicity::Plus
        }
    }
}

/// Two-spinor with `(z.sigma) omega = 2 lambda omega` for the `+z` axis.
pub fn make_spinor(lambda: Helicity) -> [C; 2] {
    match lambda {
        Helicity::Plus => [ONE, ZERO],
        Helicity::Minus => [ZERO, ONE],
    }
}

/// `sigma_j s` for `j = 0, 1, 2` (the `x, y, z` Pauli matrices).
fn pauli(j: usize, s: [C; 2]) -> [C; 2] {
    let i = C::new(0.0, 1.0);
    match j {
        0 => [s[1], s[0]],
        1 => [-i * s[1], i * s[0]],
        _ => [s[0], -s[1]],
    }
}

/// Four components, upper two-spinor first.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bispinor(pub [C; 4]);

impl Bispinor {
    fn upper(&self) -> [C; 2] {
        [self.0[0], self.0[1]]
    }

    fn lower(&self) -> [C; 2] {
        [self.0[2], self.0[3]]
    }

    /// `u^dagger u`.
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    /// `gamma^mu u`, `mu = 0..3`.
    pub fn gamma(&self, mu: usize) -> Bispinor {
        let [a, b, c, d] = self.0;
        if mu == 0 {
            return Bispinor([a, b, -c, -d]);
        }
        let up = pauli(mu - 1, self.lower());
        let lo = pauli(mu - 1, self.upper());
        Bispinor([up[0], up[1], -lo[0], -lo[1]])
    }

    /// `ubar gamma^mu v` with `ubar = u^dagger gamma^0`.
    pub fn bilinear(&self, mu: usize, v: &Bispinor) -> C {
        let g = v.gamma(mu).gamma(0);
        self.0.iter().zip(g.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// `ubar gamma^mu u` for all four `mu`.
    pub fn current(&self) -> [f64; 4] {
        std::array::from_fn(|mu| self.bilinear(mu, self).re)
    }

    fn sub(&self, o: &Bispinor) -> Bispinor {
        Bispinor(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }

    fn scale(&self, s: f64) -> Bispinor {
        Bispinor(self.0.map(|c| c * s))
    }
}

/// `u(p) = (sqrt(eps+m) omega, sqrt(eps-m) (p.sigma) omega / |p|)`.
pub fn make_bispinor(q: &MomentumPoint, lambda: Helicity, m: f64) -> Result<Bispinor> {
    let p = q.cartesian();
    let norm = q.magnitude();
    if norm == 0.0 {
        return Err(Error::DegenerateMomentum);
    }
    let eps = q.energy(m);
    let omega = make_spinor(lambda);
    let mut ps = [ZERO; 2];
    for (j, pj) in p.iter().enumerate() {
        let s = pauli(j, omega);
        ps[0] += s[0] * *pj;
        ps[1] += s[1] * *pj;
    }
    let a = (eps + m).sqrt();
    // sqrt(eps - m) / |p| without cancellation
    let b = 1.0 / (eps + m).sqrt();
    Ok(Bispinor([omega[0] * a, omega[1] * a, ps[0] * b, ps[1] * b]))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Both sides of the helicity-state identity
/// `ubar gamma^j du/dp_k - (dubar/dp_k) gamma^j u
///  = 2i ((p_k/eps) [zeta x p]_j / (eps+m) + [zeta x e_j]_k)`,
/// the left by central differences with step `h`. Indexed `[j][k]`.
pub fn spinor_identity_terms(
    q: &MomentumPoint,
    lambda: Helicity,
    m: f64,
    h: f64,
) -> Result<([[C; 3]; 3], [[C; 3]; 3])> {
    let p = q.cartesian();
    let u = make_bispinor(q, lambda, m)?;
    let eps = q.energy(m);
    let zeta = [0.0, 0.0, 2.0 * lambda.lambda()];
    let zp = cross(zeta, p);
    let mut lhs = [[ZERO; 3]; 3];
    let mut rhs = [[ZERO; 3]; 3];
    for k in 0..3 {
        let at = |s: f64| {
            let mut r = p;
            r[k] += s;
            make_bispinor(&MomentumPoint::from_cartesian(r), lambda, m)
        };
        let du = at(h)?.sub(&at(-h)?).scale(0.5 / h);
        for j in 0..3 {
            lhs[j][k] = u.bilinear(j + 1, &du) - du.bilinear(j + 1, &u);
            let mut e = [0.0; 3];
            e[j] = 1.0;
            let v = p[k] / eps / (eps + m) * zp[j] + cross(zeta, e)[k];
            rhs[j][k] = C::new(0.0, 2.0 * v);
        }
    }
    Ok((lhs, rhs))
}

/// Largest elementwise difference between the two sides of the identity.
pub fn spinor_identity_check(q: &MomentumPoint, lambda: Helicity, m: f64, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::InvalidParameter(format!("step {h}")));
    }
    let (lhs, rhs) = spinor_identity_terms(q, lambda, m, h)?;
    let mut worst = 0.0f64;
    for j in 0..3 {
        for k in 0..3 {
            worst = worst.max((lhs[j][k] - rhs[j][k]).norm());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagneticMoment {
    pub orbital: [f64; 3],
    pub spin: [f64; 3],
    pub total: [f64; 3],
}

impl MagneticMoment {
    pub fn new(orbital: [f64; 3], spin: [f64; 3]) -> Self {
        MagneticMoment {
            orbital,
            spin,
            total: std::array::from_fn(|i| orbital[i] + spin[i]),
        }
    }
}

/// `zeta = 2 lambda pbar/|pbar|`; at rest the axis is `+z` and the second
/// value reports the degenerate case.
pub fn spin_vector(params: &PacketParams, lambda: Helicity) -> ([f64; 3], bool) {
    let degenerate = params.pbar == 0.0;
    let dir = if params.pbar < 0.0 { -1.0 } else { 1.0 };
    ([0.0, 0.0, 2.0 * lambda.lambda() * dir], degenerate)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub quadrature: MagneticMoment,
    /// Absolute error estimate of the quadrature components.
    pub quadrature_error: f64,
    pub expansion: MagneticMoment,
    /// The packet is at rest and the spin axis was taken along `+z`.
    pub degenerate_axis: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

/// Orbital part `z l <1/(2 eps)>` and spin part
/// `<(zeta (eps+m) + p (p.zeta)/(eps+m)) / (2 eps)^2>` by quadrature.
pub fn magnetic_moment_quadrature(
    params: &PacketParams,
    lambda: Helicity,
    spec: &QuadratureSpec,
) -> Result<(MagneticMoment, f64)> {
    let packet = Packet::new(*params)?;
    let m = params.m;
    let (zeta, _) = spin_vector(params, lambda);
    let r = packet.average(
        |q| {
            let eps = q.energy(m);
            let p = q.cartesian();
            let pz: f64 = p.iter().zip(zeta).map(|(a, b)| a * b).sum();
            let w = 1.0 / (4.0 * eps * eps);
            Components([
                1.0 / (2.0 * eps),
                w * (zeta[0] * (eps + m) + p[0] * pz / (eps + m)),
                w * (zeta[1] * (eps + m) + p[1] * pz / (eps + m)),
                w * (zeta[2] * (eps + m) + p[2] * pz / (eps + m)),
            ])
        },
        spec,
    )?;
    let [inv, sx, sy, sz] = r.value().0;
    let orbital = [0.0, 0.0, f64::from(params.ell) * inv];
    Ok((MagneticMoment::new(orbital, [sx, sy, sz]), r.abs_error() * f64::from(params.ell.unsigned_abs()).max(1.0)))
}

/// Leading corrections in `sigma^2/m^2` for both parts.
pub fn magnetic_moment_expansion(params: &PacketParams, lambda: Helicity) -> MagneticMoment {
    let m = params.m;
    let eps = params.eps_bar();
    let l = f64::from(params.abs_ell());
    let s2 = (params.sigma / m).powi(2);
    let r = m / eps;
    let orbital = f64::from(params.ell) / (2.0 * eps) * (1.0 - s2 / 2.0 * (l + 0.5 + r * r));
    let k = m / (eps + m);
    let bracket = 0.5 + 1.5 * r + 0.5 * r * r - 1.5 * r.powi(3) - k * (1.5 - 2.0 * r * r - 1.5 * r.powi(3)) + l * (1.0 + r - k);
    let (zeta, _) = spin_vector(params, lambda);
    let spin = zeta.map(|z| z / (2.0 * eps) * (1.0 - s2 / 2.0 * bracket));
    MagneticMoment::new([0.0, 0.0, orbital], spin)
}

pub fn magnetic_moment(params: &PacketParams, lambda: Helicity, spec: &QuadratureSpec) -> Result<MomentReport> {
    let (quadrature, quadrature_error) = magnetic_moment_quadrature(params, lambda, spec)?;
    Ok(MomentReport {
        quadrature,
        quadrature_error,
        expansion: magnetic_moment_expansion(params, lambda),
        degenerate_axis: spin_vector(params, lambda).1,
        warning: paraxial_warning(params),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinOrbit {
    /// `(1 - m/eps_bar) sin^2 theta0`.
    pub exact: f64,
    /// `|l| sigma^2/m^2 (m/eps_bar - m/(eps_bar+m))`.
    pub paraxial: f64,
    /// The opening angle is undefined at rest; both values are zero there.
    pub rest_frame: bool,
}

/// The spin-orbit parameter. It depends on the helicity only through the
/// axis convention and is the same for both values.
pub fn spin_orbit_delta(params: &PacketParams, _lambda: Helicity) -> Result<SpinOrbit> {
    let m = params.m;
    let eps = params.eps_bar();
    let paraxial = f64::from(params.abs_ell()) * (params.sigma / m).powi(2) * (m / eps - m / (eps + m));
    if params.pbar == 0.0 {
        return Ok(SpinOrbit {
            exact: 0.0,
            paraxial,
            rest_frame: true,
        });
    }
    let theta0 = paraxiality(params)?.theta0;
    // 1 - m/eps = pbar^2 / (eps (eps + m))
    let kinetic = params.pbar * params.pbar / (eps * (eps + m));
    Ok(SpinOrbit {
        exact: kinetic * theta0.sin().powi(2),
        paraxial,
        rest_frame: false,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Dipole {
    /// `<u> t - <d phi/dp> + <p x zeta / (2 eps (eps+m))>`.
    pub dipole: [f64; 3],
    /// `<p / eps>`.
    pub mean_velocity: [f64; 3],
    /// `<u> t`.
    pub mean_path: [f64; 3],
    /// `<d phi/dp>`, zero by azimuthal symmetry.
    pub phase_gradient: [f64; 3],
    /// `<p x zeta / (2 eps (eps+m))>`, zero by azimuthal symmetry.
    pub spin_term: [f64; 3],
    pub quadrature_error: f64,
}

pub fn dipole_and_velocity(params: &PacketParams, lambda: Helicity, t: f64, spec: &QuadratureSpec) -> Result<Dipole> {
    let packet = Packet::new(*params)?;
    let m = params.m;
    let ell = f64::from(params.ell);
    let (zeta, _) = spin_vector(params, lambda);
    let r = packet.average(
        |q| {
            let eps = q.energy(m);
            let p = q.cartesian();
            let (s, c) = q.phi_p.sin_cos();
            // grad of l phi_p; the measure vanishes on the axis for l != 0
            let g = if ell == 0.0 { 0.0 } else { ell / q.p_perp };
            let pz = cross(p, zeta);
            let w = 1.0 / (2.0 * eps * (eps + m));
            Components([
                p[0] / eps,
                p[1] / eps,
                p[2] / eps,
                -g * s,
                g * c,
                0.0,
                pz[0] * w,
                pz[1] * w,
                pz[2] * w,
            ])
        },
        spec,
    )?;
    let v = r.value().0;
    let mean_velocity = [v[0], v[1], v[2]];
    let phase_gradient = [v[3], v[4], v[5]];
    let spin_term = [v[6], v[7], v[8]];
    let mean_path = mean_velocity.map(|u| u * t);
    let dipole = std::array::from_fn(|i| mean_path[i] - phase_gradient[i] + spin_term[i]);
    Ok(Dipole {
        dipole,
        mean_velocity,
        mean_path,
        phase_gradient,
        spin_term,
        quadrature_error: r.abs_error() * t.abs().max(1.0),
    })
}

/// An exact half-integer, stored as twice its value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HalfInteger {
    pub twice: i64,
}

impl HalfInteger {
    pub fn value(self) -> f64 {
        self.twice as f64 / 2.0
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// `<j_z> = l + lambda`.
pub fn total_jz(ell: i32, lambda: Helicity) -> HalfInteger {
    let s = match lambda {
        Helicity::Plus => 1,
        Helicity::Minus => -1,
    };
    HalfInteger {
        twice: 2 * i64::from(ell) + s,
    }
}
