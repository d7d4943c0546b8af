//! Minkowski four-vectors and longitudinal boosts.
//!
//! Metric `diag(1, -1, -1, -1)`; boosts act along `+z` and are parameterized
//! by rapidity so that composition is exact addition.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Reduced Compton wavelength of the electron in nanometres.
pub const COMPTON_WAVELENGTH_NM: f64 = 3.8616e-4;
/// Electron rest energy in keV.
pub const ELECTRON_REST_ENERGY_KEV: f64 = 510.998_95;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct FourVector {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl FourVector {
    pub const fn new(t: f64, x: f64, y: f64, z: f64) -> Self {
        FourVector { t, x, y, z }
    }

    pub fn dot(&self, other: &FourVector) -> f64 {
        self.t * other.t - self.x * other.x - self.y * other.y - self.z * other.z
    }

    pub fn spatial_norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.t, self.x, self.y, self.z]
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        FourVector::new(a[0], a[1], a[2], a[3])
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &FourVector) -> f64 {
        (*self - *other)
            .to_array()
            .iter()
            .fold(0.0f64, |acc, d| acc.max(d.abs()))
    }
}

impl Add for FourVector {
    type Output = FourVector;
    fn add(self, o: FourVector) -> FourVector {
        FourVector::new(self.t + o.t, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for FourVector {
    type Output = FourVector;
    fn sub(self, o: FourVector) -> FourVector {
        FourVector::new(self.t - o.t, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for FourVector {
    type Output = FourVector;
    fn neg(self) -> FourVector {
        FourVector::new(-self.t, -self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for FourVector {
    type Output = FourVector;
    fn mul(self, s: f64) -> FourVector {
        FourVector::new(self.t * s, self.x * s, self.y * s, self.z * s)
    }
}

/// `v . v = t^2 - x^2 - y^2 - z^2`.
pub fn minkowski_square(v: &FourVector) -> f64 {
    v.dot(v)
}

/// Longitudinal Lorentz boost along `+z`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Boost {
    pub rapidity: f64,
}

impl Boost {
    pub const fn new(rapidity: f64) -> Self {
        Boost { rapidity }
    }

    pub fn inverse(self) -> Self {
        Boost::new(-self.rapidity)
    }

    pub fn then(self, next: Boost) -> Self {
        Boost::new(self.rapidity + next.rapidity)
    }

    pub fn apply(&self, v: &FourVector) -> FourVector {
        boost_z(v, *self)
    }

    /// Boost of a longitudinal momentum `p` of a particle with mass `m`.
    pub fn apply_pz(&self, pz: f64, m: f64) -> f64 {
        boost_z(&on_shell(pz, m), *self).z
    }
}

pub fn boost_z(v: &FourVector, b: Boost) -> FourVector {
    if b.rapidity == 0.0 {
        return *v;
    }
    let (sh, ch) = (b.rapidity.sinh(), b.rapidity.cosh());
    FourVector::new(v.t * ch + v.z * sh, v.x, v.y, v.z * ch + v.t * sh)
}

/// `(sqrt(pz^2 + m^2), 0, 0, pz)`.
pub fn on_shell(pz: f64, m: f64) -> FourVector {
    FourVector::new(pz.hypot(m), 0.0, 0.0, pz)
}

/// `sigma / m = lambda_c / sigma_perp` for a transverse width in nanometres.
pub fn sigma_over_m_from_width_nm(sigma_perp_nm: f64) -> f64 {
    COMPTON_WAVELENGTH_NM / sigma_perp_nm
}

/// `pbar / m` of an electron with the given kinetic energy in keV.
pub fn pbar_over_m_from_kinetic_kev(kinetic_kev: f64) -> f64 {
    let gamma_minus_one = kinetic_kev / ELECTRON_REST_ENERGY_KEV;
    // gamma^2 - 1 = (gamma - 1)(gamma + 1)
    (gamma_minus_one * (gamma_minus_one + 2.0)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn squares() {
        assert_eq!(minkowski_square(&FourVector::new(1.0, 0.0, 0.0, 0.0)), 1.0);
        assert!((minkowski_square(&on_shell(3.0, 1.0)) - 1.0).abs() < 1e-14);
        assert_eq!(minkowski_square(&FourVector::new(0.0, 1.0, 1.0, 0.0)), -2.0);
    }

    #[test]
    fn on_shell_examples() {
        assert_eq!(on_shell(0.0, 1.0), FourVector::new(1.0, 0.0, 0.0, 0.0));
        assert_eq!(on_shell(3.0, 1.0), FourVector::new(10f64.sqrt(), 0.0, 0.0, 3.0));
        assert_eq!(on_shell(-3.0, 1.0), FourVector::new(10f64.sqrt(), 0.0, 0.0, -3.0));
    }

    #[test]
    fn rest_frame_boost() {
        let eta = 0.7f64;
        let p = boost_z(&FourVector::new(1.0, 0.0, 0.0, 0.0), Boost::new(eta));
        assert!((p.t - eta.cosh()).abs() < 1e-15);
        assert!((p.z - eta.sinh()).abs() < 1e-15);
        let v = FourVector::new(0.3, 1.0, 2.0, -4.0);
        assert_eq!(boost_z(&v, Boost::new(0.0)), v);
    }

    #[test]
    fn unit_conversions() {
        assert!((sigma_over_m_from_width_nm(1.0) - 3.8616e-4).abs() < 1e-18);
        // 300 keV electrons: gamma = 1.587, beta gamma = 1.2326
        let p = pbar_over_m_from_kinetic_kev(300.0);
        let gamma = 1.0 + 300.0 / ELECTRON_REST_ENERGY_KEV;
        assert!((p - (gamma * gamma - 1.0).sqrt()).abs() < 1e-14);
        assert_eq!(pbar_over_m_from_kinetic_kev(0.0), 0.0);
    }

    fn vector() -> impl Strategy<Value = FourVector> {
        (-50.0f64..50.0, -50.0f64..50.0, -50.0f64..50.0, -50.0f64..50.0)
            .prop_map(|(t, x, y, z)| FourVector::new(t, x, y, z))
    }

    fn scale(v: &FourVector, eta: f64) -> f64 {
        (v.t * v.t + v.x * v.x + v.y * v.y + v.z * v.z) * (2.0 * eta.abs()).exp()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn boost_preserves_square(v in vector(), eta in -10.0f64..10.0) {
            let w = boost_z(&v, Boost::new(eta));
            let (a, b) = (minkowski_square(&v), minkowski_square(&w));
            // Relative to the size of the terms that cancel in the square.
            prop_assert!((a - b).abs() <= 1e-10 * scale(&v, eta).max(a.abs()));
        }
    }

    proptest! {
        #[test]
        fn boosts_compose_additively(v in vector(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
            let two = boost_z(&boost_z(&v, Boost::new(a)), Boost::new(b));
            let one = boost_z(&v, Boost::new(a).then(Boost::new(b)));
            let size = scale(&v, a.abs() + b.abs()).sqrt();
            prop_assert!(two.max_abs_diff(&one) <= 1e-10 * size);
        }

        #[test]
        fn inverse_boost_round_trips(v in vector(), eta in -10.0f64..10.0) {
            let back = boost_z(&boost_z(&v, Boost::new(eta)), Boost::new(eta).inverse());
            // Rounding in the boosted components is amplified once more on the way back.
            let size = scale(&v, 2.0 * eta).sqrt();
            prop_assert!(back.max_abs_diff(&v) <= 1e-12 * size);
        }
    }
}
