//! Scalar-packet observables, each in three forms: the closed form in Bessel
//! functions, its small-width expansion, and a direct quadrature.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::field::fit_slope;
use crate::kinematics::FourVector;
use crate::packet::{Packet, PacketParams};
use crate::quadrature::{Components, QuadratureSpec};
use crate::specfun::{bessel_k_ratio, log_bessel_k_scaled, log_gamma};

/// `|l| sigma^2 / m^2` above which the expansions are flagged.
pub const PARAXIAL_WARNING_THRESHOLD: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Scalar(f64),
    FourVector(FourVector),
}

impl Quantity {
    /// Largest absolute component.
    pub fn norm(&self) -> f64 {
        match self {
            Quantity::Scalar(x) => x.abs(),
            Quantity::FourVector(v) => v.to_array().iter().fold(0.0f64, |m, c| m.max(c.abs())),
        }
    }

    /// Largest componentwise difference.
    pub fn distance(&self, other: &Quantity) -> f64 {
        match (self, other) {
            (Quantity::Scalar(a), Quantity::Scalar(b)) => (a - b).abs(),
            (Quantity::FourVector(a), Quantity::FourVector(b)) => a.max_abs_diff(b),
            _ => f64::INFINITY,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableReport {
    pub name: String,
    pub exact: Quantity,
    pub expansion: Quantity,
    pub quadrature: Quantity,
    /// Absolute error estimate of `quadrature`.
    pub quadrature_error: f64,
    pub paraxiality: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
}

impl ObservableReport {
    /// `|exact - quadrature| <= max(10 error, 1e-8 |exact|)`.
    pub fn quadrature_agrees(&self) -> bool {
        self.exact.distance(&self.quadrature) <= (10.0 * self.quadrature_error).max(1e-8 * self.exact.norm())
    }

    pub fn expansion_residual(&self) -> f64 {
        self.expansion.distance(&self.exact) / self.exact.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassExcess {
    /// `(m_l - m_0) / m` from the Bessel ratios.
    pub delta_m_over_m: f64,
    /// `|l| sigma^2 / (2 m^2)`.
    pub leading: f64,
    pub ell: i32,
    pub sigma_over_m: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvariantMass {
    pub exact: f64,
    pub expansion: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Paraxiality {
    /// `<p_perp>^2 / m^2`.
    pub epsilon_par: f64,
    /// Opening angle `atan(<p_perp> / |pbar|)`; `pi/2` at rest.
    pub theta0: f64,
    /// `|l| sigma^2 / m^2`.
    pub leading: f64,
}

pub fn paraxial_warning(params: &PacketParams) -> Option<String> {
    let a = params.paraxiality();
    (a >= PARAXIAL_WARNING_THRESHOLD)
        .then(|| format!("|l| sigma^2/m^2 = {a:.3} is not small; expansions are unreliable"))
}

/// `K_{|l|+2}(2m^2/sigma^2) / K_{|l|+1}(2m^2/sigma^2)`.
pub fn momentum_ratio(params: &PacketParams) -> Result<f64> {
    bessel_k_ratio(f64::from(params.abs_ell()) + 1.0, params.bessel_argument())
}

pub fn mean_four_momentum_exact(params: &PacketParams) -> Result<FourVector> {
    Ok(params.mean_momentum() * momentum_ratio(params)?)
}

pub fn mean_four_momentum_expansion(params: &PacketParams) -> FourVector {
    let s = params.sigma / params.m;
    params.mean_momentum() * (1.0 + (0.75 + 0.5 * f64::from(params.abs_ell())) * s * s)
}

/// `<p^mu>` by quadrature, with its absolute error estimate.
pub fn mean_four_momentum_quadrature(params: &PacketParams, spec: &QuadratureSpec) -> Result<(FourVector, f64)> {
    let packet = Packet::new(*params)?;
    let m = params.m;
    let r = packet.average(
        |q| {
            let [x, y, z] = q.cartesian();
            Components([q.energy(m), x, y, z])
        },
        spec,
    )?;
    Ok((FourVector::from_array(r.value().0), r.abs_error()))
}

pub fn four_momentum_report(params: &PacketParams, spec: &QuadratureSpec) -> Result<ObservableReport> {
    let (quadrature, error) = mean_four_momentum_quadrature(params, spec)?;
    Ok(ObservableReport {
        name: "mean_four_momentum".into(),
        exact: Quantity::FourVector(mean_four_momentum_exact(params)?),
        expansion: Quantity::FourVector(mean_four_momentum_expansion(params)),
        quadrature: Quantity::FourVector(quadrature),
        quadrature_error: error,
        paraxiality: params.paraxiality(),
        warning: paraxial_warning(params),
    })
}

/// `m_l`, exact as `m` times the Bessel ratio since `<p^mu>` is parallel to
/// `pbar^mu`.
pub fn invariant_mass(params: &PacketParams) -> Result<InvariantMass> {
    let s = params.sigma / params.m;
    Ok(InvariantMass {
        exact: params.m * momentum_ratio(params)?,
        expansion: params.m * (1.0 + (1.5 + f64::from(params.abs_ell())) * s * s).sqrt(),
    })
}

pub fn mass_excess(params: &PacketParams) -> Result<MassExcess> {
    let s = params.sigma / params.m;
    let ratio = momentum_ratio(params)?;
    let base = momentum_ratio(&params.with_ell(0))?;
    Ok(MassExcess {
        delta_m_over_m: ratio - base,
        leading: 0.5 * f64::from(params.abs_ell()) * s * s,
        ell: params.ell,
        sigma_over_m: s,
    })
}

pub fn invariant_mass_report(params: &PacketParams, spec: &QuadratureSpec) -> Result<ObservableReport> {
    let mass = invariant_mass(params)?;
    let (p, error) = mean_four_momentum_quadrature(params, spec)?;
    let quadrature = p.dot(&p).sqrt();
    Ok(ObservableReport {
        name: "invariant_mass".into(),
        exact: Quantity::Scalar(mass.exact),
        expansion: Quantity::Scalar(mass.expansion),
        quadrature: Quantity::Scalar(quadrature),
        quadrature_error: error * (p.t.abs() + p.z.abs()) / quadrature,
        paraxiality: params.paraxiality(),
        warning: paraxial_warning(params),
    })
}

/// Exact `<p_perp>` from the Gamma and Bessel ratios.
pub fn mean_pperp_exact(params: &PacketParams) -> Result<f64> {
    let l = f64::from(params.abs_ell());
    let z = params.bessel_argument();
    let log = log_gamma(l + 1.5)? - log_gamma(l + 1.0)? + log_bessel_k_scaled(l + 1.5, z)? - log_bessel_k_scaled(l + 1.0, z)?;
    Ok(params.sigma * log.exp())
}

pub fn mean_pperp_quadrature(params: &PacketParams, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let r = Packet::new(*params)?.average_axial(|p_perp, _| p_perp, spec)?;
    Ok((r.value(), r.abs_error()))
}

pub fn mean_pperp(params: &PacketParams, spec: &QuadratureSpec) -> Result<ObservableReport> {
    let (quadrature, error) = mean_pperp_quadrature(params, spec)?;
    Ok(ObservableReport {
        name: "mean_pperp".into(),
        exact: Quantity::Scalar(mean_pperp_exact(params)?),
        expansion: Quantity::Scalar(params.sigma * f64::from(params.abs_ell()).sqrt()),
        quadrature: Quantity::Scalar(quadrature),
        quadrature_error: error,
        paraxiality: params.paraxiality(),
        warning: paraxial_warning(params),
    })
}

pub fn paraxiality(params: &PacketParams) -> Result<Paraxiality> {
    let pperp = mean_pperp_exact(params)?;
    Ok(Paraxiality {
        epsilon_par: (pperp / params.m).powi(2),
        theta0: pperp.atan2(params.pbar.abs()),
        leading: params.paraxiality(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub ell: i32,
    pub sqrt_ell: f64,
    pub pperp_over_sigma_exact: f64,
    pub pperp_over_sigma_quadrature: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PperpScan {
    pub sigma_over_m: f64,
    pub rows: Vec<ScanRow>,
    /// Slope of the exact column against `sqrt(l)` over the upper half of
    /// the scan; `None` with fewer than two rows there.
    pub slope: Option<f64>,
    pub warning: Option<String>,
}

/// `<p_perp>/sigma` against `sqrt(l)` for `l = 0..=ell_max` at rest. The
/// quadrature column is filled when `spec` is given.
pub fn figure1_scan(sigma_over_m: f64, ell_max: u32, spec: Option<&QuadratureSpec>) -> Result<PperpScan> {
    let ell_max = i32::try_from(ell_max).map_err(|_| crate::Error::InvalidParameter(format!("ell_max {ell_max}")))?;
    let rows = (0..=ell_max)
        .into_par_iter()
        .map(|ell| {
            let params = PacketParams::natural(ell, sigma_over_m, 0.0)?;
            let quadrature = match spec {
                Some(s) => Some(mean_pperp_quadrature(&params, s)?.0 / sigma_over_m),
                None => None,
            };
            Ok(ScanRow {
                ell,
                sqrt_ell: f64::from(ell).sqrt(),
                pperp_over_sigma_exact: mean_pperp_exact(&params)? / sigma_over_m,
                pperp_over_sigma_quadrature: quadrature,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let upper: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| 2 * r.ell >= ell_max)
        .map(|r| (r.sqrt_ell, r.pperp_over_sigma_exact))
        .collect();
    let slope = (upper.len() >= 2).then(|| fit_slope(&upper));
    let warning = paraxial_warning(&PacketParams::natural(ell_max, sigma_over_m, 0.0)?);
    Ok(PperpScan {
        sigma_over_m,
        rows,
        slope,
        warning,
    })
}

/// Every scalar-packet report for one parameter set.
pub fn all_reports(params: &PacketParams, spec: &QuadratureSpec) -> Result<Vec<ObservableReport>> {
    Ok(vec![
        four_momentum_report(params, spec)?,
        invariant_mass_report(params, spec)?,
        mean_pperp(params, spec)?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::Boost;

    fn params(ell: i32, sigma: f64, pbar: f64) -> PacketParams {
        PacketParams::natural(ell, sigma, pbar).unwrap()
    }

    #[test]
    fn plane_wave_limit() {
        let p = params(3, 1e-3, 2.0);
        let v = mean_four_momentum_exact(&p).unwrap();
        assert!(v.max_abs_diff(&p.mean_momentum()) < 1e-5);
        assert!((invariant_mass(&p).unwrap().exact - 1.0).abs() < 1e-5);
    }

    #[test]
    fn expansion_factor_examples() {
        let v = mean_four_momentum_expansion(&params(0, 0.1, 0.0));
        assert!((v.t - 1.0075).abs() < 1e-15);
        let a = mean_four_momentum_expansion(&params(10, 0.1, 0.0)).t;
        assert!((a - v.t - 10.0 * 0.01 / 2.0).abs() < 1e-15);
    }

    #[test]
    fn exact_matches_quadrature() {
        let spec = QuadratureSpec::default();
        let r = four_momentum_report(&params(5, 0.2, 1.0), &spec).unwrap();
        assert!(r.quadrature_agrees(), "{r:?}");
        let Quantity::FourVector(q) = r.quadrature else { panic!() };
        assert_eq!((q.x, q.y), (0.0, 0.0));
        let r = mean_pperp(&params(3, 0.2, 1.0), &spec).unwrap();
        assert!(r.exact.distance(&r.quadrature) < 1e-7 * r.exact.norm());
    }

    #[test]
    fn mass_is_boost_invariant_and_above_m() {
        let a = invariant_mass(&params(4, 0.2, 0.0)).unwrap().exact;
        let b = invariant_mass(&params(4, 0.2, 10.0)).unwrap().exact;
        assert_eq!(a, b);
        assert!(a > 1.0);
    }

    #[test]
    fn mass_excess_examples() {
        assert_eq!(mass_excess(&params(0, 0.1, 0.0)).unwrap().delta_m_over_m, 0.0);
        let e = mass_excess(&params(1000, 3.8616e-4, 0.0)).unwrap();
        assert!((e.delta_m_over_m - 7.46e-5).abs() < 0.01 * 7.46e-5, "{e:?}");
        assert!(e.delta_m_over_m < 1e-3);
        let d = mass_excess(&params(2000, 3.8616e-4, 0.0)).unwrap();
        assert!((d.delta_m_over_m / e.delta_m_over_m - 2.0).abs() < 1e-3);
    }

    #[test]
    fn pperp_limits() {
        let p = mean_pperp_exact(&params(0, 0.01, 0.0)).unwrap() / 0.01;
        assert!((p - std::f64::consts::PI.sqrt() / 2.0).abs() < 1e-3);
        let e = paraxiality(&params(0, 0.01, 0.0)).unwrap();
        assert!((e.epsilon_par / (std::f64::consts::FRAC_PI_4 * 1e-4) - 1.0).abs() < 1e-3);
        assert_eq!(e.theta0, std::f64::consts::FRAC_PI_2);
    }

    #[test]
    fn opening_angle_trends() {
        let t = |ell, pbar| paraxiality(&params(ell, 0.1, pbar)).unwrap();
        assert!(t(10, 1.0).theta0 > t(2, 1.0).theta0);
        assert!(t(2, 3.0).theta0 < t(2, 1.0).theta0);
        assert_eq!(t(2, 3.0).epsilon_par, t(2, 1.0).epsilon_par);
        let p = params(4, 0.1, 1.3);
        let par = paraxiality(&p).unwrap();
        let lhs = (p.eps_bar().powi(2) - 1.0) * par.theta0.tan().powi(2);
        assert!((lhs - par.epsilon_par).abs() < 1e-14);
    }

    #[test]
    fn four_momentum_is_covariant() {
        let p = params(3, 0.2, 0.7);
        let v = mean_four_momentum_exact(&p).unwrap();
        let b = Boost::new(1.3);
        let w = mean_four_momentum_exact(&p.boosted(b)).unwrap();
        assert!(b.apply(&v).max_abs_diff(&w) < 1e-12 * w.t);
    }

    #[test]
    fn scan_rows() {
        let s = figure1_scan(0.01, 0, None).unwrap();
        assert_eq!(s.rows.len(), 1);
        assert!((s.rows[0].pperp_over_sigma_exact - 0.886).abs() < 1e-3);
        assert!(s.slope.is_none());
        let s = figure1_scan(0.01, 400, None).unwrap();
        assert!(s.rows.windows(2).all(|w| w[1].pperp_over_sigma_exact > w[0].pperp_over_sigma_exact));
        // arbitrary-precision fit of the same rows
        assert!((s.slope.unwrap() - 1.021_035_81).abs() < 1e-7, "{:?}", s.slope);
    }

    #[test]
    fn warning_threshold() {
        assert!(paraxial_warning(&params(10, 0.2, 0.0)).is_some());
        assert!(paraxial_warning(&params(1, 0.2, 0.0)).is_none());
    }
}
