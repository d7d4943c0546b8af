//! The invariant suite behind `vortexpack verify`: fifteen numbered checks,
//! each comparing two independent routes to the same number.

use std::time::Instant;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fermion::{dipole_and_velocity, magnetic_moment_quadrature, magnetic_moment_expansion, spin_orbit_delta, spinor_identity_check, Helicity};
use crate::field::{
    beam_width, decay_slope, diffraction_time, fourier_oracle, kg_residual, paraxial_radius_squared, psi_exact,
    psi_paraxial, varsigma, SpacetimePoint,
};
use crate::kinematics::{sigma_over_m_from_width_nm, Boost};
use crate::observables::{
    figure1_scan, invariant_mass, mass_excess, mean_four_momentum_exact, mean_four_momentum_expansion,
    mean_four_momentum_quadrature, mean_pperp_exact, mean_pperp_quadrature,
};
use crate::packet::{overlap, MomentumPoint, Packet, PacketParams};
use crate::quadrature::QuadratureSpec;
use crate::specfun::{log_bessel_k_scaled, log_bessel_k_scaled_in, k_regime, KRegime};

pub const GRID_ELLS: [i32; 4] = [0, 1, 5, 20];
pub const GRID_SIGMAS: [f64; 3] = [0.05, 0.1, 0.2];
pub const GRID_PBARS: [f64; 3] = [0.0, 1.0, 5.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub id: u8,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

type Check = fn(&QuadratureSpec) -> Result<(bool, String)>;

const CHECKS: [(u8, &str, Check); 15] = [
    (1, "normalization and orthogonality", normalization),
    (2, "mean four-momentum, closed form vs quadrature", four_momentum),
    (3, "four-momentum expansion is fourth order", expansion_order),
    (4, "mass excess", mass_excess_check),
    (5, "mean transverse momentum and sqrt(l) scan", transverse_momentum),
    (6, "exact field vs Fourier transform", field_transform),
    (7, "Klein-Gordon residual", klein_gordon),
    (8, "paraxial limit is second order", paraxial_order),
    (9, "exponential decay law", decay_law),
    (10, "Lorentz invariance", lorentz),
    (11, "helicity spinor identity", spinor_identity),
    (12, "magnetic moment", magnetic_moment_check),
    (13, "spin-orbit parameter", spin_orbit),
    (14, "electric dipole and mean velocity", dipole),
    (15, "Bessel K recurrence and closed forms", special_functions),
];

/// Ids and titles of every check.
pub fn checks() -> Vec<(u8, &'static str)> {
    CHECKS.iter().map(|c| (c.0, c.1)).collect()
}

pub fn run_check(id: u8, spec: &QuadratureSpec) -> Option<CheckOutcome> {
    let (id, title, f) = CHECKS.iter().find(|c| c.0 == id)?;
    let start = Instant::now();
    let (passed, detail) = match f(spec) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    Some(CheckOutcome {
        id: *id,
        title: (*title).into(),
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    })
}

/// Runs the selected checks (all when `ids` is empty) in parallel, reporting
/// in id order.
pub fn run(ids: &[u8], spec: &QuadratureSpec) -> Vec<CheckOutcome> {
    CHECKS
        .par_iter()
        .filter(|c| ids.is_empty() || ids.contains(&c.0))
        .filter_map(|c| run_check(c.0, spec))
        .collect()
}

/// The 36 parameter sets `l x sigma x pbar`.
pub fn grid() -> Vec<PacketParams> {
    let mut out = Vec::new();
    for ell in GRID_ELLS {
        for sigma in GRID_SIGMAS {
            for pbar in GRID_PBARS {
                out.push(PacketParams::natural(ell, sigma, pbar).expect("grid parameters are valid"));
            }
        }
    }
    out
}

fn natural(ell: i32, sigma: f64, pbar: f64) -> Result<PacketParams> {
    PacketParams::natural(ell, sigma, pbar)
}

fn within(ratio: f64, target: f64, fraction: f64) -> bool {
    (ratio / target - 1.0).abs() <= fraction
}

fn worst<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> Result<f64>) -> Result<f64> {
    let mut w = 0.0f64;
    for x in items {
        w = w.max(f(x)?);
    }
    Ok(w)
}

fn normalization(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let start = Instant::now();
    let cases = grid();
    let dev = worst(&cases, |p| Ok((Packet::new(*p)?.average_axial(|_, _| 1.0, spec)?.value() - 1.0).abs()))?;
    let base = natural(0, 0.1, 1.0)?;
    let mut orthogonal = true;
    for a in GRID_ELLS {
        for b in GRID_ELLS {
            if a != b {
                orthogonal &= overlap(&base.with_ell(a), &base.with_ell(b), spec)?.norm() == 0.0;
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((
        dev <= 1e-7 && orthogonal && secs <= 60.0,
        format!("{} cases, max |<1> - 1| = {dev:.2e}, distinct-l overlaps zero: {orthogonal}, {secs:.1} s", cases.len()),
    ))
}

fn four_momentum(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let dev = worst(grid(), |p| {
        let exact = mean_four_momentum_exact(&p)?;
        let (quad, _) = mean_four_momentum_quadrature(&p, spec)?;
        Ok(exact.max_abs_diff(&quad) / exact.t)
    })?;
    Ok((dev <= 1e-7, format!("max component deviation / energy = {dev:.2e}")))
}

fn expansion_residual(sigma: f64) -> Result<f64> {
    let p = natural(5, sigma, 1.0)?;
    let exact = mean_four_momentum_exact(&p)?;
    Ok(mean_four_momentum_expansion(&p).max_abs_diff(&exact) / exact.t)
}

fn expansion_order(_: &QuadratureSpec) -> Result<(bool, String)> {
    let r: Vec<f64> = [0.1, 0.05, 0.025].iter().map(|&s| expansion_residual(s)).collect::<Result<_>>()?;
    let ratios = [r[0] / r[1], r[1] / r[2]];
    Ok((
        ratios.iter().all(|&x| within(x, 16.0, 0.25)),
        format!("residual ratios on halving sigma: {:.2}, {:.2}", ratios[0], ratios[1]),
    ))
}

fn mass_excess_check(_: &QuadratureSpec) -> Result<(bool, String)> {
    let coefficient = worst(grid(), |p| {
        let e = mass_excess(&p)?;
        let scale = (p.sigma / p.m).powi(4) * f64::from(p.abs_ell().max(1)).powi(2);
        Ok((e.delta_m_over_m - e.leading).abs() / scale)
    })?;
    let beam = natural(1000, sigma_over_m_from_width_nm(1.0), 0.0)?;
    let e = mass_excess(&beam)?.delta_m_over_m;
    let ok = coefficient <= 1.0 && within(e, 7.46e-5, 0.01) && e < 1e-3;
    Ok((ok, format!("|exact - leading| <= {coefficient:.3} sigma^4 l^2; l=1000 at 1 nm: {e:.4e}")))
}

fn transverse_momentum(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let dev = worst(grid(), |p| {
        let exact = mean_pperp_exact(&p)?;
        Ok((mean_pperp_quadrature(&p, spec)?.0 - exact).abs() / exact)
    })?;
    let scan = figure1_scan(0.01, 400, None)?;
    let slope = scan.slope.unwrap_or(f64::NAN);
    Ok((
        dev <= 1e-7 && (slope - 1.0).abs() <= 0.02,
        format!("max relative deviation {dev:.2e}; slope over l in [200, 400] at sigma/m = 0.01: {slope:.4}"),
    ))
}

/// Points in units of the packet width `1/sigma`.
const FIELD_POINTS: [(f64, f64, f64, f64); 5] = [
    (0.0, 1.0, 0.3, 0.0),
    (1.0, 2.0, 1.0, -0.5),
    (-0.7, 0.5, 2.0, 1.5),
    (2.0, 3.0, 4.0, 2.0),
    (0.3, 1.5, 5.5, -2.0),
];

fn field_transform(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let start = Instant::now();
    let mut dev = 0.0f64;
    let mut n = 0;
    for ell in [0, 1, 3] {
        for sigma in [0.2, 0.3] {
            for pbar in [0.0, 1.0] {
                let p = natural(ell, sigma, pbar)?;
                for (t, rho, phi, z) in FIELD_POINTS {
                    let x = SpacetimePoint::new(t / sigma, rho / sigma, phi, z / sigma);
                    dev = dev.max(psi_exact(&p, &x)?.relative_distance(&fourier_oracle(&p, &x, spec)?));
                    n += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    Ok((dev <= 1e-6 && secs <= 180.0, format!("{n} points, max relative difference {dev:.2e}, {secs:.1} s")))
}

pub const KG_POINTS: [(i32, f64, f64, (f64, f64, f64, f64)); 10] = [
    (0, 0.3, 0.0, (0.5, 1.0, 0.0, 0.5)),
    (1, 0.3, 1.0, (0.5, 1.5, 0.7, 0.4)),
    (3, 0.2, 2.0, (-1.0, 4.0, 1.0, 2.0)),
    (2, 0.1, 0.5, (10.0, 8.0, 2.0, 3.0)),
    (0, 0.2, 1.0, (3.0, 2.0, 0.0, 1.0)),
    (4, 0.3, 0.0, (1.0, 3.0, 2.5, -1.0)),
    (1, 0.1, 3.0, (20.0, 5.0, 1.0, 15.0)),
    (5, 0.2, 0.5, (-2.0, 6.0, 4.0, 0.0)),
    (2, 0.3, 1.0, (0.0, 2.0, 3.0, -2.0)),
    (1, 0.25, 0.0, (2.0, 2.5, 5.0, 1.0)),
];

fn klein_gordon(_: &QuadratureSpec) -> Result<(bool, String)> {
    let h = 1e-3;
    let mut largest = 0.0f64;
    let mut ratios = (f64::INFINITY, 0.0f64);
    for (ell, sigma, pbar, (t, rho, phi, z)) in KG_POINTS {
        let p = natural(ell, sigma, pbar)?;
        let x = SpacetimePoint::new(t, rho, phi, z);
        let r = kg_residual(&p, &x, h)?;
        let ratio = kg_residual(&p, &x, 2.0 * h)? / r;
        largest = largest.max(r);
        ratios = (ratios.0.min(ratio), ratios.1.max(ratio));
    }
    let ok = largest <= 1e-4 && within(ratios.0, 4.0, 0.2) && within(ratios.1, 4.0, 0.2);
    Ok((
        ok,
        format!("max residual at h = 1e-3: {largest:.2e}; residual(2h)/residual(h) in [{:.2}, {:.2}]", ratios.0, ratios.1),
    ))
}

/// `(l, pbar, t/t_d, rho sigma, phi, z offset sigma)`. With `pbar != 0` the
/// longitudinal position is on the mean worldline `z = u t`, where `t/t_d`
/// coincides with its invariant form.
pub const PARAXIAL_POINTS: [(i32, f64, f64, f64, f64, f64); 5] = [
    (0, 0.0, 0.3, 1.2, 0.4, 0.5),
    (1, 0.0, 0.0, 1.2, 0.4, 0.0),
    (3, 0.0, 0.5, 2.0, 1.0, -0.7),
    (1, 1.0, 0.3, 1.2, 0.4, 0.0),
    (2, 0.5, -0.4, 1.5, 2.0, 0.0),
];

pub fn paraxial_deviation(ell: i32, pbar: f64, tau: f64, rho: f64, phi: f64, dz: f64, sigma: f64) -> Result<f64> {
    let p = natural(ell, sigma, pbar)?;
    let t = tau * diffraction_time(&p);
    let x = SpacetimePoint::new(t, rho / sigma, phi, pbar / p.eps_bar() * t + dz / sigma);
    Ok(psi_paraxial(&p, &x).relative_distance(&psi_exact(&p, &x)?))
}

fn paraxial_order(_: &QuadratureSpec) -> Result<(bool, String)> {
    let mut range = (f64::INFINITY, 0.0f64);
    for (ell, pbar, tau, rho, phi, dz) in PARAXIAL_POINTS {
        let r = paraxial_deviation(ell, pbar, tau, rho, phi, dz, 0.1)? / paraxial_deviation(ell, pbar, tau, rho, phi, dz, 0.05)?;
        range = (range.0.min(r), range.1.max(r));
    }
    let ok = within(range.0, 4.0, 0.25) && within(range.1, 4.0, 0.25);
    Ok((ok, format!("deviation ratio on halving sigma in [{:.2}, {:.2}]", range.0, range.1)))
}

fn decay_law(_: &QuadratureSpec) -> Result<(bool, String)> {
    let ray = SpacetimePoint::new(0.0, 1.0, 0.0, 0.0);
    let mut detail = Vec::new();
    let mut ok = true;
    for ell in [0, 4] {
        let p = natural(ell, 0.3, 0.0)?;
        let s = decay_slope(&p, &ray, (10.0, 20.0))?;
        let b = Boost::new(1.0);
        let sb = decay_slope(&p.boosted(b), &ray.boosted(b), (10.0, 20.0))?;
        ok &= within(s, -p.m, 0.05) && within(sb, s, 0.01);
        detail.push(format!("l={ell}: slope {s:.4} (boosted {sb:.4})"));
    }
    Ok((ok, format!("{} against -1 +- 5%", detail.join(", "))))
}

fn lorentz(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let p = natural(3, 0.2, 0.7)?;
    let x = SpacetimePoint::new(2.0, 1.5, 0.3, -1.0);
    let t = 4.0;
    let on_line = SpacetimePoint::new(t, 1.5, 0.3, p.pbar / p.eps_bar() * t);
    let mass = invariant_mass(&p)?.exact;
    let vs = varsigma(&p, &x)?.value;
    let (pq, _) = mean_four_momentum_quadrature(&p, spec)?;
    let mut scalar = 0.0f64;
    let mut vector = 0.0f64;
    for eta in [-3.0, -1.5, 0.7, 3.0] {
        let b = Boost::new(eta);
        let pb = p.boosted(b);
        let rel = |a: f64, c: f64| (a - c).abs() / a.abs();
        scalar = scalar
            .max(rel(mass, invariant_mass(&pb)?.exact))
            .max((vs - varsigma(&pb, &x.boosted(b))?.value).norm())
            .max(rel(beam_width(&p, on_line.t), beam_width(&pb, on_line.boosted(b).t)))
            .max(rel(on_line.t / diffraction_time(&p), on_line.boosted(b).t / diffraction_time(&pb)))
            .max(rel(paraxial_radius_squared(&p, &x), paraxial_radius_squared(&pb, &x.boosted(b))));
        let (qb, _) = mean_four_momentum_quadrature(&pb, spec)?;
        vector = vector.max(b.apply(&pq).max_abs_diff(&qb) / qb.t);
    }
    Ok((
        scalar <= 1e-10 && vector <= 1e-7,
        format!("scalars {scalar:.1e}, four-momentum {vector:.1e} for |eta| <= 3"),
    ))
}

fn spinor_identity(_: &QuadratureSpec) -> Result<(bool, String)> {
    let mut rng = StdRng::seed_from_u64(16);
    let mut largest = 0.0f64;
    let mut ratios = (f64::INFINITY, 0.0f64);
    for _ in 0..20 {
        let magnitude = rng.random_range(0.3..2.0);
        let cos = rng.random_range(-1.0..1.0f64);
        let phi = rng.random_range(0.0..std::f64::consts::TAU);
        let q = MomentumPoint::new(magnitude * (1.0 - cos * cos).sqrt(), phi, magnitude * cos);
        let lambda = if rng.random_bool(0.5) { Helicity::Plus } else { Helicity::Minus };
        let r = spinor_identity_check(&q, lambda, 1.0, 1e-4)?;
        let ratio = spinor_identity_check(&q, lambda, 1.0, 2e-4)? / r;
        largest = largest.max(r);
        ratios = (ratios.0.min(ratio), ratios.1.max(ratio));
    }
    let ok = largest <= 1e-6 && within(ratios.0, 4.0, 0.2) && within(ratios.1, 4.0, 0.2);
    Ok((ok, format!("20 samples, max residual {largest:.2e}, order ratios [{:.2}, {:.2}]", ratios.0, ratios.1)))
}

/// Richardson extrapolation to `sigma = 0` from values at `s, s/2, s/4` with
/// errors even in `sigma`.
pub fn richardson(v: [f64; 3]) -> f64 {
    let a = (4.0 * v[1] - v[0]) / 3.0;
    let b = (4.0 * v[2] - v[1]) / 3.0;
    (16.0 * b - a) / 15.0
}

/// `c` in `2 eps_bar mu_b / l = 1 - c sigma^2 / (2 m^2)`, extrapolated.
pub fn orbital_coefficient(ell: i32, pbar: f64, spec: &QuadratureSpec) -> Result<f64> {
    let c = |s: f64| -> Result<f64> {
        let p = natural(ell, s, pbar)?;
        let (m, _) = magnetic_moment_quadrature(&p, Helicity::Plus, spec)?;
        Ok((1.0 - m.orbital[2] * 2.0 * p.eps_bar() / f64::from(ell)) * 2.0 / (s * s))
    };
    let (a, b) = (c(0.05)?, c(0.025)?);
    Ok((4.0 * b - a) / 3.0)
}

fn magnetic_moment_check(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let sigmas = [0.1, 0.05, 0.025];
    let mut coefficient = 0.0f64;
    for ell in GRID_ELLS {
        for pbar in GRID_PBARS {
            for s in sigmas {
                let p = natural(ell, s, pbar)?;
                let (q, _) = magnetic_moment_quadrature(&p, Helicity::Plus, spec)?;
                let e = magnetic_moment_expansion(&p, Helicity::Plus);
                let scale = s.powi(4) * f64::from(ell.max(1)).powi(2);
                if ell != 0 {
                    coefficient = coefficient.max((q.orbital[2] - e.orbital[2]).abs() / e.orbital[2].abs() / scale);
                }
                coefficient = coefficient.max((q.spin[2] - e.spin[2]).abs() / e.spin[2].abs() / scale);
            }
        }
    }
    let mut leading = 0.0f64;
    for (ell, pbar) in [(5, 1.0), (1, 0.0), (20, 5.0)] {
        let values: Vec<(f64, f64)> = sigmas
            .iter()
            .map(|&s| Ok(magnetic_moment_quadrature(&natural(ell, s, pbar)?, Helicity::Plus, spec)?.0))
            .map(|m: Result<_>| m.map(|m| (m.orbital[2], m.spin[2])))
            .collect::<Result<_>>()?;
        let eps = natural(ell, 0.1, pbar)?.eps_bar();
        let orbital = richardson([values[0].0, values[1].0, values[2].0]);
        let spin = richardson([values[0].1, values[1].1, values[2].1]);
        leading = leading
            .max((orbital * 2.0 * eps / f64::from(ell) - 1.0).abs())
            .max((spin * 2.0 * eps - 1.0).abs());
    }
    let mut frame = 0.0f64;
    for ell in [1, 5] {
        let shift = orbital_coefficient(ell, 0.0, spec)? - orbital_coefficient(ell, 5.0, spec)?;
        let predicted = 1.0 - 1.0 / natural(ell, 0.1, 5.0)?.eps_bar().powi(2);
        frame = frame.max((shift / predicted - 1.0).abs());
    }
    let ok = coefficient <= 10.0 && leading <= 1e-4 && frame <= 0.1;
    Ok((
        ok,
        format!(
            "|quadrature - expansion| <= {coefficient:.2} sigma^4 l^2; leading terms to {leading:.1e}; frame coefficient off by {:.2}%",
            100.0 * frame
        ),
    ))
}

fn spin_orbit(_: &QuadratureSpec) -> Result<(bool, String)> {
    let mut rest_zero = true;
    for ell in GRID_ELLS {
        rest_zero &= spin_orbit_delta(&natural(ell, 0.1, 0.0)?, Helicity::Plus)?.exact == 0.0;
    }
    let mut linear = 0.0f64;
    let base = spin_orbit_delta(&natural(1, 0.05, 1.0)?, Helicity::Plus)?.paraxial;
    for k in [2, 3, 10, 1000] {
        let d = spin_orbit_delta(&natural(k, 0.05, 1.0)?, Helicity::Plus)?.paraxial;
        linear = linear.max((d / (f64::from(k) * base) - 1.0).abs());
    }
    Ok((
        rest_zero && linear <= 4.0 * f64::EPSILON,
        format!("zero at rest: {rest_zero}; linearity deviation {linear:.1e}"),
    ))
}

fn dipole(spec: &QuadratureSpec) -> Result<(bool, String)> {
    let mut at_zero = 0.0f64;
    let mut points = Vec::new();
    for ell in GRID_ELLS {
        for sigma in GRID_SIGMAS {
            for pbar in [1.0, 5.0] {
                let p = natural(ell, sigma, pbar)?;
                let d = dipole_and_velocity(&p, Helicity::Plus, 0.0, spec)?;
                at_zero = at_zero.max(d.dipole.iter().fold(0.0f64, |m, x| m.max(x.abs())));
                let u = pbar / p.eps_bar();
                points.push((f64::from(ell) * sigma * sigma, (d.mean_velocity[2] - u) / u));
            }
        }
    }
    // least squares through the origin: residual = k l sigma^2
    let k = points.iter().map(|(x, y)| x * y).sum::<f64>() / points.iter().map(|(x, _)| x * x).sum::<f64>();
    let misfit = points
        .iter()
        .map(|(x, y)| (k * x - y).abs() / y.abs())
        .fold(0.0f64, f64::max);
    let ok = at_zero <= 1e-9 && misfit <= 0.25;
    Ok((
        ok,
        format!("dipole at t=0 <= {at_zero:.1e}; fit of <u_z>/u - 1 = k l sigma^2 gives k = {k:.3}, worst misfit {:.0}%", 100.0 * misfit),
    ))
}

fn special_functions(_: &QuadratureSpec) -> Result<(bool, String)> {
    use crate::specfun::{LARGE_ARGUMENT_FACTOR, SERIES_LIMIT, UNIFORM_ORDER_LIMIT};
    let mut points = Vec::new();
    for nu in [0.3, 1.3, 5.0, UNIFORM_ORDER_LIMIT - 1.0, UNIFORM_ORDER_LIMIT, UNIFORM_ORDER_LIMIT + 1.0, 100.0, 1001.0, 1100.0] {
        for z in [0.5, SERIES_LIMIT * 0.999, SERIES_LIMIT, SERIES_LIMIT * 1.001, 40.0, 1e3, 1e5, 2e7] {
            points.push((nu, z));
        }
        let edge = LARGE_ARGUMENT_FACTOR * f64::max(1.0, nu * nu);
        for f in [0.98, 1.0, 1.02] {
            if edge * f <= 2e7 {
                points.push((nu, edge * f));
            }
        }
    }
    let recurrence = worst(points, |(nu, z)| {
        let l = |n: f64| log_bessel_k_scaled(n, z);
        let centre = l(nu)?;
        let up = (l(nu + 1.0)? - centre).exp();
        let down = (l((nu - 1.0).abs())? - centre).exp();
        Ok((up - down - 2.0 * nu / z).abs() / up)
    })?;
    // closed forms against the elementary functions and the general methods
    let mut closed = 0.0f64;
    for z in [0.1, 1.0, 7.0, 300.0, 2e7] {
        let base = 0.5 * (std::f64::consts::PI / (2.0 * z)).ln();
        for (nu, poly) in [(0.5, 1.0), (1.5, 1.0 + 1.0 / z), (2.5, 1.0 + 3.0 / z + 3.0 / (z * z))] {
            closed = closed.max((log_bessel_k_scaled(nu, z)? - base - f64::ln(poly)).abs() / base.abs().max(1.0));
        }
    }
    for (nu, z) in [(0.5f64, 1.0f64), (2.5, 7.0), (10.5, 1.5), (30.5, 40.0), (5.5, 2e3)] {
        let regime = if z < SERIES_LIMIT {
            KRegime::Series
        } else if z > LARGE_ARGUMENT_FACTOR * (nu * nu).max(1.0) {
            KRegime::LargeArgument
        } else if nu > UNIFORM_ORDER_LIMIT {
            KRegime::UniformLargeOrder
        } else {
            KRegime::Integral
        };
        debug_assert_eq!(k_regime(nu, z), KRegime::HalfInteger);
        let a = log_bessel_k_scaled(nu, z)?;
        closed = closed.max((a - log_bessel_k_scaled_in(regime, nu, z)?).abs() / a.abs().max(1.0));
    }
    Ok((
        recurrence <= 1e-9 && closed <= 1e-12,
        format!("recurrence residual {recurrence:.1e}; half-integer closed forms {closed:.1e}"),
    ))
}
