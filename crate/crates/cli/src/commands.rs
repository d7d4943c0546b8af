use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vortexpack::fermion::{
    dipole_and_velocity, magnetic_moment, spin_orbit_delta, total_jz, Dipole, MomentReport, SpinOrbit,
};
use vortexpack::field::{
    beam_width, diffraction_time, kg_residual_of, paraxial_radius_squared, psi_exact, psi_paraxial, varsigma,
    FieldModel,
};
use vortexpack::observables::{
    all_reports, figure1_scan, invariant_mass, mass_excess, mean_four_momentum_quadrature, paraxiality, Paraxiality,
};
use vortexpack::verify::{self, CheckOutcome};
use vortexpack::{Boost, Helicity, MassExcess, ObservableReport, PacketParams, SpacetimePoint};

use crate::args::{Axis, BoostArgs, Command, FieldArgs, Format, MomentArgs, PointArgs, ScanArgs, VerifyArgs};
use crate::error::CliError;

type Out<'a> = &'a mut dyn Write;

pub fn run(command: &Command, out: Out) -> Result<(), CliError> {
    match command {
        Command::Verify(a) => run_verify(a, out),
        Command::Observables(a) => run_observables(a, out),
        Command::ScanPperp(a) => run_scan(a, out),
        Command::MassExcess(a) => run_mass_excess(a, out),
        Command::Field(a) => run_field(a, out),
        Command::Moment(a) => run_moment(a, out),
        Command::BoostCheck(a) => run_boost_check(a, out),
    }
}

fn csv(x: f64) -> String {
    format!("{x:.16e}")
}

fn json<T: Serialize>(value: &T, out: Out) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value).map_err(std::io::Error::from)?;
    writeln!(out)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct VerifyOutput {
    pub passed: bool,
    pub seconds: f64,
    pub checks: Vec<CheckOutcome>,
}

fn run_verify(a: &VerifyArgs, out: Out) -> Result<(), CliError> {
    let spec = a.tolerance.spec()?;
    if let Some(bad) = a.checks.iter().find(|&&id| verify::checks().iter().all(|c| c.0 != id)) {
        return Err(CliError::config(format!("no check {bad}; ids run 1 to 15")));
    }
    let start = std::time::Instant::now();
    let checks = verify::run(&a.checks, &spec);
    let seconds = start.elapsed().as_secs_f64();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let total = checks.len();
    match a.format.unwrap_or(Format::Csv) {
        Format::Json => json(
            &VerifyOutput {
                passed: failed == 0,
                seconds,
                checks,
            },
            out,
        )?,
        Format::Csv => {
            for c in &checks {
                writeln!(
                    out,
                    "{:>2}  {}  {:>7.2}s  {}: {}",
                    c.id,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.seconds,
                    c.title,
                    c.detail
                )?;
            }
            writeln!(out, "{} of {total} passed in {seconds:.1} s", total - failed)?;
        }
    }
    if failed > 0 {
        return Err(CliError::VerificationFailed { failed, total });
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ObservablesOutput {
    pub params: PacketParams,
    pub reports: Vec<ObservableReport>,
    pub mass_excess: MassExcess,
    pub paraxiality: Paraxiality,
}

fn run_observables(a: &PointArgs, out: Out) -> Result<(), CliError> {
    let params = a.packet.resolve()?;
    let spec = a.tolerance.spec()?;
    let output = ObservablesOutput {
        params,
        reports: all_reports(&params, &spec)?,
        mass_excess: mass_excess(&params)?,
        paraxiality: paraxiality(&params)?,
    };
    if a.format == Some(Format::Csv) {
        writeln!(out, "name,exact,expansion,quadrature,quadrature_error")?;
        for r in &output.reports {
            writeln!(
                out,
                "{},{},{},{},{}",
                r.name,
                csv(r.exact.norm()),
                csv(r.expansion.norm()),
                csv(r.quadrature.norm()),
                csv(r.quadrature_error)
            )?;
        }
        return Ok(());
    }
    json(&output, out)
}

fn run_scan(a: &ScanArgs, out: Out) -> Result<(), CliError> {
    if !(a.sigma_ratio > 0.0) {
        return Err(CliError::config(format!("sigma_ratio must be positive, got {}", a.sigma_ratio)));
    }
    let spec = a.tolerance.spec()?;
    let scan = figure1_scan(a.sigma_ratio, a.ell_max, (!a.no_quadrature).then_some(&spec))?;
    if a.format == Some(Format::Json) {
        return json(&scan, out);
    }
    writeln!(out, "ell,sqrt_ell,pperp_over_sigma_exact,pperp_over_sigma_quadrature")?;
    for r in &scan.rows {
        writeln!(
            out,
            "{},{},{},{}",
            r.ell,
            csv(r.sqrt_ell),
            csv(r.pperp_over_sigma_exact),
            r.pperp_over_sigma_quadrature.map(csv).unwrap_or_default()
        )?;
    }
    Ok(())
}

fn run_mass_excess(a: &PointArgs, out: Out) -> Result<(), CliError> {
    let params = a.packet.resolve()?;
    let e = mass_excess(&params)?;
    if a.format == Some(Format::Json) {
        return json(&e, out);
    }
    writeln!(out, "ell,sigma_over_m,delta_m_over_m,leading")?;
    writeln!(out, "{},{},{},{}", e.ell, csv(e.sigma_over_m), csv(e.delta_m_over_m), csv(e.leading))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldRow {
    pub t: f64,
    pub rho: f64,
    pub phi: f64,
    pub z: f64,
    pub abs_psi: f64,
    pub phase: f64,
    pub kg_residual: f64,
}

fn run_field(a: &FieldArgs, out: Out) -> Result<(), CliError> {
    let params = a.packet.resolve()?;
    if !(a.step > 0.0) {
        return Err(CliError::config(format!("step must be positive, got {}", a.step)));
    }
    let axis = |which: Axis| -> Result<Vec<f64>, CliError> {
        let specs: Vec<_> = a.grid.iter().filter(|g| g.axis == which).collect();
        match specs.as_slice() {
            [] => Ok(vec![0.0]),
            [s] => Ok(s.values()),
            _ => Err(CliError::config(format!("axis {which:?} given more than once"))),
        }
    };
    let (ts, rhos, phis, zs) = (axis(Axis::T)?, axis(Axis::Rho)?, axis(Axis::Phi)?, axis(Axis::Z)?);
    let mut points = Vec::with_capacity(ts.len() * rhos.len() * phis.len() * zs.len());
    for &t in &ts {
        for &rho in &rhos {
            for &phi in &phis {
                for &z in &zs {
                    points.push((t, rho, phi, z));
                }
            }
        }
    }
    let model: FieldModel = a.model.into();
    let rows = points
        .par_iter()
        .map(|&(t, rho, phi, z)| {
            let x = SpacetimePoint::new(t, rho, phi, z);
            let psi = match model {
                FieldModel::Exact => psi_exact(&params, &x)?,
                FieldModel::Paraxial => psi_paraxial(&params, &x),
            };
            Ok(FieldRow {
                t,
                rho,
                phi,
                z,
                abs_psi: psi.log_abs.exp(),
                phase: psi.phase,
                // undefined on the vortex line, where psi vanishes
                kg_residual: if psi.is_zero() {
                    f64::NAN
                } else {
                    kg_residual_of(model, &params, &x, a.step)?
                },
            })
        })
        .collect::<Result<Vec<_>, vortexpack::Error>>()?;
    if a.format == Some(Format::Json) {
        return json(&rows, out);
    }
    writeln!(out, "t,rho,phi,z,abs_psi,phase,kg_residual")?;
    for r in &rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            csv(r.t),
            csv(r.rho),
            csv(r.phi),
            csv(r.z),
            csv(r.abs_psi),
            csv(r.phase),
            csv(r.kg_residual)
        )?;
    }
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
pub struct MomentOutput {
    pub params: PacketParams,
    pub helicity: Helicity,
    /// `l + lambda`.
    pub total_jz: String,
    pub moment: MomentReport,
    pub spin_orbit: SpinOrbit,
    pub time: f64,
    pub dipole: Dipole,
}

fn run_moment(a: &MomentArgs, out: Out) -> Result<(), CliError> {
    let params = a.point.packet.resolve()?;
    let spec = a.point.tolerance.spec()?;
    let helicity = a.helicity.unwrap_or(Helicity::Plus);
    let output = MomentOutput {
        params,
        helicity,
        total_jz: total_jz(params.ell, helicity).to_string(),
        moment: magnetic_moment(&params, helicity, &spec)?,
        spin_orbit: spin_orbit_delta(&params, helicity)?,
        time: a.time,
        dipole: dipole_and_velocity(&params, helicity, a.time, &spec)?,
    };
    json(&output, out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoostRow {
    pub quantity: String,
    pub original: f64,
    pub boosted: f64,
    pub delta: f64,
}

impl BoostRow {
    fn new(quantity: impl Into<String>, original: f64, boosted: f64) -> Self {
        BoostRow {
            quantity: quantity.into(),
            original,
            boosted,
            delta: boosted - original,
        }
    }
}

/// Invariants at `params` and at the boosted packet. The four-momentum rows
/// compare the boosted quadrature against the boost applied to the original
/// quadrature. `t/t_d` and `sigma_perp(t)` are taken on the mean worldline,
/// at the time coordinate of `at`.
pub fn boost_rows(params: &PacketParams, eta: f64, at: [f64; 4], spec: &vortexpack::QuadratureSpec) -> Result<Vec<BoostRow>, CliError> {
    let b = Boost::new(eta);
    let pb = params.boosted(b);
    let x = SpacetimePoint::new(at[0], at[1], at[2], at[3]);
    let xb = x.boosted(b);
    let line = SpacetimePoint::new(at[0], at[1], at[2], params.pbar / params.eps_bar() * at[0]);
    let lineb = line.boosted(b);
    let (vs, vsb) = (varsigma(params, &x)?.value, varsigma(&pb, &xb)?.value);
    let mut rows = vec![
        BoostRow::new("invariant_mass", invariant_mass(params)?.exact, invariant_mass(&pb)?.exact),
        BoostRow::new("varsigma_re", vs.re, vsb.re),
        BoostRow::new("varsigma_im", vs.im, vsb.im),
        BoostRow::new("beam_width", beam_width(params, line.t), beam_width(&pb, lineb.t)),
        BoostRow::new("t_over_td", line.t / diffraction_time(params), lineb.t / diffraction_time(&pb)),
        BoostRow::new("radius_squared", paraxial_radius_squared(params, &x), paraxial_radius_squared(&pb, &xb)),
    ];
    let (p, _) = mean_four_momentum_quadrature(params, spec)?;
    let (q, _) = mean_four_momentum_quadrature(&pb, spec)?;
    let expected = b.apply(&p).to_array();
    for (i, name) in ["p_t", "p_x", "p_y", "p_z"].iter().enumerate() {
        rows.push(BoostRow::new(*name, expected[i], q.to_array()[i]));
    }
    Ok(rows)
}

fn run_boost_check(a: &BoostArgs, out: Out) -> Result<(), CliError> {
    let params = a.point.packet.resolve()?;
    let spec = a.point.tolerance.spec()?;
    if !a.rapidity.is_finite() {
        return Err(CliError::config("rapidity must be finite"));
    }
    let rows = boost_rows(&params, a.rapidity, a.at, &spec)?;
    if a.point.format == Some(Format::Json) {
        return json(&rows, out);
    }
    writeln!(out, "quantity,original,boosted,delta")?;
    for r in &rows {
        writeln!(out, "{},{},{},{}", r.quantity, csv(r.original), csv(r.boosted), csv(r.delta))?;
    }
    Ok(())
}
