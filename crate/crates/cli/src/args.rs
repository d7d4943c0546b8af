//! Command-line and config-file parsing. Physical units are converted to
//! natural ones here, once, by [`PacketArgs::resolve`].

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use vortexpack::field::FieldModel;
use vortexpack::kinematics::{pbar_over_m_from_kinetic_kev, sigma_over_m_from_width_nm};
use vortexpack::{Helicity, PacketParams, QuadratureSpec};

use crate::error::CliError;

pub const DEFAULT_ELL: i32 = 1;
pub const DEFAULT_SIGMA: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(name = "vortexpack", version, about = "Relativistic vortex wave packets")]
pub struct Cli {
    /// Read the whole run (command and parameters) from a JSON file instead.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

/// One invocation. The JSON form is internally tagged, e.g.
/// `{"command": "mass-excess", "ell": 1000, "sigma_perp_nm": 1.0}`.
#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Run the invariant suite and print a pass/fail table.
    Verify(VerifyArgs),
    /// Mean four-momentum, invariant mass and transverse momentum reports.
    Observables(PointArgs),
    /// <p_perp>/sigma against sqrt(l) as CSV.
    ScanPperp(ScanArgs),
    /// Relative mass excess of a vortex packet over a Gaussian one.
    MassExcess(PointArgs),
    /// Field magnitude, phase and Klein-Gordon residual on a grid.
    Field(FieldArgs),
    /// Magnetic moment, spin-orbit parameter and electric dipole of a fermion packet.
    Moment(MomentArgs),
    /// Compare invariants before and after a longitudinal boost.
    BoostCheck(BoostArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PacketArgs {
    /// Orbital quantum number l.
    #[arg(long, allow_negative_numbers = true)]
    pub ell: Option<i32>,
    /// Momentum spread sigma/m.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "sigma_perp_nm")]
    pub sigma_ratio: Option<f64>,
    /// Transverse size in nm; sigma/m = Compton wavelength / size.
    #[arg(long)]
    pub sigma_perp_nm: Option<f64>,
    /// Mean longitudinal momentum pbar/m.
    #[arg(long, allow_negative_numbers = true, conflicts_with = "kinetic_kev")]
    pub pbar: Option<f64>,
    /// Mean kinetic energy in keV (electron).
    #[arg(long)]
    pub kinetic_kev: Option<f64>,
}

impl PacketArgs {
    pub fn resolve(&self) -> Result<PacketParams, CliError> {
        if self.sigma_ratio.is_some() && self.sigma_perp_nm.is_some() {
            return Err(CliError::config("give only one of sigma_ratio and sigma_perp_nm"));
        }
        if self.pbar.is_some() && self.kinetic_kev.is_some() {
            return Err(CliError::config("give only one of pbar and kinetic_kev"));
        }
        let sigma = match (self.sigma_ratio, self.sigma_perp_nm) {
            (Some(s), _) => s,
            (None, Some(w)) if w > 0.0 => sigma_over_m_from_width_nm(w),
            (None, Some(w)) => return Err(CliError::config(format!("sigma_perp_nm must be positive, got {w}"))),
            (None, None) => DEFAULT_SIGMA,
        };
        let pbar = match (self.pbar, self.kinetic_kev) {
            (Some(p), _) => p,
            (None, Some(k)) if k >= 0.0 => pbar_over_m_from_kinetic_kev(k),
            (None, Some(k)) => return Err(CliError::config(format!("kinetic_kev must be non-negative, got {k}"))),
            (None, None) => 0.0,
        };
        PacketParams::natural(self.ell.unwrap_or(DEFAULT_ELL), sigma, pbar).map_err(CliError::config)
    }
}

/// Quadrature tolerance overrides.
#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ToleranceArgs {
    #[arg(long)]
    pub rel_tol: Option<f64>,
    #[arg(long)]
    pub abs_tol: Option<f64>,
    #[arg(long)]
    pub max_subdivisions: Option<usize>,
    /// Azimuthal nodes for non-axial averages.
    #[arg(long)]
    pub azimuthal_nodes: Option<usize>,
}

impl ToleranceArgs {
    pub fn spec(&self) -> Result<QuadratureSpec, CliError> {
        let mut spec = QuadratureSpec::default();
        if let Some(t) = self.rel_tol {
            spec.rel_tol = t;
        }
        if let Some(t) = self.abs_tol {
            spec.abs_tol = t;
        }
        if let Some(n) = self.max_subdivisions {
            spec.max_subdivisions = n;
        }
        if let Some(n) = self.azimuthal_nodes {
            spec.azimuthal_nodes = n;
        }
        if !(spec.rel_tol > 0.0 && spec.abs_tol >= 0.0 && spec.max_subdivisions > 0 && spec.azimuthal_nodes > 0) {
            return Err(CliError::config(format!("invalid tolerances {spec:?}")));
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyArgs {
    /// Run only these checks (repeatable).
    #[arg(long = "check", value_name = "ID")]
    pub checks: Vec<u8>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct PointArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub packet: PacketArgs,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanArgs {
    #[arg(long, default_value_t = 40)]
    pub ell_max: u32,
    #[arg(long, default_value_t = 0.01)]
    pub sigma_ratio: f64,
    /// Leave the quadrature column empty.
    #[arg(long)]
    pub no_quadrature: bool,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[command(flatten)]
    #[serde(flatten)]
    pub tolerance: ToleranceArgs,
}

impl Default for ScanArgs {
    fn default() -> Self {
        ScanArgs {
            ell_max: 40,
            sigma_ratio: 0.01,
            no_quadrature: false,
            format: None,
            tolerance: ToleranceArgs::default(),
        }
    }
}

/// One axis of a field grid: `name=value` or `name=start:stop:count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct AxisSpec {
    pub axis: Axis,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    T,
    Rho,
    Phi,
    Z,
}

impl AxisSpec {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

impl Axis {
    fn name(self) -> &'static str {
        match self {
            Axis::T => "t",
            Axis::Rho => "rho",
            Axis::Phi => "phi",
            Axis::Z => "z",
        }
    }
}

impl TryFrom<String> for AxisSpec {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<AxisSpec> for String {
    fn from(a: AxisSpec) -> String {
        if a.count == 1 {
            format!("{}={:?}", a.axis.name(), a.start)
        } else {
            format!("{}={:?}:{:?}:{}", a.axis.name(), a.start, a.stop, a.count)
        }
    }
}

impl std::str::FromStr for AxisSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (name, range) = s.split_once('=').ok_or_else(|| format!("expected axis=range, got {s:?}"))?;
        let axis = match name.trim() {
            "t" => Axis::T,
            "rho" => Axis::Rho,
            "phi" => Axis::Phi,
            "z" => Axis::Z,
            other => return Err(format!("unknown axis {other:?}; use t, rho, phi or z")),
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let parts: Vec<&str> = range.split(':').collect();
        let (start, stop, count) = match parts.as_slice() {
            [v] => (num(v)?, num(v)?, 1),
            [a, b, n] => (num(a)?, num(b)?, n.trim().parse::<usize>().map_err(|e| format!("{n:?}: {e}"))?),
            _ => return Err(format!("expected value or start:stop:count, got {range:?}")),
        };
        if count == 0 {
            return Err("count must be at least 1".into());
        }
        Ok(AxisSpec { axis, start, stop, count })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Exact,
    Paraxial,
}

impl From<Model> for FieldModel {
    fn from(m: Model) -> Self {
        match m {
            Model::Exact => FieldModel::Exact,
            Model::Paraxial => FieldModel::Paraxial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct FieldArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub packet: PacketArgs,
    /// Grid axes, e.g. `--grid rho=0:10:21 --grid z=0`; coordinates in
    /// Compton wavelengths. Missing axes are held at 0.
    #[arg(long, value_name = "AXIS=RANGE")]
    pub grid: Vec<AxisSpec>,
    #[arg(long, value_enum, default_value = "exact")]
    pub model: Model,
    /// Finite-difference step for the residual column.
    #[arg(long, default_value_t = vortexpack::field::DEFAULT_STEP)]
    pub step: f64,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

impl Default for FieldArgs {
    fn default() -> Self {
        FieldArgs {
            packet: PacketArgs::default(),
            grid: Vec::new(),
            model: Model::Exact,
            step: vortexpack::field::DEFAULT_STEP,
            format: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct MomentArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArgs,
    /// `+1/2` or `-1/2`.
    #[arg(long, value_parser = parse_helicity, allow_hyphen_values = true)]
    pub helicity: Option<Helicity>,
    /// Time at which the dipole and mean velocity are taken.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub time: f64,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(default)]
pub struct BoostArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub point: PointArgs,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub rapidity: f64,
    /// Spacetime point for the field invariants, as `t,rho,phi,z`.
    #[arg(long, value_parser = parse_point, default_value = "2,1.5,0.3,-1")]
    pub at: [f64; 4],
}

impl Default for BoostArgs {
    fn default() -> Self {
        BoostArgs {
            point: PointArgs::default(),
            rapidity: 0.0,
            at: [2.0, 1.5, 0.3, -1.0],
        }
    }
}

pub fn parse_helicity(s: &str) -> Result<Helicity, String> {
    match s.trim() {
        "+1/2" | "1/2" | "+" | "plus" => Ok(Helicity::Plus),
        "-1/2" | "-" | "minus" => Ok(Helicity::Minus),
        other => Err(format!("helicity must be +1/2 or -1/2, got {other:?}")),
    }
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|x| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}")))
        .collect::<Result<_, _>>()?;
    v.try_into().map_err(|v: Vec<f64>| format!("expected 4 coordinates, got {}", v.len()))
}

impl Cli {
    /// The single command to run, from the command line or `--config`.
    pub fn into_command(self) -> Result<Command, CliError> {
        match (self.config, self.command) {
            (Some(_), Some(_)) => Err(CliError::config("use either --config or a subcommand, not both")),
            (None, None) => Err(CliError::config("no command given; see --help")),
            (None, Some(c)) => Ok(c),
            (Some(path), None) => {
                let text = std::fs::read_to_string(&path)
                    .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
                serde_json::from_str(&text).map_err(|e| CliError::config(format!("{}: {e}", path.display())))
            }
        }
    }
}
