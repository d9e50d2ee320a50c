//! Numerical checks of coefficient, distortion, curvature and univalence
//! statements about harmonic maps.
//!
//! Every check returns a [`Report`]. Grid scans evaluate points in parallel
//! but collect results in grid order and reduce sequentially, so reports do
//! not depend on the worker count.

mod coeffs;
mod curvature;
mod distortion;
mod univalence;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::HarmonicMap;

pub use coeffs::{check_coeff_bounds, convolution_bn, subordination_coeffs, subordination_report, CoeffClass};
pub use curvature::{curvature_at, curvature_bounds, curvature_bounds_check, radius_of_convexity, RADIUS_CLAMP};
pub use distortion::{
    derivative_bounds_at, derivative_bounds_check, growth_bounds, growth_check, jacobian_bounds_at,
    jacobian_bounds_check, TheoremConstants,
};
pub use univalence::{
    convex_direction_check, convexity_functional, local_univalence_check, stability_scan, theta_search,
    univalence_sample_check, univalence_sample_check_brute, SampleOptions, StabilityMode, ThetaCell,
};

pub const REPORT_SCHEMA: u32 = 1;

/// Margin recorded for a non-finite evaluation; keeps reports valid JSON.
pub const NON_FINITE_MARGIN: f64 = -f64::MAX;

/// Where a checked quantity lives.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    Index { n: usize },
    Point { re: f64, im: f64 },
    Polar { r: f64, t: f64 },
    Pair { z1: [f64; 2], z2: [f64; 2] },
    Theta { theta: f64 },
}

impl Witness {
    pub fn point(z: Complex64) -> Self {
        Witness::Point { re: z.re, im: z.im }
    }

    pub fn pair(z1: Complex64, z2: Complex64) -> Self {
        Witness::Pair { z1: [z1.re, z1.im], z2: [z2.re, z2.im] }
    }
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Witness::Index { n } => write!(f, "n = {n}"),
            Witness::Point { re, im } => write!(f, "z = {re}{im:+}i"),
            Witness::Polar { r, t } => write!(f, "r = {r}, t = {t}"),
            Witness::Pair { z1, z2 } => write!(f, "z1 = {}{:+}i, z2 = {}{:+}i", z1[0], z1[1], z2[0], z2[1]),
            Witness::Theta { theta } => write!(f, "theta = {theta}"),
        }
    }
}

/// One tested item: `margin >= 0` means the bound holds there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Detail {
    pub at: Witness,
    pub quantity: String,
    /// `null` in JSON when the evaluation was not finite.
    #[serde(deserialize_with = "nullable_f64")]
    pub value: f64,
    pub bound: f64,
    pub margin: f64,
}

fn nullable_f64<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub check_name: String,
    pub passed: bool,
    /// Minimum over tested items of the signed margin.
    pub worst_margin: f64,
    pub tolerance: f64,
    pub witness: Option<Witness>,
    pub details: Vec<Detail>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse { pos: e.column(), reason: e.to_string() })
    }

    /// Keeps only failing details and the worst one.
    pub fn compact(mut self) -> Self {
        let tol = self.tolerance;
        let worst = self.worst_margin;
        let mut kept_worst = false;
        self.details.retain(|d| {
            let keep = d.margin < -tol || (!kept_worst && d.margin == worst);
            if d.margin == worst {
                kept_worst = true;
            }
            keep
        });
        self
    }
}

pub(crate) struct ReportBuilder {
    name: String,
    tol: f64,
    strict: bool,
    details: Vec<Detail>,
    forced_failure: bool,
}

impl ReportBuilder {
    pub(crate) fn new(name: impl Into<String>, tol: f64) -> Self {
        Self { name: name.into(), tol, strict: false, details: Vec::new(), forced_failure: false }
    }

    /// Pass only when every margin is strictly positive.
    pub(crate) fn strict(mut self) -> Self {
        self.strict = true;
        self
    }

    pub(crate) fn push(&mut self, at: Witness, quantity: &str, value: f64, bound: f64, margin: f64) {
        let margin = if margin.is_nan() { NON_FINITE_MARGIN } else { margin.max(NON_FINITE_MARGIN) };
        self.details.push(Detail { at, quantity: quantity.to_string(), value, bound, margin });
    }

    pub(crate) fn fail(&mut self) {
        self.forced_failure = true;
    }

    pub(crate) fn finish(self) -> Report {
        let mut worst: Option<&Detail> = None;
        for d in &self.details {
            if worst.is_none_or(|w| d.margin < w.margin) {
                worst = Some(d);
            }
        }
        let worst_margin = worst.map_or(0.0, |d| d.margin);
        let witness = worst.map(|d| d.at);
        let ok = if self.strict { worst_margin > 0.0 || worst.is_none() } else { worst_margin >= -self.tol };
        Report {
            schema: REPORT_SCHEMA,
            check_name: self.name,
            passed: ok && !self.forced_failure,
            worst_margin,
            tolerance: self.tol,
            witness,
            details: self.details,
        }
    }
}

/// `(bound - value)` scaled by `max(1, |bound|)`.
pub(crate) fn relative_margin(bound: f64, value: f64) -> f64 {
    (bound - value) / bound.abs().max(1.0)
}

/// Deterministic polar product grid `r_i = r_max (i+1)/radii`, `t_j = 2 pi j/angles`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub radii: usize,
    pub angles: usize,
    pub r_max: f64,
}

pub const GRID_R_MAX_LIMIT: f64 = 0.999;

impl GridSpec {
    pub fn new(radii: usize, angles: usize, r_max: f64) -> Result<Self> {
        if radii == 0 || angles == 0 {
            return Err(Error::BadParameter("grid needs at least one radius and one angle".into()));
        }
        if !(r_max > 0.0 && r_max <= GRID_R_MAX_LIMIT) {
            return Err(Error::BadParameter(format!("grid r_max must lie in (0, {GRID_R_MAX_LIMIT}], got {r_max}")));
        }
        Ok(Self { radii, angles, r_max })
    }

    pub fn radius(&self, i: usize) -> f64 {
        self.r_max * (i + 1) as f64 / self.radii as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.angles as f64
    }

    /// `(r, t, z)` in radius-major order.
    pub fn points(&self) -> Vec<(f64, f64, Complex64)> {
        let mut out = Vec::with_capacity(self.radii * self.angles);
        for i in 0..self.radii {
            let r = self.radius(i);
            for j in 0..self.angles {
                let t = self.angle(j);
                out.push((r, t, Complex64::from_polar(r, t)));
            }
        }
        out
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { radii: 32, angles: 128, r_max: 0.95 }
    }
}

/// Per-check tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    /// Coefficient identities and coefficient bounds (absolute).
    pub coefficient: f64,
    /// Pointwise bounds on grids (relative to `max(1, |bound|)`).
    pub pointwise: f64,
    /// Sampled geometry (curvature sign, convexity).
    pub geometry: f64,
    /// Relative separation below which two samples count as a collision.
    pub collision_delta: f64,
    /// Slack in the necessary condition `|c_n| <= n`.
    pub de_branges: f64,
    /// Slack in `|omega_n| <= 1`.
    pub subordination: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            coefficient: 1e-9,
            pointwise: 1e-9,
            geometry: 1e-6,
            collision_delta: 1e-4,
            de_branges: 1e-9,
            subordination: 1e-10,
        }
    }
}

/// Runs [`local_univalence_check`] and, if it passes, marks `f` sense-preserving.
pub fn certify_sense_preserving(f: HarmonicMap, grid: &GridSpec) -> std::result::Result<HarmonicMap, Report> {
    let report = local_univalence_check(&f, grid);
    if report.passed {
        Ok(f.mark_sense_preserving())
    } else {
        Err(report)
    }
}

/// Bounds selected by name from the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Bounds,
    Growth,
    Jacobian,
    Derivative,
    Curvature,
    Local,
}

impl FromStr for CheckKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "bounds" => CheckKind::Bounds,
            "growth" => CheckKind::Growth,
            "jacobian" => CheckKind::Jacobian,
            "derivative" => CheckKind::Derivative,
            "curvature" => CheckKind::Curvature,
            "local" => CheckKind::Local,
            other => return Err(Error::Parse { pos: 0, reason: format!("unknown check `{other}`") }),
        })
    }
}
