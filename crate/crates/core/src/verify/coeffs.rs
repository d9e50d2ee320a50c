use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{Report, ReportBuilder, Tolerances, Witness};
use crate::error::{Error, Result};
use crate::map::HarmonicMap;
use crate::series::Series;

/// Coefficient bound sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CoeffClass {
    /// Sense-preserving univalent shears with a univalent slice and `b_1 = 0`:
    /// `(n+1)(2n+1)/6`, `(n-1)(2n-1)/6`, and `||a_n| - |b_n|| <= n`.
    SH0S,
    /// Convex analog: `(n+1)/2` and `(n-1)/2`.
    CH0C,
    /// Affine closure of `SH0S`: `(2n^2+1)/3` for both.
    SHS,
    /// Affine closure of `CH0C`: `n` for both.
    CHC,
}

impl CoeffClass {
    /// `(bound on |a_n|, bound on |b_n|, bound on ||a_n| - |b_n||)`.
    pub fn bounds(self, n: usize) -> (f64, f64, Option<f64>) {
        let n = n as f64;
        match self {
            CoeffClass::SH0S => ((n + 1.0) * (2.0 * n + 1.0) / 6.0, (n - 1.0) * (2.0 * n - 1.0) / 6.0, Some(n)),
            CoeffClass::CH0C => ((n + 1.0) / 2.0, (n - 1.0) / 2.0, None),
            CoeffClass::SHS => {
                let b = (2.0 * n * n + 1.0) / 3.0;
                (b, b, None)
            }
            CoeffClass::CHC => (n, n, None),
        }
    }
}

impl FromStr for CoeffClass {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "SH0S" => Ok(CoeffClass::SH0S),
            "CH0C" => Ok(CoeffClass::CH0C),
            "SHS" => Ok(CoeffClass::SHS),
            "CHC" => Ok(CoeffClass::CHC),
            other => Err(Error::Parse { pos: 0, reason: format!("unknown class `{other}` (SH0S, CH0C, SHS, CHC)") }),
        }
    }
}

impl fmt::Display for CoeffClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Checks `|a_n|`, `|b_n|` (and the difference law for `SH0S`) for `2 <= n <= max_n`.
pub fn check_coeff_bounds(f: &HarmonicMap, max_n: usize, class: CoeffClass, tol: &Tolerances) -> Result<Report> {
    if f.order() < max_n {
        return Err(Error::OrderTooLow { have: f.order(), need: max_n });
    }
    let mut report = ReportBuilder::new(format!("coeff_bounds_{class}"), tol.coefficient);
    for n in 2..=max_n {
        let a = f.h().coeff(n).norm();
        let b = f.g().coeff(n).norm();
        let (ab, bb, db) = class.bounds(n);
        let at = Witness::Index { n };
        report.push(at, "|a_n|", a, ab, ab - a);
        report.push(at, "|b_n|", b, bb, bb - b);
        if let Some(db) = db {
            let d = (a - b).abs();
            report.push(at, "||a_n|-|b_n||", d, db, db - d);
        }
    }
    Ok(report.finish())
}

/// Series of `omega / (1 + epsilon omega)`.
pub fn subordination_coeffs(omega: &Series, epsilon: Complex64) -> Result<Series> {
    let denom = &Series::one(omega.order()) + &omega.scale(epsilon);
    Ok(omega * &denom.recip()?)
}

/// [`subordination_coeffs`] together with the check `|omega_n| <= 1`.
pub fn subordination_report(omega: &Series, epsilon: Complex64, tol: &Tolerances) -> Result<(Series, Report)> {
    let s = subordination_coeffs(omega, epsilon)?;
    let mut report = ReportBuilder::new("subordination_coeffs", tol.subordination);
    for n in 1..=s.order() {
        let v = s.coeff(n).norm();
        report.push(Witness::Index { n }, "|omega_n|", v, 1.0, 1.0 - v);
    }
    Ok((s, report.finish()))
}

/// `b_n = (1/n) sum_{k=0}^{n-2} (k+1) phi_{k+1} w_{n-1-k}` with `w` the
/// coefficients of `omega / (1 + epsilon omega)`.
pub fn convolution_bn(phi: &Series, omega: &Series, epsilon: Complex64, n: usize) -> Result<Complex64> {
    if n < 2 {
        return Err(Error::BadParameter(format!("convolution_bn needs n >= 2, got {n}")));
    }
    let need = n - 1;
    if phi.order() < need || omega.order() < need {
        return Err(Error::OrderTooLow { have: phi.order().min(omega.order()), need });
    }
    let w = subordination_coeffs(&omega.truncate(need), epsilon)?;
    let sum: Complex64 = (0..=n - 2).map(|k| phi.coeff(k + 1) * (k as f64 + 1.0) * w.coeff(n - 1 - k)).sum();
    Ok(sum / n as f64)
}
