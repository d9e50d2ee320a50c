use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{relative_margin, GridSpec, Report, ReportBuilder, Tolerances, Witness};
use crate::error::{Error, Result};
use crate::map::{FamilyConstants, HarmonicMap};

/// Exponents and coefficients of the growth, Jacobian, derivative and
/// curvature bounds of an affine and linear invariant family, derived from
/// its [`FamilyConstants`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TheoremConstants {
    /// Exponent `alpha` in the growth bounds.
    pub growth_exponent: f64,
    /// `2 alpha`; the image covers `|w| < 1 / covering_denominator`.
    pub covering_denominator: f64,
    /// `(2 alpha0 - 2, 2 alpha0 + 2)`.
    pub jacobian_exponents: (f64, f64),
    /// `(alpha0 - 3/2, alpha0 + 3/2)`.
    pub derivative_exponents: (f64, f64),
    /// `alpha0 + 3/2`.
    pub curvature_exponent: f64,
    /// `2 (alpha0 + beta0)`, the middle coefficient of `r^2 +- c r + 1`.
    pub curvature_coefficient: f64,
    pub rho: f64,
}

impl From<&FamilyConstants> for TheoremConstants {
    fn from(c: &FamilyConstants) -> Self {
        Self {
            growth_exponent: c.alpha,
            covering_denominator: 2.0 * c.alpha,
            jacobian_exponents: (2.0 * c.alpha0 - 2.0, 2.0 * c.alpha0 + 2.0),
            derivative_exponents: (c.alpha0 - 1.5, c.alpha0 + 1.5),
            curvature_exponent: c.alpha0 + 1.5,
            curvature_coefficient: 2.0 * (c.alpha0 + c.beta0),
            rho: c.rho(),
        }
    }
}

/// `(lower, upper)` bounds on `|f(z)|` at `|z| = r`.
pub fn growth_bounds(r: f64, c: &FamilyConstants) -> (f64, f64) {
    let a = c.alpha;
    let q = (1.0 + r) / (1.0 - r);
    ((1.0 - q.powf(-a)) / (2.0 * a), (q.powf(a) - 1.0) / (2.0 * a))
}

/// `(lower, J_f(z), upper)`.
pub fn jacobian_bounds_at(f: &HarmonicMap, z: Complex64, c: &FamilyConstants) -> (f64, f64, f64) {
    let r = z.norm();
    let (lo_e, hi_e) = TheoremConstants::from(c).jacobian_exponents;
    let s = 1.0 - f.b1().norm_sqr();
    let lo = s * (1.0 - r).powf(lo_e) / (1.0 + r).powf(hi_e);
    let hi = s * (1.0 + r).powf(lo_e) / (1.0 - r).powf(hi_e);
    (lo, f.jacobian(z), hi)
}

/// `(|h'(z)|, bound, |g'(z)|, bound)`.
pub fn derivative_bounds_at(f: &HarmonicMap, z: Complex64, c: &FamilyConstants) -> (f64, f64, f64, f64) {
    let r = z.norm();
    let b1 = f.b1().norm();
    let (lo_e, hi_e) = TheoremConstants::from(c).derivative_exponents;
    let k = (1.0 + r).powf(lo_e) / (1.0 - r).powf(hi_e);
    (f.h_prime(z).norm(), (1.0 + r * b1) * k, f.g_prime(z).norm(), (r + b1) * k)
}

/// Growth bounds for normalized maps with `b_1 = 0`.
pub fn growth_check(f: &HarmonicMap, grid: &GridSpec, c: &FamilyConstants, tol: &Tolerances) -> Result<Report> {
    if !f.is_normalized() || f.b1().norm() > 1e-12 {
        return Err(Error::NotNormalized);
    }
    let rows: Vec<_> = grid
        .points()
        .into_par_iter()
        .map(|(r, t, z)| {
            let (lo, hi) = growth_bounds(r, c);
            (r, t, f.eval(z).norm(), lo, hi)
        })
        .collect();
    let mut report = ReportBuilder::new("growth", tol.pointwise);
    for (r, t, v, lo, hi) in rows {
        let at = Witness::Polar { r, t };
        report.push(at, "|f| >= lower", v, lo, relative_margin(v, lo));
        report.push(at, "|f| <= upper", v, hi, relative_margin(hi, v));
    }
    Ok(report.finish())
}

pub fn jacobian_bounds_check(f: &HarmonicMap, grid: &GridSpec, c: &FamilyConstants, tol: &Tolerances) -> Report {
    let rows: Vec<_> = grid
        .points()
        .into_par_iter()
        .map(|(r, t, z)| (r, t, jacobian_bounds_at(f, z, c)))
        .collect();
    let mut report = ReportBuilder::new("jacobian", tol.pointwise);
    for (r, t, (lo, j, hi)) in rows {
        let at = Witness::Polar { r, t };
        report.push(at, "J >= lower", j, lo, relative_margin(j, lo));
        report.push(at, "J <= upper", j, hi, relative_margin(hi, j));
    }
    report.finish()
}

pub fn derivative_bounds_check(f: &HarmonicMap, grid: &GridSpec, c: &FamilyConstants, tol: &Tolerances) -> Report {
    let rows: Vec<_> = grid
        .points()
        .into_par_iter()
        .map(|(r, t, z)| (r, t, derivative_bounds_at(f, z, c)))
        .collect();
    let mut report = ReportBuilder::new("derivative", tol.pointwise);
    for (r, t, (hp, hb, gp, gb)) in rows {
        let at = Witness::Polar { r, t };
        report.push(at, "|h'| <= bound", hp, hb, relative_margin(hb, hp));
        report.push(at, "|g'| <= bound", gp, gb, relative_margin(gb, gp));
    }
    report.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;
    use crate::shear::{catalog, CatalogId};

    fn shs() -> FamilyConstants {
        FamilyConstants::stable_slice_class()
    }

    #[test]
    fn specialized_constants() {
        let t = TheoremConstants::from(&shs());
        assert_eq!(t.growth_exponent, 3.0);
        assert_eq!(t.covering_denominator, 6.0);
        assert_eq!(t.jacobian_exponents, (3.0, 7.0));
        assert_eq!(t.derivative_exponents, (1.0, 4.0));
        assert_eq!(t.curvature_exponent, 4.0);
        assert_eq!(t.curvature_coefficient, 6.0);
    }

    #[test]
    fn koebe_lower_growth_identity() {
        // |K(-r)| = (r + r^3/3)/(1+r)^3 from the closed form.
        for i in 1..=9 {
            let r = i as f64 / 10.0;
            let closed = (r + r * r * r / 3.0) / (1.0 + r).powi(3);
            let (lo, _) = growth_bounds(r, &shs());
            assert!((closed - lo).abs() < 1e-15);
        }
    }

    #[test]
    fn growth_of_identity_has_slack() {
        let id = HarmonicMap::identity(4);
        let r = growth_check(&id, &GridSpec::default(), &shs(), &Tolerances::default()).unwrap();
        assert!(r.passed && r.worst_margin > 0.0);
    }

    #[test]
    fn growth_requires_normalization() {
        let k = catalog(CatalogId::HarmonicKoebe, 30).unwrap();
        let shifted = k.affine_combine(Complex64::new(0.3, 0.0)).unwrap();
        assert!(matches!(
            growth_check(&shifted, &GridSpec::default(), &shs(), &Tolerances::default()),
            Err(Error::NotNormalized)
        ));
        let unnormalized = HarmonicMap::analytic(Series::from_real(&[0.0, 2.0]));
        assert!(growth_check(&unnormalized, &GridSpec::default(), &shs(), &Tolerances::default()).is_err());
    }

    #[test]
    fn bounds_meet_at_origin() {
        let k = catalog(CatalogId::HarmonicKoebe, 30).unwrap();
        let b1 = Complex64::new(0.0, 0.5);
        let f = k.affine_combine(b1).unwrap();
        let (lo, j, hi) = jacobian_bounds_at(&f, Complex64::new(0.0, 0.0), &shs());
        assert_eq!(lo, hi);
        assert!((j - lo).abs() < 1e-15);
        let (hp, hb, gp, gb) = derivative_bounds_at(&f, Complex64::new(0.0, 0.0), &shs());
        assert!((hp - hb).abs() < 1e-15 && (gp - gb).abs() < 1e-15);
    }

    #[test]
    fn koebe_h_prime_attains_bound_on_axis() {
        let k = catalog(CatalogId::HarmonicKoebe, Series::order_for_radius(0.9)).unwrap();
        for r in [0.2, 0.5, 0.9] {
            let (hp, hb, _, _) = derivative_bounds_at(&k, Complex64::new(r, 0.0), &shs());
            assert!((hp - hb).abs() <= 1e-10 * hb, "{r}: {hp} vs {hb}");
        }
    }
}
