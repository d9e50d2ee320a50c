//! Curvature of the image curves `t -> f(r e^{it})`.
//!
//! With `z = r e^{it}` the chain rule gives
//! `gamma' = i z h' + conj(i z g')` and
//! `gamma'' = -(z h' + z^2 h'') - conj(z g' + z^2 g'')`;
//! the signed curvature is `Im(conj(gamma') gamma'') / |gamma'|^3`.
//! Derivatives come from the series, never from finite differences.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{relative_margin, Report, ReportBuilder, Tolerances, Witness};
use crate::error::{Error, Result};
use crate::map::{FamilyConstants, HarmonicMap};
use crate::series::EPS_DIV;

/// Largest radius reported by [`radius_of_convexity`].
pub const RADIUS_CLAMP: f64 = 0.999;
const RADIUS_START: f64 = 1e-3;
const RADIUS_SCAN_STEPS: usize = 200;
const BISECTION_STEPS: usize = 60;

pub fn curvature_at(f: &HarmonicMap, r: f64, t: f64) -> Result<f64> {
    let i = Complex64::i();
    let z = Complex64::from_polar(r, t);
    let (hp, gp) = (f.h_prime(z), f.g_prime(z));
    let (hpp, gpp) = (f.h_second(z), f.g_second(z));
    let d1 = i * z * hp + (i * z * gp).conj();
    let d2 = -(z * hp + z * z * hpp) - (z * gp + z * z * gpp).conj();
    let speed = d1.norm();
    if speed <= EPS_DIV {
        return Err(Error::StationaryPoint { r, t });
    }
    Ok((d1.conj() * d2).im / (speed * speed * speed))
}

/// `(lower, upper)` curvature bounds at radius `r` for a member with the given `|b_1|`.
pub fn curvature_bounds(r: f64, b1: f64, c: &FamilyConstants) -> (f64, f64) {
    let e = c.alpha0 + 1.5;
    let s = 2.0 * (c.alpha0 + c.beta0);
    let q = (1.0 + r) / (1.0 - r);
    let big = (1.0 + b1) / ((1.0 - b1) * (1.0 - b1)) * q.powf(e);
    let upper = big * (r * r + s * r + 1.0) / r;
    let low_factor = (r * r - s * r + 1.0) / r;
    let lower = if r <= c.rho() {
        (1.0 - b1) / ((1.0 + b1) * (1.0 + b1)) * q.powf(-e) * low_factor
    } else {
        big * low_factor
    };
    (lower, upper)
}

fn angles_grid(angles: usize) -> impl IndexedParallelIterator<Item = f64> {
    (0..angles).into_par_iter().map(move |j| 2.0 * PI * j as f64 / angles as f64)
}

pub fn curvature_bounds_check(
    f: &HarmonicMap,
    radii: &[f64],
    angles: usize,
    c: &FamilyConstants,
    tol: &Tolerances,
) -> Result<Report> {
    if let Some(&r) = radii.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::BadParameter(format!("curvature radii must lie in (0, 1), got {r}")));
    }
    if angles == 0 {
        return Err(Error::BadParameter("need at least one angle".into()));
    }
    let b1 = f.b1().norm();
    let mut report = ReportBuilder::new("curvature", tol.pointwise);
    for &r in radii {
        let (lo, hi) = curvature_bounds(r, b1, c);
        let ks: Vec<(f64, Result<f64>)> = angles_grid(angles).map(|t| (t, curvature_at(f, r, t))).collect();
        for (t, k) in ks {
            let k = k?;
            let at = Witness::Polar { r, t };
            report.push(at, "k >= lower", k, lo, relative_margin(k, lo));
            report.push(at, "k <= upper", k, hi, relative_margin(hi, k));
        }
    }
    Ok(report.finish())
}

fn min_curvature(f: &HarmonicMap, r: f64, angles: usize) -> Result<f64> {
    let ks: Vec<Result<f64>> = angles_grid(angles).map(|t| curvature_at(f, r, t)).collect();
    ks.into_iter().try_fold(f64::INFINITY, |m, k| Ok(m.min(k?)))
}

/// Largest `r` in `(0, 0.999]` such that every image circle up to `r` has
/// sampled curvature `>= -tol`.
///
/// Scans `r` upward to bracket the first sign change of the minimum
/// curvature, then bisects inside that bracket.
pub fn radius_of_convexity(f: &HarmonicMap, angles: usize, tol: f64) -> Result<f64> {
    let convex = |r: f64| -> Result<bool> { Ok(min_curvature(f, r, angles)? >= -tol) };
    if !convex(RADIUS_START)? {
        return Err(Error::NeverConvex(RADIUS_START));
    }
    let step = (RADIUS_CLAMP - RADIUS_START) / RADIUS_SCAN_STEPS as f64;
    let mut lo = RADIUS_START;
    for k in 1..=RADIUS_SCAN_STEPS {
        let r = if k == RADIUS_SCAN_STEPS { RADIUS_CLAMP } else { RADIUS_START + k as f64 * step };
        if convex(r)? {
            lo = r;
            continue;
        }
        let mut hi = r;
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (lo + hi);
            if convex(mid)? {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-13 {
                break;
            }
        }
        return Ok(lo);
    }
    Ok(RADIUS_CLAMP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::Series;
    use crate::shear::{catalog, CatalogId};

    #[test]
    fn identity_circles() {
        let id = HarmonicMap::identity(4);
        for r in [0.1, 0.5, 0.9] {
            for t in [0.0, 1.0, 4.0] {
                assert!((curvature_at(&id, r, t).unwrap() - 1.0 / r).abs() < 1e-12);
            }
        }
        assert_eq!(radius_of_convexity(&id, 64, 1e-6).unwrap(), RADIUS_CLAMP);
    }

    #[test]
    fn half_plane_subdisk_images() {
        // Convexity of the full image does not pass to subdisks for harmonic maps.
        let f3 = catalog(CatalogId::HalfPlaneF3, Series::order_for_radius(0.9)).unwrap();
        assert!(min_curvature(&f3, 0.1, 256).unwrap() > 0.0);
        assert!(min_curvature(&f3, 0.5, 256).unwrap() < 0.0);
        assert!(min_curvature(&f3, 0.9, 256).unwrap() < 0.0);
    }

    #[test]
    fn koebe_not_convex_past_rho() {
        let k = catalog(CatalogId::HarmonicKoebe, 200).unwrap();
        let rho = FamilyConstants::stable_slice_class().rho();
        assert!(min_curvature(&k, rho + 0.05, 512).unwrap() < 0.0);
    }

    #[test]
    fn lower_factor_vanishes_at_rho() {
        let rho = 3.0 - 2.0 * 2f64.sqrt();
        assert!((rho * rho - 6.0 * rho + 1.0).abs() < 1e-14);
        let (lo, _) = curvature_bounds(rho, 0.0, &FamilyConstants::stable_slice_class());
        assert!(lo.abs() < 1e-14);
    }

    #[test]
    fn stationary_point_reported() {
        // z + conj(z) = 2 Re z flattens circles onto a segment; the speed vanishes at t = 0.
        let f = HarmonicMap::new(Series::from_real(&[0.0, 1.0]), Series::from_real(&[0.0, 1.0]));
        assert!(matches!(curvature_at(&f, 0.5, 0.0), Err(Error::StationaryPoint { .. })));
    }

    #[test]
    fn never_convex_detected() {
        // Co-analytic part dominates: the image circles have reversed orientation.
        let f = HarmonicMap::new(Series::from_real(&[0.0, 1.0]), Series::from_real(&[0.0, 2.0]));
        assert!(matches!(radius_of_convexity(&f, 64, 1e-6), Err(Error::NeverConvex(_))));
    }
}
