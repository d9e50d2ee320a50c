//! Shear construction of harmonic maps and the catalog of named examples.
//!
//! Given a normalized analytic `phi`, a dilatation `omega` with `|omega| < 1`
//! and a unimodular `epsilon`, the map `f = h + conj(g)` with
//! `h + epsilon g = phi` and `g' = omega h'` is
//!
//! ```text
//! h = int_0^z phi' / (1 + epsilon omega),    g = int_0^z omega phi' / (1 + epsilon omega).
//! ```
//!
//! `epsilon = -1` (`theta = pi`) shears along the real direction.

use std::f64::consts::{PI, SQRT_2};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::HarmonicMap;
use crate::series::Series;

/// Margin by which the sampled `sup |omega|` must stay below 1.
pub const OMEGA_MARGIN: f64 = 1e-6;
pub const OMEGA_GRID_RADII: usize = 64;
pub const OMEGA_GRID_ANGLES: usize = 256;
pub const OMEGA_GRID_RMAX: f64 = 0.999;

const UNIMODULAR_TOL: f64 = 1e-12;
const PARAM_TOL: f64 = 1e-9;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A rational function `num(z) / den(z)` given by coefficient lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rational {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
}

impl Rational {
    pub fn new(num: Vec<Complex64>, den: Vec<Complex64>) -> Self {
        Self { num, den }
    }

    pub fn polynomial(num: Vec<Complex64>) -> Self {
        Self { num, den: vec![c(1.0)] }
    }

    pub fn to_series(&self, order: usize) -> Result<Series> {
        Series::rational(&self.num, &self.den, order)
    }
}

/// Max of `|omega|` over the fixed 64 x 256 polar grid with outer radius 0.999.
pub fn sampled_sup_omega(omega: &Series) -> f64 {
    let mut sup = omega.coeff(0).norm();
    for i in 0..OMEGA_GRID_RADII {
        let r = OMEGA_GRID_RMAX * (i + 1) as f64 / OMEGA_GRID_RADII as f64;
        for j in 0..OMEGA_GRID_ANGLES {
            let t = 2.0 * PI * j as f64 / OMEGA_GRID_ANGLES as f64;
            sup = sup.max(omega.eval(Complex64::from_polar(r, t)).norm());
        }
    }
    sup
}

/// Validated input `(phi, omega, epsilon)` of the shear construction.
#[derive(Debug, Clone)]
pub struct ShearSpec {
    phi: Series,
    omega: Series,
    epsilon: Complex64,
}

impl ShearSpec {
    pub fn new(phi: Series, omega: Series, epsilon: Complex64) -> Result<Self> {
        if (epsilon.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::NotUnimodular(epsilon.norm()));
        }
        if phi.order() < 1 || phi.coeff(0).norm() > 1e-12 || (phi.coeff(1) - 1.0).norm() > 1e-12 {
            return Err(Error::BadParameter("phi must satisfy phi(0) = 0, phi'(0) = 1".into()));
        }
        let sup = sampled_sup_omega(&omega);
        if !(sup < 1.0 - OMEGA_MARGIN) {
            return Err(Error::DilatationNotBounded { sup, margin: OMEGA_MARGIN });
        }
        Ok(Self { phi, omega, epsilon })
    }

    /// `epsilon = e^{i theta}`.
    pub fn with_theta(phi: Series, omega: Series, theta: f64) -> Result<Self> {
        Self::new(phi, omega, Complex64::from_polar(1.0, theta))
    }

    /// The real-direction preset `epsilon = -1`, i.e. `h - g = phi`.
    pub fn real_direction(phi: Series, omega: Series) -> Result<Self> {
        Self::new(phi, omega, c(-1.0))
    }

    pub fn from_rational(phi: &Rational, omega: &Rational, theta: f64, order: usize) -> Result<Self> {
        Self::with_theta(phi.to_series(order)?, omega.to_series(order)?, theta)
    }

    pub fn phi(&self) -> &Series {
        &self.phi
    }

    pub fn omega(&self) -> &Series {
        &self.omega
    }

    pub fn epsilon(&self) -> Complex64 {
        self.epsilon
    }
}

/// Builds `h` and `g` from the spec, truncated at `order` (or lower if the
/// inputs carry fewer terms).
pub fn shear(spec: &ShearSpec, order: usize) -> Result<HarmonicMap> {
    let phi = spec.phi.truncate(order);
    let omega = spec.omega.truncate(order);
    let denom = &Series::one(omega.order()) + &omega.scale(spec.epsilon);
    let hp = &phi.derivative() * &denom.recip()?;
    let gp = &hp * &omega;
    Ok(HarmonicMap::new(hp.antiderivative(), gp.antiderivative()))
}

/// Koebe function `z / (1 - z)^2` as a series.
pub fn koebe(order: usize) -> Series {
    Series::from_fn(order, |n| c(n as f64))
}

/// Named maps from the examples of univalent shears.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CatalogId {
    /// Harmonic Koebe function `K`.
    HarmonicKoebe,
    /// Half-plane map onto `Re w > -1/2`, dilatation `-z`.
    HalfPlaneF3,
    /// Shear of the Koebe function with dilatation `z^2`.
    F4,
    /// `z + conj(z^n / n)`.
    F1 { n: u32 },
    /// `z/(1-z) + conj(alpha z^n / (1-z))`.
    F2 { alpha: Complex64, n: u32 },
    /// `a log(a/(a-z)) + lambda conj(a log(a/(a-z)) - z)`.
    FALambda { a: f64, lambda: Complex64 },
    /// `a z/(a-z) - lambda conj(z^2/(a-z))`.
    BigFALambda { a: f64, lambda: Complex64 },
    /// The analytic slice `h_K + e^{i theta} g_K`.
    KoebeSlice { theta: f64 },
}

impl CatalogId {
    /// One line per catalog member: spelling and parameter domain.
    pub const DESCRIPTIONS: &'static [(&'static str, &'static str)] = &[
        ("harmonic_koebe", "harmonic Koebe function K; no parameters"),
        ("half_plane_f3", "half-plane map f3 onto Re w > -1/2; no parameters"),
        ("f4", "shear of the Koebe function with dilatation z^2; no parameters"),
        ("f1(n)", "z + conj(z^n/n); integer n >= 2"),
        ("f2(alpha, n)", "z/(1-z) + conj(alpha z^n/(1-z)); integer n >= 1, 0 < |alpha| <= 1/(2n-1)"),
        ("f_a_lambda(a, lambda)", "a log(a/(a-z)) + lambda conj(a log(a/(a-z)) - z); real |a| >= 1, |lambda| = 1"),
        ("F_a_lambda(a, lambda)", "a z/(a-z) - lambda conj(z^2/(a-z)); real |a| >= 1+sqrt(2), |lambda| = 1"),
        ("koebe_slice(theta)", "analytic slice h_K + e^{i theta} g_K; real theta"),
    ];

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::BadParameter(msg));
        match *self {
            CatalogId::F1 { n } if n < 2 => bad(format!("f1 needs n >= 2, got {n}")),
            CatalogId::F2 { alpha, n } => {
                if n < 1 {
                    return bad(format!("f2 needs n >= 1, got {n}"));
                }
                let limit = 1.0 / (2.0 * n as f64 - 1.0);
                if alpha.norm() == 0.0 || alpha.norm() > limit + PARAM_TOL {
                    return bad(format!("f2 needs 0 < |alpha| <= 1/(2n-1) = {limit}, got |alpha| = {}", alpha.norm()));
                }
                Ok(())
            }
            CatalogId::FALambda { a, lambda } => {
                if !(a.abs() >= 1.0 - PARAM_TOL) {
                    return bad(format!("f_a_lambda needs |a| >= 1, got {a}"));
                }
                unimodular(lambda)
            }
            CatalogId::BigFALambda { a, lambda } => {
                if !(a.abs() >= 1.0 + SQRT_2 - PARAM_TOL) {
                    return bad(format!("F_a_lambda needs |a| >= 1+sqrt(2), got {a}"));
                }
                unimodular(lambda)
            }
            CatalogId::KoebeSlice { theta } if !theta.is_finite() => bad("theta must be finite".into()),
            _ => Ok(()),
        }
    }
}

fn unimodular(lambda: Complex64) -> Result<()> {
    if (lambda.norm() - 1.0).abs() > PARAM_TOL {
        return Err(Error::BadParameter(format!("lambda must be unimodular, got |lambda| = {}", lambda.norm())));
    }
    Ok(())
}

impl fmt::Display for CatalogId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogId::HarmonicKoebe => write!(f, "harmonic_koebe"),
            CatalogId::HalfPlaneF3 => write!(f, "half_plane_f3"),
            CatalogId::F4 => write!(f, "f4"),
            CatalogId::F1 { n } => write!(f, "f1(n={n})"),
            CatalogId::F2 { alpha, n } => write!(f, "f2(alpha={alpha},n={n})"),
            CatalogId::FALambda { a, lambda } => write!(f, "f_a_lambda(a={a},lambda={lambda})"),
            CatalogId::BigFALambda { a, lambda } => write!(f, "F_a_lambda(a={a},lambda={lambda})"),
            CatalogId::KoebeSlice { theta } => write!(f, "koebe_slice(theta={theta})"),
        }
    }
}

/// `(1 - z)^k` as polynomial coefficients.
fn one_minus_z_pow(k: u32) -> Vec<Complex64> {
    let mut p = vec![c(1.0)];
    for _ in 0..k {
        let mut next = vec![c(0.0); p.len() + 1];
        for (i, &v) in p.iter().enumerate() {
            next[i] += v;
            next[i + 1] -= v;
        }
        p = next;
    }
    p
}

fn harmonic_koebe_parts(order: usize) -> Result<(Series, Series)> {
    let den = one_minus_z_pow(3);
    let h = Series::rational(&[c(0.0), c(1.0), c(-0.5), c(1.0 / 6.0)], &den, order)?;
    let g = Series::rational(&[c(0.0), c(0.0), c(0.5), c(1.0 / 6.0)], &den, order)?;
    Ok((h, g))
}

/// Series of `a log(a / (a - z)) = sum_{n >= 1} z^n / (n a^{n-1})`.
pub fn log_series(a: f64, order: usize) -> Series {
    Series::from_fn(order, |n| if n == 0 { c(0.0) } else { c(1.0 / (n as f64 * a.powi(n as i32 - 1))) })
}

/// Builds the named map as truncated series from its closed form.
pub fn catalog(id: CatalogId, order: usize) -> Result<HarmonicMap> {
    id.validate()?;
    let map = match id {
        CatalogId::HarmonicKoebe => {
            let (h, g) = harmonic_koebe_parts(order)?;
            HarmonicMap::new(h, g)
        }
        CatalogId::HalfPlaneF3 => {
            let den = one_minus_z_pow(2);
            let h = Series::rational(&[c(0.0), c(1.0), c(-0.5)], &den, order)?;
            let g = Series::rational(&[c(0.0), c(0.0), c(-0.5)], &den, order)?;
            HarmonicMap::new(h, g)
        }
        CatalogId::F4 => {
            let den: Vec<_> = one_minus_z_pow(3).into_iter().map(|v| v * 3.0).collect();
            let h = Series::rational(&[c(0.0), c(3.0), c(-3.0), c(1.0)], &den, order)?;
            let g = Series::rational(&[c(0.0), c(0.0), c(0.0), c(1.0)], &den, order)?;
            HarmonicMap::new(h, g)
        }
        CatalogId::F1 { n } => {
            let g = Series::monomial(n as usize, order).scale(c(1.0 / n as f64));
            HarmonicMap::new(Series::identity(order), g)
        }
        CatalogId::F2 { alpha, n } => {
            let den = one_minus_z_pow(1);
            let h = Series::rational(&[c(0.0), c(1.0)], &den, order)?;
            let mut num = vec![c(0.0); n as usize + 1];
            num[n as usize] = alpha;
            let g = Series::rational(&num, &den, order)?;
            HarmonicMap::new(h, g)
        }
        CatalogId::FALambda { a, lambda } => {
            let h = log_series(a, order);
            let g = (&h - &Series::identity(order)).scale(lambda.conj());
            HarmonicMap::new(h, g)
        }
        CatalogId::BigFALambda { a, lambda } => {
            let geom = |n: usize| c(a.powi(1 - n as i32));
            let h = Series::from_fn(order, |n| if n == 0 { c(0.0) } else { geom(n) });
            let g = Series::from_fn(order, |n| if n < 2 { c(0.0) } else { -lambda.conj() * geom(n) });
            HarmonicMap::new(h, g)
        }
        CatalogId::KoebeSlice { theta } => {
            let (h, g) = harmonic_koebe_parts(order)?;
            HarmonicMap::analytic(&h + &g.scale(Complex64::from_polar(1.0, theta)))
        }
    };
    Ok(map)
}

/// Closed form of the `n`-th coefficient of `h_K + e^{i theta} g_K`:
/// `(2 n^2 (1 + e) + 3 n (1 - e) + (1 + e)) / 6` with `e = e^{i theta}`.
pub fn koebe_slice_coeff(theta: f64, n: u32) -> Complex64 {
    let e = Complex64::from_polar(1.0, theta);
    let n = n as f64;
    (2.0 * n * n * (1.0 + e) + 3.0 * n * (1.0 - e) + (1.0 + e)) / 6.0
}
