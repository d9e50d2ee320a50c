//! Harmonic maps `f = h + conj(g)` on the unit disk.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{Series, EPS_DIV};

const NORMALIZATION_TOL: f64 = 1e-12;

/// A harmonic map given by its analytic part `h` and co-analytic part `g`.
///
/// Derivative series are computed once on construction so that pointwise
/// queries (Jacobian, curvature) cost a handful of Horner evaluations.
#[derive(Debug, Clone)]
pub struct HarmonicMap {
    h: Series,
    g: Series,
    dh: Series,
    dg: Series,
    d2h: Series,
    d2g: Series,
    normalized: bool,
    sense_preserving: bool,
}

impl HarmonicMap {
    pub fn new(h: Series, g: Series) -> Self {
        let normalized = h.coeff(0).norm() <= NORMALIZATION_TOL
            && g.coeff(0).norm() <= NORMALIZATION_TOL
            && h.get(1).is_some_and(|a1| (a1 - 1.0).norm() <= NORMALIZATION_TOL);
        let dh = h.derivative();
        let dg = g.derivative();
        let d2h = dh.derivative();
        let d2g = dg.derivative();
        Self { h, g, dh, dg, d2h, d2g, normalized, sense_preserving: false }
    }

    /// An analytic function viewed as a harmonic map with `g = 0`.
    pub fn analytic(h: Series) -> Self {
        let order = h.order();
        Self::new(h, Series::zero(order))
    }

    pub fn identity(order: usize) -> Self {
        Self::analytic(Series::identity(order))
    }

    pub fn h(&self) -> &Series {
        &self.h
    }

    pub fn g(&self) -> &Series {
        &self.g
    }

    /// Shared truncation order of `h` and `g`.
    pub fn order(&self) -> usize {
        self.h.order().min(self.g.order())
    }

    /// `h(0) = g(0) = 0` and `h'(0) = 1`.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn is_sense_preserving(&self) -> bool {
        self.sense_preserving
    }

    /// Records that a sampled Jacobian scan found `J_f > 0`. Use
    /// [`crate::verify::certify_sense_preserving`] to obtain the flag.
    pub(crate) fn mark_sense_preserving(mut self) -> Self {
        self.sense_preserving = true;
        self
    }

    /// `b_1 = g'(0)`.
    pub fn b1(&self) -> Complex64 {
        self.g.get(1).unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.h.eval(z) + self.g.eval(z).conj()
    }

    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        self.dh.eval(z)
    }

    pub fn g_prime(&self, z: Complex64) -> Complex64 {
        self.dg.eval(z)
    }

    pub fn h_second(&self, z: Complex64) -> Complex64 {
        self.d2h.eval(z)
    }

    pub fn g_second(&self, z: Complex64) -> Complex64 {
        self.d2g.eval(z)
    }

    /// `J_f = |h'|^2 - |g'|^2`.
    pub fn jacobian(&self, z: Complex64) -> f64 {
        self.h_prime(z).norm_sqr() - self.g_prime(z).norm_sqr()
    }

    /// Second complex dilatation `g'(z) / h'(z)`.
    pub fn dilatation(&self, z: Complex64) -> Result<Complex64> {
        let hp = self.h_prime(z);
        if hp.norm() <= EPS_DIV {
            return Err(Error::CriticalPoint { re: z.re, im: z.im });
        }
        Ok(self.g_prime(z) / hp)
    }

    /// The analytic function `h + lambda g`.
    pub fn slice(&self, lambda: Complex64) -> Series {
        &self.h + &self.g.scale(lambda)
    }

    /// `f0 + b1 conj(f0)` regrouped as `(h0 + b1 g0) + conj(g0 + conj(b1) h0)`.
    ///
    /// The affine normalization `(f + c conj f) / (1 + c b1)` used for
    /// affine-invariant families is `affine_combine(c)` followed by
    /// [`HarmonicMap::scale`] with `1 / (1 + c b1)`.
    pub fn affine_combine(&self, b1: Complex64) -> Result<Self> {
        if b1.norm() >= 1.0 {
            return Err(Error::AffineFactorOutOfDisk(b1.norm()));
        }
        let h = &self.h + &self.g.scale(b1);
        let g = &self.g + &self.h.scale(b1.conj());
        Ok(Self::new(h, g))
    }

    /// The harmonic map `s f = (s h) + conj(conj(s) g)`.
    pub fn scale(&self, s: Complex64) -> Self {
        Self::new(self.h.scale(s), self.g.scale(s.conj()))
    }

    /// Disk-automorphism renormalization
    /// `F(z) = (f((z + zeta) / (1 + conj(zeta) z)) - f(zeta)) / ((1 - |zeta|^2) h'(zeta))`.
    ///
    /// Pointwise only: a series for `F` should be recovered by sampling its
    /// analytic and co-analytic parts on a circle.
    pub fn koenigs_transform(&self, zeta: Complex64, z: Complex64) -> Result<Complex64> {
        let hp = self.h_prime(zeta);
        if hp.norm() <= EPS_DIV {
            return Err(Error::CriticalPoint { re: zeta.re, im: zeta.im });
        }
        let w = (z + zeta) / (1.0 + zeta.conj() * z);
        Ok((self.eval(w) - self.eval(zeta)) / ((1.0 - zeta.norm_sqr()) * hp))
    }

    /// Stable-harmonic Alexander transform: `H = z h'`, `G = -z g'`,
    /// i.e. `H_n = n a_n` and `G_n = -n b_n`.
    pub fn alexander(&self) -> Self {
        let h = Series::from_fn(self.h.order(), |n| self.h.coeff(n) * n as f64);
        let g = Series::from_fn(self.g.order(), |n| -self.g.coeff(n) * n as f64);
        Self::new(h, g)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self::new(self.h.truncate(order), self.g.truncate(order))
    }
}

/// Extremal constants of an affine and linear invariant family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FamilyConstants {
    /// Supremum of `|a_2|` over the whole family.
    pub alpha: f64,
    /// Supremum of `|a_2|` over members with `b_1 = 0`.
    pub alpha0: f64,
    /// Supremum of `|b_2|` over members with `b_1 = 0`.
    pub beta0: f64,
}

impl FamilyConstants {
    pub fn new(alpha: f64, alpha0: f64, beta0: f64) -> Result<Self> {
        let c = Self { alpha, alpha0, beta0 };
        let s = alpha0 + beta0;
        if !(alpha > 0.0 && alpha0 > 0.0 && beta0 >= 0.0 && s > 1.0) {
            return Err(Error::BadParameter(format!(
                "family constants need alpha > 0, alpha0 > 0, beta0 >= 0, alpha0 + beta0 > 1 (got {alpha}, {alpha0}, {beta0})"
            )));
        }
        Ok(c)
    }

    /// Constants of the class of shears with a univalent slice, with and
    /// without the affine `b_1` factor.
    pub const fn stable_slice_class() -> Self {
        Self { alpha: 3.0, alpha0: 2.5, beta0: 0.5 }
    }

    /// Radius of convexity `s - sqrt(s^2 - 1)` with `s = alpha0 + beta0`.
    pub fn rho(&self) -> f64 {
        let s = self.alpha0 + self.beta0;
        s - (s * s - 1.0).sqrt()
    }
}
