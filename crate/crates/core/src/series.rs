//! Truncated power series with complex coefficients.
//!
//! A [`Series`] of order `N` stores `c_0, ..., c_N` and stands for
//! `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`. Binary operations truncate to
//! the smaller operand order, so a result never claims more accuracy than its
//! inputs carry.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Smallest constant-term modulus accepted by [`Series::recip`].
pub const EPS_DIV: f64 = 1e-12;

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 64;

/// Upper limit for [`Series::order_for_radius`].
pub const MAX_AUTO_ORDER: usize = 4096;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Series {
    coeffs: Vec<Complex64>,
}

impl Series {
    /// Wraps `coeffs` as a series of order `coeffs.len() - 1`.
    ///
    /// Panics if `coeffs` is empty.
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// Polynomial `p` viewed as a series of the given order (padded or cut).
    pub fn from_poly(p: &[Complex64], order: usize) -> Self {
        let mut coeffs = vec![ZERO; order + 1];
        for (c, &v) in coeffs.iter_mut().zip(p) {
            *c = v;
        }
        Self { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![ZERO; order + 1] }
    }

    pub fn constant(c: Complex64, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(ONE, order)
    }

    /// `z^k`, or the zero series when `k > order`.
    pub fn monomial(k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = ONE;
        }
        s
    }

    pub fn identity(order: usize) -> Self {
        Self::monomial(1, order)
    }

    /// Builds a series from a closure `n -> c_n`.
    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self { coeffs: (0..=order).map(f).collect() }
    }

    /// Expansion of the rational function `num(z) / den(z)`.
    pub fn rational(num: &[Complex64], den: &[Complex64], order: usize) -> Result<Self> {
        if den.is_empty() {
            return Err(Error::BadParameter("empty denominator".into()));
        }
        let n = Self::from_poly(num, order);
        let d = Self::from_poly(den, order);
        Ok(&n * &d.recip()?)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient of `z^n`; `None` beyond the truncation order.
    pub fn get(&self, n: usize) -> Option<Complex64> {
        self.coeffs.get(n).copied()
    }

    /// Coefficient of `z^n`. Panics beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Complex64 {
        self.coeffs[n]
    }

    /// Drops terms above `order`. Orders can only go down.
    pub fn truncate(&self, order: usize) -> Self {
        let order = order.min(self.order());
        Self { coeffs: self.coeffs[..=order].to_vec() }
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&c| c * lambda).collect() }
    }

    /// Coefficient-wise complex conjugate, i.e. the series of `conj(f(conj z))`.
    pub fn conj(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    /// Multiplies by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let n = self.order();
        let mut out = Self::zero(n);
        for i in k..=n {
            out.coeffs[i] = self.coeffs[i - k];
        }
        out
    }

    /// Multiplicative inverse, `d_n = (delta_{n0} - sum_{k=1}^n c_k d_{n-k}) / c_0`.
    pub fn recip(&self) -> Result<Self> {
        let c0 = self.coeffs[0];
        if c0.norm() <= EPS_DIV {
            return Err(Error::NearZeroConstantTerm { modulus: c0.norm(), threshold: EPS_DIV });
        }
        let inv = ONE / c0;
        let n = self.order();
        let mut d = vec![ZERO; n + 1];
        d[0] = inv;
        for i in 1..=n {
            let mut acc = ZERO;
            for k in 1..=i {
                acc += self.coeffs[k] * d[i - k];
            }
            d[i] = -acc * inv;
        }
        Ok(Self { coeffs: d })
    }

    /// `c_n -> (n+1) c_{n+1}`; the order drops by one (an order-0 series maps to zero).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        if n == 0 {
            return Self::zero(0);
        }
        Self::from_fn(n - 1, |k| self.coeffs[k + 1] * (k as f64 + 1.0))
    }

    /// Antiderivative vanishing at 0; the order rises by one.
    pub fn antiderivative(&self) -> Self {
        let n = self.order();
        Self::from_fn(n + 1, |k| if k == 0 { ZERO } else { self.coeffs[k - 1] / k as f64 })
    }

    /// `outer(inner(z))` truncated at the shared order. `inner` must vanish at 0.
    pub fn compose(&self, inner: &Series) -> Result<Self> {
        let c0 = inner.coeffs[0].norm();
        if c0 > EPS_DIV {
            return Err(Error::NonVanishingInnerTerm(c0));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate(order);
        let mut acc = Self::constant(self.coeffs[order], order);
        for k in (0..order).rev() {
            acc = &acc * &inner;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Horner evaluation of the truncated polynomial.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Index of the last nonzero coefficient; `None` for the zero series.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != ZERO)
    }

    /// Same values with trailing zero coefficients dropped; cheaper to evaluate.
    pub fn trimmed(&self) -> Self {
        self.truncate(self.degree().unwrap_or(0))
    }

    pub fn max_abs_diff(&self, other: &Series) -> f64 {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// A truncation order for which the tail `n^4 r^n` has dropped below
    /// `1e-16`, capped at [`MAX_AUTO_ORDER`]. Never less than [`DEFAULT_ORDER`].
    pub fn order_for_radius(r: f64) -> usize {
        if !(r > 0.0 && r < 1.0) {
            return MAX_AUTO_ORDER;
        }
        let ln_r = r.ln();
        (DEFAULT_ORDER..=MAX_AUTO_ORDER)
            .find(|&n| 4.0 * (n as f64).ln() + n as f64 * ln_r < -16.0 * std::f64::consts::LN_10)
            .unwrap_or(MAX_AUTO_ORDER)
    }
}

/// Taylor coefficients from `count` samples `f(r e^{2 pi i k / count})`.
///
/// Returns `c_0..c_order` with `c_n = (1 / (count r^n)) sum_k f_k e^{-2 pi i k n / count}`.
pub fn coeffs_from_samples(samples: &[Complex64], r: f64, order: usize) -> Result<Series> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    let m = samples.len();
    if m <= 2 * order {
        return Err(Error::InsufficientSamples { samples: m, order });
    }
    let mut buf = samples.to_vec();
    FftPlanner::new().plan_fft_forward(m).process(&mut buf);
    let mf = m as f64;
    Ok(Series::from_fn(order, |n| buf[n] / (mf * r.powi(n as i32))))
}

/// Samples `f` at `count` equally spaced points of the circle `|z| = r`.
pub fn sample_circle(f: impl Fn(Complex64) -> Complex64, r: f64, count: usize) -> Vec<Complex64> {
    (0..count)
        .map(|k| f(Complex64::from_polar(r, 2.0 * PI * k as f64 / count as f64)))
        .collect()
}

fn zip_with(a: &Series, b: &Series, op: impl Fn(Complex64, Complex64) -> Complex64) -> Series {
    let order = a.order().min(b.order());
    Series::from_fn(order, |k| op(a.coeffs[k], b.coeffs[k]))
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        zip_with(self, rhs, |x, y| x + y)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        zip_with(self, rhs, |x, y| x - y)
    }
}

/// Cauchy product `c_n = sum_{k=0}^n a_k b_{n-k}`.
impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let order = self.order().min(rhs.order());
        Series::from_fn(order, |n| (0..=n).map(|k| self.coeffs[k] * rhs.coeffs[n - k]).sum())
    }
}

impl Mul<Complex64> for &Series {
    type Output = Series;
    fn mul(self, rhs: Complex64) -> Series {
        self.scale(rhs)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-ONE)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn geometric(order: usize) -> Series {
        Series::from_fn(order, |_| ONE)
    }

    fn harmonic_koebe_h(order: usize) -> Series {
        Series::from_fn(order, |n| {
            if n == 0 {
                ZERO
            } else {
                let n = n as f64;
                c((n + 1.0) * (2.0 * n + 1.0) / 6.0)
            }
        })
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    #[test]
    fn telescoping_product() {
        let one_minus_z = Series::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0]);
        let p = &one_minus_z * &geometric(5);
        assert_eq!(p.order(), 5);
        assert_close(p.coeff(0), ONE, 0.0);
        for n in 1..=5 {
            assert_close(p.coeff(n), ZERO, 0.0);
        }
    }

    #[test]
    fn z_times_derivative_of_geometric_is_koebe() {
        // Oracle: long division of z by (1 - 2z + z^2) yields c_n = n.
        let order = 20;
        let mut q = vec![0.0; order + 1];
        let mut rem = vec![0.0; order + 3];
        rem[1] = 1.0;
        for (n, qn) in q.iter_mut().enumerate() {
            *qn = rem[n];
            rem[n + 1] += 2.0 * *qn;
            rem[n + 2] -= *qn;
        }
        let p = &Series::identity(order) * &Series::from_fn(order, |n| c(n as f64 + 1.0));
        for (n, &qn) in q.iter().enumerate() {
            assert_close(p.coeff(n), c(qn), 1e-12);
            assert_close(p.coeff(n), c(n as f64), 1e-12);
        }
    }

    #[test]
    fn harmonic_koebe_parts_sum() {
        let order = 30;
        let g = Series::from_fn(order, |n| {
            let n = n as f64;
            if n < 1.0 {
                ZERO
            } else {
                c((n - 1.0) * (2.0 * n - 1.0) / 6.0)
            }
        });
        let s = &harmonic_koebe_h(order) + &g;
        for n in 2..=order {
            let nf = n as f64;
            assert_close(s.coeff(n), c((2.0 * nf * nf + 1.0) / 3.0), 1e-12);
        }
    }

    #[test]
    fn mixed_orders_truncate_to_min() {
        let a = Series::one(3);
        let b = Series::one(7);
        assert_eq!((&a + &b).order(), 3);
        assert_eq!((&a * &b).order(), 3);
        assert_eq!((&b - &a).order(), 3);
    }

    #[test]
    fn recip_geometric() {
        let r = Series::from_real(&[1.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0]).recip().unwrap();
        for n in 0..=6 {
            assert_close(r.coeff(n), ONE, 1e-15);
        }
        let r = Series::from_real(&[1.0, 1.0, 0.0, 0.0, 0.0]).recip().unwrap();
        for n in 0..=4 {
            assert_close(r.coeff(n), c(if n % 2 == 0 { 1.0 } else { -1.0 }), 1e-15);
        }
    }

    #[test]
    fn recip_cube_is_binomial() {
        let order = 25;
        let cube = Series::from_poly(&[c(1.0), c(-3.0), c(3.0), c(-1.0)], order);
        let r = cube.recip().unwrap();
        for n in 0..=order {
            // C(n+2, 2) computed in integers.
            let binom = ((n + 1) * (n + 2) / 2) as f64;
            assert_close(r.coeff(n), c(binom), 1e-9);
        }
    }

    #[test]
    fn recip_rejects_vanishing_constant() {
        let omega = Series::identity(8);
        assert!(matches!(omega.recip(), Err(Error::NearZeroConstantTerm { .. })));
        let tiny = Series::from_real(&[1e-13, 1.0]);
        assert!(tiny.recip().is_err());
    }

    #[test]
    fn calculus_examples() {
        let p = Series::from_real(&[0.0, 1.0, 1.0]);
        let d = p.derivative();
        assert_eq!(d.order(), 1);
        assert_eq!(d.coeffs(), &[c(1.0), c(2.0)]);

        let order = 12;
        let a = Series::from_fn(order, |n| c(n as f64 + 1.0)).antiderivative();
        assert_eq!(a.order(), order + 1);
        assert_close(a.coeff(0), ZERO, 0.0);
        for n in 1..=order + 1 {
            assert_close(a.coeff(n), ONE, 1e-15);
        }

        let dh = harmonic_koebe_h(30).derivative();
        for n in 0..30 {
            let nf = n as f64;
            let expected = (nf + 1.0) * (nf + 2.0) * (2.0 * nf + 3.0) / 6.0;
            assert_close(dh.coeff(n), c(expected), 1e-9);
        }
        assert_close(dh.eval(ZERO), ONE, 0.0);
    }

    #[test]
    fn antiderivative_inverts_derivative_up_to_constant() {
        let s = Series::from_real(&[4.0, 1.0, -2.0, 0.5, 3.0]);
        let back = s.derivative().antiderivative();
        assert_eq!(back.order(), s.order());
        assert_close(back.coeff(0), ZERO, 0.0);
        for n in 1..=4 {
            assert_close(back.coeff(n), s.coeff(n), 1e-15);
        }
    }

    #[test]
    fn compose_examples() {
        let order = 16;
        let z2 = Series::monomial(2, order);
        let g = geometric(order).compose(&z2).unwrap();
        for n in 0..=order {
            assert_close(g.coeff(n), c(if n % 2 == 0 { 1.0 } else { 0.0 }), 1e-14);
        }

        // z/(1-z) composed with -z is -z/(1+z) = sum (-1)^n z^n for n >= 1.
        let outer = Series::from_fn(order, |n| if n == 0 { ZERO } else { ONE });
        let minus_z = Series::identity(order).scale(c(-1.0));
        let r = outer.compose(&minus_z).unwrap();
        assert_close(r.coeff(0), ZERO, 0.0);
        for n in 1..=order {
            assert_close(r.coeff(n), c(if n % 2 == 0 { 1.0 } else { -1.0 }), 1e-14);
        }

        let k = Series::from_real(&[3.0, 1.0, 2.0]).compose(&Series::zero(2)).unwrap();
        assert_eq!(k.coeffs(), &[c(3.0), ZERO, ZERO]);

        assert!(matches!(
            outer.compose(&Series::one(order)),
            Err(Error::NonVanishingInnerTerm(_))
        ));
    }

    #[test]
    fn eval_koebe() {
        let k = Series::from_fn(80, |n| c(n as f64));
        assert_close(k.eval(c(-0.5)), c(-2.0 / 9.0), 1e-9);
        assert_close(harmonic_koebe_h(10).eval(ZERO), ZERO, 0.0);
    }

    #[test]
    fn samples_of_monomial() {
        // Rounding in the samples is amplified by r^-n, so keep n small.
        let s = sample_circle(|z| z * z, 0.5, 64);
        let a = coeffs_from_samples(&s, 0.5, 10).unwrap();
        for n in 0..=10 {
            let expected = if n == 2 { ONE } else { ZERO };
            assert_close(a.coeff(n), expected, 1e-12);
        }
    }

    #[test]
    fn samples_of_log() {
        let a = 1.0 + 2f64.sqrt();
        let ac = c(a);
        let s = sample_circle(|z| ac * (ac / (ac - z)).ln(), 0.9, 128);
        let got = coeffs_from_samples(&s, 0.9, 30).unwrap();
        assert_close(got.coeff(0), ZERO, 1e-12);
        for n in 1..=30 {
            let expected = 1.0 / (n as f64 * a.powi(n as i32 - 1));
            assert_close(got.coeff(n), c(expected), 1e-9);
        }
    }

    #[test]
    fn samples_of_harmonic_koebe_h() {
        let h = |z: Complex64| (z - z * z / 2.0 + z * z * z / 6.0) / (ONE - z).powi(3);
        let s = sample_circle(h, 0.5, 256);
        let got = coeffs_from_samples(&s, 0.5, 20).unwrap();
        for n in 1..=20 {
            let nf = n as f64;
            let expected = (nf + 1.0) * (2.0 * nf + 1.0) / 6.0;
            assert!((got.coeff(n) - expected).norm() <= 1e-8 * expected, "n = {n}");
        }
    }

    #[test]
    fn sampling_preconditions() {
        let s = vec![ZERO; 16];
        assert!(matches!(coeffs_from_samples(&s, 1.0, 4), Err(Error::RadiusOutOfRange(_))));
        assert!(matches!(coeffs_from_samples(&s, 0.0, 4), Err(Error::RadiusOutOfRange(_))));
        assert!(matches!(
            coeffs_from_samples(&s, 0.5, 8),
            Err(Error::InsufficientSamples { samples: 16, order: 8 })
        ));
    }

    #[test]
    fn rational_expansion() {
        // (1 + z) / (1 - z)^3 = sum (n+1)^2 z^n
        let s = Series::rational(&[c(1.0), c(1.0)], &[c(1.0), c(-3.0), c(3.0), c(-1.0)], 15).unwrap();
        for n in 0..=15 {
            assert_close(s.coeff(n), c(((n + 1) * (n + 1)) as f64), 1e-9);
        }
    }

    #[test]
    fn degree_and_trim() {
        let p = Series::from_real(&[0.0, 1.0, 2.0, 0.0, 0.0]);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.trimmed().order(), 2);
        assert_eq!(Series::zero(5).degree(), None);
        assert_eq!(Series::zero(5).trimmed().order(), 0);
    }

    #[test]
    fn order_for_radius_is_monotone() {
        let a = Series::order_for_radius(0.5);
        let b = Series::order_for_radius(0.95);
        assert!(a >= DEFAULT_ORDER && a < b && b <= MAX_AUTO_ORDER);
        let n = b as f64;
        assert!(n.powi(4) * 0.95f64.powf(n) < 1e-16);
    }
}
