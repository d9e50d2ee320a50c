//! Sampled injectivity, local univalence, slice stability and the slice
//! `theta` search.
//!
//! A sampled pass is necessary evidence only: the reports say "no collision
//! found" and never claim univalence.

use std::collections::{HashMap, HashSet};
use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{GridSpec, Report, ReportBuilder, Tolerances, Witness, NON_FINITE_MARGIN};
use crate::error::{Error, Result};
use crate::map::HarmonicMap;
use crate::series::{Series, EPS_DIV};

/// Sampling parameters for [`univalence_sample_check`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleOptions {
    pub r_max: f64,
    /// Approximate number of sample points.
    pub samples: usize,
    /// Relative separation threshold.
    pub delta: f64,
}

impl Default for SampleOptions {
    fn default() -> Self {
        Self { r_max: 0.98, samples: 4000, delta: 1e-4 }
    }
}

/// Polar sampling grid: vertex 0 is the origin, vertex `1 + i * angles + j`
/// sits at radius `r_max (i+1)/rings` and angle `2 pi j/angles`.
struct SampleGrid {
    rings: usize,
    angles: usize,
    z: Vec<Complex64>,
    edges: Vec<(usize, usize)>,
}

impl SampleGrid {
    fn new(r_max: f64, samples: usize) -> Self {
        let samples = samples.max(2);
        let rings = ((samples as f64 / 4.0).sqrt().ceil() as usize).max(1);
        let angles = samples.div_ceil(rings).max(3);
        let v = |i: usize, j: usize| 1 + i * angles + (j % angles);

        let mut z = vec![Complex64::new(0.0, 0.0)];
        for i in 0..rings {
            let r = r_max * (i + 1) as f64 / rings as f64;
            for j in 0..angles {
                z.push(Complex64::from_polar(r, 2.0 * PI * j as f64 / angles as f64));
            }
        }
        let mut edges = Vec::with_capacity(2 * rings * angles);
        for i in 0..rings {
            for j in 0..angles {
                edges.push((v(i, j), v(i, j + 1)));
            }
        }
        for j in 0..angles {
            edges.push((0, v(0, j)));
            for i in 0..rings - 1 {
                edges.push((v(i, j), v(i + 1, j)));
            }
        }
        Self { rings, angles, z, edges }
    }
}

fn orient(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let u = b - a;
    let v = c - a;
    u.re * v.im - u.im * v.re
}

/// Parameters `(s, u)` of a proper crossing of segments `ab` and `cd`.
///
/// Disjoint boxes are rejected first: for collinear segments the orientation
/// signs are rounding noise.
fn proper_crossing(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Option<(f64, f64)> {
    let apart = |p: f64, q: f64, r: f64, s: f64| p.max(q) < r.min(s) || r.max(s) < p.min(q);
    if apart(a.re, b.re, c.re, d.re) || apart(a.im, b.im, c.im, d.im) {
        return None;
    }
    let o1 = orient(a, b, c);
    let o2 = orient(a, b, d);
    let o3 = orient(c, d, a);
    let o4 = orient(c, d, b);
    if o1 * o2 < 0.0 && o3 * o4 < 0.0 {
        Some((o3 / (o3 - o4), o1 / (o1 - o2)))
    } else {
        None
    }
}

fn shares_vertex(e: (usize, usize), f: (usize, usize)) -> bool {
    e.0 == f.0 || e.0 == f.1 || e.1 == f.0 || e.1 == f.1
}

struct Found {
    near: Vec<(usize, usize)>,
    crossings: Vec<(usize, usize)>,
}

fn near_pairs_hashed(w: &[Complex64], cell: f64, edge_set: &HashSet<(usize, usize)>) -> Vec<(usize, usize)> {
    if !(cell > 0.0) {
        return Vec::new();
    }
    let key = |p: Complex64| ((p.re / cell).floor() as i64, (p.im / cell).floor() as i64);
    let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
    for (i, &p) in w.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(i);
    }
    let mut out = Vec::new();
    for (i, &p) in w.iter().enumerate() {
        let (kx, ky) = key(p);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = buckets.get(&(kx + dx, ky + dy)) {
                    for &j in b {
                        if j > i && (w[j] - p).norm() < cell && !edge_set.contains(&(i, j)) {
                            out.push((i, j));
                        }
                    }
                }
            }
        }
    }
    out.sort_unstable();
    out
}

fn crossings_sweep(w: &[Complex64], edges: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let bbox = |e: (usize, usize)| {
        let (a, b) = (w[e.0], w[e.1]);
        (a.re.min(b.re), a.re.max(b.re), a.im.min(b.im), a.im.max(b.im))
    };
    let boxes: Vec<_> = edges.iter().map(|&e| bbox(e)).collect();
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&a, &b| boxes[a].0.total_cmp(&boxes[b].0).then(a.cmp(&b)));

    let mut active: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for &e in &order {
        let (x0, _, y0, y1) = boxes[e];
        active.retain(|&a| boxes[a].1 >= x0);
        for &a in &active {
            let (_, _, ay0, ay1) = boxes[a];
            if ay1 < y0 || ay0 > y1 || shares_vertex(edges[a], edges[e]) {
                continue;
            }
            // Index order keeps the rounding of the predicate independent of sweep order.
            let (lo, hi) = (a.min(e), a.max(e));
            let ((p, q), (r, s)) = (edges[lo], edges[hi]);
            if proper_crossing(w[p], w[q], w[r], w[s]).is_some() {
                out.push((lo, hi));
            }
        }
        active.push(e);
    }
    out.sort_unstable();
    out.dedup();
    out
}

fn build_report(grid: &SampleGrid, w: &[Complex64], delta: f64, found: Found) -> Report {
    let mut report = ReportBuilder::new("univalence_sample", 0.0);
    let ratio_margin = |i: usize, j: usize| (w[i] - w[j]).norm() / (grid.z[i] - grid.z[j]).norm() - delta;
    for &(i, j) in &grid.edges {
        let m = ratio_margin(i, j);
        report.push(Witness::pair(grid.z[i], grid.z[j]), "adjacent separation", m + delta, delta, m);
    }
    for &(i, j) in &found.near {
        let m = ratio_margin(i, j);
        report.push(Witness::pair(grid.z[i], grid.z[j]), "separation", m + delta, delta, m);
    }
    for &(a, b) in &found.crossings {
        let (p, q) = grid.edges[a];
        let (r, s) = grid.edges[b];
        let (sa, sb) = proper_crossing(w[p], w[q], w[r], w[s]).expect("crossing recorded");
        let z1 = grid.z[p] + (grid.z[q] - grid.z[p]) * sa;
        let z2 = grid.z[r] + (grid.z[s] - grid.z[r]) * sb;
        report.push(Witness::pair(z1, z2), "image edges cross", 0.0, delta, -delta);
        report.fail();
    }
    let mut r = report.finish();
    if r.worst_margin < 0.0 {
        r.passed = false;
    }
    r
}

fn evaluate<F>(f: &F, grid: &SampleGrid) -> std::result::Result<Vec<Complex64>, Report>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let w: Vec<Complex64> = grid.z.par_iter().map(|&z| f(z)).collect();
    let bad: Vec<usize> = (0..w.len()).filter(|&i| !(w[i].re.is_finite() && w[i].im.is_finite())).collect();
    if bad.is_empty() {
        return Ok(w);
    }
    let mut report = ReportBuilder::new("univalence_sample", 0.0);
    for i in bad {
        report.push(Witness::point(grid.z[i]), "non-finite sample", f64::NAN, 0.0, NON_FINITE_MARGIN);
    }
    report.fail();
    Err(report.finish())
}

/// Sampled injectivity check on a polar grid of about `opts.samples` points
/// with radius at most `opts.r_max`.
///
/// A collision is either a pair of samples with
/// `|f(z1) - f(z2)| < delta |z1 - z2|` or a proper crossing between the
/// images of two grid edges (circle arcs and radial segments) that share no
/// vertex; for the latter the witness is the interpolated preimage pair.
/// Close pairs are found with a spatial hash of cell size `2 delta r_max`,
/// which contains every colliding pair.
pub fn univalence_sample_check<F>(f: F, opts: &SampleOptions) -> Report
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let grid = SampleGrid::new(opts.r_max, opts.samples);
    let w = match evaluate(&f, &grid) {
        Ok(w) => w,
        Err(report) => return report,
    };
    let edge_set: HashSet<(usize, usize)> = grid.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let cell = 2.0 * opts.delta * opts.r_max;
    let found = Found { near: near_pairs_hashed(&w, cell, &edge_set), crossings: crossings_sweep(&w, &grid.edges) };
    debug_assert!(grid.rings * grid.angles + 1 == grid.z.len());
    build_report(&grid, &w, opts.delta, found)
}

/// Quadratic reference implementation of [`univalence_sample_check`];
/// produces an identical report.
#[doc(hidden)]
pub fn univalence_sample_check_brute<F>(f: F, opts: &SampleOptions) -> Report
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let grid = SampleGrid::new(opts.r_max, opts.samples);
    let w = match evaluate(&f, &grid) {
        Ok(w) => w,
        Err(report) => return report,
    };
    let edge_set: HashSet<(usize, usize)> = grid.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    let cell = 2.0 * opts.delta * opts.r_max;
    let mut near = Vec::new();
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if (w[j] - w[i]).norm() < cell && !edge_set.contains(&(i, j)) {
                near.push((i, j));
            }
        }
    }
    let mut crossings = Vec::new();
    for a in 0..grid.edges.len() {
        for b in a + 1..grid.edges.len() {
            let (e, g) = (grid.edges[a], grid.edges[b]);
            if !shares_vertex(e, g) && proper_crossing(w[e.0], w[e.1], w[g.0], w[g.1]).is_some() {
                crossings.push((a, b));
            }
        }
    }
    build_report(&grid, &w, opts.delta, Found { near, crossings })
}

/// Sampled sense-preservation: the margin at each grid point is the
/// normalized Jacobian `(|h'|^2 - |g'|^2) / (|h'|^2 + |g'|^2)`, which has the
/// sign of `J_f` and reaches `-1` exactly where `h'` vanishes. Passes iff the
/// minimum is strictly positive.
pub fn local_univalence_check(f: &HarmonicMap, grid: &GridSpec) -> Report {
    let rows: Vec<_> = grid
        .points()
        .into_par_iter()
        .map(|(_, _, z)| {
            let a = f.h_prime(z).norm_sqr();
            let b = f.g_prime(z).norm_sqr();
            let s = a + b;
            (z, a - b, if s > 0.0 { (a - b) / s } else { 0.0 })
        })
        .collect();
    let mut report = ReportBuilder::new("local_univalence", 0.0).strict();
    for (z, j, m) in rows {
        report.push(Witness::point(z), "J_f", j, 0.0, m);
    }
    report.finish()
}

/// Minimum of `Re(1 + z phi''/phi')` over the grid with its location.
pub fn convexity_functional(phi: &Series, grid: &GridSpec) -> (f64, Complex64) {
    let d1 = phi.derivative();
    let d2 = d1.derivative();
    let vals: Vec<(f64, Complex64)> = grid
        .points()
        .into_par_iter()
        .map(|(_, _, z)| {
            let p1 = d1.eval(z);
            let v = if p1.norm() <= EPS_DIV { NON_FINITE_MARGIN } else { (1.0 + z * d2.eval(z) / p1).re };
            (if v.is_nan() { NON_FINITE_MARGIN } else { v }, z)
        })
        .collect();
    vals.into_iter().fold((f64::INFINITY, Complex64::new(0.0, 0.0)), |acc, v| if v.0 < acc.0 { v } else { acc })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StabilityMode {
    Univalent,
    Convex,
}

/// Checks every slice `h + lambda g` with `lambda = e^{2 pi i j / count}`.
///
/// `Univalent` runs [`univalence_sample_check`] with `opts`; `Convex` requires
/// `Re(1 + z phi''/phi') >= -tol.pointwise` on `grid`.
pub fn stability_scan(
    f: &HarmonicMap,
    lambda_count: usize,
    mode: StabilityMode,
    opts: &SampleOptions,
    grid: &GridSpec,
    tol: &Tolerances,
) -> Result<Report> {
    if lambda_count < 8 {
        return Err(Error::BadParameter(format!("stability scan needs at least 8 lambdas, got {lambda_count}")));
    }
    let rows: Vec<(f64, f64)> = (0..lambda_count)
        .into_par_iter()
        .map(|j| {
            let theta = 2.0 * PI * j as f64 / lambda_count as f64;
            let phi = f.slice(Complex64::from_polar(1.0, theta)).trimmed();
            let margin = match mode {
                StabilityMode::Univalent => univalence_sample_check(|z| phi.eval(z), opts).worst_margin,
                StabilityMode::Convex => convexity_functional(&phi, grid).0,
            };
            (theta, margin)
        })
        .collect();
    let (name, tolerance, quantity) = match mode {
        StabilityMode::Univalent => ("stability_univalent", 0.0, "slice sample margin"),
        StabilityMode::Convex => ("stability_convex", tol.pointwise, "min Re(1 + z phi''/phi')"),
    };
    let mut report = ReportBuilder::new(name, tolerance);
    for (theta, m) in rows {
        report.push(Witness::Theta { theta }, quantity, m, 0.0, m);
    }
    Ok(report.finish())
}

/// A surviving cell of [`theta_search`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaCell {
    pub index: usize,
    pub theta: f64,
}

/// Grid values `theta_j = 2 pi j / theta_count` for which the slice
/// `h + e^{i theta} g` passes `|c_n| <= n` for `2 <= n <= max_n` and then the
/// sampled injectivity check.
pub fn theta_search(
    f: &HarmonicMap,
    theta_count: usize,
    max_n: usize,
    opts: &SampleOptions,
    tol: &Tolerances,
) -> Result<Vec<ThetaCell>> {
    if theta_count < 16 {
        return Err(Error::BadParameter(format!("theta search needs at least 16 cells, got {theta_count}")));
    }
    if f.order() < max_n {
        return Err(Error::OrderTooLow { have: f.order(), need: max_n });
    }
    let survivors: Vec<Option<ThetaCell>> = (0..theta_count)
        .into_par_iter()
        .map(|index| {
            let theta = 2.0 * PI * index as f64 / theta_count as f64;
            let phi = f.slice(Complex64::from_polar(1.0, theta));
            let coefficients_ok = (2..=max_n).all(|n| phi.coeff(n).norm() <= n as f64 + tol.de_branges);
            let phi = phi.trimmed();
            let ok = coefficients_ok && univalence_sample_check(|z| phi.eval(z), opts).passed;
            ok.then_some(ThetaCell { index, theta })
        })
        .collect();
    Ok(survivors.into_iter().flatten().collect())
}

/// Sampled proxy for convexity of the image curve of `|z| = r` under `phi`
/// in direction `theta`: `t -> Im(e^{-i theta} phi(r e^{it}))` must have
/// exactly one strict maximum and one strict minimum per period once
/// plateaus are collapsed.
pub fn convex_direction_check(phi: &Series, theta: f64, r: f64, samples: usize) -> Result<bool> {
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::RadiusOutOfRange(r));
    }
    if samples < 256 {
        return Err(Error::BadParameter(format!("convex direction check needs >= 256 samples, got {samples}")));
    }
    let rot = Complex64::from_polar(1.0, -theta);
    let v: Vec<f64> = (0..samples)
        .map(|k| (rot * phi.eval(Complex64::from_polar(r, 2.0 * PI * k as f64 / samples as f64))).im)
        .collect();
    let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1.0);
    let eps = 1e-12 * scale;
    let signs: Vec<i8> = (0..samples)
        .filter_map(|k| {
            let d = v[(k + 1) % samples] - v[k];
            if d > eps {
                Some(1)
            } else if d < -eps {
                Some(-1)
            } else {
                None
            }
        })
        .collect();
    if signs.is_empty() {
        return Ok(false);
    }
    let (mut maxima, mut minima) = (0, 0);
    for k in 0..signs.len() {
        match (signs[k], signs[(k + 1) % signs.len()]) {
            (1, -1) => maxima += 1,
            (-1, 1) => minima += 1,
            _ => {}
        }
    }
    Ok(maxima == 1 && minima == 1)
}
