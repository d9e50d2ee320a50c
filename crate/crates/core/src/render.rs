//! SVG pictures of the images of radial segments and concentric circles.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrokeStyle {
    pub color: String,
    pub width: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderSpec {
    pub rays: usize,
    pub circles: usize,
    pub samples_per_curve: usize,
    pub r_max: f64,
    pub width: u32,
    pub height: u32,
    pub ray_style: StrokeStyle,
    pub circle_style: StrokeStyle,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            rays: 16,
            circles: 8,
            samples_per_curve: 512,
            r_max: 0.95,
            width: 800,
            height: 800,
            ray_style: StrokeStyle { color: "#1f4e99".into(), width: 1.0 },
            circle_style: StrokeStyle { color: "#b03a2e".into(), width: 1.0 },
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> Result<()> {
        if self.rays == 0 || self.circles == 0 {
            return Err(Error::BadParameter("render needs at least one ray and one circle".into()));
        }
        if self.samples_per_curve < 64 {
            return Err(Error::BadParameter(format!("samples_per_curve must be >= 64, got {}", self.samples_per_curve)));
        }
        if !(self.r_max > 0.0 && self.r_max < 1.0) {
            return Err(Error::RadiusOutOfRange(self.r_max));
        }
        if self.width == 0 || self.height == 0 {
            return Err(Error::BadParameter("image size must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveKind {
    Circle,
    Ray,
}

/// Image of one grid curve; circles are closed (last point repeats the first).
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub kind: CurveKind,
    pub points: Vec<Complex64>,
}

/// Circles of radius `j r_max / circles`, outermost first, then rays in
/// order of angle.
pub fn sample_grid<F>(f: F, spec: &RenderSpec) -> Result<Vec<Curve>>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    spec.validate()?;
    let s = spec.samples_per_curve;
    let mut domains: Vec<(CurveKind, Vec<Complex64>)> = Vec::with_capacity(spec.rays + spec.circles);
    for j in (1..=spec.circles).rev() {
        let r = spec.r_max * j as f64 / spec.circles as f64;
        let mut pts: Vec<Complex64> = (0..s).map(|k| Complex64::from_polar(r, 2.0 * PI * k as f64 / s as f64)).collect();
        pts.push(pts[0]);
        domains.push((CurveKind::Circle, pts));
    }
    for j in 0..spec.rays {
        let t = 2.0 * PI * j as f64 / spec.rays as f64;
        let pts = (0..s).map(|k| Complex64::from_polar(spec.r_max * k as f64 / (s - 1) as f64, t)).collect();
        domains.push((CurveKind::Ray, pts));
    }
    domains
        .into_par_iter()
        .map(|(kind, zs)| {
            let points = zs
                .into_iter()
                .map(|z| {
                    let w = f(z);
                    if w.re.is_finite() && w.im.is_finite() {
                        Ok(w)
                    } else {
                        Err(Error::NonFiniteSample { re: z.re, im: z.im })
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Curve { kind, points })
        })
        .collect()
}

/// `x` with six significant digits in plain decimal notation.
pub fn format_coord(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.truncate(s.trim_end_matches('0').trim_end_matches('.').len());
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Renders the image grid of `f` as an SVG 1.1 document.
///
/// The view box is fitted to the sampled image points with a 5% margin and
/// a uniform scale; the output depends only on `f` and `spec`.
pub fn render_grid<F>(f: F, spec: &RenderSpec) -> Result<String>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let curves = sample_grid(f, spec)?;
    Ok(to_svg(&curves, spec))
}

fn to_svg(curves: &[Curve], spec: &RenderSpec) -> String {
    let all = curves.iter().flat_map(|c| c.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        x0 = x0.min(p.re);
        x1 = x1.max(p.re);
        y0 = y0.min(p.im);
        y1 = y1.max(p.im);
    }
    let span = |lo: f64, hi: f64| if hi - lo > 0.0 { hi - lo } else { 1.0 };
    let (dx, dy) = (span(x0, x1) * 1.1, span(y0, y1) * 1.1);
    let (cx, cy) = (0.5 * (x0 + x1), 0.5 * (y0 + y1));
    let (w, h) = (spec.width as f64, spec.height as f64);
    let scale = (w / dx).min(h / dy);

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">",
        spec.width, spec.height
    );
    let _ = writeln!(out, "<rect width=\"{}\" height=\"{}\" fill=\"white\"/>", spec.width, spec.height);
    for c in curves {
        let style = match c.kind {
            CurveKind::Circle => &spec.circle_style,
            CurveKind::Ray => &spec.ray_style,
        };
        let mut pts = String::new();
        for (k, p) in c.points.iter().enumerate() {
            if k > 0 {
                pts.push(' ');
            }
            let px = 0.5 * w + (p.re - cx) * scale;
            let py = 0.5 * h - (p.im - cy) * scale;
            let _ = write!(pts, "{},{}", format_coord(px), format_coord(py));
        }
        let _ = writeln!(
            out,
            "<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"{}\" points=\"{}\"/>",
            style.color,
            format_coord(style.width),
            pts
        );
    }
    out.push_str("</svg>\n");
    out
}
