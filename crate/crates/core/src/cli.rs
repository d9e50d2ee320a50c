//! Command-line front end. [`run`] returns the process exit code:
//! 0 when every check passed, 1 when a check failed (its report is still
//! written), 2 for usage, parse and input errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Deserialize;

use crate::error::Error;
use crate::fnspec::{parse_complex, FunctionSpec};
use crate::map::{FamilyConstants, HarmonicMap};
use crate::render::{render_grid, RenderSpec};
use crate::series::{Series, DEFAULT_ORDER};
use crate::shear::CatalogId;
use crate::verify::{
    check_coeff_bounds, curvature_at, curvature_bounds, curvature_bounds_check, derivative_bounds_check, growth_check,
    jacobian_bounds_check, local_univalence_check, radius_of_convexity, stability_scan, theta_search, CheckKind,
    CoeffClass, GridSpec, Report, SampleOptions, StabilityMode, Tolerances,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "harmonic-shear", version, about = "Univalent harmonic maps by shearing: construct, verify, render")]
struct Cli {
    /// Worker threads for grid scans (results do not depend on it).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// JSON file with default values for numeric options; flags win.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the coefficient table of a map.
    Coeffs(MapArgs),
    /// Shear a rational conformal map along a rational dilatation and print the coefficients.
    Shear(ShearArgs),
    /// Run a named check and write its JSON report.
    Verify(VerifyArgs),
    /// Print the curvature of the image of |z| = r.
    Curvature(CurvatureArgs),
    /// Estimate the radius of convexity.
    Radius(RadiusArgs),
    /// List the slice directions theta that pass the necessary univalence filters.
    ThetaSearch(ThetaArgs),
    /// Check every slice h + lambda g on a grid of unimodular lambda.
    Stability(StabilityArgs),
    /// Write an SVG of the images of radial segments and concentric circles.
    Render(RenderArgs),
    /// List catalog maps and their parameter domains.
    Catalog,
}

#[derive(Args, Debug)]
struct MapArgs {
    /// Catalog form `name(param=value,..)` or `shear phi=[..]/[..] omega=[..]/[..] theta=..`.
    #[arg(long = "fn")]
    func: String,
    /// Truncation order of the series.
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug)]
struct ShearArgs {
    /// `[p0,p1,..]/[q0,..]`, coefficients in increasing powers of z.
    #[arg(long)]
    phi: String,
    #[arg(long)]
    omega: String,
    /// Shear direction; `pi` gives h - g = phi.
    #[arg(long, default_value = "pi", allow_hyphen_values = true)]
    theta: String,
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Args, Debug, Default)]
struct GridArgs {
    /// Radii in the polar check grid.
    #[arg(long)]
    radii: Option<usize>,
    /// Angles in the polar check grid.
    #[arg(long)]
    angles: Option<usize>,
    /// Outer radius of the check grid.
    #[arg(long)]
    r_max: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct TolArgs {
    #[arg(long)]
    tol_coefficient: Option<f64>,
    #[arg(long)]
    tol_pointwise: Option<f64>,
    #[arg(long)]
    tol_geometry: Option<f64>,
    /// Relative separation that counts as a collision.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    tol_de_branges: Option<f64>,
}

#[derive(Args, Debug, Default)]
struct SampleArgs {
    /// Sample points per univalence check.
    #[arg(long)]
    samples: Option<usize>,
    /// Outer radius of the univalence sample grid.
    #[arg(long)]
    sample_r_max: Option<f64>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// bounds | growth | jacobian | derivative | curvature | local
    check: CheckKind,
    #[command(flatten)]
    map: MapArgs,
    /// Coefficient class for `bounds`.
    #[arg(long, default_value = "SH0S")]
    class: CoeffClass,
    /// Family constants `alpha,alpha0,beta0`; defaults to `3,2.5,0.5`.
    #[arg(long)]
    family: Option<String>,
    /// Radii for `curvature`, comma separated expressions; `rho` is accepted.
    #[arg(long)]
    circle_radii: Option<String>,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    tol: TolArgs,
    /// Report file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CurvatureArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Radius of the circle.
    #[arg(long)]
    r: String,
    #[arg(long, default_value_t = 512)]
    angles: usize,
}

#[derive(Args, Debug)]
struct RadiusArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 512)]
    angles: usize,
    #[command(flatten)]
    tol: TolArgs,
}

#[derive(Args, Debug)]
struct ThetaArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Number of theta cells.
    #[arg(long, default_value_t = 360)]
    grid: usize,
    /// Largest coefficient index in the |c_n| <= n filter.
    #[arg(long, default_value_t = 40)]
    max_n: usize,
    #[command(flatten)]
    sample: SampleArgs,
    #[command(flatten)]
    tol: TolArgs,
    /// JSON file for the survivor list.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Univalent,
    Convex,
}

#[derive(Args, Debug)]
struct StabilityArgs {
    #[command(flatten)]
    map: MapArgs,
    #[arg(long, default_value_t = 32)]
    lambdas: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Univalent)]
    mode: ModeArg,
    #[command(flatten)]
    grid: GridArgs,
    #[command(flatten)]
    sample: SampleArgs,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct RenderArgs {
    #[command(flatten)]
    map: MapArgs,
    /// Render the analytic slice h + lambda g instead of f.
    #[arg(long, allow_hyphen_values = true)]
    slice: Option<String>,
    #[arg(long)]
    rays: Option<usize>,
    #[arg(long)]
    circles: Option<usize>,
    #[arg(long)]
    samples_per_curve: Option<usize>,
    #[arg(long)]
    r_max: Option<f64>,
    #[arg(long)]
    width: Option<u32>,
    #[arg(long)]
    height: Option<u32>,
    /// SVG file; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Defaults read from `--config`.
#[derive(Debug, Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct Config {
    order: Option<usize>,
    jobs: Option<usize>,
    grid: Option<GridSpec>,
    tolerances: Option<Tolerances>,
    sample: Option<SampleOptions>,
    render: Option<RenderSpec>,
}

struct Failure(String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure(e.to_string())
    }
}

type CliResult = std::result::Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let text = e.render().to_string();
            if code == EXIT_PASS {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match execute(cli, out, err) {
        Ok(code) => code,
        Err(Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn execute(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure(format!("{}: {e}", path.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure(format!("{}: {e}", path.display())))?
        }
        None => Config::default(),
    };
    let jobs = cli.jobs.or(config.jobs);
    if jobs == Some(0) {
        return Err(Failure("--jobs must be at least 1".into()));
    }
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(k) = jobs {
        builder = builder.num_threads(k);
    }
    let pool = builder.build().map_err(|e| Failure(e.to_string()))?;
    // Locked stdio handles are not `Send`; buffer inside the pool.
    let (mut obuf, mut ebuf) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(cli.command, &config, &mut obuf, &mut ebuf));
    out.write_all(&obuf)?;
    err.write_all(&ebuf)?;
    result
}

fn dispatch(command: Command, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Coeffs(a) => {
            let spec = parse_spec(&a.func)?;
            let order = a.order.or(config.order).unwrap_or(DEFAULT_ORDER);
            print_coeffs(&spec.build(order)?, out)
        }
        Command::Shear(a) => {
            let text = format!("shear phi={} omega={} theta={}", a.phi, a.omega, a.theta);
            let spec = parse_spec(&text)?;
            let order = a.order.or(config.order).unwrap_or(DEFAULT_ORDER);
            print_coeffs(&spec.build(order)?, out)
        }
        Command::Verify(a) => verify(a, config, out, err),
        Command::Curvature(a) => {
            let r = parse_real(&a.r, "r")?;
            let f = build_map(&a.map, config, Series::order_for_radius(r))?;
            let c = FamilyConstants::stable_slice_class();
            let (lo, hi) = curvature_bounds(r, f.b1().norm(), &c);
            writeln!(out, "# r = {r}; bounds {lo} <= k <= {hi}")?;
            writeln!(out, "t\tk")?;
            for j in 0..a.angles {
                let t = 2.0 * std::f64::consts::PI * j as f64 / a.angles as f64;
                writeln!(out, "{t}\t{}", curvature_at(&f, r, t)?)?;
            }
            Ok(EXIT_PASS)
        }
        Command::Radius(a) => {
            let tol = tolerances(&a.tol, config);
            let f = build_map(&a.map, config, Series::order_for_radius(0.99))?;
            writeln!(out, "{}", radius_of_convexity(&f, a.angles, tol.geometry)?)?;
            Ok(EXIT_PASS)
        }
        Command::ThetaSearch(a) => {
            let tol = tolerances(&a.tol, config);
            let opts = sample_options(&a.sample, &tol, config);
            let order = Series::order_for_radius(opts.r_max).max(a.max_n);
            let f = build_map(&a.map, config, order)?;
            let cells = theta_search(&f, a.grid, a.max_n, &opts, &tol)?;
            if let Some(path) = &a.out {
                let json = serde_json::to_string_pretty(&cells).expect("cells serialize");
                fs::write(path, json + "\n")?;
            }
            writeln!(out, "cell\ttheta\tdegrees")?;
            for c in &cells {
                let degrees = 360.0 * c.index as f64 / a.grid as f64;
                let theta = if (c.theta - std::f64::consts::PI).abs() < 1e-12 { "pi".to_string() } else { c.theta.to_string() };
                writeln!(out, "{}\t{theta}\t{degrees}", c.index)?;
            }
            if cells.is_empty() {
                writeln!(err, "no theta cell survived")?;
            }
            Ok(EXIT_PASS)
        }
        Command::Stability(a) => {
            let tol = tolerances(&a.tol, config);
            let opts = sample_options(&a.sample, &tol, config);
            let grid = grid_spec(&a.grid, config)?;
            let mode = match a.mode {
                ModeArg::Univalent => StabilityMode::Univalent,
                ModeArg::Convex => StabilityMode::Convex,
            };
            let r = match mode {
                StabilityMode::Univalent => opts.r_max,
                StabilityMode::Convex => grid.r_max,
            };
            let f = build_map(&a.map, config, Series::order_for_radius(r))?;
            let report = stability_scan(&f, a.lambdas, mode, &opts, &grid, &tol)?;
            emit_report(&report, a.out.as_deref(), out, err)
        }
        Command::Render(a) => {
            let mut spec = config.render.clone().unwrap_or_default();
            spec.rays = a.rays.unwrap_or(spec.rays);
            spec.circles = a.circles.unwrap_or(spec.circles);
            spec.samples_per_curve = a.samples_per_curve.unwrap_or(spec.samples_per_curve);
            spec.r_max = a.r_max.unwrap_or(spec.r_max);
            spec.width = a.width.unwrap_or(spec.width);
            spec.height = a.height.unwrap_or(spec.height);
            spec.validate()?;
            let f = build_map(&a.map, config, Series::order_for_radius(spec.r_max))?;
            let svg = match &a.slice {
                Some(text) => {
                    let lambda = parse_complex(text)?;
                    let phi = f.slice(lambda);
                    render_grid(|z| phi.eval(z), &spec)?
                }
                None => render_grid(|z| f.eval(z), &spec)?,
            };
            match &a.out {
                Some(path) => fs::write(path, svg)?,
                None => out.write_all(svg.as_bytes())?,
            }
            Ok(EXIT_PASS)
        }
        Command::Catalog => {
            for (name, domain) in CatalogId::DESCRIPTIONS {
                writeln!(out, "{name:<32}{domain}")?;
            }
            writeln!(out, "{:<32}custom shear of rational phi and omega", "shear phi=.. omega=.. theta=..")?;
            Ok(EXIT_PASS)
        }
    }
}

fn verify(a: VerifyArgs, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let tol = tolerances(&a.tol, config);
    let grid = grid_spec(&a.grid, config)?;
    let family = match &a.family {
        Some(text) => {
            let v: Vec<f64> = text.split(',').map(|s| parse_real(s, "family")).collect::<Result<_, _>>()?;
            if v.len() != 3 {
                return Err(Failure("--family needs alpha,alpha0,beta0".into()));
            }
            FamilyConstants::new(v[0], v[1], v[2])?
        }
        None => FamilyConstants::stable_slice_class(),
    };
    let report = match a.check {
        CheckKind::Bounds => {
            let order = a.map.order.or(config.order).unwrap_or(DEFAULT_ORDER);
            let f = parse_spec(&a.map.func)?.build(order)?;
            check_coeff_bounds(&f, order, a.class, &tol)?
        }
        CheckKind::Curvature => {
            let radii: Vec<f64> = match &a.circle_radii {
                Some(text) => text.split(',').map(|s| parse_radius(s, &family)).collect::<Result<_, _>>()?,
                None => vec![0.05, family.rho(), 0.3, 0.6],
            };
            let r = radii.iter().cloned().fold(0.0, f64::max);
            let f = build_map(&a.map, config, Series::order_for_radius(r))?;
            let angles = a.grid.angles.unwrap_or(512);
            curvature_bounds_check(&f, &radii, angles, &family, &tol)?
        }
        kind => {
            let f = build_map(&a.map, config, Series::order_for_radius(grid.r_max))?;
            match kind {
                CheckKind::Growth => growth_check(&f, &grid, &family, &tol)?,
                CheckKind::Jacobian => jacobian_bounds_check(&f, &grid, &family, &tol),
                CheckKind::Derivative => derivative_bounds_check(&f, &grid, &family, &tol),
                _ => local_univalence_check(&f, &grid),
            }
        }
    };
    emit_report(&report, a.out.as_deref(), out, err)
}

fn emit_report(report: &Report, path: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    let json = report.to_json() + "\n";
    match path {
        Some(p) => fs::write(p, json)?,
        None => out.write_all(json.as_bytes())?,
    }
    let verdict = if report.passed { "passed" } else { "FAILED" };
    let at = report.witness.map(|w| format!(" at {w}")).unwrap_or_default();
    writeln!(err, "{}: {verdict}, worst margin {:e}{at}", report.check_name, report.worst_margin)?;
    Ok(if report.passed { EXIT_PASS } else { EXIT_FAIL })
}

fn parse_spec(text: &str) -> std::result::Result<FunctionSpec, Failure> {
    FunctionSpec::parse(text).map_err(|e| match e {
        Error::Parse { pos, reason } => Failure(format!("in `{text}` at {pos}: {reason}")),
        other => Failure(other.to_string()),
    })
}

fn build_map(a: &MapArgs, config: &Config, auto: usize) -> std::result::Result<HarmonicMap, Failure> {
    let order = a.order.or(config.order).unwrap_or(auto);
    Ok(parse_spec(&a.func)?.build(order)?)
}

fn parse_real(text: &str, what: &str) -> std::result::Result<f64, Failure> {
    let v = parse_complex(text.trim()).map_err(|e| Failure(format!("{what}: {e}")))?;
    if v.im != 0.0 {
        return Err(Failure(format!("{what} must be real, got {v}")));
    }
    Ok(v.re)
}

fn parse_radius(text: &str, family: &FamilyConstants) -> std::result::Result<f64, Failure> {
    if text.trim() == "rho" {
        Ok(family.rho())
    } else {
        parse_real(text, "radius")
    }
}

fn tolerances(a: &TolArgs, config: &Config) -> Tolerances {
    let mut t = config.tolerances.unwrap_or_default();
    t.coefficient = a.tol_coefficient.unwrap_or(t.coefficient);
    t.pointwise = a.tol_pointwise.unwrap_or(t.pointwise);
    t.geometry = a.tol_geometry.unwrap_or(t.geometry);
    t.collision_delta = a.delta.unwrap_or(t.collision_delta);
    t.de_branges = a.tol_de_branges.unwrap_or(t.de_branges);
    t
}

fn grid_spec(a: &GridArgs, config: &Config) -> std::result::Result<GridSpec, Failure> {
    let base = config.grid.unwrap_or_default();
    Ok(GridSpec::new(
        a.radii.unwrap_or(base.radii),
        a.angles.unwrap_or(base.angles),
        a.r_max.unwrap_or(base.r_max),
    )?)
}

fn sample_options(a: &SampleArgs, tol: &Tolerances, config: &Config) -> SampleOptions {
    let base = config.sample.unwrap_or(SampleOptions { delta: tol.collision_delta, ..Default::default() });
    SampleOptions {
        r_max: a.sample_r_max.unwrap_or(base.r_max),
        samples: a.samples.unwrap_or(base.samples),
        delta: tol.collision_delta,
    }
}

fn format_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.into() }
}

fn format_complex(c: Complex64) -> String {
    let im = format_real(c.im);
    if im == "0" {
        format_real(c.re)
    } else if im.starts_with('-') {
        format!("{}{im}i", format_real(c.re))
    } else {
        format!("{}+{im}i", format_real(c.re))
    }
}

fn print_coeffs(f: &HarmonicMap, out: &mut dyn Write) -> CliResult {
    writeln!(out, "n\ta_n\tb_n")?;
    for n in 0..=f.order() {
        writeln!(out, "{n}\t{}\t{}", format_complex(f.h().coeff(n)), format_complex(f.g().coeff(n)))?;
    }
    Ok(EXIT_PASS)
}
