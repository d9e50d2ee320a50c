//! C ABI for `harmonic-shear`.
//!
//! Maps and reports are opaque heap handles released with their `_free`
//! function. Every entry point returns an [`HsStatus`]; on failure the
//! message is available from [`hs_last_error`] on the same thread. Strings
//! handed out by the library are released with [`hs_string_free`]. Panics
//! never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use harmonic_shear::series::DEFAULT_ORDER;
use harmonic_shear::verify::{
    self, check_coeff_bounds, curvature_at, radius_of_convexity, CheckKind, CoeffClass, GridSpec, Report, Tolerances,
};
use harmonic_shear::{render_grid, Complex64, Error, FamilyConstants, FunctionSpec, HarmonicMap, RenderSpec};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Numerical = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HsComplex {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for HsComplex {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

impl From<HsComplex> for Complex64 {
    fn from(c: HsComplex) -> Self {
        Complex64::new(c.re, c.im)
    }
}

/// Which half of `f = h + conj(g)`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HsPart {
    Analytic = 0,
    CoAnalytic = 1,
}

/// Opaque harmonic map.
pub struct HsMap {
    inner: HarmonicMap,
}

/// Opaque check report.
pub struct HsReport {
    inner: Report,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

type Outcome = Result<(), (HsStatus, String)>;

fn from_core(e: Error) -> (HsStatus, String) {
    let status = match e {
        Error::Parse { .. } => HsStatus::Parse,
        Error::BadParameter(_)
        | Error::RadiusOutOfRange(_)
        | Error::AffineFactorOutOfDisk(_)
        | Error::NotUnimodular(_)
        | Error::OrderTooLow { .. }
        | Error::InsufficientSamples { .. }
        | Error::DilatationNotBounded { .. }
        | Error::NotNormalized => HsStatus::InvalidArgument,
        _ => HsStatus::Numerical,
    };
    (status, e.to_string())
}

fn null() -> (HsStatus, String) {
    (HsStatus::NullPointer, "null pointer argument".into())
}

fn guard(f: impl FnOnce() -> Outcome) -> HsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => HsStatus::Ok,
        Ok(Err((status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(_) => {
            set_last_error("internal panic");
            HsStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char) -> Result<&'a str, (HsStatus, String)> {
    if p.is_null() {
        return Err(null());
    }
    CStr::from_ptr(p).to_str().map_err(|_| (HsStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn map_arg<'a>(p: *const HsMap) -> Result<&'a HarmonicMap, (HsStatus, String)> {
    p.as_ref().map(|m| &m.inner).ok_or_else(null)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message of the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread; do not free.
#[no_mangle]
pub extern "C" fn hs_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn hs_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn hs_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a map from its text form (`harmonic_koebe`, `f1(n=3)`,
/// `shear phi=[0,1]/[1,-2,1] omega=[0,1] theta=pi`, ...). `order = 0`
/// selects the default truncation order.
///
/// # Safety
/// `spec` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_map_parse(spec: *const c_char, order: usize, out: *mut *mut HsMap) -> HsStatus {
    guard(|| {
        let text = str_arg(spec)?;
        let order = if order == 0 { DEFAULT_ORDER } else { order };
        let map = FunctionSpec::parse(text).and_then(|s| s.build(order)).map_err(from_core)?;
        write_out(out, Box::into_raw(Box::new(HsMap { inner: map })))
    })
}

/// # Safety
/// `map` must come from [`hs_map_parse`] and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hs_map_free(map: *mut HsMap) {
    if !map.is_null() {
        drop(Box::from_raw(map));
    }
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_map_order(map: *const HsMap, out: *mut usize) -> HsStatus {
    guard(|| write_out(out, map_arg(map)?.order()))
}

/// Copies coefficients `0..min(len, order + 1)` of `h` or `g` into `out`.
///
/// # Safety
/// `out` must point to `len` writable elements.
#[no_mangle]
pub unsafe extern "C" fn hs_map_coeffs(map: *const HsMap, part: HsPart, out: *mut HsComplex, len: usize) -> HsStatus {
    guard(|| {
        let f = map_arg(map)?;
        if out.is_null() {
            return Err(null());
        }
        let s = match part {
            HsPart::Analytic => f.h(),
            HsPart::CoAnalytic => f.g(),
        };
        for (k, c) in s.coeffs().iter().take(len).enumerate() {
            out.add(k).write((*c).into());
        }
        Ok(())
    })
}

/// `f(z)`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_map_eval(map: *const HsMap, z: HsComplex, out: *mut HsComplex) -> HsStatus {
    guard(|| write_out(out, map_arg(map)?.eval(z.into()).into()))
}

/// `|h'(z)|^2 - |g'(z)|^2`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_map_jacobian(map: *const HsMap, z: HsComplex, out: *mut f64) -> HsStatus {
    guard(|| write_out(out, map_arg(map)?.jacobian(z.into())))
}

/// `g'(z) / h'(z)`; `HS_STATUS_NUMERICAL` at a critical point of `h`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_map_dilatation(map: *const HsMap, z: HsComplex, out: *mut HsComplex) -> HsStatus {
    guard(|| {
        let w = map_arg(map)?.dilatation(z.into()).map_err(from_core)?;
        write_out(out, w.into())
    })
}

/// Signed curvature of the image of `|z| = r` at angle `t`.
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_curvature_at(map: *const HsMap, r: f64, t: f64, out: *mut f64) -> HsStatus {
    guard(|| write_out(out, curvature_at(map_arg(map)?, r, t).map_err(from_core)?))
}

/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_radius_of_convexity(map: *const HsMap, angles: usize, tol: f64, out: *mut f64) -> HsStatus {
    guard(|| write_out(out, radius_of_convexity(map_arg(map)?, angles, tol).map_err(from_core)?))
}

/// Coefficient bounds for `2 <= n <= max_n`; `class` is one of `SH0S`,
/// `CH0C`, `SHS`, `CHC`.
///
/// # Safety
/// `class` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_check_coeff_bounds(
    map: *const HsMap,
    max_n: usize,
    class: *const c_char,
    out: *mut *mut HsReport,
) -> HsStatus {
    guard(|| {
        let f = map_arg(map)?;
        let class: CoeffClass = str_arg(class)?.parse().map_err(from_core)?;
        let report = check_coeff_bounds(f, max_n, class, &Tolerances::default()).map_err(from_core)?;
        write_out(out, Box::into_raw(Box::new(HsReport { inner: report })))
    })
}

/// Runs `growth`, `jacobian`, `derivative` or `local` on the default 32 x 128
/// grid with `r_max = 0.95` and the constants `(3, 5/2, 1/2)`.
///
/// # Safety
/// `check` must be a nul-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_check_grid(map: *const HsMap, check: *const c_char, out: *mut *mut HsReport) -> HsStatus {
    guard(|| {
        let f = map_arg(map)?;
        let kind: CheckKind = str_arg(check)?.parse().map_err(from_core)?;
        let (grid, c, tol) = (GridSpec::default(), FamilyConstants::stable_slice_class(), Tolerances::default());
        let report = match kind {
            CheckKind::Growth => verify::growth_check(f, &grid, &c, &tol).map_err(from_core)?,
            CheckKind::Jacobian => verify::jacobian_bounds_check(f, &grid, &c, &tol),
            CheckKind::Derivative => verify::derivative_bounds_check(f, &grid, &c, &tol),
            CheckKind::Local => verify::local_univalence_check(f, &grid),
            other => {
                return Err((HsStatus::InvalidArgument, format!("{other:?} is not a grid check")));
            }
        };
        write_out(out, Box::into_raw(Box::new(HsReport { inner: report })))
    })
}

/// # Safety
/// `report` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn hs_report_free(report: *mut HsReport) {
    if !report.is_null() {
        drop(Box::from_raw(report));
    }
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_report_passed(report: *const HsReport, out: *mut bool) -> HsStatus {
    guard(|| write_out(out, report.as_ref().ok_or_else(null)?.inner.passed))
}

/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_report_worst_margin(report: *const HsReport, out: *mut f64) -> HsStatus {
    guard(|| write_out(out, report.as_ref().ok_or_else(null)?.inner.worst_margin))
}

/// JSON text of the report; release with [`hs_string_free`].
///
/// # Safety
/// `report` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_report_to_json(report: *const HsReport, out: *mut *mut c_char) -> HsStatus {
    guard(|| write_out(out, into_c_string(report.as_ref().ok_or_else(null)?.inner.to_json())))
}

/// SVG image of `rays` radial segments and `circles` concentric circles of
/// radius up to `r_max`; release with [`hs_string_free`].
///
/// # Safety
/// `map` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn hs_render_svg(
    map: *const HsMap,
    rays: usize,
    circles: usize,
    r_max: f64,
    out: *mut *mut c_char,
) -> HsStatus {
    guard(|| {
        let f = map_arg(map)?;
        let spec = RenderSpec { rays, circles, r_max, ..Default::default() };
        let svg = render_grid(|z| f.eval(z), &spec).map_err(from_core)?;
        write_out(out, into_c_string(svg))
    })
}
