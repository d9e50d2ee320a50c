#ifndef HARMONIC_SHEAR_H
#define HARMONIC_SHEAR_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

// Which half of `f = h + conj(g)`.
typedef enum HsPart {
  HS_PART_ANALYTIC = 0,
  HS_PART_CO_ANALYTIC = 1,
} HsPart;

typedef enum HsStatus {
  HS_STATUS_OK = 0,
  HS_STATUS_NULL_POINTER = 1,
  HS_STATUS_INVALID_UTF8 = 2,
  HS_STATUS_PARSE = 3,
  HS_STATUS_INVALID_ARGUMENT = 4,
  HS_STATUS_NUMERICAL = 5,
  HS_STATUS_PANIC = 6,
} HsStatus;

// Opaque harmonic map.
typedef struct HsMap HsMap;

// Opaque check report.
typedef struct HsReport HsReport;

typedef struct HsComplex {
  double re;
  double im;
} HsComplex;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread, or null. Valid until
// the next failing call on the same thread; do not free.
const char *hs_last_error(void);

// Library version as a static string.
const char *hs_version(void);

// Releases a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not have been freed.
void hs_string_free(char *s);

// Builds a map from its text form (`harmonic_koebe`, `f1(n=3)`,
// `shear phi=[0,1]/[1,-2,1] omega=[0,1] theta=pi`, ...). `order = 0`
// selects the default truncation order.
//
// # Safety
// `spec` must be a nul-terminated string; `out` must be writable.
enum HsStatus hs_map_parse(const char *spec, uintptr_t order, struct HsMap **out);

// # Safety
// `map` must come from [`hs_map_parse`] and not have been freed. Null is ignored.
void hs_map_free(struct HsMap *map);

// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_map_order(const struct HsMap *map, uintptr_t *out);

// Copies coefficients `0..min(len, order + 1)` of `h` or `g` into `out`.
//
// # Safety
// `out` must point to `len` writable elements.
enum HsStatus hs_map_coeffs(const struct HsMap *map,
                            enum HsPart part,
                            struct HsComplex *out,
                            uintptr_t len);

// `f(z)`.
//
// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_map_eval(const struct HsMap *map, struct HsComplex z, struct HsComplex *out);

// `|h'(z)|^2 - |g'(z)|^2`.
//
// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_map_jacobian(const struct HsMap *map, struct HsComplex z, double *out);

// `g'(z) / h'(z)`; `HS_STATUS_NUMERICAL` at a critical point of `h`.
//
// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_map_dilatation(const struct HsMap *map, struct HsComplex z, struct HsComplex *out);

// Signed curvature of the image of `|z| = r` at angle `t`.
//
// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_curvature_at(const struct HsMap *map, double r, double t, double *out);

// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_radius_of_convexity(const struct HsMap *map,
                                     uintptr_t angles,
                                     double tol,
                                     double *out);

// Coefficient bounds for `2 <= n <= max_n`; `class` is one of `SH0S`,
// `CH0C`, `SHS`, `CHC`.
//
// # Safety
// `class` must be a nul-terminated string; `out` must be writable.
enum HsStatus hs_check_coeff_bounds(const struct HsMap *map,
                                    uintptr_t max_n,
                                    const char *class_,
                                    struct HsReport **out);

// Runs `growth`, `jacobian`, `derivative` or `local` on the default 32 x 128
// grid with `r_max = 0.95` and the constants `(3, 5/2, 1/2)`.
//
// # Safety
// `check` must be a nul-terminated string; `out` must be writable.
enum HsStatus hs_check_grid(const struct HsMap *map, const char *check, struct HsReport **out);

// # Safety
// `report` must come from this library and not have been freed. Null is ignored.
void hs_report_free(struct HsReport *report);

// # Safety
// `report` must be a live handle; `out` must be writable.
enum HsStatus hs_report_passed(const struct HsReport *report, bool *out);

// # Safety
// `report` must be a live handle; `out` must be writable.
enum HsStatus hs_report_worst_margin(const struct HsReport *report, double *out);

// JSON text of the report; release with [`hs_string_free`].
//
// # Safety
// `report` must be a live handle; `out` must be writable.
enum HsStatus hs_report_to_json(const struct HsReport *report, char **out);

// SVG image of `rays` radial segments and `circles` concentric circles of
// radius up to `r_max`; release with [`hs_string_free`].
//
// # Safety
// `map` must be a live handle; `out` must be writable.
enum HsStatus hs_render_svg(const struct HsMap *map,
                            uintptr_t rays,
                            uintptr_t circles,
                            double r_max,
                            char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* HARMONIC_SHEAR_H */
