//! Planar harmonic maps `f = h + conj(g)` on the unit disk built by the
//! shear construction, with truncated power-series arithmetic, numerical
//! checks of coefficient, distortion and curvature bounds, sampled
//! univalence tests, and an SVG renderer.
//!
//! ```
//! use harmonic_shear::{catalog, CatalogId};
//!
//! let k = catalog(CatalogId::HarmonicKoebe, 30).unwrap();
//! assert!((k.h().coeff(2).re - 2.5).abs() < 1e-12);
//! assert!((k.g().coeff(2).re - 0.5).abs() < 1e-12);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fnspec;
pub mod map;
pub mod render;
pub mod series;
pub mod shear;
pub mod verify;

pub use error::{Error, Result};
pub use fnspec::{parse_complex, FunctionSpec};
pub use map::{FamilyConstants, HarmonicMap};
pub use render::{render_grid, sample_grid, RenderSpec};
pub use series::Series;
pub use shear::{catalog, koebe, koebe_slice_coeff, shear, CatalogId, Rational, ShearSpec};

pub use num_complex::Complex64;
