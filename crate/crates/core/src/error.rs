use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("constant term {modulus:e} is too small to invert (threshold {threshold:e})")]
    NearZeroConstantTerm { modulus: f64, threshold: f64 },

    #[error("inner series of a composition must vanish at 0, found constant term of modulus {0:e}")]
    NonVanishingInnerTerm(f64),

    #[error("sampling radius {0} must lie in (0, 1)")]
    RadiusOutOfRange(f64),

    #[error("{samples} samples cannot resolve order {order}: need more than {}", 2 * order)]
    InsufficientSamples { samples: usize, order: usize },

    #[error("h'(z) vanishes at z = {re}{im:+}i")]
    CriticalPoint { re: f64, im: f64 },

    #[error("affine factor |b1| = {0} must be < 1")]
    AffineFactorOutOfDisk(f64),

    #[error("sampled sup |omega| = {sup} is not below 1 - {margin:e}")]
    DilatationNotBounded { sup: f64, margin: f64 },

    #[error("shear direction epsilon must be unimodular, |epsilon| = {0}")]
    NotUnimodular(f64),

    #[error("bad parameter: {0}")]
    BadParameter(String),

    #[error("series order {have} is below the requested order {need}")]
    OrderTooLow { have: usize, need: usize },

    #[error("map is not normalized with b1 = 0")]
    NotNormalized,

    #[error("image curve is stationary at r = {r}, t = {t}")]
    StationaryPoint { r: f64, t: f64 },

    #[error("image of |z| = {0} is already non-convex")]
    NeverConvex(f64),

    #[error("non-finite sample at z = {re}{im:+}i")]
    NonFiniteSample { re: f64, im: f64 },

    #[error("parse error at {pos}: {reason}")]
    Parse { pos: usize, reason: String },
}
