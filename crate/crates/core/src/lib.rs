//! Exact arithmetic for size functions on weighted projective spaces over
//! number fields, point counting against the leading asymptotic constant,
//! size-comparison machinery for morphisms of weighted projective lines,
//! and a census of elliptic curves with prescribed level structure.
//!
//! Supported base fields are the rationals and the five imaginary-quadratic
//! fields of class number one with finite unit group handled exactly
//! (d = -1, -2, -3, -7, -11); every fractional ideal is principal there,
//! which keeps all ideal arithmetic in factored, canonical form.

pub mod census;
pub mod cli;
pub mod elliptic;
pub mod enumerate;
pub mod graded;
pub mod numfield;
pub mod verify;
pub mod wpoint;

use thiserror::Error;

/// Crate-wide error type. Domain violations are reported here; programmer
/// errors (mixing elements of different fields, off-curve points in internal
/// arithmetic) panic instead.
#[derive(Debug, Error)]
pub enum Error {
    #[error("valuation of zero undefined")]
    ValuationOfZero,
    #[error("all coordinates are zero")]
    AllZeroTuple,
    #[error("pole or divergent")]
    PoleOrDivergent,
    #[error("unsupported field: {0}")]
    UnsupportedField(String),
    #[error("exponent {0} is not a common multiple of the weights")]
    NotCommonMultiple(u32),
    #[error("points live in different spaces")]
    SpaceMismatch,
    #[error("no reduced degree: degrees of the pair are not proportional to the target weights")]
    NoReducedDegree,
    #[error("condition (ii) fails: the pair has a common zero away from the origin")]
    CommonZero,
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("relation search exceeded cap")]
    RelationSearchCap,
    #[error("singular curve")]
    SingularCurve,
    #[error("point is not on the curve")]
    PointOffCurve,
    #[error("insufficient data")]
    InsufficientData,
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("invariant failure: {0}")]
    Invariant(String),
    #[error("validation failure: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
