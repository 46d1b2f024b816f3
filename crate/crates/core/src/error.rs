use thiserror::Error;

use crate::geometry::Param;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite sample at parameter {at}")]
    NonFiniteSample { at: f64 },

    #[error("director is stationary at u = {u} (cylindrical ruled surface)")]
    CylindricalDirector { u: f64 },

    #[error("jet is parametrized by {found:?}, expected {expected:?}")]
    TagError { expected: Param, found: Param },

    #[error("frame vectors are not unit and orthogonal (deviation {deviation:e})")]
    NonOrthogonalInput { deviation: f64 },

    #[error("empty input")]
    EmptyInput,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("sample vectors have no usable mean direction")]
    DegenerateSpan,

    #[error("s1 = {s1} lies outside the profile domain [{lo}, {hi}]")]
    OutOfDomain { s1: f64, lo: f64, hi: f64 },

    #[error("unknown catalog surface `{0}`")]
    UnknownCatalogName(String),

    #[error("bad parameters: {0}")]
    BadParams(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("conical curvature is not constant; the surface is not Darboux slant")]
    NotDarbouxSlant,
}
