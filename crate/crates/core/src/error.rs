use thiserror::Error;

use crate::grid::CellKind;

/// Errors raised by the geometric and multiresolution routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid geometry: radius must be finite and positive, got {0}")]
    InvalidGeometry(f64),

    #[error("point lies outside the ball: |p| = {norm} > r = {radius}")]
    PointOutsideBall { norm: f64, radius: f64 },

    #[error("point lies outside the octahedron: |X|+|Y|+|Z| = {l1_norm} > a = {half_diagonal}")]
    PointOutsideOctahedron { l1_norm: f64, half_diagonal: f64 },

    #[error("finite-difference stencil too close to a fold plane or the polar axis")]
    NearSingularity,

    #[error("expected a {expected:?} cell, got {found:?}")]
    WrongKind { expected: CellKind, found: CellKind },

    #[error("invalid cell address: {0}")]
    InvalidAddress(String),

    #[error("degenerate cell: its four vertices are coplanar")]
    DegenerateCell,

    #[error("filter matrix is not orthogonal (max |M Mᵀ - I| = {max_deviation:e})")]
    NotOrthogonal { max_deviation: f64 },

    #[error("filter matrix first row is not constant 1/(2√2) (max deviation {max_deviation:e})")]
    BadScalingRow { max_deviation: f64 },

    #[error("level mismatch: {0}")]
    LevelMismatch(String),

    #[error("quadrature produced a non-finite value in cell {cell}")]
    QuadratureFailure { cell: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
