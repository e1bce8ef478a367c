//! Haar-type multiresolution analysis on the octahedron grid, carried to the
//! ball by composition with the volume-preserving map.
//!
//! Signals are stored as coefficients in the orthonormal scaling basis of a
//! fine level. Each refinement step mixes the eight children of a cell with an
//! 8×8 orthogonal filter matrix whose first row is constant.

mod ball;
mod basis;
mod compress;
mod filter;
mod transform;

pub use ball::{
    evaluate, project_ball_function, project_ball_function_with_errors, PiecewiseConstant,
    Quadrature,
};
pub use basis::{basis_function, materialize_basis};
pub use compress::{compensated_sum, l2_distance, threshold_compress, CompressionStats};
pub use filter::{
    check_filter, haar_matrix, orthogonality_defect, symmetric_entries, symmetric_matrix,
    tensor_haar_matrix, validate_filter, FilterBank, FilterLabel, FilterMatrix, Sign, FILTER_TOL,
    SCALING_ENTRY,
};
pub use transform::{
    analyze_full, analyze_step, norm_factor, synthesize_full, synthesize_step, CoefficientTree,
    FineSignal,
};
