//! Volume-preserving map between the ball and the regular octahedron, the
//! hierarchical equal-volume grid it induces on both solids, and orthonormal
//! Haar-type wavelets on the ball.
//!
//! ```
//! use ballgrid::map::{ball_to_oct, oct_to_ball, BallGeometry, CartesianPoint};
//!
//! let geo = BallGeometry::unit();
//! let p = CartesianPoint::new(0.3, -0.2, 0.5);
//! let q = ball_to_oct(&p, &geo).unwrap();
//! let back = oct_to_ball(&q, &geo).unwrap();
//! assert!(back.distance(&p) < 1e-12);
//! ```

pub mod error;
pub mod grid;
pub mod io;
pub mod map;
pub mod mra;
pub mod sampling;

pub use error::{Error, Result};
