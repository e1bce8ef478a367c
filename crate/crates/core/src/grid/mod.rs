//! Hierarchical equal-volume grid of the octahedron and, through the inverse
//! map, of the ball.
//!
//! The octahedron is split into four congruent root tetrahedra, one per pair of
//! octants sharing the `x`/`y` signs. Every cell is refined into eight children
//! of equal volume by averaging its vertices, so a level-`j` vertex always lies
//! on the dyadic lattice `(a / 2^j) · ℤ³`. Cells store integer lattice
//! coordinates, which makes volumes and vertex containment exact.

mod address;
mod cell;
mod locate;
mod mesh;

pub use address::{cell_at, cells_at_level, kinds_at_level, CellAddress, NUM_ROOTS};
pub use cell::{base_cells, cell_volume, subdivide, subdivide_m, subdivide_t, Cell, LatticeVertex};
pub use locate::{contains, contains_lattice, locate, Containment, FLOAT_SIGN_TOL};
pub use mesh::{ball_cell_mesh, SurfaceMesh};

use serde::{Deserialize, Serialize};

/// Deepest refinement level supported by the integer lattice.
pub const MAX_LEVEL: u32 = 24;

/// The two tetrahedron shapes of the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CellKind {
    T,
    M,
}

impl CellKind {
    /// Kind of child `child` (numbered `1..=8`) of a cell of this kind.
    ///
    /// A T cell yields T children `1..=6` and M children `7, 8`; an M cell
    /// yields T children `1..=4` and M children `5..=8`.
    pub fn child_kind(self, child: u8) -> CellKind {
        debug_assert!((1..=8).contains(&child));
        let first_m = match self {
            CellKind::T => 7,
            CellKind::M => 5,
        };
        if child >= first_m {
            CellKind::M
        } else {
            CellKind::T
        }
    }
}

/// Number of T and M cells at level `j` descending from a single root cell.
///
/// Closed forms `t_j = 2^j (2^(2j+1) + 1) / 3` and `m_j = 2^j (2^(2j) - 1) / 3`.
/// Valid for `j <= 20`.
pub fn counts(j: u32) -> (u64, u64) {
    assert!(j <= 20, "counts overflow beyond level 20");
    let p = 1u128 << j;
    let q = 1u128 << (2 * j);
    let t = p * (2 * q + 1) / 3;
    let m = p * (q - 1) / 3;
    (t as u64, m as u64)
}

/// Number of cells tiling the whole octahedron at level `j`, `4 · 8^j`.
pub fn total_cells(j: u32) -> usize {
    NUM_ROOTS << (3 * j)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn by_recurrence(j: u32) -> (u64, u64) {
        let (mut t, mut m) = (1u64, 0u64);
        for _ in 0..j {
            (t, m) = (6 * t + 4 * m, 2 * t + 4 * m);
        }
        (t, m)
    }

    #[test]
    fn counts_match_recurrence() {
        assert_eq!(counts(0), (1, 0));
        assert_eq!(counts(1), (6, 2));
        assert_eq!(counts(2), (44, 20));
        assert_eq!(counts(3), (344, 168));
        for j in 0..=20 {
            let (t, m) = counts(j);
            assert_eq!((t, m), by_recurrence(j), "level {j}");
            assert_eq!(t + m, 8u64.pow(j));
        }
    }

    #[test]
    fn whole_octahedron_second_level_census() {
        let (t, m) = counts(2);
        assert_eq!(4 * t, 176);
        assert_eq!(4 * m, 80);
        assert_eq!(total_cells(2), 256);
    }

    #[test]
    fn child_kinds() {
        let t: Vec<_> = (1..=8).map(|k| CellKind::T.child_kind(k)).collect();
        assert_eq!(t.iter().filter(|&&k| k == CellKind::T).count(), 6);
        assert_eq!(&t[6..], &[CellKind::M, CellKind::M]);
        let m: Vec<_> = (1..=8).map(|k| CellKind::M.child_kind(k)).collect();
        assert_eq!(&m[..4], &[CellKind::T; 4]);
        assert_eq!(&m[4..], &[CellKind::M; 4]);
    }
}
