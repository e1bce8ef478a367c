use crate::error::{Error, Result};
use crate::map::{BallGeometry, OctPoint};

use super::CellKind;

/// A point of the level-`level` lattice, representing
/// `(a / 2^level) · coords`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LatticeVertex {
    pub level: u32,
    pub coords: [i64; 3],
}

impl LatticeVertex {
    pub fn new(level: u32, coords: [i64; 3]) -> Self {
        Self { level, coords }
    }

    /// Whether the vertex lies in the closed octahedron.
    pub fn in_octahedron(&self) -> bool {
        self.coords.iter().map(|c| c.unsigned_abs()).sum::<u64>() <= 1u64 << self.level
    }

    /// The same point expressed on a finer lattice.
    pub fn refine_to(&self, level: u32) -> Self {
        assert!(level >= self.level);
        let shift = level - self.level;
        Self {
            level,
            coords: self.coords.map(|c| c << shift),
        }
    }

    pub fn to_oct_point(&self, geo: &BallGeometry) -> OctPoint {
        let h = lattice_step(geo, self.level);
        OctPoint::new(
            self.coords[0] as f64 * h,
            self.coords[1] as f64 * h,
            self.coords[2] as f64 * h,
        )
    }
}

pub(crate) fn lattice_step(geo: &BallGeometry, level: u32) -> f64 {
    geo.half_diagonal() / (1u64 << level) as f64
}

/// A tetrahedral grid cell with its vertices on the level lattice.
///
/// T cells keep the ordering where vertices 1 and 2 share `x, y`, vertex 1 is
/// the higher one, and vertices 3 and 4 sit at their mean altitude. M cells
/// are regular tetrahedra whose vertices form two pairs of equal altitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cell {
    kind: CellKind,
    level: u32,
    vertices: [[i64; 3]; 4],
}

impl Cell {
    pub fn new(kind: CellKind, level: u32, vertices: [[i64; 3]; 4]) -> Self {
        Self {
            kind,
            level,
            vertices,
        }
    }

    #[inline]
    pub fn kind(&self) -> CellKind {
        self.kind
    }

    #[inline]
    pub fn level(&self) -> u32 {
        self.level
    }

    /// Integer lattice coordinates of the four vertices at [`Cell::level`].
    #[inline]
    pub fn lattice_coords(&self) -> &[[i64; 3]; 4] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> LatticeVertex {
        LatticeVertex::new(self.level, self.vertices[i])
    }

    pub fn vertex_points(&self, geo: &BallGeometry) -> [OctPoint; 4] {
        std::array::from_fn(|i| self.vertex(i).to_oct_point(geo))
    }

    /// `|det[p₂ - p₁, p₃ - p₁, p₄ - p₁]|` in lattice units, i.e. six times the
    /// volume measured in `(a / 2^level)³`. Equal to `2` for every grid cell.
    pub fn volume6_lattice(&self) -> u128 {
        self.signed_volume6_lattice().unsigned_abs()
    }

    /// Signed version of [`Cell::volume6_lattice`]; positive when the vertex
    /// order is right-handed.
    pub fn signed_volume6_lattice(&self) -> i128 {
        let [p1, p2, p3, p4] = self.vertices;
        det3_i(sub(p2, p1), sub(p3, p1), sub(p4, p1))
    }

    /// Centroid as a vertex of the lattice two levels finer.
    pub fn centroid_lattice(&self) -> LatticeVertex {
        let mut c = [0i64; 3];
        for v in &self.vertices {
            for k in 0..3 {
                c[k] += v[k];
            }
        }
        LatticeVertex::new(self.level + 2, c)
    }

    pub fn centroid(&self, geo: &BallGeometry) -> OctPoint {
        self.centroid_lattice().to_oct_point(geo)
    }
}

#[inline]
pub(crate) fn sub(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

#[inline]
fn add(a: [i64; 3], b: [i64; 3]) -> [i64; 3] {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn det3_i(a: [i64; 3], b: [i64; 3], c: [i64; 3]) -> i128 {
    let [a0, a1, a2] = a.map(i128::from);
    let [b0, b1, b2] = b.map(i128::from);
    let [c0, c1, c2] = c.map(i128::from);
    a0 * (b1 * c2 - b2 * c1) - b0 * (a1 * c2 - a2 * c1) + c0 * (a1 * b2 - a2 * b1)
}

/// The four level-0 T cells tiling the octahedron, one per octant pair
/// `{x ≥ 0, y ≥ 0}`, `{x ≤ 0, y ≥ 0}`, `{x ≤ 0, y ≤ 0}`, `{x ≥ 0, y ≤ 0}`.
///
/// Each is ordered `[C, D, A, B]` with `C = (0, 0, 1)`, `D = (0, 0, -1)` and
/// `A`, `B` the equatorial vertices taken counter-clockwise, so that the two
/// polar vertices come first as the T ordering requires.
pub fn base_cells() -> [Cell; 4] {
    let equator = [[1, 0, 0], [0, 1, 0], [-1, 0, 0], [0, -1, 0]];
    std::array::from_fn(|i| {
        Cell::new(
            CellKind::T,
            0,
            [[0, 0, 1], [0, 0, -1], equator[i], equator[(i + 1) % 4]],
        )
    })
}

/// Eight children of a T cell, numbered `1..=8`; children 1-6 are T cells and
/// 7, 8 are M cells.
pub fn subdivide_t(c: &Cell) -> Result<[Cell; 8]> {
    if c.kind != CellKind::T {
        return Err(Error::WrongKind {
            expected: CellKind::T,
            found: c.kind,
        });
    }
    let [p1, p2, p3, p4] = c.vertices;
    let m = |a, b| add(a, b);
    let lvl = c.level + 1;
    let t = |v| Cell::new(CellKind::T, lvl, v);
    let mm = |v| Cell::new(CellKind::M, lvl, v);
    Ok([
        t([m(p1, p1), m(p1, p2), m(p1, p3), m(p1, p4)]),
        t([m(p2, p1), m(p2, p2), m(p2, p3), m(p2, p4)]),
        t([m(p3, p1), m(p3, p2), m(p3, p3), m(p3, p4)]),
        t([m(p4, p1), m(p4, p2), m(p4, p3), m(p4, p4)]),
        t([m(p1, p3), m(p2, p3), m(p3, p4), m(p1, p2)]),
        t([m(p1, p4), m(p2, p4), m(p1, p2), m(p3, p4)]),
        mm([m(p1, p2), m(p1, p3), m(p1, p4), m(p3, p4)]),
        mm([m(p1, p2), m(p2, p3), m(p2, p4), m(p3, p4)]),
    ])
}

/// Eight children of an M cell, numbered `1..=8`; children 1-4 are the T
/// cells of the central octahedron, 5-8 the corner M cells.
///
/// The central cells are built from midpoints of vertex pairs after sorting
/// the vertices by `z`, `x` and `y`. The sorts are stable; equal-key pairs
/// have the same midpoint whatever their order.
pub fn subdivide_m(c: &Cell) -> Result<[Cell; 8]> {
    if c.kind != CellKind::M {
        return Err(Error::WrongKind {
            expected: CellKind::M,
            found: c.kind,
        });
    }
    let p = c.vertices;
    let sorted_by = |axis: usize| {
        let mut v = p;
        v.sort_by_key(|q| q[axis]);
        v
    };
    let q = sorted_by(2);
    let r = sorted_by(0);
    let s = sorted_by(1);
    let top = add(q[2], q[3]);
    let bottom = add(q[0], q[1]);
    let r_lo = add(r[0], r[1]);
    let r_hi = add(r[2], r[3]);
    let s_lo = add(s[0], s[1]);
    let s_hi = add(s[2], s[3]);
    let lvl = c.level + 1;
    let t = |a, b| Cell::new(CellKind::T, lvl, [top, bottom, a, b]);
    let corner = |k: usize| {
        Cell::new(
            CellKind::M,
            lvl,
            [
                add(p[k], p[0]),
                add(p[k], p[1]),
                add(p[k], p[2]),
                add(p[k], p[3]),
            ],
        )
    };
    Ok([
        t(r_hi, s_hi),
        t(s_hi, r_lo),
        t(r_lo, s_lo),
        t(s_lo, r_hi),
        corner(0),
        corner(1),
        corner(2),
        corner(3),
    ])
}

/// Dispatches on the cell kind.
pub fn subdivide(c: &Cell) -> [Cell; 8] {
    match c.kind {
        CellKind::T => subdivide_t(c),
        CellKind::M => subdivide_m(c),
    }
    .expect("kind matches")
}

/// Volume of the cell in the octahedron, computed exactly on the lattice and
/// scaled by `(a / 2^level)³`.
pub fn cell_volume(c: &Cell, geo: &BallGeometry) -> f64 {
    let h = lattice_step(geo, c.level);
    c.volume6_lattice() as f64 / 6.0 * h * h * h
}
