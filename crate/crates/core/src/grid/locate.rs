//! Point-in-cell classification with five orientation determinants, and
//! point location by descent through the hierarchy.

use crate::error::{Error, Result};
use crate::map::{BallGeometry, OctPoint};

use super::address::CellAddress;
use super::cell::{base_cells, det3_i, lattice_step, sub, subdivide, Cell, LatticeVertex};

/// Sign tolerance for determinants evaluated in floating point, in lattice
/// units of the cell's level (where a cell's own determinant is `±2`).
pub const FLOAT_SIGN_TOL: f64 = 1e-10;

/// Where a point lies relative to a closed tetrahedral cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Containment {
    Interior,
    OnFace,
    OnEdge,
    AtVertex,
    Outside,
}

impl Containment {
    pub fn is_inside(self) -> bool {
        self != Containment::Outside
    }
}

/// Classifies from the signs `d₁..d₅`, with `d₅` the orientation of the cell
/// itself and `d₁..d₄` the orientations with one vertex replaced by the point.
fn classify(signs: [i8; 5]) -> Result<Containment> {
    if signs[4] == 0 {
        return Err(Error::DegenerateCell);
    }
    let v: i32 = signs.iter().map(|s| i32::from(s.abs())).sum();
    let sum: i32 = signs.iter().map(|&s| i32::from(s)).sum();
    if sum.abs() != v {
        return Ok(Containment::Outside);
    }
    Ok(match v {
        5 => Containment::Interior,
        4 => Containment::OnFace,
        3 => Containment::OnEdge,
        _ => Containment::AtVertex,
    })
}

// The 4×4 determinant with columns (pᵢ, 1) equals -det[p₂-p₁, p₃-p₁, p₄-p₁];
// the common sign flip does not affect the classification, so it is dropped.
fn orient_i(a: [i64; 3], b: [i64; 3], c: [i64; 3], d: [i64; 3]) -> i8 {
    det3_i(sub(b, a), sub(c, a), sub(d, a)).signum() as i8
}

fn orient_f(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> f64 {
    let u = [b[0] - a[0], b[1] - a[1], b[2] - a[2]];
    let v = [c[0] - a[0], c[1] - a[1], c[2] - a[2]];
    let w = [d[0] - a[0], d[1] - a[1], d[2] - a[2]];
    u[0] * (v[1] * w[2] - v[2] * w[1]) - v[0] * (u[1] * w[2] - u[2] * w[1])
        + w[0] * (u[1] * v[2] - u[2] * v[1])
}

/// Five determinants for a cell and a point, in the order `d₁..d₅`.
fn determinants_f(cell: &Cell, p: [f64; 3]) -> [f64; 5] {
    let [p1, p2, p3, p4] = cell.lattice_coords().map(|v| v.map(|c| c as f64));
    [
        orient_f(p1, p2, p3, p),
        orient_f(p1, p2, p, p4),
        orient_f(p1, p, p3, p4),
        orient_f(p, p2, p3, p4),
        orient_f(p1, p2, p3, p4),
    ]
}

fn scaled(cell: &Cell, p: &OctPoint, geo: &BallGeometry) -> [f64; 3] {
    let inv = 1.0 / lattice_step(geo, cell.level());
    [p.x * inv, p.y * inv, p.z * inv]
}

/// Exact classification of a lattice point. The point may live on a finer
/// lattice than the cell; the cell is then refined to the point's level.
pub fn contains_lattice(cell: &Cell, p: &LatticeVertex) -> Result<Containment> {
    let level = p.level.max(cell.level());
    let shift_cell = level - cell.level();
    let q = p.refine_to(level).coords;
    let [p1, p2, p3, p4] = cell.lattice_coords().map(|v| v.map(|c| c << shift_cell));
    classify([
        orient_i(p1, p2, p3, q),
        orient_i(p1, p2, q, p4),
        orient_i(p1, q, p3, p4),
        orient_i(q, p2, p3, p4),
        orient_i(p1, p2, p3, p4),
    ])
}

/// Floating-point classification of an arbitrary octahedron point.
///
/// The point is scaled onto the cell's lattice and determinants within
/// [`FLOAT_SIGN_TOL`] of zero count as zero. Interior/outside decisions are
/// reliable at that tolerance; the face/edge/vertex split is best-effort.
pub fn contains(cell: &Cell, p: &OctPoint, geo: &BallGeometry) -> Result<Containment> {
    let d = determinants_f(cell, scaled(cell, p, geo));
    classify(d.map(|x| {
        if x.abs() <= FLOAT_SIGN_TOL {
            0
        } else {
            x.signum() as i8
        }
    }))
}

/// Smallest barycentric coordinate of `p` in `cell`; negative outside.
fn min_barycentric(cell: &Cell, p: &OctPoint, geo: &BallGeometry) -> f64 {
    let d = determinants_f(cell, scaled(cell, p, geo));
    d[..4]
        .iter()
        .map(|x| x / d[4])
        .fold(f64::INFINITY, f64::min)
}

/// Index of the first candidate not classified outside. When rounding leaves
/// every candidate outside, falls back to the one with the largest minimal
/// barycentric coordinate.
fn first_owner(cells: &[Cell], p: &OctPoint, geo: &BallGeometry) -> usize {
    for (i, c) in cells.iter().enumerate() {
        if contains(c, p, geo)
            .map(Containment::is_inside)
            .unwrap_or(false)
        {
            return i;
        }
    }
    cells
        .iter()
        .enumerate()
        .map(|(i, c)| (i, min_barycentric(c, p, geo)))
        .fold((0, f64::NEG_INFINITY), |best, cur| {
            if cur.1 > best.1 {
                cur
            } else {
                best
            }
        })
        .0
}

/// Address of the level-`level` cell owning `p`.
///
/// Descends from the roots, taking at each step the first child in child
/// order whose closed cell contains the point, so points on shared faces,
/// edges and vertices get a deterministic owner.
pub fn locate(p: &OctPoint, level: u32, geo: &BallGeometry) -> Result<CellAddress> {
    if !geo.contains_oct_point(p) {
        return Err(Error::PointOutsideOctahedron {
            l1_norm: p.l1_norm(),
            half_diagonal: geo.half_diagonal(),
        });
    }
    if level > super::MAX_LEVEL {
        return Err(Error::InvalidAddress(format!(
            "level {level} exceeds {}",
            super::MAX_LEVEL
        )));
    }
    let roots = base_cells();
    let root = first_owner(&roots, p, geo);
    let mut cell = roots[root];
    let mut path = Vec::with_capacity(level as usize);
    for _ in 0..level {
        let kids = subdivide(&cell);
        let k = first_owner(&kids, p, geo);
        path.push(k as u8 + 1);
        cell = kids[k];
    }
    CellAddress::new(root as u8, path)
}
