use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::map::{oct_to_ball, BallGeometry, OctPoint};

use super::address::{cell_at, CellAddress};
use super::cell::{det3_i, lattice_step, sub};

/// Closed triangle surface with outward-oriented faces.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurfaceMesh {
    pub vertices: Vec<[f64; 3]>,
    pub triangles: Vec<[usize; 3]>,
}

/// Surface of the curved ball cell `U⁻¹(cell)`.
///
/// Each face of the octahedral cell is split into `n²` triangles on a regular
/// barycentric grid; grid points are shared along edges so the surface is
/// watertight, and every point is mapped through the inverse map.
pub fn ball_cell_mesh(addr: &CellAddress, n: usize, geo: &BallGeometry) -> Result<SurfaceMesh> {
    if n == 0 {
        return Err(Error::InvalidAddress(
            "surface subdivision count must be >= 1".into(),
        ));
    }
    let cell = cell_at(addr);
    let v = *cell.lattice_coords();
    let step = lattice_step(geo, cell.level()) / n as f64;

    let mut index: HashMap<[usize; 4], usize> = HashMap::new();
    let mut mesh = SurfaceMesh::default();
    let mut vertex_id = |bary: [usize; 4], mesh: &mut SurfaceMesh| -> Result<usize> {
        if let Some(&id) = index.get(&bary) {
            return Ok(id);
        }
        let mut q = [0.0; 3];
        for k in 0..3 {
            let s: i64 = (0..4).map(|i| bary[i] as i64 * v[i][k]).sum();
            q[k] = s as f64 * step;
        }
        let p = oct_to_ball(&OctPoint::from(q), geo)?;
        let id = mesh.vertices.len();
        mesh.vertices.push(p.to_array());
        index.insert(bary, id);
        Ok(id)
    };

    for opposite in 0..4 {
        let mut face: Vec<usize> = (0..4).filter(|&i| i != opposite).collect();
        // Outward orientation: the opposite vertex must lie below the face.
        let d = det3_i(
            sub(v[face[1]], v[face[0]]),
            sub(v[face[2]], v[face[0]]),
            sub(v[opposite], v[face[0]]),
        );
        if d > 0 {
            face.swap(1, 2);
        }
        let point = |i: usize, j: usize| {
            let mut b = [0usize; 4];
            b[face[0]] = n - i - j;
            b[face[1]] = i;
            b[face[2]] = j;
            b
        };
        for i in 0..n {
            for j in 0..n - i {
                let a = vertex_id(point(i, j), &mut mesh)?;
                let b = vertex_id(point(i + 1, j), &mut mesh)?;
                let c = vertex_id(point(i, j + 1), &mut mesh)?;
                mesh.triangles.push([a, b, c]);
                if i + j + 2 <= n {
                    let d = vertex_id(point(i + 1, j + 1), &mut mesh)?;
                    mesh.triangles.push([b, d, c]);
                }
            }
        }
    }
    Ok(mesh)
}

impl SurfaceMesh {
    /// Signed enclosed volume by the divergence theorem.
    pub fn enclosed_volume(&self) -> f64 {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i]);
                (a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
                    + c[0] * (a[1] * b[2] - a[2] * b[1]))
                    / 6.0
            })
            .sum()
    }
}
