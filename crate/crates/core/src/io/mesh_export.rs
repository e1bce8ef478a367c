//! Wavefront OBJ and legacy ASCII VTK output for the grid of either solid.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::Result;
use crate::grid::{ball_cell_mesh, cells_at_level, CellAddress, CellKind, SurfaceMesh};
use crate::map::BallGeometry;

use super::format_num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Obj,
    Vtk,
}

impl FromStr for MeshFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "obj" => Ok(Self::Obj),
            "vtk" => Ok(Self::Vtk),
            other => Err(format!(
                "unknown mesh format {other:?} (expected obj or vtk)"
            )),
        }
    }
}

/// Which solid to export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Oct,
    Ball,
}

impl FromStr for Side {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "oct" | "octahedron" => Ok(Self::Oct),
            "ball" => Ok(Self::Ball),
            other => Err(format!("unknown side {other:?} (expected oct or ball)")),
        }
    }
}

/// The straight tetrahedral grid of the octahedron with shared vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct TetMesh {
    pub vertices: Vec<[f64; 3]>,
    /// Positively oriented: `det(v1 - v0, v2 - v0, v3 - v0) > 0`.
    pub tets: Vec<[usize; 4]>,
    pub kinds: Vec<CellKind>,
}

pub fn octahedron_grid(level: u32, geo: &BallGeometry) -> TetMesh {
    let cells = cells_at_level(level);
    let mut index: HashMap<[i64; 3], usize> = HashMap::new();
    let mut mesh = TetMesh {
        vertices: Vec::new(),
        tets: Vec::with_capacity(cells.len()),
        kinds: Vec::with_capacity(cells.len()),
    };
    for cell in &cells {
        let pts = cell.vertex_points(geo);
        let mut ids = [0usize; 4];
        for (i, c) in cell.lattice_coords().iter().enumerate() {
            ids[i] = *index.entry(*c).or_insert_with(|| {
                mesh.vertices.push(pts[i].to_array());
                mesh.vertices.len() - 1
            });
        }
        if cell.signed_volume6_lattice() < 0 {
            ids.swap(2, 3);
        }
        mesh.tets.push(ids);
        mesh.kinds.push(cell.kind());
    }
    mesh
}

/// Curved surface meshes of all ball cells of a level, in address order.
pub fn ball_grid(level: u32, n: usize, geo: &BallGeometry) -> Result<Vec<SurfaceMesh>> {
    (0..crate::grid::total_cells(level))
        .map(|k| ball_cell_mesh(&CellAddress::from_index(level, k)?, n, geo))
        .collect()
}

fn push_vertex(out: &mut String, prefix: &str, v: &[f64; 3]) {
    let _ = writeln!(
        out,
        "{prefix}{} {} {}",
        format_num(v[0]),
        format_num(v[1]),
        format_num(v[2])
    );
}

/// Faces of a positively oriented tetrahedron, wound outward.
const TET_FACES: [[usize; 3]; 4] = [[0, 2, 1], [0, 1, 3], [1, 2, 3], [0, 3, 2]];

pub fn tet_mesh_to_obj(mesh: &TetMesh, level: u32) -> String {
    let mut out = String::from("# ballgrid octahedron grid\n");
    for v in &mesh.vertices {
        push_vertex(&mut out, "v ", v);
    }
    for (k, t) in mesh.tets.iter().enumerate() {
        let addr = CellAddress::from_index(level, k).expect("index in range");
        let _ = writeln!(out, "g cell_{addr}");
        for f in TET_FACES {
            let _ = writeln!(out, "f {} {} {}", t[f[0]] + 1, t[f[1]] + 1, t[f[2]] + 1);
        }
    }
    out
}

pub fn tet_mesh_to_vtk(mesh: &TetMesh) -> String {
    let mut out = String::from(
        "# vtk DataFile Version 3.0\nballgrid octahedron grid\nASCII\nDATASET UNSTRUCTURED_GRID\n",
    );
    let _ = writeln!(out, "POINTS {} double", mesh.vertices.len());
    for v in &mesh.vertices {
        push_vertex(&mut out, "", v);
    }
    let n = mesh.tets.len();
    let _ = writeln!(out, "CELLS {n} {}", 5 * n);
    for t in &mesh.tets {
        let _ = writeln!(out, "4 {} {} {} {}", t[0], t[1], t[2], t[3]);
    }
    let _ = writeln!(out, "CELL_TYPES {n}");
    for _ in 0..n {
        out.push_str("10\n");
    }
    let _ = writeln!(out, "CELL_DATA {n}");
    out.push_str("SCALARS cell_id int 1\nLOOKUP_TABLE default\n");
    for k in 0..n {
        let _ = writeln!(out, "{k}");
    }
    out.push_str("SCALARS kind int 1\nLOOKUP_TABLE default\n");
    for k in &mesh.kinds {
        out.push_str(if *k == CellKind::T { "0\n" } else { "1\n" });
    }
    out
}

pub fn surfaces_to_obj(meshes: &[SurfaceMesh], level: u32) -> String {
    let mut out = String::from("# ballgrid ball grid\n");
    let mut offset = 1;
    for (k, m) in meshes.iter().enumerate() {
        let addr = CellAddress::from_index(level, k).expect("index in range");
        let _ = writeln!(out, "o cell_{addr}");
        for v in &m.vertices {
            push_vertex(&mut out, "v ", v);
        }
        for t in &m.triangles {
            let _ = writeln!(
                out,
                "f {} {} {}",
                t[0] + offset,
                t[1] + offset,
                t[2] + offset
            );
        }
        offset += m.vertices.len();
    }
    out
}

pub fn surfaces_to_vtk(meshes: &[SurfaceMesh]) -> String {
    let mut out = String::from(
        "# vtk DataFile Version 3.0\nballgrid ball grid\nASCII\nDATASET UNSTRUCTURED_GRID\n",
    );
    let n_points: usize = meshes.iter().map(|m| m.vertices.len()).sum();
    let n_tris: usize = meshes.iter().map(|m| m.triangles.len()).sum();
    let _ = writeln!(out, "POINTS {n_points} double");
    for v in meshes.iter().flat_map(|m| &m.vertices) {
        push_vertex(&mut out, "", v);
    }
    let _ = writeln!(out, "CELLS {n_tris} {}", 4 * n_tris);
    let mut offset = 0;
    for m in meshes {
        for t in &m.triangles {
            let _ = writeln!(
                out,
                "3 {} {} {}",
                t[0] + offset,
                t[1] + offset,
                t[2] + offset
            );
        }
        offset += m.vertices.len();
    }
    let _ = writeln!(out, "CELL_TYPES {n_tris}");
    for _ in 0..n_tris {
        out.push_str("5\n");
    }
    let _ = writeln!(out, "CELL_DATA {n_tris}");
    out.push_str("SCALARS cell_id int 1\nLOOKUP_TABLE default\n");
    for (k, m) in meshes.iter().enumerate() {
        for _ in &m.triangles {
            let _ = writeln!(out, "{k}");
        }
    }
    out
}
