use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::grid::{kinds_at_level, total_cells};
use crate::map::BallGeometry;

use super::compress::compensated_sum;
use super::filter::{FilterBank, FilterMatrix};

/// Value of the normalized scaling function of a level-`level` cell,
/// `(2√2)^level · 2 / √vol(K)`, so that it has unit `L²` norm.
pub fn norm_factor(level: u32, geo: &BallGeometry) -> f64 {
    (2.0 * SQRT_2).powi(level as i32) * 2.0 / geo.octahedron_volume().sqrt()
}

/// Coefficients of a function in the orthonormal scaling basis of level
/// `level`, one per cell in depth-first address order.
#[derive(Debug, Clone, PartialEq)]
pub struct FineSignal {
    pub level: u32,
    pub geometry: BallGeometry,
    pub values: Vec<f64>,
}

impl FineSignal {
    pub fn new(level: u32, geometry: BallGeometry, values: Vec<f64>) -> Result<Self> {
        let expected = total_cells(level);
        if values.len() != expected {
            return Err(Error::LevelMismatch(format!(
                "level {level} needs {expected} values, got {}",
                values.len()
            )));
        }
        Ok(Self {
            level,
            geometry,
            values,
        })
    }

    pub fn norm(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v * v)).sqrt()
    }
}

/// Multiresolution representation: four level-0 scaling coefficients and, for
/// every level `j < level` and every level-`j` cell, seven wavelet
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTree {
    pub level: u32,
    pub geometry: BallGeometry,
    pub scaling: [f64; 4],
    /// `details[j][k]` belongs to the `k`-th cell of level `j`.
    pub details: Vec<Vec<[f64; 7]>>,
}

impl CoefficientTree {
    pub fn zeros(level: u32, geometry: BallGeometry) -> Self {
        Self {
            level,
            geometry,
            scaling: [0.0; 4],
            details: (0..level).map(|j| vec![[0.0; 7]; total_cells(j)]).collect(),
        }
    }

    /// `4 · 8^level`, the dimension of the fine space.
    pub fn num_coefficients(&self) -> usize {
        total_cells(self.level)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.details.len() != self.level as usize {
            return Err(Error::LevelMismatch(format!(
                "tree of level {} has {} detail levels",
                self.level,
                self.details.len()
            )));
        }
        for (j, d) in self.details.iter().enumerate() {
            if d.len() != total_cells(j as u32) {
                return Err(Error::LevelMismatch(format!(
                    "detail level {j} has {} cells, expected {}",
                    d.len(),
                    total_cells(j as u32)
                )));
            }
        }
        Ok(())
    }

    /// Canonical flat order: the four scaling coefficients, then for each
    /// level `j = 0, 1, ...` the level-`j` cells in address order, seven
    /// coefficients `ℓ = 1..=7` each.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.num_coefficients());
        out.extend_from_slice(&self.scaling);
        for level in &self.details {
            for d in level {
                out.extend_from_slice(d);
            }
        }
        out
    }

    pub fn from_flat(level: u32, geometry: BallGeometry, flat: &[f64]) -> Result<Self> {
        let expected = total_cells(level);
        if flat.len() != expected {
            return Err(Error::LevelMismatch(format!(
                "level {level} needs {expected} coefficients, got {}",
                flat.len()
            )));
        }
        let scaling = [flat[0], flat[1], flat[2], flat[3]];
        let mut rest = &flat[4..];
        let mut details = Vec::with_capacity(level as usize);
        for j in 0..level {
            let n = total_cells(j);
            let (head, tail) = rest.split_at(7 * n);
            details.push(
                head.chunks_exact(7)
                    .map(|c| std::array::from_fn(|i| c[i]))
                    .collect(),
            );
            rest = tail;
        }
        Ok(Self {
            level,
            geometry,
            scaling,
            details,
        })
    }

    pub fn norm(&self) -> f64 {
        compensated_sum(self.to_flat().iter().map(|v| v * v)).sqrt()
    }

    /// Copy with every detail of level `>= level` set to zero; its
    /// reconstruction lies in the coarse space of that level.
    pub fn truncated(&self, level: u32) -> Self {
        let mut t = self.clone();
        for d in t.details.iter_mut().skip(level as usize) {
            d.iter_mut().for_each(|c| *c = [0.0; 7]);
        }
        t
    }
}

/// One analysis step: parent scaling coefficient from row 1, wavelet
/// coefficients from rows 2..=8.
pub fn analyze_step(children: &[f64; 8], f: &FilterMatrix) -> (f64, [f64; 7]) {
    let rows = f.rows();
    let dot = |r: &[f64; 8]| r.iter().zip(children).map(|(a, b)| a * b).sum::<f64>();
    (dot(&rows[0]), std::array::from_fn(|l| dot(&rows[l + 1])))
}

/// Inverse of [`analyze_step`]: `children = Mᵀ · (s, d)`.
pub fn synthesize_step(s: f64, d: &[f64; 7], f: &FilterMatrix) -> [f64; 8] {
    let rows = f.rows();
    std::array::from_fn(|i| rows[0][i] * s + (0..7).map(|l| rows[l + 1][i] * d[l]).sum::<f64>())
}

/// Full decomposition of a fine signal down to level 0.
pub fn analyze_full(sig: &FineSignal, filters: &FilterBank) -> CoefficientTree {
    let mut current = sig.values.clone();
    let mut details = vec![Vec::new(); sig.level as usize];
    for j in (0..sig.level).rev() {
        let kinds = kinds_at_level(j);
        let (coarse, fine_details): (Vec<f64>, Vec<[f64; 7]>) = current
            .chunks_exact(8)
            .zip(&kinds)
            .map(|(kids, &kind)| {
                let kids: &[f64; 8] = kids.try_into().expect("chunk of 8");
                analyze_step(kids, filters.for_kind(kind))
            })
            .unzip();
        details[j as usize] = fine_details;
        current = coarse;
    }
    CoefficientTree {
        level: sig.level,
        geometry: sig.geometry,
        scaling: [current[0], current[1], current[2], current[3]],
        details,
    }
}

/// Reconstruction of the fine signal from a coefficient tree.
pub fn synthesize_full(tree: &CoefficientTree, filters: &FilterBank) -> Result<FineSignal> {
    tree.check_shape()?;
    let mut current = tree.scaling.to_vec();
    for j in 0..tree.level {
        let kinds = kinds_at_level(j);
        let mut next = Vec::with_capacity(current.len() * 8);
        for ((s, d), kind) in current.iter().zip(&tree.details[j as usize]).zip(&kinds) {
            next.extend_from_slice(&synthesize_step(*s, d, filters.for_kind(*kind)));
        }
        current = next;
    }
    FineSignal::new(tree.level, tree.geometry, current)
}
