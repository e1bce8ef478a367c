use std::fmt;

use crate::error::{Error, Result};

use super::cell::{base_cells, subdivide, Cell};
use super::{CellKind, MAX_LEVEL};

/// Number of level-0 cells.
pub const NUM_ROOTS: usize = 4;

/// Position of a cell in the hierarchy: a root index in `0..4` followed by
/// one child number in `1..=8` per refinement step.
///
/// Addresses of one level are ordered depth-first, which is also the order of
/// [`CellAddress::index`]: the children of the cell with index `k` occupy
/// indices `8k..8k + 8` one level down.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CellAddress {
    root: u8,
    path: Vec<u8>,
}

impl CellAddress {
    pub fn new(root: u8, path: Vec<u8>) -> Result<Self> {
        if usize::from(root) >= NUM_ROOTS {
            return Err(Error::InvalidAddress(format!("root {root} not in 0..4")));
        }
        if path.len() > MAX_LEVEL as usize {
            return Err(Error::InvalidAddress(format!(
                "depth {} exceeds maximum level {MAX_LEVEL}",
                path.len()
            )));
        }
        if let Some(bad) = path.iter().find(|c| !(1..=8).contains(*c)) {
            return Err(Error::InvalidAddress(format!(
                "child index {bad} not in 1..=8"
            )));
        }
        Ok(Self { root, path })
    }

    pub fn root(root: u8) -> Result<Self> {
        Self::new(root, Vec::new())
    }

    #[inline]
    pub fn root_index(&self) -> u8 {
        self.root
    }

    #[inline]
    pub fn path(&self) -> &[u8] {
        &self.path
    }

    #[inline]
    pub fn level(&self) -> u32 {
        self.path.len() as u32
    }

    pub fn child(&self, k: u8) -> Result<Self> {
        let mut path = self.path.clone();
        path.push(k);
        Self::new(self.root, path)
    }

    pub fn parent(&self) -> Option<Self> {
        let mut path = self.path.clone();
        path.pop().map(|_| Self {
            root: self.root,
            path,
        })
    }

    /// Truncates the path to `level` entries.
    pub fn ancestor(&self, level: u32) -> Option<Self> {
        (level <= self.level()).then(|| Self {
            root: self.root,
            path: self.path[..level as usize].to_vec(),
        })
    }

    /// Depth-first index among the `4 · 8^level` cells of this level.
    pub fn index(&self) -> usize {
        self.path.iter().fold(usize::from(self.root), |acc, &c| {
            acc * 8 + usize::from(c - 1)
        })
    }

    pub fn from_index(level: u32, index: usize) -> Result<Self> {
        if level > MAX_LEVEL {
            return Err(Error::InvalidAddress(format!(
                "level {level} exceeds {MAX_LEVEL}"
            )));
        }
        let count = super::total_cells(level);
        if index >= count {
            return Err(Error::InvalidAddress(format!(
                "index {index} out of range for level {level} ({count} cells)"
            )));
        }
        let mut path = vec![0u8; level as usize];
        let mut rest = index;
        for slot in path.iter_mut().rev() {
            *slot = (rest % 8) as u8 + 1;
            rest /= 8;
        }
        Ok(Self {
            root: rest as u8,
            path,
        })
    }
}

impl fmt::Display for CellAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        for c in &self.path {
            write!(f, ".{c}")?;
        }
        Ok(())
    }
}

/// Materializes the cell at `addr` by applying the subdivision rules along its
/// path.
pub fn cell_at(addr: &CellAddress) -> Cell {
    let mut cell = base_cells()[usize::from(addr.root)];
    for &k in &addr.path {
        cell = subdivide(&cell)[usize::from(k - 1)];
    }
    cell
}

/// Kinds of the cells of a level, in depth-first address order. Only the
/// child numbering is needed, not the geometry.
pub fn kinds_at_level(level: u32) -> Vec<CellKind> {
    let mut kinds = vec![CellKind::T; NUM_ROOTS];
    for _ in 0..level {
        kinds = kinds
            .iter()
            .flat_map(|k| (1..=8).map(move |c| k.child_kind(c)))
            .collect();
    }
    kinds
}

/// All cells of a level, in depth-first address order.
pub fn cells_at_level(level: u32) -> Vec<Cell> {
    let mut cells = base_cells().to_vec();
    for _ in 0..level {
        cells = cells.iter().flat_map(subdivide).collect();
    }
    cells
}
