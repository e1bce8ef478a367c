use std::f64::consts::SQRT_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::CellKind;

/// Entry of the scaling row, `1 / (2√2)`.
pub const SCALING_ENTRY: f64 = 1.0 / (2.0 * SQRT_2);

/// Tolerance used by [`validate_filter`].
pub const FILTER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterLabel {
    Haar,
    SymmetricPlus,
    SymmetricMinus,
    Tensor,
    Custom,
}

impl FilterLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            FilterLabel::Haar => "haar",
            FilterLabel::SymmetricPlus => "sym+",
            FilterLabel::SymmetricMinus => "sym-",
            FilterLabel::Tensor => "tensor",
            FilterLabel::Custom => "custom",
        }
    }

    /// The built-in matrix for this label; `None` for [`FilterLabel::Custom`].
    pub fn builtin(self) -> Option<FilterMatrix> {
        match self {
            FilterLabel::Haar => Some(haar_matrix()),
            FilterLabel::SymmetricPlus => Some(symmetric_matrix(Sign::Plus)),
            FilterLabel::SymmetricMinus => Some(symmetric_matrix(Sign::Minus)),
            FilterLabel::Tensor => Some(tensor_haar_matrix()),
            FilterLabel::Custom => None,
        }
    }
}

impl fmt::Display for FilterLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FilterLabel {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "haar" => Ok(FilterLabel::Haar),
            "sym+" | "symmetric_plus" => Ok(FilterLabel::SymmetricPlus),
            "sym-" | "symmetric_minus" => Ok(FilterLabel::SymmetricMinus),
            "tensor" => Ok(FilterLabel::Tensor),
            "custom" => Ok(FilterLabel::Custom),
            other => Err(format!("unknown filter label `{other}`")),
        }
    }
}

/// An orthogonal 8×8 matrix whose first row is constant `1/(2√2)`.
///
/// Row 1 produces the parent scaling coefficient from the eight children;
/// rows 2..=8 produce the wavelet coefficients `ℓ = 1..=7`. Columns follow
/// the child numbering of the grid subdivision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterMatrix {
    rows: [[f64; 8]; 8],
    label: FilterLabel,
}

impl FilterMatrix {
    #[inline]
    pub fn rows(&self) -> &[[f64; 8]; 8] {
        &self.rows
    }

    #[inline]
    pub fn label(&self) -> FilterLabel {
        self.label
    }

    pub fn transpose(&self) -> [[f64; 8]; 8] {
        std::array::from_fn(|i| std::array::from_fn(|j| self.rows[j][i]))
    }
}

/// Orthonormal Haar-type matrix: the sign pattern of the classical 8-point Haar
/// matrix with each row scaled to unit length.
pub fn haar_matrix() -> FilterMatrix {
    let pattern: [[f64; 8]; 8] = [
        [1., 1., 1., 1., 1., 1., 1., 1.],
        [1., 1., 1., 1., -1., -1., -1., -1.],
        [1., 1., -1., -1., 0., 0., 0., 0.],
        [0., 0., 0., 0., 1., 1., -1., -1.],
        [1., -1., 0., 0., 0., 0., 0., 0.],
        [0., 0., 1., -1., 0., 0., 0., 0.],
        [0., 0., 0., 0., 1., -1., 0., 0.],
        [0., 0., 0., 0., 0., 0., 1., -1.],
    ];
    let rows = pattern.map(|row| {
        let norm = row.iter().map(|x| x * x).sum::<f64>().sqrt();
        row.map(|x| x / norm)
    });
    FilterMatrix {
        rows,
        label: FilterLabel::Haar,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Diagonal and off-diagonal entries `(a, b)` of the symmetric family,
/// `a = (±24 - √2)/28`, `b = (∓4 - √2)/28`.
pub fn symmetric_entries(sign: Sign) -> (f64, f64) {
    let s = match sign {
        Sign::Plus => 1.0,
        Sign::Minus => -1.0,
    };
    ((24.0 * s - SQRT_2) / 28.0, (-4.0 * s - SQRT_2) / 28.0)
}

/// Symmetric orthogonal matrix with constant first row and column `c`,
/// diagonal `a` and off-diagonal `b` in the lower 7×7 block.
pub fn symmetric_matrix(sign: Sign) -> FilterMatrix {
    let c = SCALING_ENTRY;
    let (a, b) = symmetric_entries(sign);
    let rows = std::array::from_fn(|i| {
        std::array::from_fn(|j| match (i, j) {
            (0, _) | (_, 0) => c,
            _ if i == j => a,
            _ => b,
        })
    });
    FilterMatrix {
        rows,
        label: match sign {
            Sign::Plus => FilterLabel::SymmetricPlus,
            Sign::Minus => FilterLabel::SymmetricMinus,
        },
    }
}

/// Threefold Kronecker product `H ⊗ H ⊗ H` of `H = [[1, 1], [1, -1]] / √2`.
pub fn tensor_haar_matrix() -> FilterMatrix {
    let h = [[1.0 / SQRT_2, 1.0 / SQRT_2], [1.0 / SQRT_2, -1.0 / SQRT_2]];
    let rows = std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            (0..3)
                .map(|bit| h[(i >> bit) & 1][(j >> bit) & 1])
                .product()
        })
    });
    FilterMatrix {
        rows,
        label: FilterLabel::Tensor,
    }
}

/// Largest entry of `|M Mᵀ - I|`.
pub fn orthogonality_defect(m: &[[f64; 8]; 8]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..8 {
        for j in 0..8 {
            let dot: f64 = (0..8).map(|k| m[i][k] * m[j][k]).sum();
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((dot - target).abs());
        }
    }
    worst
}

/// Accepts a user matrix as a [`FilterLabel::Custom`] filter if it is
/// orthogonal and has the constant scaling row, both within [`FILTER_TOL`].
pub fn validate_filter(m: [[f64; 8]; 8]) -> Result<FilterMatrix> {
    validate_with_label(m, FilterLabel::Custom, FILTER_TOL)
}

pub(crate) fn validate_with_label(
    m: [[f64; 8]; 8],
    label: FilterLabel,
    tol: f64,
) -> Result<FilterMatrix> {
    if m.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::NotOrthogonal {
            max_deviation: f64::INFINITY,
        });
    }
    let defect = orthogonality_defect(&m);
    if defect > tol {
        return Err(Error::NotOrthogonal {
            max_deviation: defect,
        });
    }
    let row_dev = m[0]
        .iter()
        .map(|x| (x - SCALING_ENTRY).abs())
        .fold(0.0, f64::max);
    if row_dev > tol {
        return Err(Error::BadScalingRow {
            max_deviation: row_dev,
        });
    }
    Ok(FilterMatrix { rows: m, label })
}

/// Re-validates a built-in or custom matrix at an arbitrary tolerance.
pub fn check_filter(m: &FilterMatrix, tol: f64) -> Result<()> {
    validate_with_label(m.rows, m.label, tol).map(|_| ())
}

/// Filters used for T-cell and M-cell parents. Most callers use the same
/// matrix for both.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterBank {
    pub t: FilterMatrix,
    pub m: FilterMatrix,
}

impl FilterBank {
    pub fn uniform(f: FilterMatrix) -> Self {
        Self { t: f, m: f }
    }

    pub fn per_kind(t: FilterMatrix, m: FilterMatrix) -> Self {
        Self { t, m }
    }

    pub fn is_per_kind(&self) -> bool {
        self.t != self.m
    }

    #[inline]
    pub fn for_kind(&self, kind: CellKind) -> &FilterMatrix {
        match kind {
            CellKind::T => &self.t,
            CellKind::M => &self.m,
        }
    }
}

impl From<FilterMatrix> for FilterBank {
    fn from(f: FilterMatrix) -> Self {
        Self::uniform(f)
    }
}
