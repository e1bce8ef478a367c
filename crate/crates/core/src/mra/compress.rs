use std::cmp::Ordering;

use super::transform::CoefficientTree;

/// Outcome of [`threshold_compress`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompressionStats {
    /// Total number of coefficients in the tree.
    pub total: usize,
    /// Detail coefficients left untouched.
    pub retained_details: usize,
    /// Retained details plus the four scaling coefficients.
    pub retained_total: usize,
    /// `√(Σ dropped²)`, equal to the `ℓ²` reconstruction error.
    pub l2_error: f64,
}

/// Keeps the `⌈keep · N⌉` coefficients of largest magnitude, `N = 4 · 8^J`,
/// and zeroes the rest. The four scaling coefficients are always kept and
/// count towards the budget. Ties in magnitude are resolved in favour of the
/// lower flat index.
///
/// `keep` is clamped to `[0, 1]`; NaN behaves as 0.
pub fn threshold_compress(
    tree: &CoefficientTree,
    keep: f64,
) -> (CoefficientTree, CompressionStats) {
    let mut flat = tree.to_flat();
    let total = flat.len();
    let keep = if keep.is_nan() {
        0.0
    } else {
        keep.clamp(0.0, 1.0)
    };
    let budget = ((keep * total as f64).ceil() as usize).min(total);
    let n_details = total - 4;
    let retained_details = budget.saturating_sub(4).min(n_details);

    let mut order: Vec<usize> = (4..total).collect();
    order.sort_by(|&i, &k| {
        flat[k]
            .abs()
            .partial_cmp(&flat[i].abs())
            .unwrap_or(Ordering::Equal)
            .then(i.cmp(&k))
    });
    let dropped = compensated_sum(order[retained_details..].iter().map(|&i| flat[i] * flat[i]));
    for &i in &order[retained_details..] {
        flat[i] = 0.0;
    }
    let out = CoefficientTree::from_flat(tree.level, tree.geometry, &flat)
        .expect("same shape as the input tree");
    (
        out,
        CompressionStats {
            total,
            retained_details,
            retained_total: retained_details + 4,
            l2_error: dropped.sqrt(),
        },
    )
}

/// Neumaier-compensated sum; keeps the error of long sums of squares near
/// one rounding.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for v in values {
        let t = sum + v;
        comp += if sum.abs() >= v.abs() {
            (sum - t) + v
        } else {
            (v - t) + sum
        };
        sum = t;
    }
    sum + comp
}

/// `‖a - b‖₂` with compensated summation.
pub fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y))).sqrt()
}
