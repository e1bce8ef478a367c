use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::grid::{kinds_at_level, total_cells};

use super::filter::FilterBank;

/// Fine-level scaling coefficients of the basis function with flat index
/// `index` (see [`CoefficientTree::to_flat`](super::CoefficientTree::to_flat))
/// for a tree of depth `level`.
///
/// Built from the definitions rather than by running the inverse transform:
/// a level-`j` scaling function spreads `(2√2)^-(level-j)` over each of its
/// level-`level` descendants, and wavelet `ℓ` of a cell is `Σ_c a_{ℓc}`
/// times the scaling function of child `c`.
pub fn basis_function(level: u32, filters: &FilterBank, index: usize) -> Result<Vec<f64>> {
    let n = total_cells(level);
    if index >= n {
        return Err(Error::LevelMismatch(format!(
            "basis index {index} out of range for level {level} ({n} functions)"
        )));
    }
    let mut out = vec![0.0; n];
    if index < 4 {
        spread_scaling(&mut out, level, 0, index, 1.0);
        return Ok(out);
    }
    let mut rest = index - 4;
    for j in 0..level {
        let block = 7 * total_cells(j);
        if rest < block {
            let (cell, ell) = (rest / 7, rest % 7);
            let kind = kinds_at_level(j)[cell];
            let row = filters.for_kind(kind).rows()[ell + 1];
            for (c, w) in row.iter().enumerate() {
                spread_scaling(&mut out, level, j + 1, 8 * cell + c, *w);
            }
            return Ok(out);
        }
        rest -= block;
    }
    unreachable!("index checked against the total count")
}

/// All `4 · 8^level` basis functions in flat coefficient order.
pub fn materialize_basis(level: u32, filters: &FilterBank) -> Vec<Vec<f64>> {
    (0..total_cells(level))
        .map(|i| basis_function(level, filters, i).expect("index in range"))
        .collect()
}

fn spread_scaling(out: &mut [f64], level: u32, j: u32, cell: usize, weight: f64) {
    let span = 1usize << (3 * (level - j));
    let value = weight / (2.0 * SQRT_2).powi((level - j) as i32);
    out[cell * span..(cell + 1) * span]
        .iter_mut()
        .for_each(|v| *v += value);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::BallGeometry;
    use crate::mra::filter::{haar_matrix, symmetric_matrix, tensor_haar_matrix, Sign};
    use crate::mra::transform::{analyze_full, FineSignal};

    #[test]
    fn gram_is_identity() {
        for f in [
            haar_matrix(),
            symmetric_matrix(Sign::Minus),
            tensor_haar_matrix(),
        ] {
            let bank = FilterBank::per_kind(f, haar_matrix());
            let b = materialize_basis(2, &bank);
            for (i, u) in b.iter().enumerate() {
                for (k, v) in b.iter().enumerate() {
                    let dot: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
                    let want = if i == k { 1.0 } else { 0.0 };
                    assert!((dot - want).abs() < 1e-12, "({i},{k}) {dot}");
                }
            }
        }
    }

    #[test]
    fn matches_transform() {
        let bank = FilterBank::uniform(symmetric_matrix(Sign::Plus));
        let level = 2;
        let x: Vec<f64> = (0..total_cells(level))
            .map(|i| (i as f64 * 0.37).cos())
            .collect();
        let tree = analyze_full(
            &FineSignal::new(level, BallGeometry::unit(), x.clone()).unwrap(),
            &bank,
        );
        for (i, c) in tree.to_flat().iter().enumerate() {
            let b = basis_function(level, &bank, i).unwrap();
            let dot: f64 = b.iter().zip(&x).map(|(p, q)| p * q).sum();
            assert!((dot - c).abs() < 1e-12);
        }
        assert!(basis_function(level, &bank, total_cells(level)).is_err());
    }
}
