use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{cells_at_level, locate, total_cells};
use crate::map::{ball_to_oct, oct_to_ball, BallGeometry, CartesianPoint};
use crate::sampling::uniform_tetrahedron_point;

use super::filter::FilterBank;
use super::transform::{norm_factor, synthesize_full, CoefficientTree, FineSignal};

/// How the cell averages of a ball function are estimated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// One node: the image of the cell centroid.
    Centroid,
    /// `samples` uniform points per cell, drawn in the octahedral cell and
    /// mapped to the ball. Cell `k` uses stream `k` of a ChaCha8 generator
    /// seeded with `seed`, so results do not depend on evaluation order.
    MonteCarlo { samples: usize, seed: u64 },
}

/// Projects `f` onto the transported scaling basis of level `level`.
///
/// The coefficient of cell `D` is `⟨f, φ̃_D⟩ = norm_factor(level) · vol(D) ·
/// mean of f over U⁻¹(D)`, with the mean estimated by `quadrature`.
pub fn project_ball_function<F>(
    f: F,
    level: u32,
    quadrature: Quadrature,
    geo: &BallGeometry,
) -> Result<FineSignal>
where
    F: Fn(&CartesianPoint) -> f64,
{
    project_ball_function_with_errors(f, level, quadrature, geo).map(|(s, _)| s)
}

/// Like [`project_ball_function`], also returning the standard error of
/// every coefficient. Centroid quadrature reports zero errors; Monte Carlo
/// with a single sample reports infinite ones.
pub fn project_ball_function_with_errors<F>(
    f: F,
    level: u32,
    quadrature: Quadrature,
    geo: &BallGeometry,
) -> Result<(FineSignal, Vec<f64>)>
where
    F: Fn(&CartesianPoint) -> f64,
{
    let n = total_cells(level);
    let weight = norm_factor(level, geo) * geo.octahedron_volume() / n as f64;
    let mut values = Vec::with_capacity(n);
    let mut errors = Vec::with_capacity(n);
    for (k, cell) in cells_at_level(level).iter().enumerate() {
        let (mean, se) = match quadrature {
            Quadrature::Centroid => {
                let p = oct_to_ball(&cell.centroid(geo), geo)?;
                (f(&p), 0.0)
            }
            Quadrature::MonteCarlo { samples, seed } => {
                let samples = samples.max(1);
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(k as u64);
                let verts = cell.vertex_points(geo);
                let (mut sum, mut sum2) = (0.0, 0.0);
                for _ in 0..samples {
                    let q = uniform_tetrahedron_point(&mut rng, &verts);
                    let v = f(&oct_to_ball(&q, geo)?);
                    sum += v;
                    sum2 += v * v;
                }
                let m = samples as f64;
                let mean = sum / m;
                let se = if samples > 1 {
                    ((sum2 - m * mean * mean).max(0.0) / (m - 1.0) / m).sqrt()
                } else {
                    f64::INFINITY
                };
                (mean, se)
            }
        };
        if !mean.is_finite() {
            return Err(Error::QuadratureFailure { cell: k });
        }
        values.push(weight * mean);
        errors.push(weight * se);
    }
    Ok((FineSignal::new(level, *geo, values)?, errors))
}

/// A reconstructed fine signal read as a function on the ball: constant on
/// every fine ball cell.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseConstant {
    signal: FineSignal,
    scale: f64,
}

impl PiecewiseConstant {
    pub fn new(signal: FineSignal) -> Self {
        let scale = norm_factor(signal.level, &signal.geometry);
        Self { signal, scale }
    }

    pub fn from_tree(tree: &CoefficientTree, filters: &FilterBank) -> Result<Self> {
        Ok(Self::new(synthesize_full(tree, filters)?))
    }

    pub fn signal(&self) -> &FineSignal {
        &self.signal
    }

    /// Function value on the fine cell with depth-first index `k`.
    pub fn cell_value(&self, k: usize) -> f64 {
        self.signal.values[k] * self.scale
    }

    pub fn value_at(&self, p: &CartesianPoint) -> Result<f64> {
        let geo = &self.signal.geometry;
        let q = ball_to_oct(p, geo)?;
        let addr = locate(&q, self.signal.level, geo)?;
        Ok(self.cell_value(addr.index()))
    }

    /// Squared `L²(B³)` norm, computed exactly from the cell values.
    pub fn norm_squared(&self) -> f64 {
        let geo = &self.signal.geometry;
        let vol = geo.octahedron_volume() / total_cells(self.signal.level) as f64;
        (0..self.signal.values.len())
            .map(|k| self.cell_value(k).powi(2) * vol)
            .sum()
    }
}

/// Value at `p` of the function represented by `tree`.
pub fn evaluate(
    tree: &CoefficientTree,
    filters: &FilterBank,
    p: &CartesianPoint,
    geo: &BallGeometry,
) -> Result<f64> {
    geo.contains_ball_point(p)
        .then_some(())
        .ok_or(Error::PointOutsideBall {
            norm: p.norm(),
            radius: geo.radius(),
        })?;
    PiecewiseConstant::from_tree(tree, filters)?.value_at(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{cell_at, CellAddress};
    use crate::mra::filter::haar_matrix;
    use crate::mra::transform::analyze_full;
    use rand::Rng;

    #[test]
    fn constant_function_coefficients() {
        let geo = BallGeometry::new(1.3).unwrap();
        for level in 0..3 {
            let expect =
                norm_factor(level, &geo) * geo.octahedron_volume() / total_cells(level) as f64;
            let c = project_ball_function(|_| 1.0, level, Quadrature::Centroid, &geo).unwrap();
            let m = project_ball_function(
                |_| 1.0,
                level,
                Quadrature::MonteCarlo {
                    samples: 3,
                    seed: 1,
                },
                &geo,
            )
            .unwrap();
            for (a, b) in c.values.iter().zip(&m.values) {
                assert_eq!(a, b);
                assert!((a - expect).abs() <= 1e-14 * expect);
            }
        }
    }

    #[test]
    fn indicator_hits_one_cell() {
        let geo = BallGeometry::unit();
        let target = CellAddress::new(1, vec![7, 3]).unwrap();
        let f = |p: &CartesianPoint| {
            let q = ball_to_oct(p, &geo).unwrap();
            f64::from(locate(&q, 2, &geo).unwrap() == target)
        };
        let s = project_ball_function(f, 2, Quadrature::Centroid, &geo).unwrap();
        for (k, v) in s.values.iter().enumerate() {
            assert_eq!(*v != 0.0, k == target.index(), "cell {k}");
        }
    }

    #[test]
    fn nan_is_reported() {
        let geo = BallGeometry::unit();
        let f = |p: &CartesianPoint| if p.z > 0.0 { f64::NAN } else { 0.0 };
        assert!(matches!(
            project_ball_function(f, 1, Quadrature::Centroid, &geo),
            Err(Error::QuadratureFailure { .. })
        ));
    }

    #[test]
    fn evaluate_constant_is_one() {
        let geo = BallGeometry::unit();
        let bank = FilterBank::uniform(haar_matrix());
        let s = project_ball_function(|_| 1.0, 2, Quadrature::Centroid, &geo).unwrap();
        let tree = analyze_full(&s, &bank);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let p = crate::sampling::uniform_ball_point(&mut rng, 1.0);
            assert!((evaluate(&tree, &bank, &p, &geo).unwrap() - 1.0).abs() < 1e-12);
        }
        let far = CartesianPoint::new(2.0, 0.0, 0.0);
        assert!(evaluate(&tree, &bank, &far, &geo).is_err());
    }

    #[test]
    fn evaluate_is_constant_on_cells() {
        let geo = BallGeometry::unit();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let vals: Vec<f64> = (0..total_cells(2)).map(|_| rng.random()).collect();
        let pc = PiecewiseConstant::new(FineSignal::new(2, geo, vals).unwrap());
        for k in [0usize, 17, 100, 255] {
            let cell = cell_at(&CellAddress::from_index(2, k).unwrap());
            let v = cell.vertex_points(&geo);
            for _ in 0..20 {
                let q = uniform_tetrahedron_point(&mut rng, &v);
                // stay off the faces, where the first-child rule may pick a neighbour
                let c = cell.centroid(&geo);
                let q = crate::map::OctPoint::new(
                    0.9 * q.x + 0.1 * c.x,
                    0.9 * q.y + 0.1 * c.y,
                    0.9 * q.z + 0.1 * c.z,
                );
                let p = oct_to_ball(&q, &geo).unwrap();
                assert_eq!(pc.value_at(&p).unwrap(), pc.cell_value(k));
            }
        }
    }

    #[test]
    fn monte_carlo_errors_shrink() {
        let geo = BallGeometry::unit();
        let f = |p: &CartesianPoint| (p.x * 3.0).sin() + p.z * p.z;
        let (_, e1) = project_ball_function_with_errors(
            f,
            1,
            Quadrature::MonteCarlo {
                samples: 100,
                seed: 3,
            },
            &geo,
        )
        .unwrap();
        let (_, e2) = project_ball_function_with_errors(
            f,
            1,
            Quadrature::MonteCarlo {
                samples: 10_000,
                seed: 3,
            },
            &geo,
        )
        .unwrap();
        for (a, b) in e1.iter().zip(&e2) {
            assert!(b < a);
        }
    }
}
