//! Self-check suite behind `ballgrid verify`.
//!
//! All randomness comes from ChaCha8 streams derived from the seed, and the
//! checks run sequentially, so the report text depends only on the options.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};
use crate::grid::{
    cell_at, cells_at_level, contains, counts, locate, total_cells, Containment, NUM_ROOTS,
};
use crate::map::{
    ball_to_oct, jacobian_check, oct_to_ball, BallGeometry, CartesianPoint, OctPoint,
};
use crate::mra::{
    analyze_full, check_filter, haar_matrix, l2_distance, materialize_basis, norm_factor,
    orthogonality_defect, project_ball_function, symmetric_entries, symmetric_matrix,
    synthesize_full, tensor_haar_matrix, threshold_compress, FilterBank, FilterMatrix, FineSignal,
    PiecewiseConstant, Quadrature, Sign, SCALING_ENTRY,
};
use crate::sampling::{stratified_ball_points, uniform_ball_point};

use super::format_num;

/// How a measured value is judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// `|measured - expected| <= tol`.
    Near { expected: f64, tol: f64 },
    /// `measured >= min`.
    AtLeast(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub criterion: Criterion,
}

impl Check {
    pub fn near(name: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            criterion: Criterion::Near { expected, tol },
        }
    }

    pub fn at_least(name: impl Into<String>, measured: f64, min: f64) -> Self {
        Self {
            name: name.into(),
            measured,
            criterion: Criterion::AtLeast(min),
        }
    }

    pub fn passed(&self) -> bool {
        match self.criterion {
            Criterion::Near { expected, tol } => (self.measured - expected).abs() <= tol,
            Criterion::AtLeast(min) => self.measured >= min,
        }
    }

    pub fn render(&self) -> String {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        let m = format_num(self.measured);
        match self.criterion {
            Criterion::Near { expected, tol } => format!(
                "{status} {} measured={m} expected={} tol={}",
                self.name,
                format_num(expected),
                format_num(tol)
            ),
            Criterion::AtLeast(min) => {
                format!(
                    "{status} {} measured={m} min={}",
                    self.name,
                    format_num(min)
                )
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Deepest grid level exercised; 0 runs the structural checks only.
    pub depth: u32,
    /// Monte Carlo sample count for the statistical checks.
    pub samples: usize,
    pub seed: u64,
    pub radius: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            depth: 3,
            samples: 1_000_000,
            seed: 7,
            radius: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub options: VerifyOptions,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed()).count()
    }

    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn render(&self) -> String {
        let o = &self.options;
        let mut out = format!(
            "ballgrid verify depth={} samples={} seed={} radius={}\n",
            o.depth,
            o.samples,
            o.seed,
            format_num(o.radius)
        );
        for c in &self.checks {
            out.push_str(&c.render());
            out.push('\n');
        }
        let _ = writeln!(
            out,
            "summary: {} passed, {} failed",
            self.checks.len() - self.failures(),
            self.failures()
        );
        out
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn families() -> [FilterMatrix; 4] {
    [
        haar_matrix(),
        symmetric_matrix(Sign::Plus),
        symmetric_matrix(Sign::Minus),
        tensor_haar_matrix(),
    ]
}

/// Binomial z-scores of per-cell counts against the uniform share, and the
/// chi-square p-value of the whole table.
pub fn uniformity_stats(cell_counts: &[u64]) -> (Vec<f64>, f64) {
    let n: u64 = cell_counts.iter().sum();
    let k = cell_counts.len() as f64;
    let p = 1.0 / k;
    let mean = n as f64 * p;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    let z = cell_counts
        .iter()
        .map(|&c| (c as f64 - mean) / sd)
        .collect();
    let chi2: f64 = cell_counts
        .iter()
        .map(|&c| (c as f64 - mean).powi(2) / mean)
        .sum();
    let p_value = ChiSquared::new(k - 1.0).map_or(f64::NAN, |d| d.sf(chi2));
    (z, p_value)
}

/// Number of points of each level-`level` ball cell.
pub fn ball_cell_counts(
    points: &[CartesianPoint],
    level: u32,
    geo: &BallGeometry,
) -> Result<Vec<u64>> {
    let mut c = vec![0u64; total_cells(level)];
    for p in points {
        c[locate(&ball_to_oct(p, geo)?, level, geo)?.index()] += 1;
    }
    Ok(c)
}

/// Coarsens level-`level` cell counts by one level.
fn parent_counts(c: &[u64]) -> Vec<u64> {
    c.chunks_exact(8).map(|k| k.iter().sum()).collect()
}

pub fn run_verify(opts: &VerifyOptions) -> Result<VerifyReport> {
    let geo = BallGeometry::new(opts.radius)?;
    let mut checks = Vec::new();
    structural_checks(&geo, &mut checks);
    if opts.depth > 0 {
        map_checks(opts, &geo, &mut checks)?;
        grid_checks(opts, &geo, &mut checks)?;
        mra_checks(opts, &geo, &mut checks)?;
    }
    Ok(VerifyReport {
        options: opts.clone(),
        checks,
    })
}

fn structural_checks(geo: &BallGeometry, out: &mut Vec<Check>) {
    let (r, a) = (geo.radius(), geo.half_diagonal());
    out.push(Check::near(
        "geometry.equal_volume",
        (a.powi(3) - PI * r.powi(3)).abs() / (PI * r.powi(3)),
        0.0,
        1e-14,
    ));

    let mut vertex_err: f64 = 0.0;
    for axis in 0..3 {
        for s in [1.0, -1.0] {
            let mut p = [0.0; 3];
            p[axis] = s * r;
            let q = ball_to_oct(&CartesianPoint::from(p), geo).map(OctPoint::to_array);
            let err = q.map_or(f64::INFINITY, |q| {
                (0..3)
                    .map(|k| (q[k] - if k == axis { s * a } else { 0.0 }).abs())
                    .fold(0.0, f64::max)
            });
            vertex_err = vertex_err.max(err / a);
        }
    }
    out.push(Check::near(
        "map.vertex_correspondence",
        vertex_err,
        0.0,
        1e-14,
    ));

    let mut bad = 0u32;
    let (mut t, mut m) = (1u64, 0u64);
    for j in 0..=10 {
        if counts(j) != (t, m) || t + m != 8u64.pow(j) {
            bad += 1;
        }
        (t, m) = (6 * t + 4 * m, 2 * t + 4 * m);
    }
    out.push(Check::near(
        "grid.counts_recurrence",
        f64::from(bad),
        0.0,
        0.0,
    ));
    let printed = [(1, (6, 2)), (2, (44, 20))];
    let mismatch = printed.iter().filter(|(j, tm)| counts(*j) != *tm).count();
    out.push(Check::near(
        "grid.counts_printed",
        mismatch as f64,
        0.0,
        0.0,
    ));
    out.push(Check::near(
        "grid.total_level2",
        total_cells(2) as f64,
        (NUM_ROOTS * 64) as f64,
        0.0,
    ));

    for f in families() {
        let name = f.label().as_str();
        out.push(Check::near(
            format!("filter.{name}.orthogonality"),
            orthogonality_defect(f.rows()),
            0.0,
            1e-12,
        ));
        let row = f.rows()[0]
            .iter()
            .map(|x| (x - SCALING_ENTRY).abs())
            .fold(0.0, f64::max);
        out.push(Check::near(
            format!("filter.{name}.scaling_row"),
            row,
            0.0,
            1e-12,
        ));
        debug_assert!(check_filter(&f, 1e-12).is_ok());
    }
    let c = SCALING_ENTRY;
    let mut sym_err: f64 = 0.0;
    for sign in [Sign::Plus, Sign::Minus] {
        let (a, b) = symmetric_entries(sign);
        sym_err = sym_err
            .max((c * c + a * a + 6.0 * b * b - 1.0).abs())
            .max((c * c + 2.0 * a * b + 5.0 * b * b).abs());
    }
    out.push(Check::near(
        "filter.symmetric_identities",
        sym_err,
        0.0,
        1e-14,
    ));
}

fn map_checks(opts: &VerifyOptions, geo: &BallGeometry, out: &mut Vec<Check>) -> Result<()> {
    let r = geo.radius();
    let a = geo.half_diagonal();

    let n = opts.samples.min(100_000);
    let mut g = rng(opts.seed, 1);
    let (mut trip, mut shell): (f64, f64) = (0.0, 0.0);
    for _ in 0..n {
        let p = uniform_ball_point(&mut g, r);
        let q = ball_to_oct(&p, geo)?;
        trip = trip.max(oct_to_ball(&q, geo)?.distance(&p));
        shell = shell.max((q.l1_norm() - a * p.norm() / r).abs());
    }
    out.push(Check::near("map.round_trip", trip / r, 0.0, 1e-9));
    out.push(Check::near("map.radial_shells", shell / a, 0.0, 1e-12));

    let mut g = rng(opts.seed, 2);
    let (mut jac, mut done) = (0.0f64, 0);
    while done < 1000 {
        match jacobian_check(&uniform_ball_point(&mut g, r), geo, 1e-5) {
            Ok(d) => {
                jac = jac.max((d - 1.0).abs());
                done += 1;
            }
            Err(Error::NearSingularity) => {}
            Err(e) => return Err(e),
        }
    }
    out.push(Check::near("map.jacobian", jac, 0.0, 1e-5));

    // Wedge {0 <= θ <= α, z >= 0} against its image tetrahedron O A' M' C'.
    let alpha = PI / 6.0;
    let n = opts.samples;
    let pts = stratified_ball_points(&mut rng(opts.seed, 3), n, r);
    let mut inside = 0u64;
    let mut disagree = 0u64;
    for p in &pts {
        let q = ball_to_oct(p, geo)?;
        let in_image =
            q.x >= 0.0 && q.y >= 0.0 && q.z >= 0.0 && q.y * (PI - 2.0 * alpha) <= 2.0 * alpha * q.x;
        let theta = p.y.atan2(p.x);
        let in_wedge = p.z >= 0.0 && (0.0..=alpha).contains(&theta);
        inside += u64::from(in_image);
        disagree += u64::from(in_image != in_wedge);
    }
    let tan_b = 2.0 * alpha / (PI - 2.0 * alpha);
    let frac = a.powi(3) * tan_b / (6.0 * (1.0 + tan_b)) / geo.octahedron_volume();
    let se = (n as f64 * frac * (1.0 - frac)).sqrt();
    out.push(Check::near(
        "map.sector_wedge_z",
        (inside as f64 - n as f64 * frac) / se,
        0.0,
        3.0,
    ));
    // Rounding may move a handful of points sitting on the wedge planes.
    out.push(Check::near(
        "map.sector_wedge_agreement",
        disagree as f64 / n as f64,
        0.0,
        1e-5,
    ));
    Ok(())
}

fn grid_checks(opts: &VerifyOptions, geo: &BallGeometry, out: &mut Vec<Check>) -> Result<()> {
    for j in 1..=opts.depth.min(5) {
        let cells = cells_at_level(j);
        let bad = cells.iter().filter(|c| c.volume6_lattice() != 2).count();
        let sum: u128 = cells.iter().map(|c| c.volume6_lattice()).sum();
        // Six times the octahedron volume 4a³/3 in units of (a/2^j)³.
        let want = 8u128 << (3 * j);
        out.push(Check::near(
            format!("grid.partition.level{j}"),
            bad as f64 + (sum.abs_diff(want)) as f64,
            0.0,
            0.0,
        ));
    }

    let lj = opts.depth.min(4);
    let mut g = rng(opts.seed, 4);
    let mut outside = 0u32;
    for _ in 0..10_000 {
        let q = ball_to_oct(&uniform_ball_point(&mut g, geo.radius()), geo)?;
        let cell = cell_at(&locate(&q, lj, geo)?);
        outside += u32::from(contains(&cell, &q, geo)? == Containment::Outside);
    }
    out.push(Check::near(
        format!("grid.locate_consistency.level{lj}"),
        f64::from(outside),
        0.0,
        0.0,
    ));

    let ej = opts.depth.min(3);
    let pts = stratified_ball_points(&mut rng(opts.seed, 5), opts.samples, geo.radius());
    let mut c = ball_cell_counts(&pts, ej, geo)?;
    let mut per_level = Vec::new();
    for j in (1..=ej).rev() {
        per_level.push((j, c.clone()));
        c = parent_counts(&c);
    }
    per_level.reverse();
    for (j, c) in per_level {
        let (z, p) = uniformity_stats(&c);
        let zmax = z.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        out.push(Check::near(
            format!("grid.equal_measure.level{j}.max_z"),
            zmax,
            0.0,
            3.0,
        ));
        out.push(Check::at_least(
            format!("grid.equal_measure.level{j}.chi2_p"),
            p,
            1e-3,
        ));
    }
    Ok(())
}

fn mra_checks(opts: &VerifyOptions, geo: &BallGeometry, out: &mut Vec<Check>) -> Result<()> {
    let jj = opts.depth.min(4);
    let mut g = rng(opts.seed, 6);
    let x: Vec<f64> = (0..total_cells(jj))
        .map(|_| rand::Rng::random_range(&mut g, -1.0..1.0))
        .collect();
    let sig = FineSignal::new(jj, *geo, x)?;
    let xn = sig.norm();
    for f in families() {
        let name = f.label().as_str();
        let bank = FilterBank::uniform(f);
        let tree = analyze_full(&sig, &bank);
        let back = synthesize_full(&tree, &bank)?;
        let err = back
            .values
            .iter()
            .zip(&sig.values)
            .map(|(a, b)| (a - b).powi(2))
            .sum::<f64>()
            .sqrt();
        out.push(Check::near(
            format!("mra.{name}.reconstruction"),
            err / xn,
            0.0,
            1e-12,
        ));
        out.push(Check::near(
            format!("mra.{name}.isometry"),
            (tree.norm() - xn).abs() / xn,
            0.0,
            1e-12,
        ));

        let basis = materialize_basis(1, &bank);
        let mut gram: f64 = 0.0;
        for (i, u) in basis.iter().enumerate() {
            for (k, v) in basis.iter().enumerate() {
                let d: f64 = u.iter().zip(v).map(|(p, q)| p * q).sum();
                gram = gram.max((d - f64::from(u8::from(i == k))).abs());
            }
        }
        out.push(Check::near(
            format!("mra.{name}.gram_level1"),
            gram,
            0.0,
            1e-12,
        ));

        let constant = FineSignal::new(jj, *geo, vec![1.0; total_cells(jj)])?;
        let moment = analyze_full(&constant, &bank)
            .details
            .iter()
            .flatten()
            .flatten()
            .fold(0.0f64, |m, v| m.max(v.abs()));
        out.push(Check::near(
            format!("mra.{name}.vanishing_moment"),
            moment,
            0.0,
            1e-12,
        ));
    }

    let bank = FilterBank::uniform(haar_matrix());
    let tree = analyze_full(&sig, &bank);
    let mut worst: f64 = 0.0;
    for keep in [0.01, 0.1, 0.5] {
        let (t, stats) = threshold_compress(&tree, keep);
        let rec = synthesize_full(&t, &bank)?;
        let err = l2_distance(&rec.values, &sig.values);
        worst = worst.max((err - stats.l2_error).abs());
    }
    out.push(Check::near("mra.compression_error", worst, 0.0, 1e-12));

    let pj = opts.depth.min(3);
    let f = |p: &CartesianPoint| (2.0 * p.x).sin() + p.y * p.z + 0.5;
    let proj = project_ball_function(f, pj, Quadrature::Centroid, geo)?;
    let t = analyze_full(&proj, &bank);
    let coeff2: f64 = t.to_flat().iter().map(|v| v * v).sum();
    let fn2 = PiecewiseConstant::from_tree(&t, &bank)?.norm_squared();
    out.push(Check::near(
        "mra.parseval",
        (coeff2 - fn2).abs() / fn2,
        0.0,
        1e-10,
    ));

    // Transported level-1 basis: Monte Carlo inner products over the ball.
    let nf = norm_factor(1, geo);
    let n = opts.samples.min(100_000);
    let pts = stratified_ball_points(&mut rng(opts.seed, 7), n, geo.radius());
    let c = ball_cell_counts(&pts, 1, geo)?;
    let basis = materialize_basis(1, &bank);
    let vol = geo.ball_volume();
    let mut zmax: f64 = 0.0;
    for (i, u) in basis.iter().enumerate() {
        for (k, v) in basis.iter().enumerate().skip(i) {
            let (mut m1, mut m2) = (0.0, 0.0);
            for (cell, &cnt) in c.iter().enumerate() {
                let gval = u[cell] * v[cell] * nf * nf;
                m1 += cnt as f64 * gval;
                m2 += cnt as f64 * gval * gval;
            }
            let mean = m1 / n as f64;
            let var = (m2 / n as f64 - mean * mean).max(0.0);
            let est = vol * mean;
            let se = vol * (var / n as f64).sqrt();
            let delta = est - f64::from(u8::from(i == k));
            let z = if se > 0.0 {
                delta.abs() / se
            } else if delta.abs() < 1e-12 {
                0.0
            } else {
                f64::INFINITY
            };
            zmax = zmax.max(z);
        }
    }
    out.push(Check::near("mra.transport_unitarity_max_z", zmax, 0.0, 3.0));
    Ok(())
}
