//! Seeded point samplers for the ball and for tetrahedra.

use std::f64::consts::TAU;

use rand::Rng;
use rand_distr::{Distribution, UnitBall};

use crate::map::{CartesianPoint, OctPoint};

/// Independent uniform point in the ball of radius `radius`.
pub fn uniform_ball_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> CartesianPoint {
    let [x, y, z]: [f64; 3] = UnitBall.sample(rng);
    CartesianPoint::new(radius * x, radius * y, radius * z)
}

/// Maps the unit cube onto the ball so that the uniform measure is carried to
/// the uniform measure: `ρ = r u^(1/3)`, `cos φ = 1 - 2v`, `θ = 2π w`.
pub fn cube_to_ball(u: f64, v: f64, w: f64, radius: f64) -> CartesianPoint {
    let rho = radius * u.cbrt();
    let cos_phi = 1.0 - 2.0 * v;
    let sin_phi = (1.0 - cos_phi * cos_phi).max(0.0).sqrt();
    let (s, c) = (TAU * w).sin_cos();
    CartesianPoint::new(rho * sin_phi * c, rho * sin_phi * s, rho * cos_phi)
}

/// Jittered stratified sample of `n` points in the ball.
///
/// The unit cube is cut into `k³` congruent strata with `k = ⌊n^(1/3)⌋`, one
/// uniformly placed point per stratum, and the remaining `n - k³` points are
/// drawn independently; everything is pushed through [`cube_to_ball`]. Each
/// point is marginally uniform on the ball, but stratum counts fluctuate far
/// less than independent draws.
pub fn stratified_ball_points<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    radius: f64,
) -> Vec<CartesianPoint> {
    let mut k = (n as f64).cbrt().floor() as usize;
    while (k + 1).pow(3) <= n {
        k += 1;
    }
    while k > 0 && k.pow(3) > n {
        k -= 1;
    }
    let mut out = Vec::with_capacity(n);
    let inv = 1.0 / k.max(1) as f64;
    for i in 0..k {
        for j in 0..k {
            for l in 0..k {
                let u = (i as f64 + rng.random::<f64>()) * inv;
                let v = (j as f64 + rng.random::<f64>()) * inv;
                let w = (l as f64 + rng.random::<f64>()) * inv;
                out.push(cube_to_ball(u, v, w, radius));
            }
        }
    }
    while out.len() < n {
        out.push(cube_to_ball(
            rng.random(),
            rng.random(),
            rng.random(),
            radius,
        ));
    }
    out
}

/// Uniform point in the tetrahedron with the given vertices, by folding the
/// unit cube onto the standard simplex (no rejection).
pub fn uniform_tetrahedron_point<R: Rng + ?Sized>(rng: &mut R, v: &[OctPoint; 4]) -> OctPoint {
    let mut s: f64 = rng.random();
    let mut t: f64 = rng.random();
    let mut u: f64 = rng.random();
    if s + t > 1.0 {
        s = 1.0 - s;
        t = 1.0 - t;
    }
    if t + u > 1.0 {
        let tmp = u;
        u = 1.0 - s - t;
        t = 1.0 - tmp;
    } else if s + t + u > 1.0 {
        let tmp = u;
        u = s + t + u - 1.0;
        s = 1.0 - t - tmp;
    }
    let a = 1.0 - s - t - u;
    let w = [a, s, t, u];
    let mut p = [0.0; 3];
    for (wi, vi) in w.iter().zip(v) {
        p[0] += wi * vi.x;
        p[1] += wi * vi.y;
        p[2] += wi * vi.z;
    }
    OctPoint::from(p)
}
