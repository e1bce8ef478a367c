//! Volume-preserving map between the ball of radius `r` and the regular
//! octahedron `|X| + |Y| + |Z| <= a` of the same volume.
//!
//! The map is defined in closed form on the first octant and extended to the
//! other seven by sign symmetry. Both directions are evaluated on the folded
//! point `(|x|, |y|, |z|)` and the signs are restored afterwards, so the
//! forward map commutes exactly with coordinate reflections.
//!
//! Two conventions fill gaps where the closed forms are singular:
//! * the longitude on the polar axis (`x = y = 0`) is taken to be `0`;
//! * the inverse on the octahedron's `Z` axis (`X + Y = 0`) uses its limit
//!   `(0, 0, Z / π^(1/3))`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::error::{Error, Result};

/// Relative tolerance used for ball and octahedron membership tests.
pub const MEMBERSHIP_EPS: f64 = 1e-12;

/// Budget for `|U⁻¹(U(p)) - p| / r`.
pub const ROUND_TRIP_TOL: f64 = 1e-9;

/// `π^(1/3)`, the ratio `a / r`.
pub fn cbrt_pi() -> f64 {
    PI.cbrt()
}

/// Radius of the ball together with the half-diagonal of the equal-volume
/// octahedron, `a = r · π^(1/3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallGeometry {
    radius: f64,
    half_diagonal: f64,
}

impl BallGeometry {
    pub fn new(radius: f64) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::InvalidGeometry(radius));
        }
        Ok(Self {
            radius,
            half_diagonal: radius * cbrt_pi(),
        })
    }

    pub fn unit() -> Self {
        Self::new(1.0).expect("unit radius is valid")
    }

    #[inline]
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Octahedron half-diagonal `a`.
    #[inline]
    pub fn half_diagonal(&self) -> f64 {
        self.half_diagonal
    }

    /// `4πr³/3`, which equals the octahedron volume `4a³/3`.
    pub fn ball_volume(&self) -> f64 {
        4.0 * PI * self.radius.powi(3) / 3.0
    }

    pub fn octahedron_volume(&self) -> f64 {
        4.0 * self.half_diagonal.powi(3) / 3.0
    }

    pub fn contains_ball_point(&self, p: &CartesianPoint) -> bool {
        p.norm() <= self.radius * (1.0 + MEMBERSHIP_EPS)
    }

    pub fn contains_oct_point(&self, q: &OctPoint) -> bool {
        q.l1_norm() <= self.half_diagonal * (1.0 + MEMBERSHIP_EPS)
    }

    fn check_ball(&self, p: &CartesianPoint) -> Result<()> {
        let norm = p.norm();
        if norm <= self.radius * (1.0 + MEMBERSHIP_EPS) {
            Ok(())
        } else {
            Err(Error::PointOutsideBall {
                norm,
                radius: self.radius,
            })
        }
    }

    fn check_oct(&self, q: &OctPoint) -> Result<()> {
        let l1_norm = q.l1_norm();
        if l1_norm <= self.half_diagonal * (1.0 + MEMBERSHIP_EPS) {
            Ok(())
        } else {
            Err(Error::PointOutsideOctahedron {
                l1_norm,
                half_diagonal: self.half_diagonal,
            })
        }
    }
}

impl Default for BallGeometry {
    fn default() -> Self {
        Self::unit()
    }
}

/// A point on the ball side, in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CartesianPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartesianPoint {
    pub const ORIGIN: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        let (dx, dy, dz) = (self.x - other.x, self.y - other.y, self.z - other.z);
        (dx * dx + dy * dy + dz * dz).sqrt()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for CartesianPoint {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// Spherical coordinates: radius, longitude `theta ∈ [0, 2π)` and colatitude
/// `phi ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SphericalPoint {
    pub rho: f64,
    pub theta: f64,
    pub phi: f64,
}

impl SphericalPoint {
    pub fn to_cartesian(&self) -> CartesianPoint {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        CartesianPoint::new(self.rho * ct * sp, self.rho * st * sp, self.rho * cp)
    }

    /// Spherical volume element `ρ² sin φ`.
    pub fn volume_element(&self) -> f64 {
        self.rho * self.rho * self.phi.sin()
    }
}

/// A point on the octahedron side.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct OctPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl OctPoint {
    pub const ORIGIN: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn l1_norm(&self) -> f64 {
        self.x.abs() + self.y.abs() + self.z.abs()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for OctPoint {
    fn from(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }
}

/// Signs of the three coordinates; used to fold a point into the first octant
/// and to unfold the image.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OctantSigns {
    pub sx: i8,
    pub sy: i8,
    pub sz: i8,
}

impl OctantSigns {
    pub const POSITIVE: Self = Self {
        sx: 1,
        sy: 1,
        sz: 1,
    };

    /// Signs of a coordinate triple; zero counts as positive.
    pub fn of(v: [f64; 3]) -> Self {
        let s = |c: f64| if c < 0.0 { -1 } else { 1 };
        Self {
            sx: s(v[0]),
            sy: s(v[1]),
            sz: s(v[2]),
        }
    }

    pub fn apply(&self, v: [f64; 3]) -> [f64; 3] {
        let f = |s: i8, c: f64| if s < 0 { -c } else { c };
        [f(self.sx, v[0]), f(self.sy, v[1]), f(self.sz, v[2])]
    }

    /// Octant index in `0..8`: bit 0 for negative x, bit 1 for negative y,
    /// bit 2 for negative z.
    pub fn index(&self) -> usize {
        usize::from(self.sx < 0) | usize::from(self.sy < 0) << 1 | usize::from(self.sz < 0) << 2
    }
}

fn fold(v: [f64; 3]) -> (OctantSigns, [f64; 3]) {
    (OctantSigns::of(v), [v[0].abs(), v[1].abs(), v[2].abs()])
}

pub fn to_spherical(p: &CartesianPoint, geo: &BallGeometry) -> Result<SphericalPoint> {
    geo.check_ball(p)?;
    let rho = p.norm();
    if rho == 0.0 {
        return Ok(SphericalPoint::default());
    }
    let mut theta = p.y.atan2(p.x);
    if theta < 0.0 {
        theta += TAU;
        if theta >= TAU {
            theta = 0.0;
        }
    }
    let phi = p.x.hypot(p.y).atan2(p.z);
    Ok(SphericalPoint { rho, theta, phi })
}

/// Forward map on the closed first octant. No domain checks.
fn forward_first_octant(x: f64, y: f64, z: f64) -> [f64; 3] {
    let rho = (x * x + y * y + z * z).sqrt();
    if rho == 0.0 {
        return [0.0; 3];
    }
    let planar_sq = x * x + y * y;
    // t = √2·sin(φ/2), using 1 - cos φ = (x² + y²) / (ρ(ρ + z)) for z >= 0.
    // The equator is pinned to t = 1 so it lands exactly on Z = 0.
    let t = if z == 0.0 {
        1.0
    } else {
        (planar_sq / (rho * (rho + z))).sqrt().min(1.0)
    };
    let theta = y.atan2(x);
    let cbrt = cbrt_pi();
    // ρt(π - 2θ)/π^(2/3) written as π^(1/3)ρt(1 - 2θ/π), exact on the axes.
    let k = cbrt * rho * t;
    let u = 2.0 * theta / PI;
    let big_x = k * (1.0 - u);
    let big_y = k * u;
    let big_z = cbrt * rho * (1.0 - t);
    [big_x, big_y, big_z]
}

/// Inverse map on the closed first octant of the octahedron. No domain checks.
fn inverse_first_octant(big_x: f64, big_y: f64, big_z: f64) -> [f64; 3] {
    let total = big_x + big_y + big_z;
    if total == 0.0 {
        return [0.0; 3];
    }
    let inv_cbrt_pi = 1.0 / cbrt_pi();
    let planar = big_x + big_y;
    let z = inv_cbrt_pi * big_z * (2.0 * planar + big_z) / total;
    if planar == 0.0 {
        return [0.0, 0.0, z];
    }
    let u = planar / total;
    let radial = inv_cbrt_pi * planar * (2.0 - u * u).sqrt();
    let theta = FRAC_PI_2 * big_y / planar;
    let (s, c) = theta.sin_cos();
    [radial * c, radial * s, z]
}

fn ball_to_oct_unchecked(v: [f64; 3]) -> [f64; 3] {
    let (signs, [x, y, z]) = fold(v);
    signs.apply(forward_first_octant(x, y, z))
}

fn oct_to_ball_unchecked(v: [f64; 3]) -> [f64; 3] {
    let (signs, [x, y, z]) = fold(v);
    signs.apply(inverse_first_octant(x, y, z))
}

/// The volume-preserving map from the ball onto the octahedron.
pub fn ball_to_oct(p: &CartesianPoint, geo: &BallGeometry) -> Result<OctPoint> {
    geo.check_ball(p)?;
    Ok(ball_to_oct_unchecked(p.to_array()).into())
}

/// The inverse map from the octahedron back onto the ball.
pub fn oct_to_ball(q: &OctPoint, geo: &BallGeometry) -> Result<CartesianPoint> {
    geo.check_oct(q)?;
    Ok(oct_to_ball_unchecked(q.to_array()).into())
}

/// Estimates `|det J|` of [`ball_to_oct`] at `p` by central differences with
/// step `h`. The exact value is `1` everywhere off the fold planes.
///
/// The stencil must stay at least `10h` away from every coordinate plane,
/// since the map is only piecewise smooth across them.
pub fn jacobian_check(p: &CartesianPoint, geo: &BallGeometry, h: f64) -> Result<f64> {
    geo.check_ball(p)?;
    let margin = 10.0 * h;
    if h.is_nan() || h <= 0.0 || p.x.abs() <= margin || p.y.abs() <= margin || p.z.abs() <= margin {
        return Err(Error::NearSingularity);
    }
    let base = p.to_array();
    let mut columns = [[0.0; 3]; 3];
    for (axis, column) in columns.iter_mut().enumerate() {
        let mut plus = base;
        let mut minus = base;
        plus[axis] += h;
        minus[axis] -= h;
        let fp = ball_to_oct_unchecked(plus);
        let fm = ball_to_oct_unchecked(minus);
        for k in 0..3 {
            column[k] = (fp[k] - fm[k]) / (2.0 * h);
        }
    }
    Ok(det3(columns[0], columns[1], columns[2]).abs())
}

fn det3(a: [f64; 3], b: [f64; 3], c: [f64; 3]) -> f64 {
    a[0] * (b[1] * c[2] - b[2] * c[1]) - b[0] * (a[1] * c[2] - a[2] * c[1])
        + c[0] * (a[1] * b[2] - a[2] * b[1])
}
