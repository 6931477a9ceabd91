//! Deterministic direction grids and seeded random instance generators for
//! the batch suites.

use crate::body::ConvexBody;
use crate::direction::Direction;
use crate::error::Result;
use crate::linmap::LinearMap;
use crate::vecn::{self, Vec3};
use rand::Rng;

/// Roughly `count` symmetric unit directions: evenly spaced on the half
/// circle in 2D, a Fibonacci hemisphere in 3D, antipodes added.
pub fn quasi_uniform_directions(dim: usize, count: usize) -> Vec<Direction> {
    let mut out = Vec::new();
    match dim {
        1 => {
            let e = Direction::new([1.0, 0.0, 0.0]).unwrap();
            out.push(e);
            out.push(e.antipode());
        }
        2 => {
            let half = (count / 2).max(2);
            for k in 0..half {
                let a = std::f64::consts::PI * k as f64 / half as f64;
                let d = Direction::new([a.cos(), a.sin(), 0.0]).unwrap();
                out.push(d);
                out.push(d.antipode());
            }
        }
        _ => {
            let half = (count / 2).max(4);
            let golden = (1.0 + 5.0_f64.sqrt()) / 2.0;
            for k in 0..half {
                // Spiral on the upper hemisphere.
                let z = (k as f64 + 0.5) / half as f64; // (0, 1)
                let r = (1.0 - z * z).max(0.0).sqrt();
                let phi = 2.0 * std::f64::consts::PI * (k as f64 / golden).fract();
                let d = Direction::new([r * phi.cos(), r * phi.sin(), z]).unwrap();
                out.push(d);
                out.push(d.antipode());
            }
        }
    }
    out
}

pub fn random_unit_vector<R: Rng>(dim: usize, rng: &mut R) -> Vec3 {
    loop {
        let mut v = vecn::ZERO;
        for c in v.iter_mut().take(dim) {
            *c = rng.gen_range(-1.0..1.0);
        }
        let n = vecn::norm(v);
        if n > 1e-3 && n <= 1.0 {
            return vecn::scale(v, 1.0 / n);
        }
    }
}

/// Symmetrized convex hull of `m` uniform sphere points; retries until the
/// hull is full-dimensional.
pub fn random_symmetric_polytope<R: Rng>(dim: usize, m: usize, rng: &mut R) -> Result<ConvexBody> {
    loop {
        let mut pts = Vec::with_capacity(2 * m);
        for _ in 0..m {
            let v = random_unit_vector(dim, rng);
            pts.push(v);
            pts.push(vecn::neg(v));
        }
        let body = ConvexBody::from_points(dim, &pts)?;
        if body.is_full_dimensional() {
            return Ok(body);
        }
    }
}

/// Random invertible map with |det| in [0.1, 10].
pub fn random_linear_map<R: Rng>(dim: usize, rng: &mut R) -> LinearMap {
    loop {
        let mut m = [[0.0; 3]; 3];
        for row in m.iter_mut().take(dim) {
            for e in row.iter_mut().take(dim) {
                *e = rng.gen_range(-1.5..1.5);
            }
        }
        if let Ok(t) = LinearMap::new(dim, m) {
            if (0.1..=10.0).contains(&t.det().abs()) {
                return t;
            }
        }
    }
}

/// Random rotation of R^3 (Rodrigues on a random axis and angle).
pub fn random_rotation3<R: Rng>(rng: &mut R) -> LinearMap {
    let axis = random_unit_vector(3, rng);
    let angle = rng.gen_range(0.0..std::f64::consts::TAU);
    let (s, c) = angle.sin_cos();
    let k = axis;
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let kk = k[i] * k[j] * (1.0 - c);
            m[i][j] = kk + if i == j { c } else { 0.0 };
        }
    }
    // + sin * [k]_x
    m[0][1] += -s * k[2];
    m[0][2] += s * k[1];
    m[1][0] += s * k[2];
    m[1][2] += -s * k[0];
    m[2][0] += -s * k[1];
    m[2][1] += s * k[0];
    LinearMap::new(3, m).expect("rotation is invertible")
}

/// Random 3D cylinder: a random symmetric polygon base extruded along the
/// z-axis, then rotated by a random rotation.
pub fn random_cylinder<R: Rng>(m: usize, rng: &mut R) -> Result<ConvexBody> {
    let base = random_symmetric_polytope(2, m, rng)?;
    let half_height = rng.gen_range(0.3..2.0);
    let mut pts = Vec::new();
    for v in base.vertices() {
        for z in [-half_height, half_height] {
            pts.push([v[0], v[1], z]);
        }
    }
    let prism = ConvexBody::from_points(3, &pts)?;
    prism.apply_linear_map(&random_rotation3(rng))
}
