use crate::error::{Error, Result};
use crate::vecn::Vec3;

/// An invertible n x n real matrix, n in {1, 2, 3}.
///
/// Stored as a 3x3 array padded with the identity on unused rows/columns so
/// that application to padded points is dimension-agnostic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearMap {
    dim: usize,
    entries: [[f64; 3]; 3],
    det: f64,
}

impl LinearMap {
    pub fn new(dim: usize, entries: [[f64; 3]; 3]) -> Result<Self> {
        let mut m = entries;
        // Pad to identity outside the active block.
        for i in dim..3 {
            for j in 0..3 {
                m[i][j] = if i == j { 1.0 } else { 0.0 };
                m[j][i] = if i == j { 1.0 } else { 0.0 };
            }
        }
        let det = det3(&m);
        if det.abs() <= 1e-12 {
            return Err(Error::SingularMap { det });
        }
        Ok(LinearMap { dim, entries: m, det })
    }

    pub fn identity(dim: usize) -> Self {
        LinearMap {
            dim,
            entries: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
            det: 1.0,
        }
    }

    pub fn diagonal(dim: usize, d: Vec3) -> Result<Self> {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            m[i][i] = if i < dim { d[i] } else { 1.0 };
        }
        Self::new(dim, m)
    }

    /// Rotation by `angle` in the xy-plane (n = 2 or the xy block of n = 3).
    pub fn rotation2(dim: usize, angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        LinearMap::new(dim, [[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]]).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn det(&self) -> f64 {
        self.det
    }

    pub fn entries(&self) -> [[f64; 3]; 3] {
        self.entries
    }

    pub fn apply(&self, v: Vec3) -> Vec3 {
        let m = &self.entries;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    pub fn transpose(&self) -> LinearMap {
        let m = &self.entries;
        LinearMap {
            dim: self.dim,
            entries: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
            det: self.det,
        }
    }

    /// T^{-1} via the adjugate.
    pub fn inverse(&self) -> LinearMap {
        let m = &self.entries;
        let inv_det = 1.0 / self.det;
        let adj = [
            [
                m[1][1] * m[2][2] - m[1][2] * m[2][1],
                m[0][2] * m[2][1] - m[0][1] * m[2][2],
                m[0][1] * m[1][2] - m[0][2] * m[1][1],
            ],
            [
                m[1][2] * m[2][0] - m[1][0] * m[2][2],
                m[0][0] * m[2][2] - m[0][2] * m[2][0],
                m[0][2] * m[1][0] - m[0][0] * m[1][2],
            ],
            [
                m[1][0] * m[2][1] - m[1][1] * m[2][0],
                m[0][1] * m[2][0] - m[0][0] * m[2][1],
                m[0][0] * m[1][1] - m[0][1] * m[1][0],
            ],
        ];
        let mut entries = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                entries[i][j] = adj[i][j] * inv_det;
            }
        }
        LinearMap {
            dim: self.dim,
            entries,
            det: 1.0 / self.det,
        }
    }

    /// T^{-t}, the inverse transpose.
    pub fn inverse_transpose(&self) -> LinearMap {
        self.inverse().transpose()
    }
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vecn;

    #[test]
    fn inverse_residual() {
        let t = LinearMap::new(3, [[2.0, 1.0, 0.0], [0.5, 3.0, 1.0], [0.0, -1.0, 1.5]]).unwrap();
        let ti = t.inverse();
        for e in [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]] {
            let r = ti.apply(t.apply(e));
            assert!(vecn::dist(r, e) < 1e-12);
        }
    }

    #[test]
    fn singular_rejected() {
        let r = LinearMap::new(2, [[1.0, 2.0, 0.0], [2.0, 4.0, 0.0], [0.0, 0.0, 1.0]]);
        assert!(matches!(r, Err(Error::SingularMap { .. })));
    }

    #[test]
    fn padded_identity_keeps_det() {
        let t = LinearMap::diagonal(2, [2.0, 3.0, 0.0]).unwrap();
        assert!((t.det() - 6.0).abs() < 1e-12);
    }
}
