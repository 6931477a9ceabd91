use crate::error::{Error, Result};
use crate::vecn::{self, Vec3};

/// A linear subspace of R^n given by an orthonormal basis, 1 <= dim < n.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec3>,
}

impl Subspace {
    pub fn new(ambient: usize, basis: Vec<Vec3>) -> Result<Self> {
        if basis.is_empty() || basis.len() >= ambient {
            return Err(Error::InvalidInput(format!(
                "subspace dimension {} invalid in R^{ambient}",
                basis.len()
            )));
        }
        for (i, a) in basis.iter().enumerate() {
            if (vecn::norm(*a) - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidInput("basis vector not unit length".into()));
            }
            for b in basis.iter().skip(i + 1) {
                if vecn::dot(*a, *b).abs() > 1e-12 {
                    return Err(Error::InvalidInput("basis not orthogonal".into()));
                }
            }
        }
        Ok(Subspace { ambient, basis })
    }

    /// Orthonormalizes `spanning` and wraps the result.
    pub fn from_span(ambient: usize, spanning: &[Vec3]) -> Result<Self> {
        let basis = vecn::orthonormal_span(spanning, 1e-12);
        Subspace::new(ambient, basis)
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec3] {
        &self.basis
    }

    pub fn orthogonal_complement(&self) -> Result<Subspace> {
        let comp = vecn::orthogonal_complement(&self.basis, self.ambient);
        Subspace::new(self.ambient, comp)
    }

    /// Distance from `v` to the subspace.
    pub fn distance(&self, v: Vec3) -> f64 {
        let mut r = v;
        for b in &self.basis {
            r = vecn::sub(r, vecn::scale(*b, vecn::dot(r, *b)));
        }
        vecn::norm(r)
    }

    pub fn contains(&self, v: Vec3, tol: f64) -> bool {
        self.distance(v) <= tol * (1.0 + vecn::norm(v))
    }

    /// True when the spans coincide within `tol`.
    pub fn same_as(&self, other: &Subspace, tol: f64) -> bool {
        self.dim() == other.dim()
            && other.basis.iter().all(|b| self.contains(*b, tol))
            && self.basis.iter().all(|b| other.contains(*b, tol))
    }

    /// Dimension of the intersection with `other` (numerical, tol 1e-9).
    pub fn intersection_dim(&self, other: &Subspace) -> usize {
        let mut all: Vec<Vec3> = self.basis.clone();
        all.extend_from_slice(&other.basis);
        let joint = vecn::span_rank(&all, 1e-9);
        self.dim() + other.dim() - joint
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_of_axis() {
        let s = Subspace::new(3, vec![[0.0, 0.0, 1.0]]).unwrap();
        let c = s.orthogonal_complement().unwrap();
        assert_eq!(c.dim(), 2);
        assert!(c.contains([3.0, -2.0, 0.0], 1e-12));
        assert!(!c.contains([0.0, 0.0, 1.0], 1e-9));
    }

    #[test]
    fn intersection_dims() {
        let xy = Subspace::new(3, vec![[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]).unwrap();
        let xz = Subspace::new(3, vec![[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap();
        let z = Subspace::new(3, vec![[0.0, 0.0, 1.0]]).unwrap();
        assert_eq!(xy.intersection_dim(&xz), 1);
        assert_eq!(xy.intersection_dim(&z), 0);
    }
}
