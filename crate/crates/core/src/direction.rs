use crate::error::{Error, Result};
use crate::vecn::{self, Vec3};

/// A unit vector on the sphere S^{n-1}, n in {1, 2, 3}.
///
/// The canonical representative used for deduplication flips the sign so
/// that the first nonzero coordinate is positive; the antipode is tracked
/// by the caller where it matters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction {
    coords: Vec3,
}

impl Direction {
    /// Normalizes `v` to unit length. Errors on the zero vector.
    pub fn new(v: Vec3) -> Result<Self> {
        let coords = vecn::normalize(v)
            .ok_or_else(|| Error::InvalidInput("zero vector cannot be a direction".into()))?;
        Ok(Direction { coords })
    }

    /// Wraps a vector already known to be unit length (within 1e-12).
    pub fn from_unit(v: Vec3) -> Result<Self> {
        if (vecn::norm(v) - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidInput(format!(
                "vector {v:?} is not unit length"
            )));
        }
        Ok(Direction { coords: v })
    }

    pub fn coords(&self) -> Vec3 {
        self.coords
    }

    pub fn antipode(&self) -> Direction {
        Direction {
            coords: vecn::neg(self.coords),
        }
    }

    /// Sign-canonical representative: first coordinate with magnitude above
    /// 1e-12 made positive.
    pub fn canonical(&self) -> Direction {
        for c in self.coords {
            if c.abs() > 1e-12 {
                if c < 0.0 {
                    return self.antipode();
                }
                return *self;
            }
        }
        *self
    }

    /// Grid key at 1e-9 resolution on canonical coordinates, for dedup maps.
    pub fn dedup_key(&self) -> [i64; 3] {
        let c = self.canonical().coords;
        [
            (c[0] / 1e-9).round() as i64,
            (c[1] / 1e-9).round() as i64,
            (c[2] / 1e-9).round() as i64,
        ]
    }

    /// True when the two directions agree as vectors within `tol` (no sign flip).
    pub fn close_to(&self, other: &Direction, tol: f64) -> bool {
        vecn::dist(self.coords, other.coords) <= tol
    }

    /// True when the directions agree up to sign within `tol`.
    pub fn parallel_to(&self, other: &Direction, tol: f64) -> bool {
        self.close_to(other, tol) || self.close_to(&other.antipode(), tol)
    }
}
