use crate::body::ConvexBody;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::hull::{hull2, hull3};
use crate::vecn::{self, Vec3};

/// A strictly positive even function sampled on a finite symmetric set of
/// directions; the discrete stand-in for C_e^+(S^{n-1}).
#[derive(Debug, Clone)]
pub struct SupportSamples {
    dim: usize,
    atoms: Vec<(Direction, f64)>,
}

impl SupportSamples {
    /// Builds samples from (direction, value) pairs: directions are
    /// deduplicated at 1e-9, the even closure is taken, and a relative
    /// disagreement above 1e-6 between duplicates or antipodes is rejected.
    pub fn new(dim: usize, atoms: &[(Direction, f64)]) -> Result<SupportSamples> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidInput(format!("dimension {dim} not in 1..=3")));
        }
        use std::collections::HashMap;
        // Pass 1: exact-direction duplicates. The tightest constraint wins;
        // larger values are just inactive halfspaces.
        let mut per_dir: HashMap<[i64; 3], (Direction, f64)> = HashMap::new();
        for (u, v) in atoms {
            if *v <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "support sample {v} must be strictly positive"
                )));
            }
            let e = per_dir.entry(u.dedup_key()).or_insert((*u, *v));
            e.1 = e.1.min(*v);
        }
        // Pass 2: antipodal pairs. Values on u and -u must agree (even
        // function); the closure fills in whichever side is missing.
        let mut merged: HashMap<[i64; 3], (Direction, f64, f64)> = HashMap::new();
        for (u, v) in per_dir.into_values() {
            let e = merged
                .entry(u.canonical().dedup_key())
                .or_insert((u.canonical(), v, v));
            e.1 = e.1.min(v);
            e.2 = e.2.max(v);
        }
        let mut out = Vec::with_capacity(2 * merged.len());
        for (_, (u, lo, hi)) in merged {
            if hi - lo > 1e-6 * hi {
                return Err(Error::AsymmetricInput(format!(
                    "conflicting values {lo} and {hi} near direction {:?}",
                    u.coords()
                )));
            }
            out.push((u, lo));
            out.push((u.antipode(), lo));
        }
        out.sort_by(|a, b| {
            a.0.coords()
                .iter()
                .zip(b.0.coords().iter())
                .map(|(x, y)| x.total_cmp(y))
                .fold(std::cmp::Ordering::Equal, |acc, o| acc.then(o))
        });
        let dirs: Vec<Vec3> = out.iter().map(|(u, _)| u.coords()).collect();
        if vecn::span_rank(&dirs, 1e-9) < dim {
            return Err(Error::UnboundedShape { dim });
        }
        Ok(SupportSamples { dim, atoms: out })
    }

    /// The support function of `body` sampled at its own facet normals.
    pub fn from_body_facets(body: &ConvexBody) -> Result<SupportSamples> {
        let atoms: Vec<(Direction, f64)> = body
            .facets()
            .iter()
            .map(|f| (f.normal, f.support))
            .collect();
        SupportSamples::new(body.dim(), &atoms)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn atoms(&self) -> &[(Direction, f64)] {
        &self.atoms
    }

    /// Pointwise scaling by c > 0 (the Wulff shape scales by c with it).
    pub fn scaled(&self, c: f64) -> Result<SupportSamples> {
        if c <= 0.0 {
            return Err(Error::InvalidInput(format!("scale {c} must be positive")));
        }
        Ok(SupportSamples {
            dim: self.dim,
            atoms: self.atoms.iter().map(|(u, v)| (*u, c * v)).collect(),
        })
    }
}

/// The Wulff shape [f]: intersection of the halfspaces x . u <= f(u).
///
/// Construction is by polar duality: the points u/f(u) are hulled, and each
/// facet plane {y : m . y = c} of that hull dualizes back to the vertex m/c
/// of [f]. Valid because the even closure and strict positivity put the
/// origin in the interior.
pub fn wulff_shape(f: &SupportSamples) -> Result<ConvexBody> {
    let dim = f.dim();
    let dual: Vec<Vec3> = f
        .atoms()
        .iter()
        .map(|(u, v)| vecn::scale(u.coords(), 1.0 / v))
        .collect();
    let scale = dual.iter().map(|p| vecn::norm(*p)).fold(0.0_f64, f64::max).max(1e-300);

    let vertices: Vec<Vec3> = match dim {
        1 => {
            let a = f.atoms()[0].1;
            vec![[-a, 0.0, 0.0], [a, 0.0, 0.0]]
        }
        2 => {
            let idx = hull2(&dual);
            if idx.len() < 3 {
                return Err(Error::UnboundedShape { dim });
            }
            let m = idx.len();
            let mut vs = Vec::with_capacity(m);
            for i in 0..m {
                let a = dual[idx[i]];
                let b = dual[idx[(i + 1) % m]];
                let d = vecn::sub(b, a);
                let normal = [d[1], -d[0], 0.0];
                let c = vecn::dot(normal, a);
                if c <= 1e-12 * scale * vecn::norm(normal) {
                    return Err(Error::UnboundedShape { dim });
                }
                vs.push(vecn::scale(normal, 1.0 / c));
            }
            vs
        }
        _ => {
            let Some(h) = hull3(&dual) else {
                return Err(Error::UnboundedShape { dim });
            };
            let mut vs = Vec::with_capacity(h.triangles.len());
            for t in &h.triangles {
                let (a, b, c3) = (dual[t[0]], dual[t[1]], dual[t[2]]);
                let n = vecn::cross(vecn::sub(b, a), vecn::sub(c3, a));
                let nn = vecn::norm(n);
                if nn < 1e-13 * scale * scale {
                    continue;
                }
                let c = vecn::dot(n, a);
                if c <= 1e-12 * scale * nn {
                    // A sliver facet of the dual hull; its dual point is
                    // numerical junk. Even closure + full rank guarantee
                    // boundedness, so this is never a real recession
                    // direction.
                    continue;
                }
                vs.push(vecn::scale(n, 1.0 / c));
            }
            vs
        }
    };

    // Dual-hull slivers can emit candidate vertices far outside the
    // intersection; true Wulff vertices satisfy every constraint, so
    // violators are discarded.
    let vertices: Vec<Vec3> = vertices
        .into_iter()
        .filter(|x| {
            f.atoms()
                .iter()
                .all(|(u, v)| vecn::dot(*x, u.coords()) <= v * (1.0 + 1e-9) + 1e-12)
        })
        .collect();

    let body = ConvexBody::from_points(dim, &vertices)?;
    if !body.is_full_dimensional() {
        return Err(Error::DegenerateShape {
            volume: body.volume(),
        });
    }
    Ok(body)
}
