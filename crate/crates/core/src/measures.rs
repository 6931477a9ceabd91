use crate::body::ConvexBody;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::linmap::LinearMap;
use crate::subspace::Subspace;
use crate::vecn::{self, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    Surface,
    ConeVolume,
    Generic,
}

/// A finite even Borel measure on the sphere, stored as (direction, weight)
/// atoms. Houses the discrete surface-area measure S_K and cone-volume
/// measure V_K of polytopes.
#[derive(Debug, Clone)]
pub struct DiscreteMeasure {
    dim: usize,
    kind: MeasureKind,
    atoms: Vec<(Direction, f64)>,
}

impl DiscreteMeasure {
    /// Merges atoms closer than 1e-9 in direction and drops weights below
    /// 1e-12 of the total (hull slivers).
    pub fn new(dim: usize, kind: MeasureKind, atoms: &[(Direction, f64)]) -> Result<DiscreteMeasure> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidInput(format!("dimension {dim} not in 1..=3")));
        }
        let mut merged: Vec<(Direction, f64)> = Vec::new();
        for (u, w) in atoms {
            if *w < 0.0 {
                return Err(Error::InvalidInput(format!("negative weight {w}")));
            }
            match merged.iter_mut().find(|(v, _)| v.close_to(u, 1e-9)) {
                Some(e) => e.1 += w,
                None => merged.push((*u, *w)),
            }
        }
        let total: f64 = merged.iter().map(|(_, w)| w).sum();
        merged.retain(|(_, w)| *w > 1e-12 * total);
        merged.sort_by(|a, b| {
            a.0.coords()
                .iter()
                .zip(b.0.coords().iter())
                .map(|(x, y)| x.total_cmp(y))
                .fold(std::cmp::Ordering::Equal, |acc, o| acc.then(o))
        });
        Ok(DiscreteMeasure {
            dim,
            kind,
            atoms: merged,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn atoms(&self) -> &[(Direction, f64)] {
        &self.atoms
    }

    pub fn total(&self) -> f64 {
        self.atoms.iter().map(|(_, w)| w).sum()
    }

    /// Weight at direction `u` (angle tolerance 1e-7); zero when absent.
    pub fn weight_at(&self, u: &Direction) -> f64 {
        self.atoms
            .iter()
            .find(|(v, _)| v.close_to(u, 1e-7))
            .map_or(0.0, |(_, w)| *w)
    }

    /// Even-weight check: w(u) = w(-u) within `tol` relative.
    pub fn is_even(&self, tol: f64) -> bool {
        let t = self.total();
        self.atoms.iter().all(|(u, w)| {
            let w_anti = self.weight_at(&u.antipode());
            (w - w_anti).abs() <= tol * (1.0 + t)
        })
    }

    /// Replaces each pair {u, -u} by their average weight.
    pub fn symmetrized(&self) -> DiscreteMeasure {
        let atoms: Vec<(Direction, f64)> = self
            .atoms
            .iter()
            .map(|(u, w)| (*u, 0.5 * (w + self.weight_at(&u.antipode()))))
            .collect();
        DiscreteMeasure::new(self.dim, self.kind, &atoms).expect("symmetrization keeps validity")
    }

    /// The probability measure mu / mu(S^{n-1}).
    pub fn normalized(&self) -> Result<DiscreteMeasure> {
        let t = self.total();
        if t <= 0.0 {
            return Err(Error::InvalidInput("cannot normalize the zero measure".into()));
        }
        let atoms: Vec<(Direction, f64)> = self.atoms.iter().map(|(u, w)| (*u, w / t)).collect();
        DiscreteMeasure::new(self.dim, self.kind, &atoms)
    }

    pub fn scaled(&self, c: f64) -> Result<DiscreteMeasure> {
        if c < 0.0 {
            return Err(Error::InvalidInput(format!("scale {c} must be nonnegative")));
        }
        let atoms: Vec<(Direction, f64)> = self.atoms.iter().map(|(u, w)| (*u, c * w)).collect();
        DiscreteMeasure::new(self.dim, self.kind, &atoms)
    }
}

/// S_K: one atom per facet carrying its (n-1)-area.
pub fn surface_area_measure(k: &ConvexBody) -> Result<DiscreteMeasure> {
    if !k.is_full_dimensional() {
        return Err(Error::DegenerateShape { volume: k.volume() });
    }
    let atoms: Vec<(Direction, f64)> = k.facets().iter().map(|f| (f.normal, f.area)).collect();
    DiscreteMeasure::new(k.dim(), MeasureKind::Surface, &atoms)
}

/// V_K = (1/n) h_K S_K: one atom per facet carrying the cone volume over it.
pub fn cone_volume_measure(k: &ConvexBody) -> Result<DiscreteMeasure> {
    if !k.is_full_dimensional() {
        return Err(Error::DegenerateShape { volume: k.volume() });
    }
    let n = k.dim() as f64;
    let atoms: Vec<(Direction, f64)> = k
        .facets()
        .iter()
        .map(|f| (f.normal, f.support * f.area / n))
        .collect();
    DiscreteMeasure::new(k.dim(), MeasureKind::ConeVolume, &atoms)
}

/// Pushforward of a surface-area measure under T: the atom (u, a) maps to
/// (<T^{-t} u>, |det T| |T^{-t} u| a); collapsing directions merge.
pub fn transform_surface_measure(s: &DiscreteMeasure, t: &LinearMap) -> Result<DiscreteMeasure> {
    let tit = t.inverse_transpose();
    let dett = t.det().abs();
    let atoms: Vec<(Direction, f64)> = s
        .atoms()
        .iter()
        .map(|(u, a)| {
            let w = tit.apply(u.coords());
            let len = vecn::norm(w);
            (Direction::new(w).expect("invertible map keeps directions nonzero"), dett * len * a)
        })
        .collect();
    DiscreteMeasure::new(s.dim(), MeasureKind::Surface, &atoms)
}

/// Cone-volume measure of the product body K1 + K2 over orthogonal
/// complementary subspaces, by the decomposition
/// (k1/n)|K2| V_{K1} + (k2/n)|K1| V_{K2}, atoms embedded in R^n.
pub fn product_cone_volume(
    k1: &ConvexBody,
    xi1: &Subspace,
    k2: &ConvexBody,
    xi2: &Subspace,
) -> Result<DiscreteMeasure> {
    let n = xi1.ambient();
    if xi2.ambient() != n || xi1.dim() + xi2.dim() != n || xi1.intersection_dim(xi2) != 0 {
        return Err(Error::SubspaceNotComplementary(format!(
            "dims {} + {} in R^{n}",
            xi1.dim(),
            xi2.dim()
        )));
    }
    for b1 in xi1.basis() {
        for b2 in xi2.basis() {
            if vecn::dot(*b1, *b2).abs() > 1e-9 {
                return Err(Error::SubspaceNotComplementary(
                    "subspaces are not orthogonal".into(),
                ));
            }
        }
    }
    if k1.dim() != xi1.dim() || k2.dim() != xi2.dim() {
        return Err(Error::DimensionMismatch {
            left: k1.dim(),
            right: xi1.dim(),
        });
    }
    let nn = n as f64;
    let mut atoms: Vec<(Direction, f64)> = Vec::new();
    for (factor, xi, co_volume, k_dim) in [
        (k1, xi1, k2.volume(), xi1.dim() as f64),
        (k2, xi2, k1.volume(), xi2.dim() as f64),
    ] {
        let v = cone_volume_measure(factor)?;
        for (u, w) in v.atoms() {
            let dir = Direction::new(vecn::from_basis(xi.basis(), &u.coords()[..xi.dim()]))?;
            atoms.push((dir, (k_dim / nn) * co_volume * w));
        }
    }
    DiscreteMeasure::new(n, MeasureKind::ConeVolume, &atoms)
}

/// Result of an atomwise measure comparison.
#[derive(Debug, Clone)]
pub struct MeasureComparison {
    pub equal: bool,
    /// Largest |mu_i - nu_i| / (1 + mu_i) over matched atoms.
    pub max_mismatch: f64,
    /// Largest weight among atoms present on one side only.
    pub unmatched_mass: f64,
}

/// Atomwise equality after direction alignment (angle < 1e-7): matched
/// weights must agree within tol * (1 + mu_i), unmatched atoms must carry
/// weight at most tol.
pub fn measures_equal(mu: &DiscreteMeasure, nu: &DiscreteMeasure, tol: f64) -> Result<MeasureComparison> {
    if mu.dim() != nu.dim() {
        return Err(Error::DimensionMismatch {
            left: mu.dim(),
            right: nu.dim(),
        });
    }
    let mut max_mismatch = 0.0_f64;
    let mut unmatched = 0.0_f64;
    for (u, w) in mu.atoms() {
        let other = nu.weight_at(u);
        if other == 0.0 && nu.atoms().iter().all(|(v, _)| !v.close_to(u, 1e-7)) {
            unmatched = unmatched.max(*w);
        } else {
            max_mismatch = max_mismatch.max((w - other).abs() / (1.0 + w));
        }
    }
    for (v, w) in nu.atoms() {
        if mu.atoms().iter().all(|(u, _)| !u.close_to(v, 1e-7)) {
            unmatched = unmatched.max(*w);
        }
    }
    Ok(MeasureComparison {
        equal: max_mismatch <= tol && unmatched <= tol,
        max_mismatch,
        unmatched_mass: unmatched,
    })
}

/// Verdict of the subspace concentration check for an even discrete measure.
#[derive(Debug, Clone)]
pub enum ConcentrationVerdict {
    /// mu(xi) < (dim xi / n) mu(S^{n-1}) for every proper candidate subspace.
    Strict,
    /// Equality attained exactly on the listed subspaces, no violation.
    EqualityOn(Vec<Subspace>),
    /// Some subspace carries more than its share.
    Violated(Vec<Subspace>),
}

/// Checks the subspace concentration condition over all subspaces spanned by
/// 1..n-1 support directions (the suprema for discrete measures are attained
/// on such spans).
pub fn subspace_concentration_check(mu: &DiscreteMeasure) -> Result<ConcentrationVerdict> {
    let n = mu.dim();
    let total = mu.total();
    if total <= 0.0 {
        return Err(Error::InvalidInput("measure has no mass".into()));
    }
    if n == 1 {
        return Ok(ConcentrationVerdict::Strict);
    }
    let dirs: Vec<Vec3> = {
        let mut seen: Vec<Vec3> = Vec::new();
        for (u, _) in mu.atoms() {
            let c = u.canonical().coords();
            if !seen.iter().any(|d| vecn::dist(*d, c) < 1e-9) {
                seen.push(c);
            }
        }
        seen
    };

    let mut candidates: Vec<Subspace> = Vec::new();
    for d in &dirs {
        candidates.push(Subspace::new(n, vec![*d])?);
    }
    if n == 3 {
        let mut normals: Vec<Vec3> = Vec::new();
        for (i, a) in dirs.iter().enumerate() {
            for b in dirs.iter().skip(i + 1) {
                if let Some(m) = vecn::normalize(vecn::cross(*a, *b)) {
                    let c = Direction::new(m)?.canonical().coords();
                    if !normals.iter().any(|x| vecn::dist(*x, c) < 1e-9) {
                        normals.push(c);
                        candidates.push(Subspace::from_span(3, &[*a, *b])?);
                    }
                }
            }
        }
    }

    let tol = 1e-9 * (1.0 + total);
    let mut equality = Vec::new();
    let mut violated = Vec::new();
    for xi in candidates {
        let mass: f64 = mu
            .atoms()
            .iter()
            .filter(|(u, _)| xi.distance(u.coords()) < 1e-9)
            .map(|(_, w)| w)
            .sum();
        let bound = (xi.dim() as f64 / n as f64) * total;
        if mass > bound + tol {
            violated.push(xi);
        } else if (mass - bound).abs() <= tol {
            equality.push(xi);
        }
    }
    if !violated.is_empty() {
        Ok(ConcentrationVerdict::Violated(violated))
    } else if !equality.is_empty() {
        Ok(ConcentrationVerdict::EqualityOn(equality))
    } else {
        Ok(ConcentrationVerdict::Strict)
    }
}
