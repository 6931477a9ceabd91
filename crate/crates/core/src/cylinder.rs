use crate::body::ConvexBody;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::subspace::Subspace;
use crate::vecn::{self, Vec3};

/// One factor of a cylinder decomposition: a body of dimension dim(xi),
/// expressed in the basis coordinates of its subspace.
#[derive(Debug, Clone)]
pub struct CylinderFactor {
    pub subspace: Subspace,
    pub body: ConvexBody,
}

/// A decomposition K = K_1 + ... + K_m into lower-dimensional factors in
/// transversal subspaces with dimensions summing to n.
#[derive(Debug, Clone)]
pub struct CylinderSplit {
    ambient: usize,
    factors: Vec<CylinderFactor>,
}

impl CylinderSplit {
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn factors(&self) -> &[CylinderFactor] {
        &self.factors
    }

    /// Minkowski sum of the embedded factors; reproduces the split body.
    pub fn reassemble(&self) -> Result<ConvexBody> {
        let mut acc: Option<ConvexBody> = None;
        for f in &self.factors {
            let e = f.body.embed(self.ambient, &f.subspace)?;
            acc = Some(match acc {
                None => e,
                Some(a) => a.minkowski_sum(&e)?,
            });
        }
        acc.ok_or_else(|| Error::InvalidInput("empty split".into()))
    }
}

/// Searches for a cylinder decomposition of `k`.
///
/// In 3D the scan looks for a direction u0 (candidates: facet normals and
/// vertex-difference directions) such that every facet normal is +-u0 or
/// orthogonal to u0 within 1e-8; the body then splits as base + h_K(u0)
/// [-u0, u0] and the planar base is split further when it is a
/// parallelogram. Splits with the most factors win; ties break
/// lexicographically on the split direction. Only orthogonal 3D splits are
/// detected; apply a normalizing linear map first for skewed cylinders.
pub fn detect_cylinder(k: &ConvexBody) -> Result<Option<CylinderSplit>> {
    if !k.is_full_dimensional() {
        return Err(Error::DegenerateShape { volume: k.volume() });
    }
    match k.dim() {
        1 => Ok(None),
        2 => Ok(detect_parallelogram(k)?.map(|factors| CylinderSplit {
            ambient: 2,
            factors,
        })),
        _ => detect_cylinder_3d(k),
    }
}

/// A symmetric quadrilateral is a parallelogram: vertices {p, q, -p, -q}
/// split into segments along (p + q)/2 and (p - q)/2.
fn detect_parallelogram(k: &ConvexBody) -> Result<Option<Vec<CylinderFactor>>> {
    if k.vertices().len() != 4 {
        return Ok(None);
    }
    let tol = 1e-8 * (1.0 + k.radius());
    let p = k.vertices()[0];
    let q = *match k
        .vertices()
        .iter()
        .find(|v| vecn::dist(**v, p) > tol && vecn::dist(**v, vecn::neg(p)) > tol)
    {
        Some(q) => q,
        None => return Ok(None),
    };
    let mut factors = Vec::new();
    for d in [
        vecn::scale(vecn::add(p, q), 0.5),
        vecn::scale(vecn::sub(p, q), 0.5),
    ] {
        let len = vecn::norm(d);
        if len <= tol {
            return Ok(None);
        }
        let dir = Direction::new(d)?.canonical();
        factors.push(CylinderFactor {
            subspace: Subspace::new(k.dim(), vec![dir.coords()])?,
            body: ConvexBody::make_segment(len)?,
        });
    }
    sort_factors(&mut factors);
    Ok(Some(factors))
}

fn detect_cylinder_3d(k: &ConvexBody) -> Result<Option<CylinderSplit>> {
    let tol = 1e-8;
    let mut candidates: Vec<Direction> = Vec::new();
    let mut push = |d: Direction| {
        let c = d.canonical();
        if !candidates.iter().any(|e| e.close_to(&c, 1e-9)) {
            candidates.push(c);
        }
    };
    for f in k.facets() {
        push(f.normal);
    }
    for (i, a) in k.vertices().iter().enumerate() {
        for b in k.vertices().iter().skip(i + 1) {
            if let Some(d) = vecn::normalize(vecn::sub(*b, *a)) {
                push(Direction::from_unit(d)?);
            }
        }
    }
    candidates.sort_by(|a, b| lex_cmp(a.coords(), b.coords()));

    let mut best: Option<CylinderSplit> = None;
    for u0 in &candidates {
        let u = u0.coords();
        let mut has_cap = false;
        let mut ok = true;
        for f in k.facets() {
            if f.normal.parallel_to(u0, tol) {
                has_cap = true;
            } else if vecn::dot(f.normal.coords(), u).abs() >= tol {
                ok = false;
                break;
            }
        }
        if !ok || !has_cap {
            continue;
        }
        let axis = Subspace::new(3, vec![u])?;
        let base_plane = axis.orthogonal_complement()?;
        let base = k.project(&base_plane)?;
        let half_height = k.support(u);

        let mut factors = vec![CylinderFactor {
            subspace: axis.clone(),
            body: ConvexBody::make_segment(half_height)?,
        }];
        match detect_parallelogram(&base)? {
            Some(base_factors) => {
                for bf in base_factors {
                    // Map the in-plane split direction back to R^3.
                    let d3 = vecn::from_basis(base_plane.basis(), &bf.subspace.basis()[0][..2]);
                    factors.push(CylinderFactor {
                        subspace: Subspace::new(3, vec![Direction::new(d3)?.canonical().coords()])?,
                        body: bf.body,
                    });
                }
            }
            None => factors.push(CylinderFactor {
                subspace: base_plane,
                body: base,
            }),
        }
        sort_factors(&mut factors);
        let better = match &best {
            None => true,
            Some(b) => factors.len() > b.factors.len(),
        };
        if better {
            best = Some(CylinderSplit {
                ambient: 3,
                factors,
            });
            if best.as_ref().unwrap().factors.len() == 3 {
                break; // finest possible in R^3
            }
        }
    }
    Ok(best)
}

fn sort_factors(factors: &mut [CylinderFactor]) {
    factors.sort_by(|a, b| {
        a.subspace
            .dim()
            .cmp(&b.subspace.dim())
            .then(lex_cmp(a.subspace.basis()[0], b.subspace.basis()[0]))
    });
}

fn lex_cmp(a: Vec3, b: Vec3) -> std::cmp::Ordering {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| x.total_cmp(y))
        .fold(std::cmp::Ordering::Equal, |acc, o| acc.then(o))
}

/// Equality cases of the logarithmic Minkowski inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqualityClass {
    Dilatates,
    RelativeCylinders,
}

/// Classifies K, L as dilatates (after volume-matching scaling), relative
/// cylinders (common split family with dilatate factor pairs), or neither.
pub fn classify_equality(k: &ConvexBody, l: &ConvexBody) -> Result<Option<EqualityClass>> {
    classify_equality_tol(k, l, 1e-8)
}

/// As [`classify_equality`] with an explicit relative tolerance for the
/// dilatate comparisons; useful when one body is a solver output that is
/// only accurate to its convergence tolerance.
pub fn classify_equality_tol(
    k: &ConvexBody,
    l: &ConvexBody,
    rel_tol: f64,
) -> Result<Option<EqualityClass>> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            left: k.dim(),
            right: l.dim(),
        });
    }
    let n = k.dim();
    let scale_tol = rel_tol * (1.0 + k.radius().max(l.radius()));
    let c = (l.volume() / k.volume()).powf(1.0 / n as f64);
    if l.hausdorff_distance(&k.dilate(c)?)? <= scale_tol {
        return Ok(Some(EqualityClass::Dilatates));
    }
    if n == 1 {
        // Segments are always dilatates; reaching here means numeric noise.
        return Ok(None);
    }
    let (Some(sk), Some(sl)) = (detect_cylinder(k)?, detect_cylinder(l)?) else {
        return Ok(None);
    };
    if common_split_dilatates(&sk, &sl, n, scale_tol)? {
        Ok(Some(EqualityClass::RelativeCylinders))
    } else {
        Ok(None)
    }
}

/// Tests whether the two finest splits coarsen to a common subspace family
/// with dilatate factor pairs. Factors are grouped by transversality:
/// factors whose subspaces intersect nontrivially must merge.
fn common_split_dilatates(
    sk: &CylinderSplit,
    sl: &CylinderSplit,
    n: usize,
    tol: f64,
) -> Result<bool> {
    let a = sk.factors().len();
    let all: Vec<&CylinderFactor> = sk.factors().iter().chain(sl.factors().iter()).collect();
    let m = all.len();
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..a {
        for j in a..m {
            if all[i].subspace.intersection_dim(&all[j].subspace) > 0 {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
    }
    use std::collections::HashMap;
    let mut groups: HashMap<usize, (Vec<usize>, Vec<usize>)> = HashMap::new();
    for i in 0..m {
        let r = find(&mut parent, i);
        let e = groups.entry(r).or_default();
        if i < a {
            e.0.push(i);
        } else {
            e.1.push(i);
        }
    }
    if groups.len() < 2 {
        return Ok(false);
    }
    for (k_ids, l_ids) in groups.values() {
        if k_ids.is_empty() || l_ids.is_empty() {
            return Ok(false);
        }
        let span_of = |ids: &[usize]| -> Result<Subspace> {
            let basis: Vec<Vec3> = ids
                .iter()
                .flat_map(|&i| all[i].subspace.basis().iter().copied())
                .collect();
            Subspace::from_span(n, &basis)
        };
        let k_span = span_of(k_ids)?;
        let l_span = span_of(l_ids)?;
        if !k_span.same_as(&l_span, 1e-8) {
            return Ok(false);
        }
        let part = |ids: &[usize]| -> Result<ConvexBody> {
            let mut acc: Option<ConvexBody> = None;
            for &i in ids {
                let e = all[i].body.embed(n, &all[i].subspace)?;
                acc = Some(match acc {
                    None => e,
                    Some(b) => b.minkowski_sum(&e)?,
                });
            }
            acc.unwrap().project(&k_span)
        };
        let kp = part(k_ids)?;
        let lp = part(l_ids)?;
        let c = (lp.volume() / kp.volume()).powf(1.0 / k_span.dim() as f64);
        if !c.is_finite() || c <= 0.0 || lp.hausdorff_distance(&kp.dilate(c)?)? > tol {
            return Ok(false);
        }
    }
    Ok(true)
}
