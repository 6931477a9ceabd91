use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::hull::{hull2, hull3};
use crate::linmap::LinearMap;
use crate::subspace::Subspace;
use crate::vecn::{self, Vec3};

/// A flat boundary piece: outward unit normal, support value h_K(normal)
/// and its (n-1)-dimensional area (edge length in 2D, the counting measure
/// 1 in 1D).
#[derive(Debug, Clone)]
pub struct Facet {
    pub normal: Direction,
    pub support: f64,
    pub area: f64,
}

/// A convex polytope in R^n, n in {1, 2, 3}.
///
/// Full-dimensional bodies carry facets and a positive volume. Lower
/// dimensional sets (segments and polygons used as Minkowski summands or
/// cylinder factors in a larger ambient space) carry vertices only; their
/// facet list is empty and `volume` is zero.
#[derive(Debug, Clone)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Vec3>,
    facets: Vec<Facet>,
    /// Hull point cloud + outward triangles, kept for distance queries (3D).
    hull_points: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    volume: f64,
}

impl ConvexBody {
    /// Convex hull of a point cloud. Lower-dimensional inputs produce a
    /// degenerate body (no facets, zero volume).
    pub fn from_points(dim: usize, points: &[Vec3]) -> Result<ConvexBody> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidInput(format!("dimension {dim} not in 1..=3")));
        }
        if points.is_empty() {
            return Err(Error::InvalidInput("empty point set".into()));
        }
        for p in points {
            for k in dim..3 {
                if p[k].abs() > 1e-12 {
                    return Err(Error::InvalidInput(format!(
                        "point {p:?} has nonzero coordinate beyond dimension {dim}"
                    )));
                }
            }
        }
        let pts = dedup_points(points);
        match dim {
            1 => Ok(build_1d(&pts)),
            2 => Ok(build_2d(&pts)),
            _ => Ok(build_3d(&pts)),
        }
    }

    /// Axis-aligned box with the given half sides. `half_sides[dim..]` ignored.
    pub fn make_box(dim: usize, half_sides: Vec3) -> Result<ConvexBody> {
        for k in 0..dim {
            if half_sides[k] <= 0.0 {
                return Err(Error::InvalidInput(format!(
                    "half side {} must be positive",
                    half_sides[k]
                )));
            }
        }
        let mut corners = vec![vecn::ZERO];
        for k in 0..dim {
            let mut next = Vec::new();
            for c in corners {
                for s in [-1.0, 1.0] {
                    let mut q = c;
                    q[k] = s * half_sides[k];
                    next.push(q);
                }
            }
            corners = next;
        }
        ConvexBody::from_points(dim, &corners)
    }

    /// Segment [-a, a] on the line (n = 1).
    pub fn make_segment(a: f64) -> Result<ConvexBody> {
        if a <= 0.0 {
            return Err(Error::InvalidInput(format!("half length {a} must be positive")));
        }
        ConvexBody::from_points(1, &[[-a, 0.0, 0.0], [a, 0.0, 0.0]])
    }

    /// Origin-symmetric polygon from its vertex set (n = 2).
    pub fn make_polygon(vertices: &[Vec3]) -> Result<ConvexBody> {
        let body = ConvexBody::from_points(2, vertices)?;
        if !body.is_origin_symmetric(1e-9) {
            return Err(Error::AsymmetricInput(
                "polygon vertex set is not origin-symmetric".into(),
            ));
        }
        Ok(body)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.volume > 1e-12
    }

    /// Largest vertex norm; the scale reference for tolerances.
    pub fn radius(&self) -> f64 {
        self.vertices
            .iter()
            .map(|v| vecn::norm(*v))
            .fold(0.0, f64::max)
    }

    /// h_K(x) = max over vertices of x . v. Positively homogeneous in x.
    pub fn support(&self, x: Vec3) -> f64 {
        self.vertices
            .iter()
            .map(|v| vecn::dot(x, *v))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_origin_symmetric(&self, tol: f64) -> bool {
        let t = tol * (1.0 + self.radius());
        self.vertices.iter().all(|v| {
            self.vertices
                .iter()
                .any(|w| vecn::dist(*w, vecn::neg(*v)) <= t)
        })
    }

    /// The dilatate cK (c > 0).
    pub fn dilate(&self, c: f64) -> Result<ConvexBody> {
        if c <= 0.0 {
            return Err(Error::InvalidInput(format!("dilation factor {c} must be positive")));
        }
        let pts: Vec<Vec3> = self.vertices.iter().map(|v| vecn::scale(*v, c)).collect();
        ConvexBody::from_points(self.dim, &pts)
    }

    /// TK for invertible T. Vertices map by T; facets are rebuilt from the
    /// mapped hull, so normals come out as the unit vectors of T^{-t} u.
    pub fn apply_linear_map(&self, t: &LinearMap) -> Result<ConvexBody> {
        let pts: Vec<Vec3> = self.vertices.iter().map(|v| t.apply(*v)).collect();
        ConvexBody::from_points(self.dim, &pts)
    }

    /// Minkowski sum via pairwise vertex sums and a hull. Either summand may
    /// be lower-dimensional.
    pub fn minkowski_sum(&self, other: &ConvexBody) -> Result<ConvexBody> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut sums = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                sums.push(vecn::add(*a, *b));
            }
        }
        ConvexBody::from_points(self.dim, &sums)
    }

    /// Orthogonal projection onto `xi`, returned in the basis coordinates of
    /// `xi` as a body of dimension dim(xi).
    pub fn project(&self, xi: &Subspace) -> Result<ConvexBody> {
        if xi.ambient() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: xi.ambient(),
            });
        }
        let coords: Vec<Vec3> = self
            .vertices
            .iter()
            .map(|v| vecn::to_basis(xi.basis(), *v))
            .collect();
        ConvexBody::from_points(xi.dim(), &coords)
    }

    /// Embeds a k-dimensional body into R^`ambient` through the basis of `xi`
    /// (the result is degenerate when k < ambient).
    pub fn embed(&self, ambient: usize, xi: &Subspace) -> Result<ConvexBody> {
        if xi.dim() != self.dim || xi.ambient() != ambient {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: xi.dim(),
            });
        }
        let pts: Vec<Vec3> = self
            .vertices
            .iter()
            .map(|v| vecn::from_basis(xi.basis(), &v[..self.dim]))
            .collect();
        ConvexBody::from_points(ambient, &pts)
    }

    /// Euclidean distance from a point to the body.
    pub fn distance_to_point(&self, p: Vec3) -> f64 {
        if self.vertices.len() == 1 {
            return vecn::dist(p, self.vertices[0]);
        }
        match self.dim {
            1 => {
                let lo = self.vertices.iter().map(|v| v[0]).fold(f64::INFINITY, f64::min);
                let hi = self.vertices.iter().map(|v| v[0]).fold(f64::NEG_INFINITY, f64::max);
                (lo - p[0]).max(p[0] - hi).max(0.0).hypot(p[1]).hypot(p[2])
            }
            2 => {
                if self.is_full_dimensional() && self.contains_point(p, 0.0) {
                    return 0.0;
                }
                let n = self.vertices.len();
                (0..n)
                    .map(|i| point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
                    .fold(f64::INFINITY, f64::min)
            }
            _ => {
                if self.is_full_dimensional() {
                    if self.contains_point(p, 0.0) {
                        return 0.0;
                    }
                    self.triangles
                        .iter()
                        .map(|t| {
                            point_triangle_distance(
                                p,
                                self.hull_points[t[0]],
                                self.hull_points[t[1]],
                                self.hull_points[t[2]],
                            )
                        })
                        .fold(f64::INFINITY, f64::min)
                } else if self.vertices.len() == 2 {
                    point_segment_distance(p, self.vertices[0], self.vertices[1])
                } else {
                    // Degenerate polygon in R^3: vertices are stored as an
                    // ordered convex cycle, fan-triangulate.
                    let v0 = self.vertices[0];
                    (1..self.vertices.len() - 1)
                        .map(|i| {
                            point_triangle_distance(p, v0, self.vertices[i], self.vertices[i + 1])
                        })
                        .fold(f64::INFINITY, f64::min)
                }
            }
        }
    }

    /// Membership test by the facet inequalities (full-dimensional bodies).
    pub fn contains_point(&self, p: Vec3, tol: f64) -> bool {
        let t = tol * (1.0 + self.radius());
        self.facets
            .iter()
            .all(|f| vecn::dot(f.normal.coords(), p) <= f.support + t + 1e-12)
    }

    /// Symmetric Hausdorff distance between two polytopes of equal dimension.
    pub fn hausdorff_distance(&self, other: &ConvexBody) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let a = self
            .vertices
            .iter()
            .map(|v| other.distance_to_point(*v))
            .fold(0.0_f64, f64::max);
        let b = other
            .vertices
            .iter()
            .map(|v| self.distance_to_point(*v))
            .fold(0.0_f64, f64::max);
        Ok(a.max(b))
    }

    /// Volume by the cone decomposition (1/n) sum support * area. Compared
    /// against the cached simplex-decomposition volume by the invariants.
    pub fn volume_by_cones(&self) -> f64 {
        let n = self.dim as f64;
        self.facets.iter().map(|f| f.support * f.area).sum::<f64>() / n
    }

    /// Structural invariant check: symmetry, facet support consistency and
    /// the cone-volume identity.
    pub fn check_invariants(&self) -> Result<()> {
        if !self.is_full_dimensional() {
            return Err(Error::DegenerateShape { volume: self.volume });
        }
        if !self.is_origin_symmetric(1e-9) {
            return Err(Error::AsymmetricInput("vertex set not symmetric".into()));
        }
        let scale = 1.0 + self.radius();
        for f in &self.facets {
            let h = self.support(f.normal.coords());
            if (h - f.support).abs() > 1e-9 * scale {
                return Err(Error::InvalidInput(format!(
                    "facet support {} disagrees with vertex max {h}",
                    f.support
                )));
            }
        }
        let vc = self.volume_by_cones();
        if (vc - self.volume).abs() > 1e-9 * self.volume.max(1e-12) {
            return Err(Error::InvalidInput(format!(
                "cone volume {vc} disagrees with cached volume {}",
                self.volume
            )));
        }
        Ok(())
    }
}

fn dedup_points(points: &[Vec3]) -> Vec<Vec3> {
    let scale = points.iter().map(|p| vecn::norm(*p)).fold(0.0_f64, f64::max).max(1.0);
    let tol = 1e-12 * scale;
    let mut out: Vec<Vec3> = Vec::new();
    for p in points {
        if !out.iter().any(|q| vecn::dist(*p, *q) <= tol) {
            out.push(*p);
        }
    }
    out
}

fn build_1d(pts: &[Vec3]) -> ConvexBody {
    let lo = pts.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let hi = pts.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= 1e-12 {
        return ConvexBody {
            dim: 1,
            vertices: vec![[lo, 0.0, 0.0]],
            facets: vec![],
            hull_points: vec![],
            triangles: vec![],
            volume: 0.0,
        };
    }
    let e = Direction::new([1.0, 0.0, 0.0]).unwrap();
    ConvexBody {
        dim: 1,
        vertices: vec![[lo, 0.0, 0.0], [hi, 0.0, 0.0]],
        facets: vec![
            Facet { normal: e, support: hi, area: 1.0 },
            Facet { normal: e.antipode(), support: -lo, area: 1.0 },
        ],
        hull_points: vec![],
        triangles: vec![],
        volume: hi - lo,
    }
}

fn build_2d(pts: &[Vec3]) -> ConvexBody {
    let idx = hull2(pts);
    if idx.len() < 3 {
        let vs: Vec<Vec3> = idx.iter().map(|&i| pts[i]).collect();
        return degenerate(2, vs);
    }
    let vertices: Vec<Vec3> = idx.iter().map(|&i| pts[i]).collect();
    let n = vertices.len();
    let mut facets = Vec::with_capacity(n);
    let mut area2 = 0.0;
    for i in 0..n {
        let a = vertices[i];
        let b = vertices[(i + 1) % n];
        let d = vecn::sub(b, a);
        let len = vecn::norm(d);
        let normal = Direction::new([d[1], -d[0], 0.0]).unwrap();
        let support = vertices
            .iter()
            .map(|v| vecn::dot(normal.coords(), *v))
            .fold(f64::NEG_INFINITY, f64::max);
        facets.push(Facet { normal, support, area: len });
        area2 += a[0] * b[1] - a[1] * b[0];
    }
    let volume = 0.5 * area2; // CCW orientation makes this positive
    if volume <= 1e-12 {
        return degenerate(2, vertices);
    }
    ConvexBody {
        dim: 2,
        vertices,
        facets,
        hull_points: vec![],
        triangles: vec![],
        volume,
    }
}

fn build_3d(pts: &[Vec3]) -> ConvexBody {
    let Some(h) = hull3(pts) else {
        return degenerate_lower_rank_3d(pts);
    };
    let scale = pts.iter().map(|p| vecn::norm(*p)).fold(0.0_f64, f64::max).max(1.0);

    // Merge coplanar triangles into facets.
    struct Group {
        normal_acc: Vec3,
        support: f64,
        area: f64,
    }
    let mut groups: Vec<Group> = Vec::new();
    let mut volume6 = 0.0;
    for t in &h.triangles {
        let (a, b, c) = (pts[t[0]], pts[t[1]], pts[t[2]]);
        let cr = vecn::cross(vecn::sub(b, a), vecn::sub(c, a));
        volume6 += vecn::dot(a, vecn::cross(b, c));
        let area = 0.5 * vecn::norm(cr);
        if area < 1e-13 * scale * scale {
            continue; // sliver from near-collinear horizon edges
        }
        let n = vecn::normalize(cr).unwrap();
        let s = vecn::dot(n, a);
        let mut placed = false;
        for g in &mut groups {
            let gn = vecn::normalize(g.normal_acc).unwrap();
            let close = vecn::dist(gn, n) < 1e-8 && (g.support - s).abs() < 1e-9 * (1.0 + scale);
            if close {
                g.normal_acc = vecn::add(g.normal_acc, vecn::scale(n, area));
                g.support = g.support.max(s);
                g.area += area;
                placed = true;
                break;
            }
        }
        if !placed {
            groups.push(Group {
                normal_acc: vecn::scale(n, area),
                support: s,
                area,
            });
        }
    }
    let volume = volume6 / 6.0;
    if volume <= 1e-12 {
        return degenerate_lower_rank_3d(pts);
    }

    // Hull vertex candidates, then prune points interior to facets or edges:
    // a true corner lies on at least 3 facet planes with independent normals.
    let mut cand: Vec<usize> = h.triangles.iter().flatten().copied().collect();
    cand.sort_unstable();
    cand.dedup();
    let facets: Vec<Facet> = groups
        .iter()
        .map(|g| {
            let normal = Direction::new(g.normal_acc).unwrap();
            let support = pts
                .iter()
                .map(|v| vecn::dot(normal.coords(), *v))
                .fold(f64::NEG_INFINITY, f64::max);
            Facet { normal, support, area: g.area }
        })
        .collect();
    let tol = 1e-9 * (1.0 + scale);
    let vertices: Vec<Vec3> = cand
        .iter()
        .map(|&i| pts[i])
        .filter(|v| {
            let incident: Vec<Vec3> = facets
                .iter()
                .filter(|f| (vecn::dot(f.normal.coords(), *v) - f.support).abs() <= tol)
                .map(|f| f.normal.coords())
                .collect();
            vecn::span_rank(&incident, 1e-6) >= 3
        })
        .collect();

    ConvexBody {
        dim: 3,
        vertices,
        facets,
        hull_points: pts.to_vec(),
        triangles: h.triangles,
        volume,
    }
}

/// Rank-deficient 3D input: keep the hull within the affine span.
fn degenerate_lower_rank_3d(pts: &[Vec3]) -> ConvexBody {
    let rank = vecn::span_rank(
        &pts.iter().map(|p| vecn::sub(*p, pts[0])).collect::<Vec<_>>(),
        1e-12,
    );
    match rank {
        0 => degenerate(3, vec![pts[0]]),
        1 => {
            let d = vecn::normalize(vecn::sub(
                *pts.iter()
                    .max_by(|a, b| vecn::dist(**a, pts[0]).total_cmp(&vecn::dist(**b, pts[0])))
                    .unwrap(),
                pts[0],
            ))
            .unwrap();
            let proj = |p: &Vec3| vecn::dot(vecn::sub(*p, pts[0]), d);
            let lo = pts.iter().min_by(|a, b| proj(a).total_cmp(&proj(b))).unwrap();
            let hi = pts.iter().max_by(|a, b| proj(a).total_cmp(&proj(b))).unwrap();
            degenerate(3, vec![*lo, *hi])
        }
        _ => {
            // Planar cloud: hull in plane coordinates, cycle order kept.
            let basis = vecn::orthonormal_span(
                &pts.iter().map(|p| vecn::sub(*p, pts[0])).collect::<Vec<_>>(),
                1e-12,
            );
            let coords: Vec<Vec3> = pts
                .iter()
                .map(|p| vecn::to_basis(&basis, vecn::sub(*p, pts[0])))
                .collect();
            let idx = hull2(&coords);
            let vs: Vec<Vec3> = idx
                .iter()
                .map(|&i| vecn::add(pts[0], vecn::from_basis(&basis, &coords[i][..2])))
                .collect();
            degenerate(3, vs)
        }
    }
}

fn degenerate(dim: usize, vertices: Vec<Vec3>) -> ConvexBody {
    ConvexBody {
        dim,
        vertices,
        facets: vec![],
        hull_points: vec![],
        triangles: vec![],
        volume: 0.0,
    }
}

fn point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = vecn::sub(b, a);
    let len2 = vecn::dot(ab, ab);
    if len2 <= 1e-300 {
        return vecn::dist(p, a);
    }
    let t = (vecn::dot(vecn::sub(p, a), ab) / len2).clamp(0.0, 1.0);
    vecn::dist(p, vecn::add(a, vecn::scale(ab, t)))
}

/// Closest-point distance to a triangle (Ericson, Real-Time Collision
/// Detection, 5.1.5).
fn point_triangle_distance(p: Vec3, a: Vec3, b: Vec3, c: Vec3) -> f64 {
    let ab = vecn::sub(b, a);
    let ac = vecn::sub(c, a);
    let ap = vecn::sub(p, a);
    let d1 = vecn::dot(ab, ap);
    let d2 = vecn::dot(ac, ap);
    if d1 <= 0.0 && d2 <= 0.0 {
        return vecn::dist(p, a);
    }
    let bp = vecn::sub(p, b);
    let d3 = vecn::dot(ab, bp);
    let d4 = vecn::dot(ac, bp);
    if d3 >= 0.0 && d4 <= d3 {
        return vecn::dist(p, b);
    }
    let vc = d1 * d4 - d3 * d2;
    if vc <= 0.0 && d1 >= 0.0 && d3 <= 0.0 {
        let t = d1 / (d1 - d3);
        return vecn::dist(p, vecn::add(a, vecn::scale(ab, t)));
    }
    let cp = vecn::sub(p, c);
    let d5 = vecn::dot(ab, cp);
    let d6 = vecn::dot(ac, cp);
    if d6 >= 0.0 && d5 <= d6 {
        return vecn::dist(p, c);
    }
    let vb = d5 * d2 - d1 * d6;
    if vb <= 0.0 && d2 >= 0.0 && d6 <= 0.0 {
        let t = d2 / (d2 - d6);
        return vecn::dist(p, vecn::add(a, vecn::scale(ac, t)));
    }
    let va = d3 * d6 - d5 * d4;
    if va <= 0.0 && (d4 - d3) >= 0.0 && (d5 - d6) >= 0.0 {
        let t = (d4 - d3) / ((d4 - d3) + (d5 - d6));
        return vecn::dist(p, vecn::add(b, vecn::scale(vecn::sub(c, b), t)));
    }
    let denom = 1.0 / (va + vb + vc);
    let v = vb * denom;
    let w = vc * denom;
    let q = vecn::add(a, vecn::add(vecn::scale(ab, v), vecn::scale(ac, w)));
    vecn::dist(p, q)
}
