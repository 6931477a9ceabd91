//! Convex hulls at desk scale: 2D monotone chain and a 3D hull delegated
//! to qhull, returned as outward-oriented triangles so flat facets come out
//! as fans that the facet-merging step can group.

use crate::vecn::{self, Vec3};

/// Indices of the hull of coplanar points (z ignored), counter-clockwise.
/// Collinear points along edges are dropped. Returns fewer than 3 indices
/// when the input is rank-deficient.
pub fn hull2(points: &[Vec3]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    idx.dedup_by(|&mut a, &mut b| vecn::dist(points[a], points[b]) < 1e-12);
    if idx.len() < 3 {
        return idx;
    }
    let scale = idx
        .iter()
        .map(|&i| vecn::norm(points[i]))
        .fold(0.0_f64, f64::max)
        .max(1.0);
    let eps = 1e-12 * scale * scale;
    let cross2 = |o: Vec3, a: Vec3, b: Vec3| -> f64 {
        (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
    };
    let build = |iter: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut chain: Vec<usize> = Vec::new();
        for i in iter {
            while chain.len() >= 2
                && cross2(
                    points[chain[chain.len() - 2]],
                    points[chain[chain.len() - 1]],
                    points[i],
                ) <= eps
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain
    };
    let mut lower = build(&mut idx.iter().copied());
    let mut upper = build(&mut idx.iter().rev().copied());
    lower.pop();
    upper.pop();
    lower.append(&mut upper);
    lower
}

/// Triangulated 3D hull: outward-oriented triangles indexing into `points`.
pub struct Hull3 {
    pub triangles: Vec<[usize; 3]>,
}

/// Builds the hull; `None` when the points are not full-dimensional in R^3.
///
/// The heavy lifting is delegated to qhull; the wrapper checks affine rank
/// first (qhull reports degenerate input as an error) and re-orients every
/// triangle outward against the point centroid.
pub fn hull3(points: &[Vec3]) -> Option<Hull3> {
    if points.len() < 4 || affine_rank(points) < 3 {
        return None;
    }
    let qh = qhull::Qh::builder()
        .compute(true)
        .triangulate(true)
        .build_from_iter(points.iter().copied())
        .ok()?;
    let m = points.len() as f64;
    let centroid = points
        .iter()
        .fold(vecn::ZERO, |acc, p| vecn::add(acc, vecn::scale(*p, 1.0 / m)));
    let mut triangles = Vec::new();
    for f in qh.facets() {
        let Some(vs) = f.vertices() else { continue };
        let idx: Vec<usize> = vs.iter().filter_map(|v| v.index(&qh)).collect();
        if idx.len() != 3 {
            continue;
        }
        let [a, b, c] = [idx[0], idx[1], idx[2]];
        let n = vecn::cross(
            vecn::sub(points[b], points[a]),
            vecn::sub(points[c], points[a]),
        );
        if vecn::dot(n, vecn::sub(points[a], centroid)) >= 0.0 {
            triangles.push([a, b, c]);
        } else {
            triangles.push([a, c, b]);
        }
    }
    if triangles.len() < 4 {
        return None;
    }
    Some(Hull3 { triangles })
}

fn affine_rank(points: &[Vec3]) -> usize {
    let rels: Vec<Vec3> = points[1..]
        .iter()
        .map(|p| vecn::sub(*p, points[0]))
        .collect();
    let scale = rels.iter().map(|v| vecn::norm(*v)).fold(0.0_f64, f64::max);
    if scale <= 0.0 {
        return 0;
    }
    vecn::span_rank(&rels, 1e-12 * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn contains_all(points: &[Vec3], h: &Hull3) {
        for p in points {
            for &[a, b, c] in &h.triangles {
                let n = vecn::cross(
                    vecn::sub(points[b], points[a]),
                    vecn::sub(points[c], points[a]),
                );
                let nn = vecn::norm(n).max(1e-300);
                let d = vecn::dot(n, vecn::sub(*p, points[a])) / nn;
                assert!(d < 1e-8, "point {p:?} outside face");
            }
        }
    }

    #[test]
    fn hull2_square_with_interior_points() {
        let pts = vec![
            [1.0, 1.0, 0.0],
            [-1.0, 1.0, 0.0],
            [-1.0, -1.0, 0.0],
            [1.0, -1.0, 0.0],
            [0.0, 0.0, 0.0],
            [0.5, 1.0, 0.0], // on an edge, must be dropped
        ];
        let h = hull2(&pts);
        assert_eq!(h.len(), 4);
    }

    #[test]
    fn hull3_cube_has_twelve_triangles() {
        let mut pts = Vec::new();
        for &x in &[-1.0, 1.0] {
            for &y in &[-1.0, 1.0] {
                for &z in &[-1.0, 1.0] {
                    pts.push([x, y, z]);
                }
            }
        }
        let h = hull3(&pts).unwrap();
        assert_eq!(h.triangles.len(), 12);
        contains_all(&pts, &h);
    }

    #[test]
    fn hull3_octahedron() {
        let pts = vec![
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [0.0, -1.0, 0.0],
            [0.0, 0.0, 1.0],
            [0.0, 0.0, -1.0],
            [0.1, 0.1, 0.1], // interior
        ];
        let h = hull3(&pts).unwrap();
        assert_eq!(h.triangles.len(), 8);
        contains_all(&pts, &h);
    }

    #[test]
    fn hull3_coplanar_returns_none() {
        let pts = vec![
            [0.0, 0.0, 0.0],
            [1.0, 0.0, 0.0],
            [0.0, 1.0, 0.0],
            [1.0, 1.0, 0.0],
        ];
        assert!(hull3(&pts).is_none());
    }

    #[test]
    fn hull3_many_coplanar_face_points() {
        // Hexagonal prism: 6 coplanar points per cap.
        let mut pts = Vec::new();
        for k in 0..6 {
            let a = std::f64::consts::PI / 3.0 * k as f64;
            for &z in &[-1.0, 1.0] {
                pts.push([a.cos(), a.sin(), z]);
            }
        }
        let h = hull3(&pts).unwrap();
        contains_all(&pts, &h);
        // Euler: 12 vertices, 20 triangles on a triangulated prism surface.
        assert_eq!(h.triangles.len(), 20);
    }
}
