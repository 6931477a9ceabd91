//! Fixed-size vector helpers for points in dimensions 1-3.
//!
//! All points are stored as `[f64; 3]` with unused trailing coordinates
//! kept at zero; the ambient dimension travels separately.

pub type Vec3 = [f64; 3];

pub const ZERO: Vec3 = [0.0, 0.0, 0.0];

pub fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn neg(a: Vec3) -> Vec3 {
    [-a[0], -a[1], -a[2]]
}

pub fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm(a: Vec3) -> f64 {
    dot(a, a).sqrt()
}

pub fn dist(a: Vec3, b: Vec3) -> f64 {
    norm(sub(a, b))
}

/// Unit vector in the direction of `a`; `None` when `a` is numerically zero.
pub fn normalize(a: Vec3) -> Option<Vec3> {
    let n = norm(a);
    if n <= 1e-14 {
        None
    } else {
        Some(scale(a, 1.0 / n))
    }
}

/// Embed intrinsic coordinates `c` (length `k`) through an orthonormal basis.
pub fn from_basis(basis: &[Vec3], c: &[f64]) -> Vec3 {
    let mut out = ZERO;
    for (b, &ci) in basis.iter().zip(c) {
        out = add(out, scale(*b, ci));
    }
    out
}

/// Coordinates of `v` in an orthonormal basis (projection onto its span).
pub fn to_basis(basis: &[Vec3], v: Vec3) -> Vec3 {
    let mut c = ZERO;
    for (i, b) in basis.iter().enumerate() {
        c[i] = dot(*b, v);
    }
    c
}

/// Rank of the span of `vs` through the origin, by Gram-Schmidt with a
/// relative tolerance on the residual norm.
pub fn span_rank(vs: &[Vec3], tol: f64) -> usize {
    let mut basis: Vec<Vec3> = Vec::new();
    let scale_ref = vs.iter().map(|v| norm(*v)).fold(0.0_f64, f64::max).max(1.0);
    for v in vs {
        let mut r = *v;
        for b in &basis {
            r = sub(r, scale(*b, dot(r, *b)));
        }
        if norm(r) > tol * scale_ref {
            basis.push(normalize(r).unwrap());
            if basis.len() == 3 {
                break;
            }
        }
    }
    basis.len()
}

/// Orthonormal basis of the span of `vs`.
pub fn orthonormal_span(vs: &[Vec3], tol: f64) -> Vec<Vec3> {
    let mut basis: Vec<Vec3> = Vec::new();
    let scale_ref = vs.iter().map(|v| norm(*v)).fold(0.0_f64, f64::max).max(1.0);
    for v in vs {
        let mut r = *v;
        for b in &basis {
            r = sub(r, scale(*b, dot(r, *b)));
        }
        if norm(r) > tol * scale_ref {
            basis.push(normalize(r).unwrap());
            if basis.len() == 3 {
                break;
            }
        }
    }
    basis
}

/// Orthonormal basis of the orthogonal complement of `basis` in R^n.
pub fn orthogonal_complement(basis: &[Vec3], n: usize) -> Vec<Vec3> {
    let mut full = basis.to_vec();
    let mut comp = Vec::new();
    let axes = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for e in axes.iter().take(n) {
        let mut r = *e;
        for b in &full {
            r = sub(r, scale(*b, dot(r, *b)));
        }
        if norm(r) > 1e-9 {
            let u = normalize(r).unwrap();
            full.push(u);
            comp.push(u);
        }
    }
    comp
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_is_orthogonal() {
        let a = [1.0, 2.0, 3.0];
        let b = [-1.0, 0.5, 2.0];
        let c = cross(a, b);
        assert!(dot(a, c).abs() < 1e-12);
        assert!(dot(b, c).abs() < 1e-12);
    }

    #[test]
    fn span_rank_counts_independent_vectors() {
        assert_eq!(span_rank(&[[1.0, 0.0, 0.0], [2.0, 0.0, 0.0]], 1e-9), 1);
        assert_eq!(
            span_rank(&[[1.0, 0.0, 0.0], [1.0, 1.0, 0.0], [0.0, 0.0, 5.0]], 1e-9),
            3
        );
    }

    #[test]
    fn complement_completes_the_basis() {
        let comp = orthogonal_complement(&[[0.0, 0.0, 1.0]], 3);
        assert_eq!(comp.len(), 2);
        for c in &comp {
            assert!(dot(*c, [0.0, 0.0, 1.0]).abs() < 1e-12);
        }
    }
}
