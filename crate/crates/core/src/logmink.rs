use crate::body::ConvexBody;
use crate::cylinder::{classify_equality, detect_cylinder, EqualityClass};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::measures::cone_volume_measure;
use crate::sampling::quasi_uniform_directions;
use crate::wulff::{wulff_shape, SupportSamples};
use serde::{Deserialize, Serialize};

/// Exponent of an L_p combination: a positive p, or the p -> 0 limit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    P(f64),
    Log,
}

/// Interpolation parameters: lambda in (0,1) and the exponent.
#[derive(Debug, Clone, Copy)]
pub struct CombinationParams {
    lambda: f64,
    exponent: Exponent,
}

impl CombinationParams {
    pub fn new(lambda: f64, exponent: Exponent) -> Result<Self> {
        if !(0.0 < lambda && lambda < 1.0) {
            return Err(Error::InvalidInput(format!(
                "lambda {lambda} must lie strictly inside (0, 1)"
            )));
        }
        if let Exponent::P(p) = exponent {
            if p <= 0.0 {
                return Err(Error::InvalidP(p));
            }
        }
        Ok(CombinationParams { lambda, exponent })
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn exponent(&self) -> Exponent {
        self.exponent
    }
}

/// Facet normals of both bodies plus a quasi-uniform enrichment grid
/// (512 directions in 3D, 256 in 2D).
pub fn default_sample_directions(k: &ConvexBody, l: &ConvexBody) -> Vec<Direction> {
    let mut dirs: Vec<Direction> = k
        .facets()
        .iter()
        .chain(l.facets().iter())
        .map(|f| f.normal)
        .collect();
    let count = match k.dim() {
        3 => 512,
        2 => 256,
        _ => 2,
    };
    dirs.extend(quasi_uniform_directions(k.dim(), count));
    dirs
}

fn combination_body<F: Fn(f64, f64) -> f64>(
    k: &ConvexBody,
    l: &ConvexBody,
    sample_dirs: Option<&[Direction]>,
    mix: F,
) -> Result<ConvexBody> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            left: k.dim(),
            right: l.dim(),
        });
    }
    let default_dirs;
    let dirs = match sample_dirs {
        Some(d) => d,
        None => {
            default_dirs = default_sample_directions(k, l);
            &default_dirs
        }
    };
    let atoms: Vec<(Direction, f64)> = dirs
        .iter()
        .map(|u| {
            let hk = k.support(u.coords());
            let hl = l.support(u.coords());
            (*u, mix(hk, hl))
        })
        .collect();
    wulff_shape(&SupportSamples::new(k.dim(), &atoms)?)
}

/// The L_p combination (1-lambda) . K +_p lambda . L, p > 0, as the Wulff
/// shape of ((1-lambda) h_K^p + lambda h_L^p)^{1/p} on the sampled
/// direction set. Finite sampling only removes constraints, so the result
/// is an outer polytopal approximation of the true combination.
pub fn lp_combination(
    k: &ConvexBody,
    l: &ConvexBody,
    params: &CombinationParams,
    sample_dirs: Option<&[Direction]>,
) -> Result<ConvexBody> {
    let lam = params.lambda();
    match params.exponent() {
        Exponent::Log => log_combination(k, l, lam, sample_dirs),
        Exponent::P(p) => combination_body(k, l, sample_dirs, |hk, hl| {
            ((1.0 - lam) * hk.powf(p) + lam * hl.powf(p)).powf(1.0 / p)
        }),
    }
}

/// The logarithmic combination: Wulff shape of h_K^{1-lambda} h_L^lambda.
pub fn log_combination(
    k: &ConvexBody,
    l: &ConvexBody,
    lambda: f64,
    sample_dirs: Option<&[Direction]>,
) -> Result<ConvexBody> {
    if !(0.0 < lambda && lambda < 1.0) {
        return Err(Error::InvalidInput(format!(
            "lambda {lambda} must lie strictly inside (0, 1)"
        )));
    }
    combination_body(k, l, sample_dirs, |hk, hl| {
        hk.powf(1.0 - lambda) * hl.powf(lambda)
    })
}

/// The normalized logarithmic Minkowski functional
/// (1/V(K)) sum_i V_K(u_i) log(h_L(u_i) / h_K(u_i)),
/// summed over the facets of K. Exact for polytopal K since the cone-volume
/// measure is discrete.
pub fn log_minkowski_lhs(k: &ConvexBody, l: &ConvexBody) -> Result<f64> {
    if k.dim() != l.dim() {
        return Err(Error::DimensionMismatch {
            left: k.dim(),
            right: l.dim(),
        });
    }
    let vk = cone_volume_measure(k)?;
    let mut acc = 0.0;
    for (u, w) in vk.atoms() {
        let hl = l.support(u.coords());
        if hl <= 0.0 {
            return Err(Error::NonpositiveSupport {
                u: u.coords(),
                value: hl,
            });
        }
        let hk = k.support(u.coords());
        acc += w * (hl / hk).ln();
    }
    Ok(acc / k.volume())
}

/// Classification attached to a verified gap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GapClass {
    Dilatates,
    RelativeCylinders,
    Strict,
    /// |gap| within tolerance but no structural equality case detected.
    NumericalTie,
}

/// Outcome of a logarithmic Minkowski inequality check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReport {
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
    pub class: GapClass,
    /// True outside the proven regimes (3D with non-cylinder K); no
    /// pass/fail verdict is implied there.
    pub conjectural: bool,
    pub tol: f64,
}

impl VerifyReport {
    /// A negative gap beyond tolerance in a proven regime signals a bug.
    pub fn violation(&self) -> bool {
        !self.conjectural && self.gap < -self.tol
    }
}

/// Computes lhs, rhs = (1/n) log(V(L)/V(K)) and the gap, classifying the
/// equality case when the gap vanishes. Proven regimes: n = 1, n = 2, and
/// n = 3 with K a cylinder; other inputs are flagged conjectural.
pub fn verify_log_minkowski(k: &ConvexBody, l: &ConvexBody, tol: f64) -> Result<VerifyReport> {
    let lhs = log_minkowski_lhs(k, l)?;
    let n = k.dim() as f64;
    let rhs = (l.volume() / k.volume()).ln() / n;
    let gap = lhs - rhs;
    let conjectural = k.dim() == 3 && detect_cylinder(k)?.is_none();
    let class = if gap.abs() <= tol {
        match classify_equality(k, l)? {
            Some(EqualityClass::Dilatates) => GapClass::Dilatates,
            Some(EqualityClass::RelativeCylinders) => GapClass::RelativeCylinders,
            None => GapClass::NumericalTie,
        }
    } else {
        GapClass::Strict
    };
    Ok(VerifyReport {
        lhs,
        rhs,
        gap,
        class,
        conjectural,
        tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> ConvexBody {
        ConvexBody::make_box(3, [1.0, 1.0, 1.0]).unwrap()
    }

    fn octahedron() -> ConvexBody {
        ConvexBody::from_points(
            3,
            &[
                [1.0, 0.0, 0.0],
                [-1.0, 0.0, 0.0],
                [0.0, 1.0, 0.0],
                [0.0, -1.0, 0.0],
                [0.0, 0.0, 1.0],
                [0.0, 0.0, -1.0],
            ],
        )
        .unwrap()
    }

    #[test]
    fn lp_idempotence() {
        let k = cube();
        for p in [0.5, 1.0, 2.0] {
            let params = CombinationParams::new(0.3, Exponent::P(p)).unwrap();
            let c = lp_combination(&k, &k, &params, None).unwrap();
            assert!(c.hausdorff_distance(&k).unwrap() < 1e-9);
        }
    }

    #[test]
    fn lp_of_dilatates() {
        let k = cube();
        let l = k.dilate(2.0).unwrap();
        let p1 = CombinationParams::new(0.5, Exponent::P(1.0)).unwrap();
        let c1 = lp_combination(&k, &l, &p1, None).unwrap();
        assert!(c1.hausdorff_distance(&k.dilate(1.5).unwrap()).unwrap() < 1e-9);
        let p2 = CombinationParams::new(0.5, Exponent::P(2.0)).unwrap();
        let c2 = lp_combination(&k, &l, &p2, None).unwrap();
        let expect = k.dilate((2.5_f64).sqrt()).unwrap();
        assert!(c2.hausdorff_distance(&expect).unwrap() < 1e-9);
    }

    #[test]
    fn log_combination_of_dilatates() {
        let k = octahedron();
        let l = k.dilate(4.0).unwrap();
        let c = log_combination(&k, &l, 0.5, None).unwrap();
        assert!(c.hausdorff_distance(&k.dilate(2.0).unwrap()).unwrap() < 1e-9);
    }

    #[test]
    fn log_combination_of_boxes_is_geometric_mean() {
        let k = cube();
        let l = ConvexBody::make_box(3, [4.0, 1.0, 1.0]).unwrap();
        let c = log_combination(&k, &l, 0.5, None).unwrap();
        let expect = ConvexBody::make_box(3, [2.0, 1.0, 1.0]).unwrap();
        assert!(c.hausdorff_distance(&expect).unwrap() < 1e-6);
    }

    #[test]
    fn log_combination_small_lambda_stays_near_k() {
        let k = cube();
        let l = octahedron();
        let c = log_combination(&k, &l, 1e-6, None).unwrap();
        assert!(c.hausdorff_distance(&k).unwrap() < 1e-4);
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(CombinationParams::new(0.0, Exponent::P(1.0)).is_err());
        assert!(CombinationParams::new(1.0, Exponent::P(1.0)).is_err());
        assert!(matches!(
            CombinationParams::new(0.5, Exponent::P(-1.0)),
            Err(Error::InvalidP(_))
        ));
    }

    #[test]
    fn lhs_dilatates() {
        let k = octahedron();
        let l = k.dilate(3.0).unwrap();
        let lhs = log_minkowski_lhs(&k, &l).unwrap();
        assert!((lhs - 3.0_f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn lhs_cube_vs_box() {
        let k = cube();
        let l = ConvexBody::make_box(3, [2.0, 1.0, 1.0]).unwrap();
        let lhs = log_minkowski_lhs(&k, &l).unwrap();
        assert!((lhs - 2.0_f64.ln() / 3.0).abs() < 1e-9);
        let r = verify_log_minkowski(&k, &l, 1e-9).unwrap();
        assert!(r.gap.abs() < 1e-9);
        assert_eq!(r.class, GapClass::RelativeCylinders);
        assert!(!r.conjectural);
    }

    #[test]
    fn one_dimensional_identity() {
        let k = ConvexBody::make_segment(0.7).unwrap();
        let l = ConvexBody::make_segment(2.3).unwrap();
        let r = verify_log_minkowski(&k, &l, 1e-12).unwrap();
        assert!((r.lhs - (2.3_f64 / 0.7).ln()).abs() < 1e-12);
        assert!(r.gap.abs() < 1e-12);
        assert_eq!(r.class, GapClass::Dilatates);
    }

    #[test]
    fn cube_vs_octahedron_strict() {
        let r = verify_log_minkowski(&cube(), &octahedron(), 1e-9).unwrap();
        assert!(!r.conjectural); // the cube is a cylinder
        let expect = 6.0_f64.ln() / 3.0;
        assert!((r.gap - expect).abs() < 1e-9);
        assert_eq!(r.class, GapClass::Strict);
    }

    #[test]
    fn square_vs_rect_equality() {
        let k = ConvexBody::make_box(2, [1.0, 1.0, 0.0]).unwrap();
        let l = ConvexBody::make_box(2, [2.0, 1.0, 0.0]).unwrap();
        let r = verify_log_minkowski(&k, &l, 1e-9).unwrap();
        assert!((r.lhs - 0.5 * 2.0_f64.ln()).abs() < 1e-9);
        assert!(r.gap.abs() < 1e-9);
        assert_eq!(r.class, GapClass::RelativeCylinders);
    }

    #[test]
    fn octahedron_k_is_conjectural() {
        let r = verify_log_minkowski(&octahedron(), &cube(), 1e-9).unwrap();
        assert!(r.conjectural);
        assert!(!r.violation());
    }
}
