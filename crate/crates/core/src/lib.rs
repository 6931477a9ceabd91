//! Support functions, Wulff shapes, surface-area and cone-volume measures
//! of origin-symmetric polytopes in dimensions 1-3, with a verifier for the
//! logarithmic Minkowski inequality in its proven regimes and a first-order
//! solver for the associated extremum problem.

pub mod body;
pub mod cylinder;
pub mod direction;
pub mod error;
pub mod hull;
pub mod io;
pub mod linmap;
pub mod logmink;
pub mod measures;
pub mod sampling;
pub mod solver;
pub mod subspace;
pub mod vecn;
pub mod wulff;

pub use body::{ConvexBody, Facet};
pub use cylinder::{
    classify_equality, classify_equality_tol, detect_cylinder, CylinderSplit, EqualityClass,
};
pub use direction::Direction;
pub use error::{Error, Result};
pub use linmap::LinearMap;
pub use logmink::{
    log_combination, log_minkowski_lhs, lp_combination, verify_log_minkowski, CombinationParams,
    VerifyReport,
};
pub use measures::{
    cone_volume_measure, measures_equal, product_cone_volume, subspace_concentration_check,
    surface_area_measure, transform_surface_measure, ConcentrationVerdict, DiscreteMeasure,
    MeasureKind,
};
pub use solver::{phi_gradient, phi_objective, recover_and_compare, solve_extremum, ExtremumProblem, SolverResult};
pub use subspace::Subspace;
pub use wulff::{wulff_shape, SupportSamples};
