//! JSON serialization of bodies, measures and reports. Every artifact
//! carries a `"schema": 1` version field. Bodies load from either a vertex
//! list or a halfspace list; normals and atom directions need not be
//! pre-normalized in input files.

use crate::body::ConvexBody;
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::measures::{DiscreteMeasure, MeasureKind};
use crate::solver::{SolveStatus, SolverResult};
use crate::vecn::{self, Vec3};
use crate::wulff::{wulff_shape, SupportSamples};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

fn default_schema() -> u32 {
    SCHEMA_VERSION
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HalfspaceJson {
    pub normal: Vec<f64>,
    pub support: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BodyJson {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfspaces: Option<Vec<HalfspaceJson>>,
}

fn to_vec3(dim: usize, v: &[f64]) -> Result<Vec3> {
    if v.len() != dim {
        return Err(Error::InvalidInput(format!(
            "expected {dim} coordinates, found {}",
            v.len()
        )));
    }
    let mut out = vecn::ZERO;
    out[..dim].copy_from_slice(v);
    Ok(out)
}

fn from_vec3(dim: usize, v: Vec3) -> Vec<f64> {
    v[..dim].to_vec()
}

pub fn body_to_json(body: &ConvexBody) -> BodyJson {
    BodyJson {
        schema: SCHEMA_VERSION,
        dim: body.dim(),
        vertices: Some(
            body.vertices()
                .iter()
                .map(|v| from_vec3(body.dim(), *v))
                .collect(),
        ),
        halfspaces: Some(
            body.facets()
                .iter()
                .map(|f| HalfspaceJson {
                    normal: from_vec3(body.dim(), f.normal.coords()),
                    support: f.support,
                })
                .collect(),
        ),
    }
}

pub fn body_from_json(json: &BodyJson) -> Result<ConvexBody> {
    if !(1..=3).contains(&json.dim) {
        return Err(Error::InvalidInput(format!(
            "unsupported dimension {}",
            json.dim
        )));
    }
    if let Some(vertices) = &json.vertices {
        let pts: Vec<Vec3> = vertices
            .iter()
            .map(|v| to_vec3(json.dim, v))
            .collect::<Result<_>>()?;
        let body = ConvexBody::from_points(json.dim, &pts)?;
        // Every artifact in this toolkit describes an origin-symmetric
        // body; reject asymmetric vertex sets at the boundary.
        if !body.is_origin_symmetric(1e-9) {
            return Err(Error::AsymmetricInput(
                "vertex set is not origin-symmetric".into(),
            ));
        }
        return Ok(body);
    }
    if let Some(halfspaces) = &json.halfspaces {
        let atoms: Vec<(Direction, f64)> = halfspaces
            .iter()
            .map(|h| {
                let raw = to_vec3(json.dim, &h.normal)?;
                let len = vecn::norm(raw);
                let u = Direction::new(raw)?;
                // Rescale so the constraint x . normal <= support is kept
                // verbatim under the unit normal.
                Ok((u, h.support / len))
            })
            .collect::<Result<_>>()?;
        let samples = SupportSamples::new(json.dim, &atoms)?;
        return wulff_shape(&samples);
    }
    Err(Error::InvalidInput(
        "body JSON needs either \"vertices\" or \"halfspaces\"".into(),
    ))
}

pub fn body_to_string(body: &ConvexBody) -> String {
    serde_json::to_string_pretty(&body_to_json(body)).expect("body serializes")
}

pub fn body_from_str(s: &str) -> Result<ConvexBody> {
    let json: BodyJson =
        serde_json::from_str(s).map_err(|e| Error::InvalidInput(format!("bad body JSON: {e}")))?;
    body_from_json(&json)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureAtomJson {
    pub u: Vec<f64>,
    pub w: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasureJson {
    #[serde(default = "default_schema")]
    pub schema: u32,
    pub dim: usize,
    pub kind: String,
    pub atoms: Vec<MeasureAtomJson>,
}

fn kind_to_str(kind: MeasureKind) -> &'static str {
    match kind {
        MeasureKind::Surface => "surface",
        MeasureKind::ConeVolume => "cone-volume",
        MeasureKind::Generic => "generic",
    }
}

fn kind_from_str(s: &str) -> Result<MeasureKind> {
    match s {
        "surface" => Ok(MeasureKind::Surface),
        "cone-volume" => Ok(MeasureKind::ConeVolume),
        "generic" => Ok(MeasureKind::Generic),
        other => Err(Error::InvalidInput(format!("unknown measure kind {other:?}"))),
    }
}

pub fn measure_to_json(mu: &DiscreteMeasure) -> MeasureJson {
    MeasureJson {
        schema: SCHEMA_VERSION,
        dim: mu.dim(),
        kind: kind_to_str(mu.kind()).to_string(),
        atoms: mu
            .atoms()
            .iter()
            .map(|(u, w)| MeasureAtomJson {
                u: from_vec3(mu.dim(), u.coords()),
                w: *w,
            })
            .collect(),
    }
}

/// Loads a measure; directions are normalized and evenness is enforced by
/// symmetrization. Returns a warning string when the input asymmetry
/// exceeds 1e-6 relative.
pub fn measure_from_json(json: &MeasureJson) -> Result<(DiscreteMeasure, Option<String>)> {
    let kind = kind_from_str(&json.kind)?;
    let atoms: Vec<(Direction, f64)> = json
        .atoms
        .iter()
        .map(|a| {
            if a.w < 0.0 {
                return Err(Error::InvalidInput(format!("negative weight {}", a.w)));
            }
            Ok((Direction::new(to_vec3(json.dim, &a.u)?)?, a.w))
        })
        .collect::<Result<_>>()?;
    let raw = DiscreteMeasure::new(json.dim, kind, &atoms)?;
    let warning = if raw.is_even(1e-6) {
        None
    } else {
        Some("input measure is not even; symmetrizing".to_string())
    };
    Ok((raw.symmetrized(), warning))
}

pub fn measure_to_string(mu: &DiscreteMeasure) -> String {
    serde_json::to_string_pretty(&measure_to_json(mu)).expect("measure serializes")
}

pub fn measure_from_str(s: &str) -> Result<(DiscreteMeasure, Option<String>)> {
    let json: MeasureJson = serde_json::from_str(s)
        .map_err(|e| Error::InvalidInput(format!("bad measure JSON: {e}")))?;
    measure_from_json(&json)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TracePointJson {
    pub iteration: usize,
    pub phi: f64,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverResultJson {
    pub schema: u32,
    pub status: SolveStatus,
    pub phi: f64,
    pub grad_norm: f64,
    pub stationarity_residual: f64,
    pub iterations: usize,
    pub body: BodyJson,
    pub trace: Vec<TracePointJson>,
}

pub fn solver_result_to_json(result: &SolverResult) -> SolverResultJson {
    SolverResultJson {
        schema: SCHEMA_VERSION,
        status: result.status,
        phi: result.phi,
        grad_norm: result.grad_norm,
        stationarity_residual: result.stationarity_residual,
        iterations: result.iterations,
        body: body_to_json(&result.body),
        trace: result
            .trace
            .iter()
            .map(|(iteration, phi, grad_norm)| TracePointJson {
                iteration: *iteration,
                phi: *phi,
                grad_norm: *grad_norm,
            })
            .collect(),
    }
}
