//! The analysis configuration document: a geometry spec plus the list of
//! analyses to run and tolerance overrides.

use hologeom_core::complex::C;
use hologeom_core::geomspec::{DomainRect, SpecDocument};
use serde::{Deserialize, Serialize};

pub fn as_c(v: [f64; 2]) -> C {
    C::new(v[0], v[1])
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConfigDocument {
    #[serde(flatten)]
    pub spec: SpecDocument,
    #[serde(default)]
    pub analyses: Vec<AnalysisRequest>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<Tolerances>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub tol_iso: Option<f64>,
    pub tol_rel: Option<f64>,
    pub root_tol: Option<f64>,
}

fn default_depth() -> usize {
    3
}

fn default_n() -> usize {
    100
}

fn default_grid() -> usize {
    48
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum AnalysisRequest {
    /// Plane-curve point invariants at each parameter value.
    InvariantsAt {
        points: Vec<[f64; 2]>,
        #[serde(default = "default_depth")]
        depth: usize,
    },
    /// Plane-curve contact classification against a line or circle.
    Contact {
        t: [f64; 2],
        model: ContactModelSpec,
    },
    /// Evolute polyline with isotropic-point tangency reports.
    EvoluteSample {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        region: Option<DomainRect>,
        #[serde(default = "default_n")]
        n: usize,
    },
    /// Unit-speed chart construction plus arclength evaluations.
    ArcLengthChart {
        t0: [f64; 2],
        radius: f64,
        #[serde(default)]
        lengths_at: Vec<[f64; 2]>,
    },
    /// Hermitian normal-family invariant 1 + ‖vκ‖² at (s, v) samples.
    HermitianJacobian {
        t0: [f64; 2],
        radius: f64,
        samples: Vec<[[f64; 2]; 2]>,
    },
    /// Space-curve Frenet data at each parameter value.
    FrenetAt { points: Vec<[f64; 2]> },
    /// Space-curve contact classification against a plane or projection.
    Contact3 {
        t: [f64; 2],
        model: ContactModel3Spec,
    },
    /// Fundamental forms at surface parameter points.
    FormsAt { points: Vec<[[f64; 2]; 2]> },
    /// Shape operator data at surface parameter points.
    ShapeAt { points: Vec<[[f64; 2]; 2]> },
    /// Focal points / IL extension at surface parameter points.
    FocalAt { points: Vec<[[f64; 2]; 2]> },
    /// Surface contact report (plane / sphere / projection).
    SurfaceContact {
        q: [[f64; 2]; 2],
        model: SurfaceModelSpec,
    },
    /// Zero-contour trace of a surface locus on the configured slice.
    TraceLocus {
        which: LocusWhich,
        u_range: [f64; 2],
        v_range: [f64; 2],
        #[serde(default = "default_grid")]
        n: usize,
    },
    /// Algebraic-curve hypothesis report.
    CheckHypotheses,
    /// Certified isotropic-point count (algebraic curves).
    IsotropicPoints,
    /// Certified inflection count.
    Inflections,
    /// Certified vertex count.
    Vertices,
}

impl AnalysisRequest {
    pub fn op_name(&self) -> &'static str {
        match self {
            AnalysisRequest::InvariantsAt { .. } => "invariants_at",
            AnalysisRequest::Contact { .. } => "contact",
            AnalysisRequest::EvoluteSample { .. } => "evolute_sample",
            AnalysisRequest::ArcLengthChart { .. } => "arc_length_chart",
            AnalysisRequest::HermitianJacobian { .. } => "hermitian_jacobian",
            AnalysisRequest::FrenetAt { .. } => "frenet_at",
            AnalysisRequest::Contact3 { .. } => "contact3",
            AnalysisRequest::FormsAt { .. } => "forms_at",
            AnalysisRequest::ShapeAt { .. } => "shape_at",
            AnalysisRequest::FocalAt { .. } => "focal_at",
            AnalysisRequest::SurfaceContact { .. } => "surface_contact",
            AnalysisRequest::TraceLocus { .. } => "trace_locus",
            AnalysisRequest::CheckHypotheses => "check_hypotheses",
            AnalysisRequest::IsotropicPoints => "isotropic_points",
            AnalysisRequest::Inflections => "inflections",
            AnalysisRequest::Vertices => "vertices",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactModelSpec {
    Line { v: [[f64; 2]; 2] },
    Circle { center: [[f64; 2]; 2] },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ContactModel3Spec {
    Plane { v: [[f64; 2]; 3] },
    Projection { v: [[f64; 2]; 3] },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceModelSpec {
    Plane,
    Sphere { center: [[f64; 2]; 3] },
    Projection { v: [[f64; 2]; 3] },
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum LocusWhich {
    Il,
    Parabolic,
    Ridge1,
    Ridge2,
}
