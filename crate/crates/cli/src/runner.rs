//! Executes the analyses of one config against the core modules, mapping
//! every outcome (including typed geometry errors) into report entries,
//! warnings and exit-code classes.

use std::time::Instant;

use hologeom_core::algebraic::{self, AlgCurve};
use hologeom_core::complex::{CVec2, CVec3};
use hologeom_core::error::GeomError;
use hologeom_core::geomspec::{DomainRect, GeomSpec, SliceSpec};
use hologeom_core::options::NumericOptions;
use hologeom_core::plane_curve::{self, ContactModel2};
use hologeom_core::space_curve::{self, ContactModel3};
use hologeom_core::surface::{self, LocusKind, SurfaceModel};
use serde_json::{json, Value};

use crate::config::{
    as_c, AnalysisRequest, ContactModel3Spec, ContactModelSpec, LocusWhich, SurfaceModelSpec,
};
use crate::export::{export_evolute, export_trace, ExportFormat};
use crate::report::{AnalysisResult, Status, Timing, Warning};

/// Exit-code class of the run (the maximum severity wins, with hypothesis
/// violations taking precedence over non-certification).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunClass {
    Ok,
    HypothesisViolation,
    Uncertified,
}

pub struct RunOutput {
    pub results: Vec<AnalysisResult>,
    pub warnings: Vec<Warning>,
    pub timing: Timing,
    pub files: Vec<(String, String)>,
    pub class: RunClass,
}

pub fn run_analyses(
    spec: &GeomSpec,
    analyses: &[AnalysisRequest],
    opts: &NumericOptions,
    format: ExportFormat,
) -> RunOutput {
    let mut results = Vec::new();
    let mut warnings = Vec::new();
    let mut files = Vec::new();
    let mut per_ms = Vec::new();
    let mut class = RunClass::Ok;
    let total_start = Instant::now();

    for (index, request) in analyses.iter().enumerate() {
        let start = Instant::now();
        let outcome = run_one(spec, request, opts, format, index, &mut warnings, &mut files);
        per_ms.push(start.elapsed().as_secs_f64() * 1e3);
        match outcome {
            Ok(data) => results.push(AnalysisResult {
                index,
                op: request.op_name().to_string(),
                status: Status::Ok,
                data: Some(data),
                error: None,
            }),
            Err(err) => {
                let code = match &err {
                    GeomError::HypothesisViolated(_) => {
                        class = RunClass::HypothesisViolation;
                        "hypothesis_violation"
                    }
                    _ => {
                        if class == RunClass::Ok {
                            class = RunClass::Uncertified;
                        }
                        "analysis_error"
                    }
                };
                warnings.push(Warning {
                    analysis: Some(index),
                    code: code.to_string(),
                    message: err.to_string(),
                });
                results.push(AnalysisResult {
                    index,
                    op: request.op_name().to_string(),
                    status: Status::Error,
                    data: None,
                    error: Some(err.to_string()),
                });
            }
        }
    }

    // every uncertified numeric claim carries a warning entry
    for result in &results {
        if let Some(data) = &result.data {
            collect_uncertified(result.index, data, &mut warnings, &mut class);
        }
    }

    RunOutput {
        results,
        warnings,
        timing: Timing {
            total_ms: total_start.elapsed().as_secs_f64() * 1e3,
            per_analysis_ms: per_ms,
        },
        files,
        class,
    }
}

fn collect_uncertified(index: usize, data: &Value, warnings: &mut Vec<Warning>, class: &mut RunClass) {
    if data.get("certified") == Some(&Value::Bool(false)) {
        if *class == RunClass::Ok {
            *class = RunClass::Uncertified;
        }
        warnings.push(Warning {
            analysis: Some(index),
            code: "uncertified_count".into(),
            message: format!(
                "expected {} but found {}",
                data.get("expected").unwrap_or(&Value::Null),
                data.get("found").unwrap_or(&Value::Null)
            ),
        });
    }
    if let Some(Value::String(reason)) = data.get("degenerate") {
        warnings.push(Warning {
            analysis: Some(index),
            code: "degenerate".into(),
            message: reason.clone(),
        });
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Result<Value, GeomError> {
    serde_json::to_value(v).map_err(|e| GeomError::Degenerate(format!("serialization: {e}")))
}

fn cvec2(v: [[f64; 2]; 2]) -> CVec2 {
    CVec2::new(as_c(v[0]), as_c(v[1]))
}

fn cvec3(v: [[f64; 2]; 3]) -> CVec3 {
    CVec3::new(as_c(v[0]), as_c(v[1]), as_c(v[2]))
}

fn alg_curve(spec: &GeomSpec) -> Result<AlgCurve, GeomError> {
    AlgCurve::from_spec(spec)
}

#[allow(clippy::too_many_arguments)]
fn run_one(
    spec: &GeomSpec,
    request: &AnalysisRequest,
    opts: &NumericOptions,
    format: ExportFormat,
    index: usize,
    warnings: &mut Vec<Warning>,
    files: &mut Vec<(String, String)>,
) -> Result<Value, GeomError> {
    match request {
        AnalysisRequest::InvariantsAt { points, depth } => {
            let mut out = Vec::new();
            for p in points {
                out.push(plane_curve::invariants_at(spec, as_c(*p), *depth, opts)?);
            }
            to_value(&out)
        }
        AnalysisRequest::Contact { t, model } => {
            let model = match model {
                ContactModelSpec::Line { v } => ContactModel2::Line { v: cvec2(*v) },
                ContactModelSpec::Circle { center } => ContactModel2::Circle {
                    center: cvec2(*center),
                },
            };
            to_value(&plane_curve::classify_contact(spec, as_c(*t), &model, opts)?)
        }
        AnalysisRequest::EvoluteSample { region, n } => {
            let region = region.or_else(|| spec.domain.first().copied()).unwrap_or(
                DomainRect::square(1.0),
            );
            let sample = plane_curve::evolute_sample(spec, region, *n, opts)?;
            for w in &sample.warnings {
                warnings.push(Warning {
                    analysis: Some(index),
                    code: "evolute".into(),
                    message: w.clone(),
                });
            }
            files.push(export_evolute(&sample, format));
            to_value(&sample)
        }
        AnalysisRequest::ArcLengthChart {
            t0,
            radius,
            lengths_at,
        } => {
            let chart = plane_curve::arc_length_chart(spec, as_c(*t0), opts.branch, *radius, opts)?;
            let lengths: Vec<Value> = lengths_at
                .iter()
                .map(|t| {
                    let l = chart.length(as_c(*t));
                    match l {
                        Ok(l) => json!({"t": t, "l": [l.re, l.im]}),
                        Err(e) => json!({"t": t, "error": e.to_string()}),
                    }
                })
                .collect();
            Ok(json!({
                "t0": t0,
                "branch": format!("{:?}", chart.branch),
                "path_validity": to_value(&chart.path_validity)?,
                "samples": chart.samples.iter().map(|(t, l)| json!([[t.re, t.im], [l.re, l.im]])).collect::<Vec<_>>(),
                "lengths": lengths,
            }))
        }
        AnalysisRequest::HermitianJacobian { t0, radius, samples } => {
            let chart = plane_curve::arc_length_chart(spec, as_c(*t0), opts.branch, *radius, opts)?;
            let mut out = Vec::new();
            for sv in samples {
                let j =
                    plane_curve::hermitian_jacobian(spec, &chart, as_c(sv[0]), as_c(sv[1]), opts)?;
                out.push(json!({"s": sv[0], "v": sv[1], "jacobian": j}));
            }
            Ok(Value::Array(out))
        }
        AnalysisRequest::FrenetAt { points } => {
            let mut out = Vec::new();
            for p in points {
                out.push(space_curve::frenet_at(spec, as_c(*p), opts)?);
            }
            to_value(&out)
        }
        AnalysisRequest::Contact3 { t, model } => {
            let model = match model {
                ContactModel3Spec::Plane { v } => ContactModel3::Plane { v: cvec3(*v) },
                ContactModel3Spec::Projection { v } => ContactModel3::Projection { v: cvec3(*v) },
            };
            to_value(&space_curve::classify_contact3(spec, as_c(*t), &model, opts)?)
        }
        AnalysisRequest::FormsAt { points } => {
            let mut out = Vec::new();
            for q in points {
                out.push(surface::forms_at(spec, (as_c(q[0]), as_c(q[1])), opts)?);
            }
            to_value(&out)
        }
        AnalysisRequest::ShapeAt { points } => {
            let mut out = Vec::new();
            for q in points {
                out.push(surface::shape_at(spec, (as_c(q[0]), as_c(q[1])), opts)?);
            }
            to_value(&out)
        }
        AnalysisRequest::FocalAt { points } => {
            let mut out = Vec::new();
            for q in points {
                out.push(surface::focal_at(spec, (as_c(q[0]), as_c(q[1])), opts)?);
            }
            to_value(&out)
        }
        AnalysisRequest::SurfaceContact { q, model } => {
            let model = match model {
                SurfaceModelSpec::Plane => SurfaceModel::Plane,
                SurfaceModelSpec::Sphere { center } => SurfaceModel::Sphere {
                    center: cvec3(*center),
                },
                SurfaceModelSpec::Projection { v } => SurfaceModel::Projection { v: cvec3(*v) },
            };
            let rep = surface::contact_report(spec, (as_c(q[0]), as_c(q[1])), &model, opts)?;
            for w in &rep.warnings {
                warnings.push(Warning {
                    analysis: Some(index),
                    code: "borderline".into(),
                    message: w.clone(),
                });
            }
            to_value(&rep)
        }
        AnalysisRequest::TraceLocus {
            which,
            u_range,
            v_range,
            n,
        } => {
            let kind = match which {
                LocusWhich::Il => LocusKind::IsotropicLocus,
                LocusWhich::Parabolic => LocusKind::Parabolic,
                LocusWhich::Ridge1 => LocusKind::Ridge(1),
                LocusWhich::Ridge2 => LocusKind::Ridge(2),
            };
            let slice = spec.options.slice.clone().unwrap_or_else(SliceSpec::re_re);
            let trace = surface::trace_locus(spec, kind, &slice, *u_range, *v_range, *n, opts)?;
            for w in &trace.warnings {
                warnings.push(Warning {
                    analysis: Some(index),
                    code: "trace".into(),
                    message: w.clone(),
                });
            }
            let name = match which {
                LocusWhich::Il => "il",
                LocusWhich::Parabolic => "parabolic",
                LocusWhich::Ridge1 => "ridge1",
                LocusWhich::Ridge2 => "ridge2",
            };
            files.push(export_trace(name, &trace, format));
            to_value(&trace)
        }
        AnalysisRequest::CheckHypotheses => {
            let curve = alg_curve(spec)?;
            to_value(&algebraic::check_hypotheses(&curve))
        }
        AnalysisRequest::IsotropicPoints => {
            let curve = alg_curve(spec)?;
            to_value(&algebraic::isotropic_points(&curve, opts)?)
        }
        AnalysisRequest::Inflections => {
            let curve = alg_curve(spec)?;
            to_value(&algebraic::inflections(&curve, opts)?)
        }
        AnalysisRequest::Vertices => {
            let curve = alg_curve(spec)?;
            to_value(&algebraic::vertices(&curve, opts)?)
        }
    }
}
