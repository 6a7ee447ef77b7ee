//! Geometry of regular holomorphic plane curves: Frenet data, curvature
//! and its derivatives, inflections and vertices, the evolute (including
//! its extension across isotropic points), unit-speed charts, contact with
//! lines and circles, and the Hermitian-envelope Jacobian.
//!
//! For a parametrisation γ(t) = (z₁(t), z₂(t)) write
//! S = ⟨γ′,γ′⟩ = z₁′² + z₂′² and W = z₁′z₂″ − z₂′z₁″. Then κ = W/S^{3/2}
//! (branch-dependent in sign only) and the evolute is
//! e(t) = γ(t) + (S/W)·(−z₂′, z₁′), a form that stays finite at isotropic
//! points (S = 0) as long as W ≠ 0.

use serde::Serialize;

use crate::complex::{sqrt_branched, Branch, BranchedScalar, CVec2, C};
use crate::contact::{classify_jet, parallel_defect2, ContactClass, GeometricCheck};
use crate::error::GeomError;
use crate::expr::{lift1, ExprAST};
use crate::geomspec::{DomainRect, GeomKind, GeomSpec};
use crate::jet::Jet1;
use crate::options::NumericOptions;
use crate::polysolve::{zeros_in_box, RootSet, ZeroBoxError};

/// A frame vector together with the square-root branch that oriented it.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchedVec2 {
    pub v: CVec2,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum VanishOrder {
    /// Exact order per the definition (first non-vanishing derivative).
    Order(usize),
    /// Every derivative up to the jet depth vanished.
    BeyondJetDepth,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct OsculatingCircle {
    pub center: CVec2,
    pub radius_sq: C,
}

/// Everything the curve knows at one parameter value.
#[derive(Debug, Clone, Serialize)]
pub struct PointInvariants2 {
    pub t: C,
    pub position: CVec2,
    pub velocity: CVec2,
    pub speed_sq: C,
    pub isotropic: bool,
    pub tangent: Option<BranchedVec2>,
    pub normal: Option<BranchedVec2>,
    pub kappa: Option<BranchedScalar>,
    /// κ′..κ⁽ᵈᵉᵖᵗʰ⁾, branch-tagged like κ itself.
    pub kappa_derivs: Vec<BranchedScalar>,
    pub inflection_order: Option<VanishOrder>,
    pub vertex_order: Option<VanishOrder>,
    pub evolute_point: Option<CVec2>,
    pub osculating: Option<OsculatingCircle>,
}

pub(crate) fn components2(spec: &GeomSpec) -> Result<[&ExprAST; 2], GeomError> {
    if spec.kind != GeomKind::PlaneCurve || spec.components.len() != 2 {
        return Err(GeomError::WrongKind {
            expected: "plane_curve",
        });
    }
    Ok([&spec.components[0], &spec.components[1]])
}

/// Position, velocity and the derived S/W jets at one parameter value.
pub(crate) struct CurveJets2 {
    pub pos: [Jet1; 2],
    pub vel: [Jet1; 2],
    pub speed_sq: Jet1,
    pub wronskian: Jet1,
}

pub(crate) fn lift_curve2(spec: &GeomSpec, t: C, order: usize) -> Result<CurveJets2, GeomError> {
    let comps = components2(spec)?;
    let pos = [lift1(comps[0], t, order)?, lift1(comps[1], t, order)?];
    let vel = [pos[0].derivative(), pos[1].derivative()];
    let acc = [vel[0].derivative(), vel[1].derivative()];
    let speed_sq = vel[0].mul(&vel[0]).add(&vel[1].mul(&vel[1]));
    let wronskian = vel[0].mul(&acc[1]).sub(&vel[1].mul(&acc[0]));
    Ok(CurveJets2 {
        pos,
        vel,
        speed_sq,
        wronskian,
    })
}

impl CurveJets2 {
    fn velocity(&self) -> CVec2 {
        CVec2::new(self.vel[0].value(), self.vel[1].value())
    }

    fn position(&self) -> CVec2 {
        CVec2::new(self.pos[0].value(), self.pos[1].value())
    }

    /// Jets of the evolute e = γ + (S/W)(−z₂′, z₁′); requires W ≠ 0 at the
    /// base point. This cleared form extends across isotropic points.
    pub(crate) fn evolute_jets(&self) -> Result<[Jet1; 2], GeomError> {
        let ratio = self.speed_sq.div(&self.wronskian).map_err(|_| {
            GeomError::DegenerateIsotropic {
                t: self.pos[0].base(),
            }
        })?;
        Ok([
            self.pos[0].sub(&ratio.mul(&self.vel[1])),
            self.pos[1].add(&ratio.mul(&self.vel[0])),
        ])
    }
}

fn vanish_scale(mags: &[f64]) -> f64 {
    mags.iter().copied().fold(0.0, f64::max)
}

/// Full point invariants; κ derivatives are computed up to `depth`.
pub fn invariants_at(
    spec: &GeomSpec,
    t: C,
    depth: usize,
    opts: &NumericOptions,
) -> Result<PointInvariants2, GeomError> {
    let order = opts.jet_order_curve.max(depth + 2);
    let jets = lift_curve2(spec, t, order)?;

    let velocity = jets.velocity();
    let vel_scale = velocity.herm_norm_sq();
    if vel_scale <= opts.tol_iso * jets.pos[0].coeff_scale().max(1.0).powi(2) * 1e-4
        || vel_scale == 0.0
    {
        return Err(GeomError::NonRegular { t });
    }

    let speed_sq = jets.speed_sq.value();
    let isotropic = speed_sq.norm() <= opts.tol_iso * vel_scale.max(1.0);

    // a curve inside an isotropic line has S ≡ 0 as a jet
    if isotropic && jets.speed_sq.coeff_scale() <= opts.tol_iso * vel_scale.max(1.0) {
        return Err(GeomError::FullyIsotropic { t });
    }

    let w0 = jets.wronskian.value();
    let w_scale = velocity.herm_norm()
        * (jets.vel[0].deriv(1).norm().hypot(jets.vel[1].deriv(1).norm()))
        + 1e-300;
    let w_vanishes = w0.norm() <= opts.tol_rel * w_scale.max(opts.tol_rel);

    let evolute_point = if w_vanishes {
        if isotropic {
            return Err(GeomError::DegenerateIsotropic { t });
        }
        None
    } else {
        let e = jets.evolute_jets()?;
        Some(CVec2::new(e[0].value(), e[1].value()))
    };

    let osculating = evolute_point.map(|center| OsculatingCircle {
        center,
        radius_sq: speed_sq.powu(3) / (w0 * w0),
    });

    if isotropic {
        return Ok(PointInvariants2 {
            t,
            position: jets.position(),
            velocity,
            speed_sq,
            isotropic: true,
            tangent: None,
            normal: None,
            kappa: None,
            kappa_derivs: Vec::new(),
            inflection_order: None,
            vertex_order: None,
            evolute_point,
            osculating,
        });
    }

    let sqrt_s = jets.speed_sq.sqrt(opts.branch)?;
    let root0 = sqrt_branched(speed_sq, opts.branch);
    let tangent = CVec2::new(
        jets.vel[0].value() / sqrt_s.value(),
        jets.vel[1].value() / sqrt_s.value(),
    );
    let normal = CVec2::new(
        -jets.vel[1].value() / sqrt_s.value(),
        jets.vel[0].value() / sqrt_s.value(),
    );

    let kappa_jet = jets.wronskian.div(&sqrt_s.powi(3))?;
    let kappa0 = kappa_jet.value();
    let max_deriv = kappa_jet.order().min(depth);
    let kappa_mags: Vec<f64> = (0..=kappa_jet.order()).map(|k| kappa_jet.deriv(k).norm()).collect();
    let scale = vanish_scale(&kappa_mags).max(1e-300);
    let vanish = |m: f64| m <= opts.tol_rel * scale;

    let inflection_order = if vanish(kappa_mags[0]) {
        match kappa_mags.iter().position(|&m| !vanish(m)) {
            Some(l) => Some(VanishOrder::Order(l)),
            None => Some(VanishOrder::BeyondJetDepth),
        }
    } else {
        None
    };

    let vertex_order = if kappa_mags.len() > 1 && vanish(kappa_mags[1]) {
        match kappa_mags.iter().skip(2).position(|&m| !vanish(m)) {
            Some(off) => Some(VanishOrder::Order(off + 1)),
            None => Some(VanishOrder::BeyondJetDepth),
        }
    } else {
        None
    };

    let branched = |value: C| BranchedScalar {
        value,
        branch: opts.branch,
        cut_margin: root0.cut_margin,
        degenerate: false,
    };

    Ok(PointInvariants2 {
        t,
        position: jets.position(),
        velocity,
        speed_sq,
        isotropic: false,
        tangent: Some(BranchedVec2 {
            v: tangent,
            branch: opts.branch,
        }),
        normal: Some(BranchedVec2 {
            v: normal,
            branch: opts.branch,
        }),
        kappa: Some(branched(kappa0)),
        kappa_derivs: (1..=max_deriv).map(|k| branched(kappa_jet.deriv(k))).collect(),
        inflection_order,
        vertex_order,
        evolute_point,
        osculating,
    })
}

// ---------------------------------------------------------------------------
// Unit-speed charts
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BranchRegion {
    /// Complement of ℬ⁻ = {Re⟨γ′,γ′⟩ < 0}; keeps the principal branch
    /// continuous.
    ComplementBMinus,
    /// Complement of ℬ⁺; keeps the other branch continuous.
    ComplementBPlus,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct PathValidity {
    pub region: Option<BranchRegion>,
    /// Minimal angular distance of arg⟨γ′,γ′⟩ from the branch cut seen
    /// along the integration paths (0 = touched the cut).
    pub min_margin: f64,
}

/// Local arclength chart around a non-isotropic base point: l(t) is the
/// integral of the branched speed along the straight segment from t₀, and
/// the inverse is computed by Newton iteration on l.
#[derive(Debug, Clone)]
pub struct UnitSpeedChart {
    pub t0: C,
    pub branch: Branch,
    pub radius: f64,
    pub samples: Vec<(C, C)>,
    pub path_validity: PathValidity,
    components: [ExprAST; 2],
    tol_iso: f64,
}

struct PathStats {
    min_margin: f64,
    min_re: f64,
    max_re: f64,
    crossed_cut: bool,
}

impl PathStats {
    fn new() -> Self {
        PathStats {
            min_margin: f64::INFINITY,
            min_re: f64::INFINITY,
            max_re: f64::NEG_INFINITY,
            crossed_cut: false,
        }
    }

    fn record(&mut self, s_prev: Option<C>, s: C, branch: Branch) {
        let margin = sqrt_branched(s, branch).cut_margin;
        self.min_margin = self.min_margin.min(margin);
        self.min_re = self.min_re.min(s.re);
        self.max_re = self.max_re.max(s.re);
        if let Some(p) = s_prev {
            let sign_flip = p.im.signum() != s.im.signum() && p.im != 0.0 && s.im != 0.0;
            if sign_flip {
                // interpolated crossing point of the real axis
                let w = p.im.abs() / (p.im - s.im).abs();
                let re_cross = p.re + (s.re - p.re) * w;
                let on_cut = match branch {
                    Branch::Principal => re_cross < 0.0,
                    Branch::Other => re_cross > 0.0,
                };
                if on_cut {
                    self.crossed_cut = true;
                }
            }
        }
    }
}

fn speed_value(components: &[ExprAST; 2], u: C) -> Result<C, GeomError> {
    let x = lift1(&components[0], u, 1)?;
    let y = lift1(&components[1], u, 1)?;
    let (dx, dy) = (x.coeff(1), y.coeff(1));
    Ok(dx * dx + dy * dy)
}

/// Adaptive Simpson integration of the branched speed along the segment
/// [a, b], tracking branch-cut proximity at every evaluation.
fn integrate_speed(
    components: &[ExprAST; 2],
    a: C,
    b: C,
    branch: Branch,
    stats: &mut PathStats,
) -> Result<C, GeomError> {
    const N_BASE: usize = 16;
    let mut prev_s: Option<C> = None;
    let mut coarse = Vec::with_capacity(N_BASE + 1);
    for k in 0..=N_BASE {
        let u = a + (b - a) * (k as f64 / N_BASE as f64);
        let s = speed_value(components, u)?;
        stats.record(prev_s, s, branch);
        prev_s = Some(s);
        coarse.push((u, sqrt_branched(s, branch).value));
    }
    if stats.crossed_cut {
        return Err(GeomError::ChartFailure {
            reason: "the radicand's argument crosses the branch cut along the segment".into(),
            region: match branch {
                Branch::Principal => "B-".into(),
                Branch::Other => "B+".into(),
            },
        });
    }
    // adaptive Simpson on each coarse panel
    let mut total = C::new(0.0, 0.0);
    for w in coarse.windows(2) {
        let (ua, fa) = w[0];
        let (ub, fb) = w[1];
        let um = (ua + ub) / 2.0;
        let fm = sqrt_branched(speed_value(components, um)?, branch).value;
        total += adaptive_simpson(components, branch, ua, ub, fa, fm, fb, 1e-13, 22)?;
    }
    Ok(total)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson(
    components: &[ExprAST; 2],
    branch: Branch,
    a: C,
    b: C,
    fa: C,
    fm: C,
    fb: C,
    eps: f64,
    depth: usize,
) -> Result<C, GeomError> {
    let m = (a + b) / 2.0;
    let lm = (a + m) / 2.0;
    let rm = (m + b) / 2.0;
    let flm = sqrt_branched(speed_value(components, lm)?, branch).value;
    let frm = sqrt_branched(speed_value(components, rm)?, branch).value;
    let h = b - a;
    let whole = h / 6.0 * (fa + fm * 4.0 + fb);
    let left = (m - a) / 6.0 * (fa + flm * 4.0 + fm);
    let right = (b - m) / 6.0 * (fm + frm * 4.0 + fb);
    let refined = left + right;
    if depth == 0 || (refined - whole).norm() <= 15.0 * eps * (1.0 + refined.norm()) {
        return Ok(refined + (refined - whole) / 15.0);
    }
    let l = adaptive_simpson(components, branch, a, m, fa, flm, fm, eps / 2.0, depth - 1)?;
    let r = adaptive_simpson(components, branch, m, b, fm, frm, fb, eps / 2.0, depth - 1)?;
    Ok(l + r)
}

/// Build a chart at `t0` (must not be isotropic). Construction integrates
/// along the two real-offset rays to populate the sample table and the
/// path-validity report; queries integrate fresh straight segments.
pub fn arc_length_chart(
    spec: &GeomSpec,
    t0: C,
    branch: Branch,
    radius: f64,
    opts: &NumericOptions,
) -> Result<UnitSpeedChart, GeomError> {
    let comps = components2(spec)?;
    let components = [comps[0].clone(), comps[1].clone()];

    let s0 = speed_value(&components, t0)?;
    let v0 = {
        let x = lift1(&components[0], t0, 1)?;
        let y = lift1(&components[1], t0, 1)?;
        x.coeff(1).norm_sqr() + y.coeff(1).norm_sqr()
    };
    if v0 == 0.0 {
        return Err(GeomError::NonRegular { t: t0 });
    }
    if s0.norm() <= opts.tol_iso * v0.max(1.0) {
        return Err(GeomError::IsotropicPoint { t: t0 });
    }

    let mut stats = PathStats::new();
    let n_samples = 16usize;
    let mut samples = Vec::with_capacity(2 * n_samples + 1);
    samples.push((t0, C::new(0.0, 0.0)));
    for dir in [1.0f64, -1.0] {
        for k in 1..=n_samples {
            let t = t0 + C::new(dir * radius * k as f64 / n_samples as f64, 0.0);
            let l = integrate_speed(&components, t0, t, branch, &mut stats)?;
            samples.push((t, l));
        }
    }
    samples.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());

    let region = match branch {
        Branch::Principal if stats.min_re >= -1e-12 => Some(BranchRegion::ComplementBMinus),
        Branch::Other if stats.max_re <= 1e-12 => Some(BranchRegion::ComplementBPlus),
        _ => None,
    };

    Ok(UnitSpeedChart {
        t0,
        branch,
        radius,
        samples,
        path_validity: PathValidity {
            region,
            min_margin: stats.min_margin,
        },
        components,
        tol_iso: opts.tol_iso,
    })
}

impl UnitSpeedChart {
    /// Arclength l(t) along the straight segment from t₀.
    pub fn length(&self, t: C) -> Result<C, GeomError> {
        let mut stats = PathStats::new();
        integrate_speed(&self.components, self.t0, t, self.branch, &mut stats)
    }

    /// Inverse chart: the parameter t with l(t) = s, by Newton iteration
    /// (l′(t) is the branched speed).
    pub fn inverse(&self, s: C) -> Result<C, GeomError> {
        let sp0 = sqrt_branched(speed_value(&self.components, self.t0)?, self.branch).value;
        let mut t = self.t0 + s / sp0;
        for _ in 0..30 {
            let l = self.length(t)?;
            let sq = speed_value(&self.components, t)?;
            if sq.norm() <= self.tol_iso {
                return Err(GeomError::IsotropicPoint { t });
            }
            let lp = sqrt_branched(sq, self.branch).value;
            let step = (l - s) / lp;
            t -= step;
            if step.norm() <= 1e-13 * (1.0 + t.norm()) {
                return Ok(t);
            }
        }
        Err(GeomError::ChartFailure {
            reason: format!("Newton inversion did not converge for s = {s}"),
            region: "-".into(),
        })
    }
}

// ---------------------------------------------------------------------------
// Contact with lines and circles
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub enum ContactModel2 {
    /// Height function H_v(t) = ⟨γ(t), v⟩: contact with lines orthogonal
    /// to v.
    Line { v: CVec2 },
    /// Distance-squared function d_c(t) = ⟨γ−c, γ−c⟩: contact with the
    /// circle of centre c through γ(t).
    Circle { center: CVec2 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactReport2 {
    pub class: ContactClass,
    pub checks: Vec<GeometricCheck>,
}

fn contact_jet(jets: &CurveJets2, model: &ContactModel2) -> Jet1 {
    match model {
        ContactModel2::Line { v } => jets.pos[0]
            .scale(v.0[0])
            .add(&jets.pos[1].scale(v.0[1])),
        ContactModel2::Circle { center } => {
            let t0 = jets.pos[0].base();
            let order = jets.pos[0].order();
            let dx = jets.pos[0].sub(&Jet1::constant(center.0[0], t0, order));
            let dy = jets.pos[1].sub(&Jet1::constant(center.0[1], t0, order));
            dx.mul(&dx).add(&dy.mul(&dy))
        }
    }
}

/// Classify the contact of the curve at `t` with a line or circle, with
/// the geometric cross-checks the contact theorems predict.
pub fn classify_contact(
    spec: &GeomSpec,
    t: C,
    model: &ContactModel2,
    opts: &NumericOptions,
) -> Result<ContactReport2, GeomError> {
    let order = opts.jet_order_curve;
    let jets = lift_curve2(spec, t, order)?;
    if jets.velocity().herm_norm_sq() == 0.0 {
        return Err(GeomError::NonRegular { t });
    }

    let h = contact_jet(&jets, model);
    let (kind, residuals) = classify_jet(&h, opts.tol_rel);

    // the ladder uses no square root; the swapped branch must agree
    let swapped = classify_jet(&h, opts.swapped().tol_rel).0;
    let branch_invariant = swapped == kind;

    let mut checks = Vec::new();
    match model {
        ContactModel2::Line { v } => {
            let ip = jets.velocity().inner(v);
            let margin = ip.norm() / (jets.velocity().herm_norm() * v.herm_norm()).max(1e-300);
            let predicted_singular = margin <= opts.tol_rel * 10.0;
            checks.push(GeometricCheck {
                name: "v_parallel_normal",
                predicate_holds: predicted_singular,
                ladder_agrees: predicted_singular == kind.at_least(1),
                margin,
            });
        }
        ContactModel2::Circle { center } => {
            let inv = invariants_at(spec, t, 2, opts)?;
            if let Some(e) = inv.evolute_point {
                let diff = center.sub(&e).herm_norm();
                let margin = diff / e.herm_norm().max(1.0);
                let on_evolute = margin <= opts.tol_rel * 100.0;
                checks.push(GeometricCheck {
                    name: "center_is_evolute_point",
                    predicate_holds: on_evolute,
                    ladder_agrees: on_evolute == kind.at_least(2),
                    margin,
                });
                let is_vertex = inv.vertex_order.is_some();
                checks.push(GeometricCheck {
                    name: "vertex",
                    predicate_holds: is_vertex,
                    ladder_agrees: (on_evolute && is_vertex) == kind.at_least(3),
                    margin: inv
                        .kappa_derivs
                        .first()
                        .map(|k| k.value.norm())
                        .unwrap_or(f64::NAN),
                });
            }
        }
    }

    Ok(ContactReport2 {
        class: ContactClass {
            kind,
            residuals,
            branch_invariant,
        },
        checks,
    })
}

// ---------------------------------------------------------------------------
// Evolute sampling
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct EvolutePoint {
    pub t: C,
    pub e: Option<CVec2>,
    /// Parallelism defect between e′(t) and N(t); the envelope property
    /// says it vanishes away from vertices and isotropic points.
    pub envelope_defect: Option<f64>,
    pub isotropic: bool,
    pub unbounded: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsotropicTangency {
    pub t: C,
    pub e: CVec2,
    pub gamma: CVec2,
    /// Parallelism defect between e′ and γ′ at the isotropic point; the
    /// evolute extension is tangent to the curve, so this should vanish.
    pub tangency_defect: f64,
    pub speed_sq_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EvoluteSample {
    pub points: Vec<EvolutePoint>,
    pub isotropic: Vec<IsotropicTangency>,
    pub unbounded_near: Vec<C>,
    pub warnings: Vec<String>,
}

/// Sample the evolute over a parameter region (a grid, or a segment when
/// the region is degenerate), reporting envelope defects, inflection
/// blow-ups, and the tangency data at every isotropic point found in the
/// region.
pub fn evolute_sample(
    spec: &GeomSpec,
    region: DomainRect,
    n: usize,
    opts: &NumericOptions,
) -> Result<EvoluteSample, GeomError> {
    use rayon::prelude::*;

    let params = sample_params(&region, n);
    // parallel over sample points; output order stays the parameter order
    let computed: Vec<(C, Result<EvolutePoint, GeomError>)> = params
        .par_iter()
        .map(|&t| (t, evolute_point_at(spec, t, opts)))
        .collect();

    let mut points = Vec::with_capacity(params.len());
    let mut unbounded_near = Vec::new();
    let mut warnings = Vec::new();
    for (t, outcome) in computed {
        match outcome {
            Ok(p) => {
                if p.unbounded {
                    unbounded_near.push(t);
                }
                points.push(p);
            }
            Err(GeomError::DegenerateIsotropic { t }) => {
                warnings.push(format!("degenerate isotropic point at t = {t}"));
            }
            Err(e) => return Err(e),
        }
    }

    // isotropic parameters: zeros of ⟨γ′,γ′⟩ in the region
    let comps = components2(spec)?;
    let speed_fn = {
        let x = comps[0].clone();
        let y = comps[1].clone();
        move |t: C, order: usize| {
            let xj = lift1(&x, t, order + 1)?;
            let yj = lift1(&y, t, order + 1)?;
            let dx = xj.derivative();
            let dy = yj.derivative();
            Ok(dx.mul(&dx).add(&dy.mul(&dy)))
        }
    };
    let mut isotropic = Vec::new();
    match zeros_in_box(&speed_fn, region, opts.zero_grid, opts.root_tol) {
        Ok(RootSet { roots, .. }) => {
            for root in roots {
                match isotropic_tangency(spec, root.value, opts) {
                    Ok(rep) => isotropic.push(rep),
                    Err(GeomError::DegenerateIsotropic { t }) => {
                        warnings.push(format!("degenerate isotropic point at t = {t}"))
                    }
                    Err(e) => warnings.push(format!("isotropic point at t = {}: {e}", root.value)),
                }
            }
        }
        Err(ZeroBoxError::BoundaryZero { min_abs }) => warnings.push(format!(
            "isotropic scan skipped: zero of ⟨γ′,γ′⟩ on the region boundary (|S| = {min_abs:.2e})"
        )),
        Err(e) => warnings.push(format!("isotropic scan failed: {e}")),
    }

    Ok(EvoluteSample {
        points,
        isotropic,
        unbounded_near,
        warnings,
    })
}

fn sample_params(region: &DomainRect, n: usize) -> Vec<C> {
    let n = n.max(2);
    let w = region.re[1] - region.re[0];
    let h = region.im[1] - region.im[0];
    if h == 0.0 || w == 0.0 {
        (0..n)
            .map(|k| {
                let f = k as f64 / (n - 1) as f64;
                C::new(region.re[0] + w * f, region.im[0] + h * f)
            })
            .collect()
    } else {
        let k = (n as f64).sqrt().ceil() as usize;
        (0..k)
            .flat_map(|i| {
                (0..k).map(move |j| {
                    C::new(
                        region.re[0] + w * i as f64 / (k - 1).max(1) as f64,
                        region.im[0] + h * j as f64 / (k - 1).max(1) as f64,
                    )
                })
            })
            .collect()
    }
}

fn evolute_point_at(spec: &GeomSpec, t: C, opts: &NumericOptions) -> Result<EvolutePoint, GeomError> {
    let jets = lift_curve2(spec, t, opts.jet_order_curve.max(3))?;
    if jets.velocity().herm_norm_sq() == 0.0 {
        return Err(GeomError::NonRegular { t });
    }
    let speed_sq = jets.speed_sq.value();
    let isotropic = speed_sq.norm() <= opts.tol_iso * jets.velocity().herm_norm_sq().max(1.0);
    let w0 = jets.wronskian.value();
    let w_scale = jets.velocity().herm_norm()
        * jets.vel[0].deriv(1).norm().hypot(jets.vel[1].deriv(1).norm())
        + 1e-300;
    if w0.norm() <= opts.tol_rel * w_scale {
        if isotropic {
            return Err(GeomError::DegenerateIsotropic { t });
        }
        return Ok(EvolutePoint {
            t,
            e: None,
            envelope_defect: None,
            isotropic: false,
            unbounded: true,
        });
    }
    let ej = jets.evolute_jets()?;
    let e = CVec2::new(ej[0].value(), ej[1].value());
    let envelope_defect = if isotropic {
        None
    } else {
        // N ∥ (−z₂′, z₁′); compare against e′
        let ep = [ej[0].deriv(1), ej[1].deriv(1)];
        let ndir = [-jets.vel[1].value(), jets.vel[0].value()];
        Some(parallel_defect2(ep, ndir))
    };
    Ok(EvolutePoint {
        t,
        e: Some(e),
        envelope_defect,
        isotropic,
        unbounded: false,
    })
}

/// Tangency report at one isotropic parameter: the extended evolute passes
/// through γ(t) tangentially.
pub fn isotropic_tangency(
    spec: &GeomSpec,
    t: C,
    opts: &NumericOptions,
) -> Result<IsotropicTangency, GeomError> {
    let jets = lift_curve2(spec, t, opts.jet_order_curve.max(3))?;
    let w0 = jets.wronskian.value();
    let w_scale = jets.velocity().herm_norm()
        * jets.vel[0].deriv(1).norm().hypot(jets.vel[1].deriv(1).norm())
        + 1e-300;
    if w0.norm() <= opts.tol_rel * w_scale {
        return Err(GeomError::DegenerateIsotropic { t });
    }
    let ej = jets.evolute_jets()?;
    let ep = [ej[0].deriv(1), ej[1].deriv(1)];
    let vel = [jets.vel[0].value(), jets.vel[1].value()];
    Ok(IsotropicTangency {
        t,
        e: CVec2::new(ej[0].value(), ej[1].value()),
        gamma: CVec2::new(jets.pos[0].value(), jets.pos[1].value()),
        tangency_defect: parallel_defect2(ep, vel),
        speed_sq_residual: jets.speed_sq.value().norm(),
    })
}

// ---------------------------------------------------------------------------
// Hermitian envelope Jacobian
// ---------------------------------------------------------------------------

/// The envelope invariant 1 + ‖vκ(s)‖² of the Hermitian normal-line
/// family at chart parameter `s` and normal offset `v`; always ≥ 1.
pub fn hermitian_jacobian(
    spec: &GeomSpec,
    chart: &UnitSpeedChart,
    s: C,
    v: C,
    opts: &NumericOptions,
) -> Result<f64, GeomError> {
    let t = chart.inverse(s)?;
    let inv = invariants_at(spec, t, 0, opts)?;
    let kappa = inv
        .kappa
        .ok_or(GeomError::IsotropicPoint { t })?
        .value;
    Ok(1.0 + (v * kappa).norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;
    use crate::contact::ContactKind;

    fn parabola() -> GeomSpec {
        GeomSpec::plane_curve("t", "t^2", DomainRect::square(1.0))
    }

    fn opts() -> NumericOptions {
        NumericOptions::default()
    }

    #[test]
    fn line_has_zero_curvature_everywhere() {
        let line = GeomSpec::plane_curve("t", "2*t + 1", DomainRect::square(1.0));
        let inv = invariants_at(&line, c(0.3, -0.2), 3, &opts()).unwrap();
        assert!(!inv.isotropic);
        assert_eq!(inv.kappa.unwrap().value, c(0.0, 0.0));
        assert_eq!(inv.inflection_order, Some(VanishOrder::BeyondJetDepth));
        assert!(inv.evolute_point.is_none());
        assert!(inv.osculating.is_none());
    }

    #[test]
    fn parabola_vertex_at_origin() {
        let inv = invariants_at(&parabola(), c(0.0, 0.0), 3, &opts()).unwrap();
        let kappa = inv.kappa.unwrap().value;
        assert!((kappa - c(2.0, 0.0)).norm() < 1e-12);
        assert!(inv.kappa_derivs[0].value.norm() < 1e-12); // κ′(0) = 0
        assert!(inv.kappa_derivs[1].value.norm() > 1.0); // κ″(0) ≠ 0
        assert_eq!(inv.vertex_order, Some(VanishOrder::Order(1)));
        assert_eq!(inv.inflection_order, None);
        let e = inv.evolute_point.unwrap();
        assert!((e.0[0]).norm() < 1e-12);
        assert!((e.0[1] - c(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn parabola_isotropic_evolute_extension() {
        // t = i/2 is isotropic; e(i/2) = γ(i/2) = (i/2, −1/4)
        let inv = invariants_at(&parabola(), c(0.0, 0.5), 2, &opts()).unwrap();
        assert!(inv.isotropic);
        assert!(inv.tangent.is_none());
        assert!(inv.kappa.is_none());
        let e = inv.evolute_point.unwrap();
        assert!((e.0[0] - c(0.0, 0.5)).norm() < 1e-12);
        assert!((e.0[1] - c(-0.25, 0.0)).norm() < 1e-12);
        assert!((e.0[0] - inv.position.0[0]).norm() < 1e-12);
        assert!((e.0[1] - inv.position.0[1]).norm() < 1e-12);
    }

    #[test]
    fn isotropic_line_rejected() {
        let iso = GeomSpec::plane_curve("t", "i*t", DomainRect::square(1.0));
        match invariants_at(&iso, c(0.1, 0.0), 2, &opts()) {
            Err(GeomError::FullyIsotropic { .. }) => {}
            other => panic!("expected FullyIsotropic, got {other:?}"),
        }
    }

    #[test]
    fn chart_on_affine_curves() {
        // γ(t) = (t, 0): l(t) = t
        let flat = GeomSpec::plane_curve("t", "0", DomainRect::square(1.0));
        let chart = arc_length_chart(&flat, c(0.0, 0.0), Branch::Principal, 1.0, &opts()).unwrap();
        let l = chart.length(c(0.4, 0.1)).unwrap();
        assert!((l - c(0.4, 0.1)).norm() < 1e-12);
        assert_eq!(chart.path_validity.region, Some(BranchRegion::ComplementBMinus));

        // γ(t) = (2t, 0): l(t) = 2t, inverse s/2
        let double = GeomSpec::plane_curve("2*t", "0", DomainRect::square(1.0));
        let chart = arc_length_chart(&double, c(0.0, 0.0), Branch::Principal, 1.0, &opts()).unwrap();
        let l = chart.length(c(0.3, 0.0)).unwrap();
        assert!((l - c(0.6, 0.0)).norm() < 1e-12);
        let t = chart.inverse(c(0.5, 0.0)).unwrap();
        assert!((t - c(0.25, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn chart_parabola_arclength() {
        // oracle: adaptive quadrature of √(1+4u²) on [0, 0.1]
        let chart =
            arc_length_chart(&parabola(), c(0.0, 0.0), Branch::Principal, 0.5, &opts()).unwrap();
        let l = chart.length(c(0.1, 0.0)).unwrap();
        // ∫₀^0.1 √(1+4u²) du = [u√(1+4u²)/2 + asinh(2u)/4] at 0.1
        let x: f64 = 0.1;
        let expect = x * (1.0 + 4.0 * x * x).sqrt() / 2.0 + (2.0 * x).asinh() / 4.0;
        assert!((l - c(expect, 0.0)).norm() < 1e-11, "l = {l}, expect {expect}");
        // inverse undoes it
        let t = chart.inverse(l).unwrap();
        assert!((t - c(0.1, 0.0)).norm() < 1e-11);
    }

    #[test]
    fn chart_rejects_isotropic_base() {
        match arc_length_chart(&parabola(), c(0.0, 0.5), Branch::Principal, 0.3, &opts()) {
            Err(GeomError::IsotropicPoint { .. }) => {}
            other => panic!("expected IsotropicPoint, got {other:?}"),
        }
    }

    #[test]
    fn height_at_isotropic_point_via_representative() {
        // the height family extends projectively across isotropic points:
        // classify with a representative v ∥ γ′(i/2) = (1, i); A₁ since
        // ⟨γ″, γ′(i/2)⟩ = 2i ≠ 0
        let v = CVec2::new(c(1.0, 0.0), c(0.0, 1.0));
        let rep = classify_contact(
            &parabola(),
            c(0.0, 0.5),
            &ContactModel2::Line { v },
            &opts(),
        )
        .unwrap();
        assert_eq!(rep.class.kind, ContactKind::A(1));
    }

    #[test]
    fn contact_with_lines_and_circles() {
        // parabola at 0 against Line(v = (0,1)): H = t², A₁
        let rep = classify_contact(
            &parabola(),
            c(0.0, 0.0),
            &ContactModel2::Line {
                v: CVec2::new(c(0.0, 0.0), c(1.0, 0.0)),
            },
            &opts(),
        )
        .unwrap();
        assert_eq!(rep.class.kind, ContactKind::A(1));
        assert!(rep.class.branch_invariant);
        assert!(rep.checks[0].predicate_holds && rep.checks[0].ladder_agrees);

        // non-normal direction: nonsingular
        let rep = classify_contact(
            &parabola(),
            c(0.0, 0.0),
            &ContactModel2::Line {
                v: CVec2::new(c(1.0, 0.0), c(0.5, 0.0)),
            },
            &opts(),
        )
        .unwrap();
        assert_eq!(rep.class.kind, ContactKind::Nonsingular);

        // osculating circle at the vertex: d_c = t⁴ + 1/4 → A₃
        let rep = classify_contact(
            &parabola(),
            c(0.0, 0.0),
            &ContactModel2::Circle {
                center: CVec2::new(c(0.0, 0.0), c(0.5, 0.0)),
            },
            &opts(),
        )
        .unwrap();
        assert_eq!(rep.class.kind, ContactKind::A(3));

        // center on the evolute at t = 1 (not a vertex): A₂
        let rep = classify_contact(
            &parabola(),
            c(1.0, 0.0),
            &ContactModel2::Circle {
                center: CVec2::new(c(-4.0, 0.0), c(3.5, 0.0)),
            },
            &opts(),
        )
        .unwrap();
        assert_eq!(rep.class.kind, ContactKind::A(2));

        // center on the normal line but off the evolute: A₁
        let rep = classify_contact(
            &parabola(),
            c(0.0, 0.0),
            &ContactModel2::Circle {
                center: CVec2::new(c(0.0, 0.0), c(2.0, 0.0)),
            },
            &opts(),
        )
        .unwrap();
        assert_eq!(rep.class.kind, ContactKind::A(1));
    }

    #[test]
    fn evolute_of_circle_is_origin() {
        let circle = GeomSpec::plane_curve("cos(t)", "sin(t)", DomainRect::new([0.0, 6.0], [0.0, 0.0]));
        let sample = evolute_sample(&circle, DomainRect::new([0.0, 6.0], [0.0, 0.0]), 40, &opts()).unwrap();
        for p in &sample.points {
            let e = p.e.unwrap();
            assert!(e.herm_norm() < 1e-12, "evolute of the circle must be (0,0)");
        }
    }

    #[test]
    fn evolute_of_parabola_closed_form() {
        let sample = evolute_sample(
            &parabola(),
            DomainRect::new([-1.0, 1.0], [0.0, 0.0]),
            50,
            &opts(),
        )
        .unwrap();
        for p in &sample.points {
            let e = p.e.unwrap();
            let t = p.t;
            let expect0 = -t * t * t * 4.0;
            let expect1 = t * t * 3.0 + 0.5;
            assert!((e.0[0] - expect0).norm() < 1e-10);
            assert!((e.0[1] - expect1).norm() < 1e-10);
            if let Some(d) = p.envelope_defect {
                assert!(d < 1e-8, "envelope defect {d} at t = {t}");
            }
        }
    }

    #[test]
    fn parabola_isotropic_tangency() {
        let sample = evolute_sample(&parabola(), DomainRect::square(1.0), 10, &opts()).unwrap();
        assert_eq!(sample.isotropic.len(), 2);
        for iso in &sample.isotropic {
            assert!(iso.tangency_defect < 1e-8);
            assert!((iso.e.sub(&iso.gamma)).herm_norm() < 1e-9);
        }
    }

    #[test]
    fn hermitian_jacobian_values() {
        let o = opts();
        let chart = arc_length_chart(&parabola(), c(0.0, 0.0), Branch::Principal, 0.4, &o).unwrap();
        // v = 0 → 1
        let j = hermitian_jacobian(&parabola(), &chart, c(0.0, 0.0), c(0.0, 0.0), &o).unwrap();
        assert!((j - 1.0).abs() < 1e-12);
        // κ(0) = 2, v = i → 1 + ‖2i‖² = 5
        let j = hermitian_jacobian(&parabola(), &chart, c(0.0, 0.0), c(0.0, 1.0), &o).unwrap();
        assert!((j - 5.0).abs() < 1e-12);

        // unit circle at unit speed: κ = 1, v = 1 → 2
        let circle = GeomSpec::plane_curve("cos(t)", "sin(t)", DomainRect::square(3.2));
        let chart = arc_length_chart(&circle, c(0.0, 0.0), Branch::Principal, 1.0, &o).unwrap();
        let j = hermitian_jacobian(&circle, &chart, c(0.5, 0.0), c(1.0, 0.0), &o).unwrap();
        assert!((j - 2.0).abs() < 1e-10);
    }
}
