//! Geometry of regular holomorphic space curves: the Frenet–Serret frame,
//! curvature and torsion, isotropy of points and osculating planes, and
//! contact classification with planes (height functions) and lines
//! (orthogonal projections).
//!
//! The closed forms are κ = ⟨γ′×γ″, γ′×γ″⟩^{1/2} / ⟨γ′,γ′⟩^{3/2} and
//! τ = −⟨γ′×γ″, γ‴⟩ / ⟨γ′×γ″, γ′×γ″⟩. Both κ² and τ are branch-free;
//! every classification predicate below uses κ², τ and cleared numerators
//! so that no verdict depends on a square-root choice.

use serde::Serialize;

use crate::complex::{sqrt_branched, Branch, BranchedScalar, CVec3, C};
use crate::contact::{classify_jet, ContactClass, ContactKind, GeometricCheck};
use crate::error::GeomError;
use crate::expr::{lift1, ExprAST};
use crate::geomspec::{GeomKind, GeomSpec};
use crate::jet::{cross_jets1, inner_jets1, Jet1};
use crate::options::NumericOptions;

/// A C³ frame vector with its branch tag.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BranchedVec3 {
    pub v: CVec3,
    pub branch: Branch,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct IsotropyFlags {
    pub isotropic_point: bool,
    pub isotropic_osculating_plane: bool,
    pub zero_curvature: bool,
}

/// Frenet data at one parameter. The frame and κ are withheld (None) when
/// an isotropy flag is set; κ² and the cleared invariants stay available
/// because they are denominator-free.
#[derive(Debug, Clone, Serialize)]
pub struct FrenetData {
    pub t: C,
    pub position: CVec3,
    pub flags: IsotropyFlags,
    pub tangent: Option<BranchedVec3>,
    pub normal: Option<BranchedVec3>,
    pub binormal: Option<BranchedVec3>,
    pub kappa: Option<BranchedScalar>,
    /// κ² = ⟨γ′×γ″,γ′×γ″⟩/⟨γ′,γ′⟩³, single-valued.
    pub kappa_sq: C,
    pub tau: Option<C>,
    /// dκ/ds (arclength derivative), branch-tagged like κ.
    pub kappa_deriv: Option<BranchedScalar>,
    /// dτ/ds.
    pub tau_deriv: Option<C>,
    /// d²τ/ds².
    pub tau_deriv2: Option<C>,
    /// Cleared, branch-free A₄ invariant: S²·2κ·(κ′τ′ − 3κτ″) written in
    /// parameter derivatives, so it vanishes exactly when κ′τ′ − 3κτ″
    /// does (arclength derivatives) while using no square root.
    pub projection_invariant: Option<C>,
}

pub(crate) fn components3(spec: &GeomSpec) -> Result<[&ExprAST; 3], GeomError> {
    if spec.kind != GeomKind::SpaceCurve || spec.components.len() != 3 {
        return Err(GeomError::WrongKind {
            expected: "space_curve",
        });
    }
    Ok([&spec.components[0], &spec.components[1], &spec.components[2]])
}

pub(crate) struct CurveJets3 {
    pub pos: [Jet1; 3],
    pub vel: [Jet1; 3],
    pub speed_sq: Jet1,
    pub cross: [Jet1; 3],
    pub cross_sq: Jet1,
    pub tau_num: Jet1,
}

pub(crate) fn lift_curve3(spec: &GeomSpec, t: C, order: usize) -> Result<CurveJets3, GeomError> {
    let comps = components3(spec)?;
    let pos = [
        lift1(comps[0], t, order)?,
        lift1(comps[1], t, order)?,
        lift1(comps[2], t, order)?,
    ];
    let vel = [pos[0].derivative(), pos[1].derivative(), pos[2].derivative()];
    let acc = [vel[0].derivative(), vel[1].derivative(), vel[2].derivative()];
    let jerk = [acc[0].derivative(), acc[1].derivative(), acc[2].derivative()];
    let speed_sq = inner_jets1(&vel, &vel);
    let cross = cross_jets1(&vel, &acc);
    let cross_sq = inner_jets1(&cross, &cross);
    let tau_num = inner_jets1(&cross, &jerk);
    Ok(CurveJets3 {
        pos,
        vel,
        speed_sq,
        cross,
        cross_sq,
        tau_num,
    })
}

impl CurveJets3 {
    fn velocity(&self) -> CVec3 {
        CVec3::new(self.vel[0].value(), self.vel[1].value(), self.vel[2].value())
    }

    fn position(&self) -> CVec3 {
        CVec3::new(self.pos[0].value(), self.pos[1].value(), self.pos[2].value())
    }

    fn cross_value(&self) -> CVec3 {
        CVec3::new(
            self.cross[0].value(),
            self.cross[1].value(),
            self.cross[2].value(),
        )
    }
}

/// Frenet–Serret data from the closed-form expressions.
pub fn frenet_at(spec: &GeomSpec, t: C, opts: &NumericOptions) -> Result<FrenetData, GeomError> {
    let order = opts.jet_order_curve;
    let jets = lift_curve3(spec, t, order)?;

    let velocity = jets.velocity();
    if velocity.herm_norm_sq() == 0.0 {
        return Err(GeomError::NonRegular { t });
    }

    let speed_sq = jets.speed_sq.value();
    let isotropic_point = speed_sq.norm() <= opts.tol_iso * velocity.herm_norm_sq().max(1.0);
    if isotropic_point && jets.speed_sq.coeff_scale() <= opts.tol_iso * velocity.herm_norm_sq().max(1.0)
    {
        return Err(GeomError::FullyIsotropic { t });
    }

    let xv = jets.cross_value();
    let cross_sq = jets.cross_sq.value();
    let zero_curvature = xv.herm_norm_sq() <= (opts.tol_iso * velocity.herm_norm_sq().max(1.0)).powi(2);
    let isotropic_osculating_plane =
        !zero_curvature && cross_sq.norm() <= opts.tol_iso * xv.herm_norm_sq().max(1.0);

    let flags = IsotropyFlags {
        isotropic_point,
        isotropic_osculating_plane,
        zero_curvature,
    };

    // κ² is available whenever the point is regular and non-isotropic
    let kappa_sq = if isotropic_point {
        C::new(f64::NAN, f64::NAN)
    } else {
        cross_sq / speed_sq.powu(3)
    };

    if isotropic_point || isotropic_osculating_plane || zero_curvature {
        return Ok(FrenetData {
            t,
            position: jets.position(),
            flags,
            tangent: None,
            normal: None,
            binormal: None,
            kappa: None,
            kappa_sq,
            tau: None,
            kappa_deriv: None,
            tau_deriv: None,
            tau_deriv2: None,
            projection_invariant: None,
        });
    }

    let sqrt_s = jets.speed_sq.sqrt(opts.branch)?;
    let sqrt_x = jets.cross_sq.sqrt(opts.branch)?;
    let margin = sqrt_branched(speed_sq, opts.branch)
        .cut_margin
        .min(sqrt_branched(cross_sq, opts.branch).cut_margin);

    let tangent = CVec3::new(
        jets.vel[0].value() / sqrt_s.value(),
        jets.vel[1].value() / sqrt_s.value(),
        jets.vel[2].value() / sqrt_s.value(),
    );
    let binormal = CVec3::new(
        jets.cross[0].value() / sqrt_x.value(),
        jets.cross[1].value() / sqrt_x.value(),
        jets.cross[2].value() / sqrt_x.value(),
    );
    let normal = binormal.cross(&tangent);

    // κ and τ as jets for the derivative cache
    let kappa_jet = sqrt_x.div(&sqrt_s.powi(3))?;
    let tau_jet = jets.tau_num.neg().div(&jets.cross_sq)?;
    let kappa_sq_jet = jets.cross_sq.div(&jets.speed_sq.powi(3))?;

    // arclength derivatives by the chain rule d/ds = (1/√S) d/dt:
    //   τ′(s) = τ′/√S,  τ″(s) = τ″/S − τ′S′/(2S²)
    let s0 = jets.speed_sq.value();
    let s1 = jets.speed_sq.deriv(1);
    let sp = sqrt_s.value();
    let tau_s1 = tau_jet.deriv(1) / sp;
    let tau_s2 = tau_jet.deriv(2) / s0 - tau_jet.deriv(1) * s1 / (s0 * s0 * 2.0);

    // cleared branch-free invariant: S²·(κ²)′(s)τ′(s) − 6κ²τ″(s)·S²
    //   = (κ²)′τ′·S − 6κ²τ″·S + 3κ²τ′S′   (parameter derivatives)
    let projection_invariant = (kappa_sq_jet.deriv(1) * tau_jet.deriv(1)
        - kappa_sq_jet.value() * tau_jet.deriv(2) * 6.0)
        * s0
        + kappa_sq_jet.value() * tau_jet.deriv(1) * s1 * 3.0;
    let branched = |value: C| BranchedScalar {
        value,
        branch: opts.branch,
        cut_margin: margin,
        degenerate: false,
    };

    Ok(FrenetData {
        t,
        position: jets.position(),
        flags,
        tangent: Some(BranchedVec3 {
            v: tangent,
            branch: opts.branch,
        }),
        normal: Some(BranchedVec3 {
            v: normal,
            branch: opts.branch,
        }),
        binormal: Some(BranchedVec3 {
            v: binormal,
            branch: opts.branch,
        }),
        kappa: Some(branched(kappa_jet.value())),
        kappa_sq,
        tau: Some(tau_jet.value()),
        kappa_deriv: Some(branched(kappa_jet.deriv(1) / sp)),
        tau_deriv: Some(tau_s1),
        tau_deriv2: Some(tau_s2),
        projection_invariant: Some(projection_invariant),
    })
}

// ---------------------------------------------------------------------------
// Contact with planes and lines
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy)]
pub enum ContactModel3 {
    /// Height function H_v(t) = ⟨γ(t), v⟩: contact with planes orthogonal
    /// to v.
    Plane { v: CVec3 },
    /// Orthogonal projection along v onto v^⊥: contact with the line
    /// through γ(t) parallel to v.
    Projection { v: CVec3 },
}

#[derive(Debug, Clone, Serialize)]
pub struct ContactReport3 {
    pub class: ContactClass,
    pub checks: Vec<GeometricCheck>,
    /// For projections: the cleared A₄ invariant (κ²)′τ′ − 6κ²τ″.
    pub cleared_invariant: Option<C>,
}

/// Height-function ladder for a representative direction, valid at
/// isotropic points and isotropic osculating planes where the full frame
/// machinery is withheld: the family extends projectively, a
/// representative vector suffices, and the height jet uses no square
/// root. Generically A₁ with ⟨γ″(t₀), γ′(t₀)⟩ ≠ 0.
pub fn classify_height_representative(
    spec: &GeomSpec,
    t: C,
    v: CVec3,
    opts: &NumericOptions,
) -> Result<ContactClass, GeomError> {
    let jets = lift_curve3(spec, t, opts.jet_order_curve)?;
    if jets.velocity().herm_norm_sq() == 0.0 {
        return Err(GeomError::NonRegular { t });
    }
    let h = jets.pos[0]
        .scale(v.0[0])
        .add(&jets.pos[1].scale(v.0[1]))
        .add(&jets.pos[2].scale(v.0[2]));
    let (kind, residuals) = classify_jet(&h, opts.tol_rel);
    Ok(ContactClass {
        kind,
        residuals,
        branch_invariant: true,
    })
}

/// Classify contact with a plane (A₁–A₃ ladder) or a line
/// (projection germ: singular / A₂ cusp / A₄).
pub fn classify_contact3(
    spec: &GeomSpec,
    t: C,
    model: &ContactModel3,
    opts: &NumericOptions,
) -> Result<ContactReport3, GeomError> {
    let fr = frenet_at(spec, t, opts)?;
    if fr.flags.isotropic_point {
        return Err(GeomError::IsotropicPoint { t });
    }
    if fr.flags.isotropic_osculating_plane {
        return Err(GeomError::IsotropicOsculatingPlane { t });
    }
    if fr.flags.zero_curvature {
        return Err(GeomError::ZeroCurvature { t });
    }

    match model {
        ContactModel3::Plane { v } => classify_plane_contact(spec, t, *v, &fr, opts),
        ContactModel3::Projection { v } => classify_projection_contact(spec, t, *v, &fr, opts),
    }
}

fn classify_plane_contact(
    spec: &GeomSpec,
    t: C,
    v: CVec3,
    fr: &FrenetData,
    opts: &NumericOptions,
) -> Result<ContactReport3, GeomError> {
    let jets = lift_curve3(spec, t, opts.jet_order_curve)?;
    let h = jets.pos[0]
        .scale(v.0[0])
        .add(&jets.pos[1].scale(v.0[1]))
        .add(&jets.pos[2].scale(v.0[2]));
    let (kind, residuals) = classify_jet(&h, opts.tol_rel);
    let branch_invariant = true; // the height jet uses no square root

    let velocity = jets.velocity();
    let xv = jets.cross_value();

    let mut checks = Vec::new();
    let tv = velocity.inner(&v);
    let m1 = tv.norm() / (velocity.herm_norm() * v.herm_norm()).max(1e-300);
    let in_normal_plane = m1 <= opts.tol_rel * 10.0;
    checks.push(GeometricCheck {
        name: "v_in_normal_plane",
        predicate_holds: in_normal_plane,
        ladder_agrees: in_normal_plane == kind.at_least(1),
        margin: m1,
    });

    let cross_vx = v.cross(&xv);
    let m2 = cross_vx.herm_norm() / (v.herm_norm() * xv.herm_norm()).max(1e-300);
    let parallel_binormal = in_normal_plane && m2 <= opts.tol_rel * 100.0;
    checks.push(GeometricCheck {
        name: "v_parallel_cross",
        predicate_holds: parallel_binormal,
        ladder_agrees: parallel_binormal == kind.at_least(2),
        margin: m2,
    });

    if let (Some(tau), Some(tau_d)) = (fr.tau, fr.tau_deriv) {
        let tau_scale = tau.norm().max(tau_d.norm()).max(1e-300);
        let tau_zero = tau.norm() <= opts.tol_rel * tau_scale;
        let a3_pred = parallel_binormal && tau_zero && tau_d.norm() > opts.tol_rel * tau_scale;
        checks.push(GeometricCheck {
            name: "tau_zero_tau_prime_nonzero",
            predicate_holds: a3_pred,
            ladder_agrees: a3_pred == (kind == ContactKind::A(3)),
            margin: tau.norm(),
        });
    }

    Ok(ContactReport3 {
        class: ContactClass {
            kind,
            residuals,
            branch_invariant,
        },
        checks,
        cleared_invariant: None,
    })
}

/// Holomorphically orthonormal basis (u₁, u₂) of v^⊥ for a non-isotropic
/// unit v; u₂ = v × u₁, so {u₁, u₂, v} is an orthonormal frame.
fn orthonormal_complement(v: CVec3, branch: Branch) -> Result<[CVec3; 2], GeomError> {
    // candidate seeds; pick the one least aligned with v, then project
    let seeds = [
        CVec3::new(C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)),
        CVec3::new(C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)),
        CVec3::new(C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)),
    ];
    for seed in seeds {
        let proj = seed.sub(&v.scale(seed.inner(&v)));
        let n2 = proj.norm2();
        if n2.norm() > 1e-6 {
            let root = sqrt_branched(n2, branch);
            let u1 = proj.scale(C::new(1.0, 0.0) / root.value);
            let u2 = v.cross(&u1);
            return Ok([u1, u2]);
        }
    }
    Err(GeomError::IsotropicDirection)
}

fn classify_projection_contact(
    spec: &GeomSpec,
    t: C,
    v_raw: CVec3,
    fr: &FrenetData,
    opts: &NumericOptions,
) -> Result<ContactReport3, GeomError> {
    // normalise the direction holomorphically
    let v2 = v_raw.norm2();
    if v2.norm() <= opts.tol_iso * v_raw.herm_norm_sq().max(1.0) {
        return Err(GeomError::IsotropicDirection);
    }
    let v = v_raw.scale(C::new(1.0, 0.0) / sqrt_branched(v2, opts.branch).value);
    let basis = orthonormal_complement(v, opts.branch)?;

    // the projected germ in coordinates ⟨γ, u₁⟩, ⟨γ, u₂⟩ (projection along
    // v leaves these inner products unchanged)
    let jets = lift_curve3(spec, t, opts.jet_order_curve)?;
    let p = [
        jets.pos[0]
            .scale(basis[0].0[0])
            .add(&jets.pos[1].scale(basis[0].0[1]))
            .add(&jets.pos[2].scale(basis[0].0[2])),
        jets.pos[0]
            .scale(basis[1].0[0])
            .add(&jets.pos[1].scale(basis[1].0[1]))
            .add(&jets.pos[2].scale(basis[1].0[2])),
    ];

    // singularity test: P′(t) = 0 ⇔ v ∥ γ′(t)
    let p1 = [p[0].deriv(1), p[1].deriv(1)];
    let vel_scale = jets.velocity().herm_norm().max(1e-300);
    let p1_mag = (p1[0].norm_sqr() + p1[1].norm_sqr()).sqrt();
    let singular = p1_mag <= opts.tol_rel * 10.0 * vel_scale;

    let tangent_defect = v.cross(&jets.velocity()).herm_norm()
        / (v.herm_norm() * vel_scale).max(1e-300);

    let mut checks = vec![GeometricCheck {
        name: "v_tangent_to_curve",
        predicate_holds: tangent_defect <= opts.tol_rel * 10.0,
        ladder_agrees: (tangent_defect <= opts.tol_rel * 10.0) == singular,
        margin: tangent_defect,
    }];

    let cleared_invariant = fr.projection_invariant;

    if !singular {
        return Ok(ContactReport3 {
            class: ContactClass {
                kind: ContactKind::Nonsingular,
                residuals: vec![p1_mag],
                branch_invariant: true,
            },
            checks,
            cleared_invariant,
        });
    }

    // vector ladder on the image jet: rotate the 2-plane so the second
    // derivative spans the first axis, then read the Taylor coefficients
    let p2 = [p[0].deriv(2), p[1].deriv(2)];
    let p2n = (p2[0].norm_sqr() + p2[1].norm_sqr()).sqrt();
    if p2n == 0.0 {
        return Ok(ContactReport3 {
            class: ContactClass {
                kind: ContactKind::Degenerate("P″ vanishes".into()),
                residuals: vec![p1_mag, p2n],
                branch_invariant: true,
            },
            checks,
            cleared_invariant,
        });
    }

    // P″ = κN at the singular point: non-isotropic in the plane. Build the
    // holomorphic unit along it and its orthonormal complement (rotate by
    // the symplectic quarter-turn, which preserves the plane form).
    let p2_sq = p2[0] * p2[0] + p2[1] * p2[1];
    let w1 = [
        p2[0] / sqrt_branched(p2_sq, opts.branch).value,
        p2[1] / sqrt_branched(p2_sq, opts.branch).value,
    ];
    let w2 = [-w1[1], w1[0]];

    let alpha = p[0].scale(w1[0]).add(&p[1].scale(w1[1]));
    let beta = p[0].scale(w2[0]).add(&p[1].scale(w2[1]));

    // α = a₂s² + a₃s³ + …,  β = b₃s³ + b₄s⁴ + b₅s⁵ + …
    let a2 = alpha.coeff(2);
    let a3 = alpha.coeff(3);
    let b3 = beta.coeff(3);
    let b4 = beta.coeff(4);
    let b5 = beta.coeff(5);

    let beta_scale = [b3, b4, b5].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = beta_scale.max(a2.norm()).max(1e-300);

    let kind = if b3.norm() > opts.tol_rel * scale {
        // P″ ∧ P‴ ≠ 0: cusp
        ContactKind::A(2)
    } else {
        // reduce (a₂s² + a₃s³…, b₄s⁴ + b₅s⁵) to (u², c₅u⁵): the
        // coefficient after the coordinate change is b₅ − 2a₃b₄/a₂
        let c5 = b5 - a3 * b4 / a2 * 2.0;
        if c5.norm() > opts.tol_rel * scale {
            ContactKind::A(4)
        } else {
            ContactKind::Degenerate("beyond the A₄ ladder".into())
        }
    };

    if let (Some(tau), ContactKind::A(k)) = (fr.tau, &kind) {
        // τ and κ share units; compare against |κ| = √|κ²|
        let scale = fr.kappa_sq.norm().sqrt().max(tau.norm()).max(1e-300);
        let tau_zero = tau.norm() <= opts.tol_rel * 100.0 * scale;
        checks.push(GeometricCheck {
            name: "tau_nonzero_for_cusp",
            predicate_holds: !tau_zero,
            ladder_agrees: (!tau_zero) == (*k == 2),
            margin: tau.norm(),
        });
    }

    Ok(ContactReport3 {
        class: ContactClass {
            kind,
            residuals: vec![b3.norm(), b4.norm(), b5.norm()],
            branch_invariant: true,
        },
        checks,
        cleared_invariant,
    })
}
