//! Surface contact reports: planes (height germ, A₁–A₃ with the
//! parabolic/transversality predicates), spheres (distance-squared germ,
//! A₁–A₄ and D₄ with the focal/ridge/umbilic predicates), and orthogonal
//! projections (plane-to-plane map germ: immersion / fold / cusp by the
//! Whitney criteria; anything deeper is reported as codimension ≤ 2,
//! unclassified).

use serde::Serialize;

use crate::complex::{sqrt_branched, CVec3, C};
use crate::contact::GeometricCheck;
use crate::error::GeomError;
use crate::geomspec::GeomSpec;
use crate::jet::Jet2;
use crate::options::NumericOptions;

use super::focal::focal_at;
use super::germ::{classify_germ2, Germ2Class, GermKind};
use super::{forms_from_jets, lift_surface, shape_from_jets};

#[derive(Debug, Clone, Copy)]
pub enum SurfaceModel {
    /// Contact with the tangent plane at the point (height function along
    /// the normal).
    Plane,
    /// Contact with the sphere of the given centre through the point.
    Sphere { center: CVec3 },
    /// Contact with lines: the orthogonal projection along v.
    Projection { v: CVec3 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MapVerdict {
    Immersion,
    Fold,
    Cusp,
    /// Singular but beyond the fold/cusp tests; generic projections have
    /// A_e-codimension ≤ 2 and are reported without a finer name.
    UnclassifiedCodim2,
}

#[derive(Debug, Clone, Serialize)]
pub enum SurfaceContactClass {
    /// The contact function is not singular at the point.
    Nonsingular,
    /// Function germ verdict (plane and sphere contact).
    Germ(Germ2Class),
    /// Map germ verdict (projections).
    Map(MapVerdict),
}

#[derive(Debug, Clone, Serialize)]
pub struct SurfaceContact {
    pub class: SurfaceContactClass,
    pub checks: Vec<GeometricCheck>,
    pub warnings: Vec<String>,
}

/// Classify the contact of the surface at `q` with a plane, sphere, or
/// projection direction, reporting the geometric predicates from the
/// contact theorems alongside the germ classifier's verdict.
pub fn contact_report(
    spec: &GeomSpec,
    q: (C, C),
    model: &SurfaceModel,
    opts: &NumericOptions,
) -> Result<SurfaceContact, GeomError> {
    match model {
        SurfaceModel::Plane => plane_contact(spec, q, opts),
        SurfaceModel::Sphere { center } => sphere_contact(spec, q, *center, opts),
        SurfaceModel::Projection { v } => projection_contact(spec, q, *v, opts),
    }
}

fn plane_contact(
    spec: &GeomSpec,
    q: (C, C),
    opts: &NumericOptions,
) -> Result<SurfaceContact, GeomError> {
    let order = opts.jet_order_surface;
    let jets = lift_surface(spec, q, order)?;
    let forms = forms_from_jets(&jets, opts)?;
    if forms.on_il {
        return Err(GeomError::OnIsotropicLocus { q0: q.0, q1: q.1 });
    }
    let normal = forms.normal.unwrap().v;

    // H(z) = ⟨φ(z) − φ(q), N(q)⟩; constant and linear parts vanish by
    // construction
    let base = jets.q;
    let mut h = Jet2::zero(base, order);
    for k in 0..3 {
        h = h.add(&jets.phi[k].scale(normal.0[k]));
    }
    let h = h.sub(&Jet2::constant(h.value(), base, order));
    let germ = classify_germ2(&h, opts.tol_rel);

    let mut warnings = Vec::new();
    let mut checks = Vec::new();

    // parabolic predicate: Q = l̄n̄ − m̄² = 0
    let q_val = forms.l_bar * forms.n_bar - forms.m_bar * forms.m_bar;
    let q_scale = [forms.l_bar, forms.m_bar, forms.n_bar]
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .powi(2)
        .max(1e-300);
    let parabolic_margin = q_val.norm() / q_scale;
    let parabolic = parabolic_margin <= opts.tol_rel * 100.0;
    checks.push(GeometricCheck {
        name: "parabolic_point",
        predicate_holds: parabolic,
        ladder_agrees: parabolic == !germ.is_a(1),
        margin: parabolic_margin,
    });
    if parabolic_margin > opts.tol_rel && parabolic_margin < opts.tol_rel * 1e4 {
        warnings.push(format!(
            "borderline parabolic margin {parabolic_margin:.3e}"
        ));
    }

    if parabolic {
        // unique asymptotic direction vs the parabolic curve Q(z) = 0
        let shape = shape_from_jets(&jets, opts)?;
        if let Some(w) = shape.asymptotic.first() {
            let qjet = jets
                .lb
                .mul(&jets.nb)
                .sub(&jets.mb.mul(&jets.mb));
            let grad = [qjet.partial(1, 0), qjet.partial(0, 1)];
            let dot = grad[0] * w[0] + grad[1] * w[1];
            let gn = (grad[0].norm_sqr() + grad[1].norm_sqr()).sqrt();
            let wn = (w[0].norm_sqr() + w[1].norm_sqr()).sqrt();
            let margin = dot.norm() / (gn * wn).max(1e-300);
            let transverse = margin > opts.tol_rel * 100.0;
            checks.push(GeometricCheck {
                name: "asymptotic_transverse_to_parabolic",
                predicate_holds: transverse,
                ladder_agrees: transverse == germ.is_a(2),
                margin,
            });
            if !transverse {
                checks.push(GeometricCheck {
                    name: "asymptotic_tangent_to_parabolic",
                    predicate_holds: true,
                    ladder_agrees: germ.is_a(3),
                    margin,
                });
            }
            if margin > opts.tol_rel && margin < opts.tol_rel * 1e4 {
                warnings.push(format!("borderline transversality margin {margin:.3e}"));
            }
        }
    }

    Ok(SurfaceContact {
        class: SurfaceContactClass::Germ(germ),
        checks,
        warnings,
    })
}

fn sphere_contact(
    spec: &GeomSpec,
    q: (C, C),
    center: CVec3,
    opts: &NumericOptions,
) -> Result<SurfaceContact, GeomError> {
    let order = opts.jet_order_surface;
    let jets = lift_surface(spec, q, order)?;
    let forms = forms_from_jets(&jets, opts)?;
    if forms.on_il {
        return Err(GeomError::OnIsotropicLocus { q0: q.0, q1: q.1 });
    }

    // d_c(z) = ⟨φ(z) − c, φ(z) − c⟩
    let base = jets.q;
    let mut d = Jet2::zero(base, order);
    for k in 0..3 {
        let diff = jets.phi[k].sub(&Jet2::constant(center.0[k], base, order));
        d = d.add(&diff.mul(&diff));
    }
    let germ_jet = d.sub(&Jet2::constant(d.value(), base, order));

    // singularity test: c on the normal line ⇔ the linear part vanishes
    let lin = germ_jet
        .coeff(1, 0)
        .norm()
        .max(germ_jet.coeff(0, 1).norm());
    let scale = germ_jet.coeff_scale().max(d.value().norm());
    let singular = lin <= opts.tol_rel * scale.max(1e-300);

    let diff = jets.position().sub(&center);
    let along_normal = diff.cross(&jets.cross_value()).herm_norm()
        / (diff.herm_norm() * jets.cross_value().herm_norm()).max(1e-300);
    let mut checks = vec![GeometricCheck {
        name: "center_on_normal_line",
        predicate_holds: along_normal <= opts.tol_rel * 1e3,
        ladder_agrees: (along_normal <= opts.tol_rel * 1e3) == singular,
        margin: along_normal,
    }];
    let mut warnings = Vec::new();

    if !singular {
        return Ok(SurfaceContact {
            class: SurfaceContactClass::Nonsingular,
            checks,
            warnings,
        });
    }

    let germ = classify_germ2(&germ_jet, opts.tol_rel);

    // focal / ridge / umbilic predicates
    let shape = shape_from_jets(&jets, opts)?;
    if shape.umbilic {
        checks.push(GeometricCheck {
            name: "umbilic_d4_candidate",
            predicate_holds: true,
            ladder_agrees: germ.kind == GermKind::D4 || matches!(germ.kind, GermKind::Degenerate(_)),
            margin: (shape.kappa1.value - shape.kappa2.value).norm(),
        });
    } else {
        match focal_at(spec, q, opts) {
            Ok(focal) => {
                let dist = |c_opt: &Option<CVec3>| {
                    c_opt
                        .as_ref()
                        .map(|cc| cc.sub(&center).herm_norm() / (1.0 + cc.herm_norm()))
                        .unwrap_or(f64::INFINITY)
                };
                let d1 = dist(&focal.c1);
                let d2 = dist(&focal.c2);
                let (best, ridge) = if d1 <= d2 {
                    (d1, focal.ridge_residual[0])
                } else {
                    (d2, focal.ridge_residual[1])
                };
                let is_focal = best <= opts.tol_rel * 1e3;
                checks.push(GeometricCheck {
                    name: "center_is_focal_point",
                    predicate_holds: is_focal,
                    ladder_agrees: is_focal == germ_at_least(&germ, 2),
                    margin: best,
                });
                if is_focal {
                    if let Some(r) = ridge {
                        let kappa_scale = shape
                            .kappa1
                            .value
                            .norm()
                            .max(shape.kappa2.value.norm())
                            .max(1e-300);
                        let on_ridge = r.norm() <= opts.tol_rel * 1e3 * kappa_scale;
                        checks.push(GeometricCheck {
                            name: "focal_center_on_ridge",
                            predicate_holds: on_ridge,
                            ladder_agrees: on_ridge == germ_at_least(&germ, 3),
                            margin: r.norm(),
                        });
                        if r.norm() > opts.tol_rel * kappa_scale
                            && r.norm() < opts.tol_rel * 1e4 * kappa_scale
                        {
                            warnings.push(format!("borderline ridge residual {:.3e}", r.norm()));
                        }
                    }
                }
            }
            Err(e) => warnings.push(format!("focal predicates unavailable: {e}")),
        }
    }

    Ok(SurfaceContact {
        class: SurfaceContactClass::Germ(germ),
        checks,
        warnings,
    })
}

fn germ_at_least(germ: &Germ2Class, k: usize) -> bool {
    match &germ.kind {
        GermKind::A(j) => *j >= k,
        GermKind::D4 => true,
        GermKind::Degenerate(_) => true,
    }
}

fn projection_contact(
    spec: &GeomSpec,
    q: (C, C),
    v_raw: CVec3,
    opts: &NumericOptions,
) -> Result<SurfaceContact, GeomError> {
    let order = opts.jet_order_surface;
    let jets = lift_surface(spec, q, order)?;

    // normalise the direction and build an orthonormal basis of v^⊥
    let v2 = v_raw.norm2();
    if v2.norm() <= opts.tol_iso * v_raw.herm_norm_sq().max(1.0) {
        return Err(GeomError::IsotropicDirection);
    }
    let v = v_raw.scale(C::new(1.0, 0.0) / sqrt_branched(v2, opts.branch).value);
    let basis = orthonormal_complement3(v, opts)?;

    // image components p_i = ⟨φ, u_i⟩ (projection fixes them)
    let base = jets.q;
    let mut p = [Jet2::zero(base, order), Jet2::zero(base, order)];
    for (slot, u) in basis.iter().enumerate() {
        for k in 0..3 {
            p[slot] = p[slot].add(&jets.phi[k].scale(u.0[k]));
        }
    }

    // Whitney analysis of the plane-to-plane germ
    let dp = [
        [p[0].partial(1, 0), p[0].partial(0, 1)],
        [p[1].partial(1, 0), p[1].partial(0, 1)],
    ];
    let jac = p[0]
        .d1()
        .mul(&p[1].d2())
        .sub(&p[0].d2().mul(&p[1].d1()));
    let j0 = jac.value();
    let dscale = dp
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1e-300);
    let singular = j0.norm() <= opts.tol_rel * dscale * dscale;

    let tangent_defect = {
        // v tangent to the surface ⇔ v ⊥_H X is not the right test; use
        // the holomorphic one: ⟨v, X⟩ = 0
        let x = jets.cross_value();
        v.inner(&x).norm() / (v.herm_norm() * x.herm_norm()).max(1e-300)
    };
    let checks = vec![GeometricCheck {
        name: "v_tangent_to_surface",
        predicate_holds: tangent_defect <= opts.tol_rel * 1e3,
        ladder_agrees: (tangent_defect <= opts.tol_rel * 1e3) == singular,
        margin: tangent_defect,
    }];

    if !singular {
        return Ok(SurfaceContact {
            class: SurfaceContactClass::Map(MapVerdict::Immersion),
            checks,
            warnings: Vec::new(),
        });
    }

    // kernel field of dP: (−∂P/∂z2 row, ∂P/∂z1 row) combinations; choose
    // the field nonvanishing at q
    let k_a = [p[0].d2().neg(), p[0].d1()]; // annihilates row 1 ⇒ kernel where J = 0
    let k_b = [p[1].d2().neg(), p[1].d1()];
    let norm_at = |f: &[Jet2; 2]| f[0].value().norm_sqr() + f[1].value().norm_sqr();
    let kernel = if norm_at(&k_a) >= norm_at(&k_b) { k_a } else { k_b };

    // h = D_k J along the kernel field
    let h = jac.d1().mul(&kernel[0]).add(&jac.d2().mul(&kernel[1]));
    let kscale = (norm_at(&kernel)).sqrt().max(1e-300);
    let jac_grad = (jac.partial(1, 0).norm_sqr() + jac.partial(0, 1).norm_sqr()).sqrt();
    let jscale = jac.coeff_scale().max(1e-300);

    let verdict = if h.value().norm() > opts.tol_rel * kscale * jscale {
        MapVerdict::Fold
    } else if jac_grad > opts.tol_rel * jscale {
        // cusp test: D_k h ≠ 0 with the kernel field
        let dh = h.d1().mul(&kernel[0]).add(&h.d2().mul(&kernel[1]));
        if dh.value().norm() > opts.tol_rel * kscale * kscale * jscale {
            MapVerdict::Cusp
        } else {
            MapVerdict::UnclassifiedCodim2
        }
    } else {
        MapVerdict::UnclassifiedCodim2
    };

    Ok(SurfaceContact {
        class: SurfaceContactClass::Map(verdict),
        checks,
        warnings: Vec::new(),
    })
}

/// Orthonormal basis of v^⊥ under the holomorphic product for a
/// non-isotropic unit v.
fn orthonormal_complement3(v: CVec3, opts: &NumericOptions) -> Result<[CVec3; 2], GeomError> {
    let seeds = [
        CVec3::new(C::new(1.0, 0.0), C::new(0.0, 0.0), C::new(0.0, 0.0)),
        CVec3::new(C::new(0.0, 0.0), C::new(1.0, 0.0), C::new(0.0, 0.0)),
        CVec3::new(C::new(0.0, 0.0), C::new(0.0, 0.0), C::new(1.0, 0.0)),
    ];
    for seed in seeds {
        let proj = seed.sub(&v.scale(seed.inner(&v)));
        let n2 = proj.norm2();
        if n2.norm() > 1e-6 {
            let u1 = proj.scale(C::new(1.0, 0.0) / sqrt_branched(n2, opts.branch).value);
            let u2 = v.cross(&u1);
            return Ok([u1, u2]);
        }
    }
    Err(GeomError::IsotropicDirection)
}
