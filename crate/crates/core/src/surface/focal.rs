//! Focal points, ridge residuals, and the extension of the focal set
//! across the isotropic locus.
//!
//! Writing Ā = I⁻¹·[[l̄,m̄],[m̄,n̄]] (branch-free), its eigenvalues are
//! λ̄ᵢ = √δ·κᵢ, and the focal points take the branch-free form
//! cᵢ = φ + X/λ̄ᵢ with X = φ_z1 × φ_z2. On the IL the focal equations are
//! replaced by the cleared bifurcation-set conditions of the
//! distance-squared family: with φ − c = μX, the centre solves
//! μ²(l̄n̄−m̄²) + μ(En̄+Gl̄−2Fm̄) + δ = 0. One root vanishes on the IL; its
//! sheet extends smoothly and is tangent to the surface there.

use serde::Serialize;

use crate::complex::{sqrt_branched, Branch, CVec3, C};
use crate::error::GeomError;
use crate::geomspec::GeomSpec;
use crate::jet::Jet2;
use crate::options::NumericOptions;

use super::{lift_surface, shape_from_jets, SurfaceJets};

#[derive(Debug, Clone, Serialize)]
pub struct IlExtension {
    /// Point of the extending sheet at this IL parameter (equals φ(q) on
    /// the IL itself).
    pub extended_focal_point: CVec3,
    /// The other sheet's point, when its root is finite.
    pub other_sheet_point: Option<CVec3>,
    /// Hermitian angle defect between the extended sheet's tangent plane
    /// and T_qM; the extension is tangent to the surface, so this should
    /// vanish.
    pub tangency_defect: f64,
    /// Rank of the extended sheet's differential (2 = smooth surface).
    pub sheet_rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct FocalData {
    pub q: (C, C),
    pub on_il: bool,
    /// cᵢ = φ + N/κᵢ; None when the matching principal curvature vanishes
    /// (parabolic direction: focal point at infinity) or on the IL.
    pub c1: Option<CVec3>,
    pub c2: Option<CVec3>,
    /// dκᵢ(eᵢ): the ridge residuals, zero exactly on the ridge of the
    /// matching sheet.
    pub ridge_residual: [Option<C>; 2],
    pub il_extension: Option<IlExtension>,
}

/// Focal data at `q`: the two focal points and ridge residuals off the
/// isotropic locus, or the extended-sheet data on it. Umbilics are an
/// error (the sheets meet).
pub fn focal_at(spec: &GeomSpec, q: (C, C), opts: &NumericOptions) -> Result<FocalData, GeomError> {
    let jets = lift_surface(spec, q, opts.jet_order_surface.max(3))?;
    if jets.on_il(opts.tol_iso) {
        let ext = il_extension(&jets, opts)?;
        return Ok(FocalData {
            q,
            on_il: true,
            c1: None,
            c2: None,
            ridge_residual: [None, None],
            il_extension: Some(ext),
        });
    }

    let shape = shape_from_jets(&jets, opts)?;
    if shape.umbilic {
        return Err(GeomError::Umbilic { q0: q.0, q1: q.1 });
    }

    // Ā as jets; its eigenvalue jets feed both the focal points and the
    // ridge residuals
    let (lam1, lam2) = abar_eigen_jets(&jets)?;
    // match λ̄ᵢ to the shape data: λ̄ᵢ = √δ κᵢ
    let root = sqrt_branched(jets.delta.value(), opts.branch).value;
    let want1 = root * shape.kappa1.value;
    let (lam1, lam2) = if (lam1.value() - want1).norm() <= (lam2.value() - want1).norm() {
        (lam1, lam2)
    } else {
        (lam2, lam1)
    };

    let position = jets.position();
    let x = jets.cross_value();
    let focal = |lam: &Jet2| -> Option<CVec3> {
        let lv = lam.value();
        if lv.norm() <= opts.tol_rel * lam.coeff_scale().max(1e-300) {
            None // parabolic: the focal point escapes to infinity
        } else {
            Some(position.add(&x.scale(C::new(1.0, 0.0) / lv)))
        }
    };
    let c1 = focal(&lam1);
    let c2 = focal(&lam2);

    // ridge residual dκᵢ(eᵢ) with κᵢ = λ̄ᵢ/√δ and eᵢ Hermitian-normalised
    let sqrt_delta = jets.delta.sqrt(opts.branch)?;
    let ridge = |lam: &Jet2, dir: [C; 2]| -> Result<C, GeomError> {
        let kappa = lam.div(&sqrt_delta)?;
        let n = (dir[0].norm_sqr() + dir[1].norm_sqr()).sqrt();
        Ok((kappa.partial(1, 0) * dir[0] + kappa.partial(0, 1) * dir[1]) / n)
    };
    let r1 = ridge(&lam1, shape.e1)?;
    let r2 = ridge(&lam2, shape.e2)?;

    Ok(FocalData {
        q,
        on_il: false,
        c1,
        c2,
        ridge_residual: [Some(r1), Some(r2)],
        il_extension: None,
    })
}

/// Eigenvalue jets of Ā = I⁻¹·[[l̄,m̄],[m̄,n̄]] (requires distinct
/// eigenvalues at the base point).
fn abar_eigen_jets(jets: &SurfaceJets) -> Result<(Jet2, Jet2), GeomError> {
    // Ā = [[G l̄−F m̄, G m̄−F n̄],[E m̄−F l̄, E n̄−F m̄]]/δ
    let a11 = jets.g.mul(&jets.lb).sub(&jets.f.mul(&jets.mb)).div(&jets.delta)?;
    let a12 = jets.g.mul(&jets.mb).sub(&jets.f.mul(&jets.nb)).div(&jets.delta)?;
    let a21 = jets.e.mul(&jets.mb).sub(&jets.f.mul(&jets.lb)).div(&jets.delta)?;
    let a22 = jets.e.mul(&jets.nb).sub(&jets.f.mul(&jets.mb)).div(&jets.delta)?;
    let tr = a11.add(&a22);
    let det = a11.mul(&a22).sub(&a12.mul(&a21));
    let disc = tr.mul(&tr).sub(&det.scale(C::new(4.0, 0.0)));
    let root = disc.sqrt(Branch::Principal)?;
    let half = C::new(0.5, 0.0);
    Ok((
        tr.add(&root).scale(half),
        tr.sub(&root).scale(half),
    ))
}

/// The cleared bifurcation-set solve on the IL: μ-quadratic root with
/// μ(q) → 0, its sheet jets, and the tangency defect against T_qM.
fn il_extension(jets: &SurfaceJets, opts: &NumericOptions) -> Result<IlExtension, GeomError> {
    let base = jets.q;
    let order = jets.lb.order();

    // μ²·a + μ·b + δ = 0 with a = l̄n̄−m̄², b = En̄+Gl̄−2Fm̄
    let a = jets.lb.mul(&jets.nb).sub(&jets.mb.mul(&jets.mb));
    let b = jets
        .e
        .mul(&jets.nb)
        .add(&jets.g.mul(&jets.lb))
        .sub(&jets.f.mul(&jets.mb).scale(C::new(2.0, 0.0)));
    let scale = jets.e.coeff_scale().max(jets.g.coeff_scale())
        * jets.lb.coeff_scale().max(jets.nb.coeff_scale()).max(1.0);
    if b.value().norm() <= opts.tol_rel * scale.max(1e-300) {
        return Err(GeomError::Degenerate(
            "IL focal extension: En̄+Gl̄−2Fm̄ vanishes, μ-branch undefined".into(),
        ));
    }

    // Newton in jet arithmetic for the root with μ(q) ≈ 0
    let mut mu = Jet2::constant(-jets.delta.value() / b.value(), base, order);
    for _ in 0..order + 3 {
        let val = a.mul(&mu).mul(&mu).add(&b.mul(&mu)).add(&jets.delta);
        let dval = a.mul(&mu).scale(C::new(2.0, 0.0)).add(&b);
        mu = mu.sub(&val.div(&dval)?);
    }

    // extended sheet c(z) = φ(z) − μ(z)X(z)
    let sheet = [
        jets.phi[0].sub(&mu.mul(&jets.x[0])),
        jets.phi[1].sub(&mu.mul(&jets.x[1])),
        jets.phi[2].sub(&mu.mul(&jets.x[2])),
    ];
    let point = CVec3::new(sheet[0].value(), sheet[1].value(), sheet[2].value());
    let su = CVec3::new(
        sheet[0].partial(1, 0),
        sheet[1].partial(1, 0),
        sheet[2].partial(1, 0),
    );
    let sv = CVec3::new(
        sheet[0].partial(0, 1),
        sheet[1].partial(0, 1),
        sheet[2].partial(0, 1),
    );

    let sheet_rank = {
        let cr = su.cross(&sv).herm_norm();
        let scale = su.herm_norm() * sv.herm_norm();
        if su.herm_norm() < 1e-10 && sv.herm_norm() < 1e-10 {
            0
        } else if cr > 1e-8 * scale.max(1e-300) {
            2
        } else {
            1
        }
    };

    // tangency defect: Hermitian residual of the sheet tangents against
    // span(φ_z1, φ_z2)
    let t1 = jets.tangent1();
    let t2 = jets.tangent2();
    let defect = subspace_defect(&[su, sv], &[t1, t2]);

    // the other root: μ₁μ₂ = δ/a ⇒ μ₂ = −b/a − μ₁
    let other_sheet_point = if a.value().norm() > opts.tol_rel * scale.max(1e-300) {
        let mu2 = -b.value() / a.value() - mu.value();
        Some(jets.position().sub(&jets.cross_value().scale(mu2)))
    } else {
        None
    };

    Ok(IlExtension {
        extended_focal_point: point,
        other_sheet_point,
        tangency_defect: defect,
        sheet_rank,
    })
}

/// Max Hermitian relative distance of the vectors in `a` from the span of
/// `b` (Gram–Schmidt projection).
fn subspace_defect(a: &[CVec3], b: &[CVec3; 2]) -> f64 {
    let herm_inner = |u: &CVec3, v: &CVec3| -> C {
        u.0.iter().zip(v.0.iter()).map(|(x, y)| x * y.conj()).sum()
    };
    // orthonormalise b (Hermitian)
    let b1 = b[0].scale(C::new(1.0 / b[0].herm_norm().max(1e-300), 0.0));
    let proj = herm_inner(&b[1], &b1);
    let b2raw = b[1].sub(&b1.scale(proj));
    let b2 = b2raw.scale(C::new(1.0 / b2raw.herm_norm().max(1e-300), 0.0));

    let mut worst: f64 = 0.0;
    for u in a {
        let n = u.herm_norm();
        if n < 1e-14 {
            continue;
        }
        let p1 = herm_inner(u, &b1);
        let p2 = herm_inner(u, &b2);
        let residual = u.sub(&b1.scale(p1)).sub(&b2.scale(p2));
        worst = worst.max(residual.herm_norm() / n);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::c;
    use crate::geomspec::DomainRect;

    fn opts() -> NumericOptions {
        NumericOptions::default()
    }

    fn dom() -> [DomainRect; 2] {
        [DomainRect::square(1.2), DomainRect::square(1.2)]
    }

    #[test]
    fn monge_focal_points() {
        // f = (2z1² + 3z2²)/2 at the origin: c₁ = (0,0,1/2), c₂ = (0,0,1/3)
        let monge = GeomSpec::monge_surface("(2*z1^2 + 3*z2^2)/2", dom());
        let fd = focal_at(&monge, (c(0.0, 0.0), c(0.0, 0.0)), &opts()).unwrap();
        let mut cs = [fd.c1.unwrap(), fd.c2.unwrap()];
        cs.sort_by(|a, b| b.0[2].re.partial_cmp(&a.0[2].re).unwrap());
        assert!(cs[0].sub(&CVec3::new(c(0.0, 0.0), c(0.0, 0.0), c(0.5, 0.0))).herm_norm() < 1e-10);
        assert!(
            cs[1].sub(&CVec3::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0 / 3.0, 0.0)))
                .herm_norm()
                < 1e-10
        );
        // even Monge form: the origin is a ridge point of both sheets
        assert!(fd.ridge_residual[0].unwrap().norm() < 1e-9);
        assert!(fd.ridge_residual[1].unwrap().norm() < 1e-9);
    }

    #[test]
    fn cubic_perturbation_breaks_ridge() {
        let monge = GeomSpec::monge_surface("(2*z1^2 + 3*z2^2)/2 + z1^3/3", dom());
        let fd = focal_at(&monge, (c(0.0, 0.0), c(0.0, 0.0)), &opts()).unwrap();
        // the sheet whose principal direction is the z1 axis feels the z1³
        // term: its ridge residual is now nonzero
        let r = fd.ridge_residual;
        assert!(
            r[0].unwrap().norm() > 1e-3 || r[1].unwrap().norm() > 1e-3,
            "residuals: {r:?}"
        );
    }

    #[test]
    fn umbilic_rejected() {
        let monge = GeomSpec::monge_surface("(z1^2 + z2^2)/2", dom());
        match focal_at(&monge, (c(0.0, 0.0), c(0.0, 0.0)), &opts()) {
            Err(GeomError::Umbilic { .. }) => {}
            other => panic!("expected Umbilic, got {other:?}"),
        }
    }

    #[test]
    fn complex_sphere_focal_degenerates_to_center() {
        // every point of the complex sphere is umbilic: the sheets meet at
        // the centre everywhere. focal_at reports the typed error; the
        // coincident focal point φ + N/κ recovers the centre from shape
        // data.
        let o = opts();
        let sphere = GeomSpec::surface(
            "z1",
            "z2",
            "sqrt(1 - z1^2 - z2^2)",
            [DomainRect::square(0.4), DomainRect::square(0.4)],
        );
        for q in [(c(0.1, 0.0), c(0.2, 0.0)), (c(-0.15, 0.05), c(0.1, -0.1))] {
            match focal_at(&sphere, q, &o) {
                Err(GeomError::Umbilic { .. }) => {}
                other => panic!("expected Umbilic, got {other:?}"),
            }
            let shape = crate::surface::shape_at(&sphere, q, &o).unwrap();
            assert!(shape.umbilic);
            let forms = crate::surface::forms_at(&sphere, q, &o).unwrap();
            let jets = lift_surface(&sphere, q, 2).unwrap();
            let n = forms.normal.unwrap().v;
            let center = jets
                .position()
                .add(&n.scale(C::new(1.0, 0.0) / shape.kappa1.value));
            assert!(center.herm_norm() < 1e-9, "coincident focal point {center:?} ≠ 0");
        }
    }

    #[test]
    fn saddle_il_extension_is_tangent() {
        // φ = (z1, z2, z1z2) has IL 1 + z1² + z2² = 0; sample q = (i·x, i·y)
        // with x² + y² = 1
        // avoid θ multiples of π/2, where the two sheets meet on the IL
        // (the μ-quadratic has a double root: En̄+Gl̄−2Fm̄ = 2xy = 0)
        let saddle = GeomSpec::surface("z1", "z2", "z1*z2", dom());
        for k in 0..8 {
            let theta = 2.0 * std::f64::consts::PI * (k as f64 + 0.37) / 8.0;
            let q = (c(0.0, theta.cos()), c(0.0, theta.sin()));
            let fd = focal_at(&saddle, q, &opts()).unwrap();
            assert!(fd.on_il);
            let ext = fd.il_extension.unwrap();
            assert!(
                ext.tangency_defect < 1e-6,
                "tangency defect {} at k = {k}",
                ext.tangency_defect
            );
            assert_eq!(ext.sheet_rank, 2);
            // the extended sheet passes through the surface point on the IL
            let jets = lift_surface(&saddle, q, 3).unwrap();
            assert!(ext.extended_focal_point.sub(&jets.position()).herm_norm() < 1e-7);
        }
    }
}
