//! Geometry of complex surfaces in C³: fundamental forms, the isotropic
//! locus δ = EG − F² = 0, Gauss map and shape operator, principal and
//! asymptotic directions, parabolic set, umbilics, focal sheets and
//! ridges, two-variable germ classification, contact reports against
//! planes/spheres/projections, Monge-form contact families, and locus
//! tracing on real slices.

mod contact;
mod focal;
mod germ;
mod monge;
mod trace;

pub use contact::{contact_report, MapVerdict, SurfaceContact, SurfaceContactClass, SurfaceModel};
pub use focal::{focal_at, FocalData, IlExtension};
pub use germ::{classify_germ2, Germ2Class, GermKind};
pub use monge::{monge_family, FamilyKind, MongeFamily};
pub use trace::{trace_locus, LocusKind, LocusTrace, TracePoint};

use serde::Serialize;

use crate::complex::{sqrt_branched, Branch, BranchedScalar, CVec3, C};
use crate::error::GeomError;
use crate::expr::{lift2, ExprAST};
use crate::geomspec::{GeomKind, GeomSpec};
use crate::jet::{cross_jets2, inner_jets2, Jet2};
use crate::options::NumericOptions;
use crate::space_curve::BranchedVec3;

pub(crate) fn components_surface(spec: &GeomSpec) -> Result<[&ExprAST; 3], GeomError> {
    if spec.kind != GeomKind::Surface || spec.components.len() != 3 {
        return Err(GeomError::WrongKind { expected: "surface" });
    }
    Ok([&spec.components[0], &spec.components[1], &spec.components[2]])
}

/// Jets of the parametrisation and of every first/second fundamental form
/// coefficient at one parameter point. All of surface geometry reads off
/// this struct.
pub(crate) struct SurfaceJets {
    pub q: (C, C),
    pub phi: [Jet2; 3],
    pub phi1: [Jet2; 3],
    pub phi2: [Jet2; 3],
    pub e: Jet2,
    pub f: Jet2,
    pub g: Jet2,
    pub x: [Jet2; 3],
    pub lb: Jet2,
    pub mb: Jet2,
    pub nb: Jet2,
    pub delta: Jet2,
}

pub(crate) fn lift_surface(
    spec: &GeomSpec,
    q: (C, C),
    order: usize,
) -> Result<SurfaceJets, GeomError> {
    let comps = components_surface(spec)?;
    let phi = [
        lift2(comps[0], q, order)?,
        lift2(comps[1], q, order)?,
        lift2(comps[2], q, order)?,
    ];
    Ok(SurfaceJets::from_phi(q, phi))
}

impl SurfaceJets {
    pub(crate) fn from_phi(q: (C, C), phi: [Jet2; 3]) -> SurfaceJets {
        let phi1 = [phi[0].d1(), phi[1].d1(), phi[2].d1()];
        let phi2 = [phi[0].d2(), phi[1].d2(), phi[2].d2()];
        let phi11 = [phi1[0].d1(), phi1[1].d1(), phi1[2].d1()];
        let phi12 = [phi1[0].d2(), phi1[1].d2(), phi1[2].d2()];
        let phi22 = [phi2[0].d2(), phi2[1].d2(), phi2[2].d2()];

        let e = inner_jets2(&phi1, &phi1);
        let f = inner_jets2(&phi1, &phi2);
        let g = inner_jets2(&phi2, &phi2);
        let x = cross_jets2(&phi1, &phi2);
        let lb = inner_jets2(&x, &phi11);
        let mb = inner_jets2(&x, &phi12);
        let nb = inner_jets2(&x, &phi22);
        let delta = e.mul(&g).sub(&f.mul(&f));

        SurfaceJets {
            q,
            phi,
            phi1,
            phi2,
            e,
            f,
            g,
            x,
            lb,
            mb,
            nb,
            delta,
        }
    }

    pub fn position(&self) -> CVec3 {
        CVec3::new(self.phi[0].value(), self.phi[1].value(), self.phi[2].value())
    }

    pub fn tangent1(&self) -> CVec3 {
        CVec3::new(self.phi1[0].value(), self.phi1[1].value(), self.phi1[2].value())
    }

    pub fn tangent2(&self) -> CVec3 {
        CVec3::new(self.phi2[0].value(), self.phi2[1].value(), self.phi2[2].value())
    }

    pub fn cross_value(&self) -> CVec3 {
        CVec3::new(self.x[0].value(), self.x[1].value(), self.x[2].value())
    }

    pub fn regular(&self, tol: f64) -> bool {
        let scale = self.tangent1().herm_norm_sq().max(self.tangent2().herm_norm_sq());
        self.cross_value().herm_norm_sq() > (tol * scale.max(1.0)).powi(2)
    }

    pub fn on_il(&self, tol_iso: f64) -> bool {
        self.delta.value().norm() <= tol_iso * self.cross_value().herm_norm_sq().max(1.0)
    }

    pub fn fully_isotropic(&self, tol_iso: f64) -> bool {
        self.delta.coeff_scale() <= tol_iso * self.cross_value().herm_norm_sq().max(1.0)
    }
}

/// First and second fundamental form data at a point. `l`, `m`, `n` and
/// the Gauss map carry the square-root branch; the overbarred coefficients
/// and δ are branch-free. On the isotropic locus the branched quantities
/// are withheld.
#[derive(Debug, Clone, Serialize)]
pub struct FormsData {
    pub q: (C, C),
    pub e: C,
    pub f: C,
    pub g: C,
    pub l_bar: C,
    pub m_bar: C,
    pub n_bar: C,
    pub delta: C,
    pub on_il: bool,
    pub l: Option<BranchedScalar>,
    pub m: Option<BranchedScalar>,
    pub n: Option<BranchedScalar>,
    pub normal: Option<BranchedVec3>,
}

/// Fundamental forms at `q` (order-2 jet computation).
pub fn forms_at(spec: &GeomSpec, q: (C, C), opts: &NumericOptions) -> Result<FormsData, GeomError> {
    let jets = lift_surface(spec, q, opts.jet_order_surface.max(2))?;
    forms_from_jets(&jets, opts)
}

pub(crate) fn forms_from_jets(
    jets: &SurfaceJets,
    opts: &NumericOptions,
) -> Result<FormsData, GeomError> {
    let q = jets.q;
    if !jets.regular(opts.tol_iso) {
        return Err(GeomError::NonRegular {
            t: C::new(f64::NAN, f64::NAN),
        });
    }
    let on_il = jets.on_il(opts.tol_iso);
    if on_il && jets.fully_isotropic(opts.tol_iso) {
        return Err(GeomError::FullyIsotropicSurface { q0: q.0, q1: q.1 });
    }

    let delta = jets.delta.value();
    let (l, m, n, normal) = if on_il {
        (None, None, None, None)
    } else {
        let root = sqrt_branched(delta, opts.branch);
        let branched = |v: C| {
            Some(BranchedScalar {
                value: v / root.value,
                branch: opts.branch,
                cut_margin: root.cut_margin,
                degenerate: false,
            })
        };
        let x = jets.cross_value();
        (
            branched(jets.lb.value()),
            branched(jets.mb.value()),
            branched(jets.nb.value()),
            Some(BranchedVec3 {
                v: x.scale(C::new(1.0, 0.0) / root.value),
                branch: opts.branch,
            }),
        )
    };

    Ok(FormsData {
        q,
        e: jets.e.value(),
        f: jets.f.value(),
        g: jets.g.value(),
        l_bar: jets.lb.value(),
        m_bar: jets.mb.value(),
        n_bar: jets.nb.value(),
        delta,
        on_il,
        l,
        m,
        n,
        normal,
    })
}

/// Shape-operator data at a point off the isotropic locus.
#[derive(Debug, Clone, Serialize)]
pub struct ShapeData {
    pub q: (C, C),
    /// Matrix of −dN in the (φ_z1, φ_z2) basis.
    pub a_p: [[C; 2]; 2],
    pub kappa1: BranchedScalar,
    pub kappa2: BranchedScalar,
    /// Principal directions as (a, b) coefficients in the tangent basis,
    /// normalised so the largest component is 1. From the branch-free
    /// quadratic (Em̄−Fl̄)a² + (En̄−Gl̄)ab + (Fn̄−Gm̄)b² = 0.
    pub e1: [C; 2],
    pub e2: [C; 2],
    pub gaussian: C,
    pub umbilic: bool,
    pub asymptotic: Vec<[C; 2]>,
    /// The second fundamental form vanishes identically here (planes):
    /// every direction is asymptotic.
    pub all_asymptotic: bool,
}

/// Solve c_aa·a² + c_ab·ab + c_bb·b² = 0 for directions (a : b),
/// normalised so the larger component is 1. Returns 0, 1 (double) or 2
/// directions.
pub(crate) fn direction_quadratic(c_aa: C, c_ab: C, c_bb: C, tol: f64) -> Vec<[C; 2]> {
    let scale = c_aa.norm().max(c_ab.norm()).max(c_bb.norm());
    if scale == 0.0 {
        return Vec::new();
    }
    let normalize = |d: [C; 2]| {
        let (na, nb) = (d[0].norm(), d[1].norm());
        if na >= nb {
            [C::new(1.0, 0.0), d[1] / d[0]]
        } else {
            [d[0] / d[1], C::new(1.0, 0.0)]
        }
    };
    let tiny = tol * scale;
    if c_aa.norm() <= tiny && c_bb.norm() <= tiny {
        // ab·c_ab = 0: the coordinate directions
        return vec![
            [C::new(1.0, 0.0), C::new(0.0, 0.0)],
            [C::new(0.0, 0.0), C::new(1.0, 0.0)],
        ];
    }
    let disc = c_ab * c_ab - c_aa * c_bb * 4.0;
    let root = sqrt_branched(disc, Branch::Principal).value;
    if c_aa.norm() >= c_bb.norm() {
        // c_aa x² + c_ab x + c_bb = 0 with x = a/b
        let x1 = (-c_ab + root) / (c_aa * 2.0);
        let x2 = (-c_ab - root) / (c_aa * 2.0);
        vec![
            normalize([x1, C::new(1.0, 0.0)]),
            normalize([x2, C::new(1.0, 0.0)]),
        ]
    } else {
        let y1 = (-c_ab + root) / (c_bb * 2.0);
        let y2 = (-c_ab - root) / (c_bb * 2.0);
        vec![
            normalize([C::new(1.0, 0.0), y1]),
            normalize([C::new(1.0, 0.0), y2]),
        ]
    }
}

/// Shape operator, principal curvatures/directions, Gaussian curvature,
/// umbilic flag and asymptotic directions at `q`.
pub fn shape_at(spec: &GeomSpec, q: (C, C), opts: &NumericOptions) -> Result<ShapeData, GeomError> {
    let jets = lift_surface(spec, q, opts.jet_order_surface.max(2))?;
    shape_from_jets(&jets, opts)
}

pub(crate) fn shape_from_jets(
    jets: &SurfaceJets,
    opts: &NumericOptions,
) -> Result<ShapeData, GeomError> {
    let forms = forms_from_jets(jets, opts)?;
    if forms.on_il {
        return Err(GeomError::OnIsotropicLocus {
            q0: jets.q.0,
            q1: jets.q.1,
        });
    }
    let (e, f, g) = (forms.e, forms.f, forms.g);
    let (lb, mb, nb) = (forms.l_bar, forms.m_bar, forms.n_bar);
    let delta = forms.delta;
    let root = sqrt_branched(delta, opts.branch);

    // A_p = I⁻¹·II = [[G l−F m, G m−F n],[E m−F l, E n−F m]]/δ
    let (l, m, n) = (
        forms.l.unwrap().value,
        forms.m.unwrap().value,
        forms.n.unwrap().value,
    );
    let a_p = [
        [(g * l - f * m) / delta, (g * m - f * n) / delta],
        [(e * m - f * l) / delta, (e * n - f * m) / delta],
    ];

    // principal directions from the branch-free quadratic
    let c_aa = e * mb - f * lb;
    let c_ab = e * nb - g * lb;
    let c_bb = f * nb - g * mb;
    let form_scale = [e, f, g].iter().map(|z| z.norm()).fold(0.0, f64::max)
        * [lb, mb, nb].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let umbilic = c_aa.norm().max(c_ab.norm()).max(c_bb.norm())
        <= opts.tol_rel * form_scale.max(1e-300);

    let dirs = if umbilic {
        vec![
            [C::new(1.0, 0.0), C::new(0.0, 0.0)],
            [C::new(0.0, 0.0), C::new(1.0, 0.0)],
        ]
    } else {
        direction_quadratic(c_aa, c_ab, c_bb, opts.tol_rel)
    };
    let (e1, e2) = match dirs.len() {
        2 => (dirs[0], dirs[1]),
        1 => (dirs[0], dirs[0]),
        _ => (
            [C::new(1.0, 0.0), C::new(0.0, 0.0)],
            [C::new(0.0, 0.0), C::new(1.0, 0.0)],
        ),
    };

    // eigenvalues of A_p, matched to the directions
    let tr = a_p[0][0] + a_p[1][1];
    let det = a_p[0][0] * a_p[1][1] - a_p[0][1] * a_p[1][0];
    let disc = tr * tr - det * 4.0;
    let droot = sqrt_branched(disc, Branch::Principal).value;
    let lam = [(tr + droot) / 2.0, (tr - droot) / 2.0];
    let mismatch = |dir: [C; 2], lambda: C| {
        let ax = [
            a_p[0][0] * dir[0] + a_p[0][1] * dir[1] - lambda * dir[0],
            a_p[1][0] * dir[0] + a_p[1][1] * dir[1] - lambda * dir[1],
        ];
        (ax[0].norm_sqr() + ax[1].norm_sqr()).sqrt()
    };
    let (k1, k2) = if mismatch(e1, lam[0]) + mismatch(e2, lam[1])
        <= mismatch(e1, lam[1]) + mismatch(e2, lam[0])
    {
        (lam[0], lam[1])
    } else {
        (lam[1], lam[0])
    };

    let branched = |v: C| BranchedScalar {
        value: v,
        branch: opts.branch,
        cut_margin: root.cut_margin,
        degenerate: false,
    };

    let all_asymptotic = lb.norm().max(mb.norm()).max(nb.norm())
        <= opts.tol_rel * jets.cross_value().herm_norm_sq().max(1e-300);
    let asym = if all_asymptotic {
        Vec::new()
    } else {
        let mut uniq: Vec<[C; 2]> = Vec::new();
        for d in direction_quadratic(lb, mb * 2.0, nb, opts.tol_rel) {
            if !uniq
                .iter()
                .any(|u| (u[0] - d[0]).norm() + (u[1] - d[1]).norm() < 1e-9)
            {
                uniq.push(d);
            }
        }
        uniq
    };

    Ok(ShapeData {
        q: jets.q,
        a_p,
        kappa1: branched(k1),
        kappa2: branched(k2),
        e1,
        e2,
        gaussian: (lb * nb - mb * mb) / (delta * delta),
        umbilic,
        asymptotic: asym,
        all_asymptotic,
    })
}
