//! Two-variable germ classification: A₁–A₄ and D₄ by corank analysis and
//! a numerical splitting lemma.
//!
//! Corank comes from the singular values of the Hessian. Corank 1 germs
//! are reduced to one variable by restricting to the critical branch
//! u = ψ(v) of ∂f/∂u = 0 along a non-degenerate direction (the residual
//! of the splitting lemma); the leading order of the residual series
//! names A_k. Corank 2 germs are D₄ exactly when the cubic part is a
//! non-degenerate binary cubic.

use serde::Serialize;

use crate::complex::{C};
use crate::jet::{Jet1, Jet2};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum GermKind {
    A(usize),
    D4,
    Degenerate(String),
}

#[derive(Debug, Clone, Serialize)]
pub struct Germ2Class {
    pub corank: usize,
    pub kind: GermKind,
    /// |coefficient| ladder of the reduced one-variable jet (corank 1) or
    /// of the cubic part (corank 2).
    pub residual_ladder: Vec<f64>,
    pub kernel_direction: Option<[C; 2]>,
    /// Taylor coefficients of the reduced one-variable germ, when a
    /// splitting was performed.
    pub residual_jet: Option<Vec<C>>,
}

impl Germ2Class {
    fn degenerate(reason: &str) -> Germ2Class {
        Germ2Class {
            corank: 0,
            kind: GermKind::Degenerate(reason.to_string()),
            residual_ladder: Vec::new(),
            kernel_direction: None,
            residual_jet: None,
        }
    }

    pub fn is_a(&self, k: usize) -> bool {
        self.kind == GermKind::A(k)
    }
}

/// Singular values of a complex 2×2 matrix (descending).
fn singular_values(h: [[C; 2]; 2]) -> [f64; 2] {
    // eigenvalues of H·H^†: Hermitian 2×2
    let a = h[0][0].norm_sqr() + h[0][1].norm_sqr();
    let d = h[1][0].norm_sqr() + h[1][1].norm_sqr();
    let b = h[0][0] * h[1][0].conj() + h[0][1] * h[1][1].conj();
    let tr = a + d;
    let det = a * d - b.norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    let l1 = 0.5 * (tr + disc);
    let l2 = 0.5 * (tr - disc);
    [l1.max(0.0).sqrt(), l2.max(0.0).sqrt()]
}

/// Unit kernel direction of an (approximately) rank-1 symmetric matrix.
fn kernel_direction(h: [[C; 2]; 2]) -> [C; 2] {
    // the row of larger magnitude annihilates (−r₂, r₁)
    let r0 = (h[0][0].norm_sqr() + h[0][1].norm_sqr()).sqrt();
    let r1 = (h[1][0].norm_sqr() + h[1][1].norm_sqr()).sqrt();
    let row = if r0 >= r1 { h[0] } else { h[1] };
    let k = [-row[1], row[0]];
    let n = (k[0].norm_sqr() + k[1].norm_sqr()).sqrt();
    if n == 0.0 {
        [C::new(1.0, 0.0), C::new(0.0, 0.0)]
    } else {
        [k[0] / n, k[1] / n]
    }
}

/// Classify a singular 2-variable germ from its jet (order ≥ 5 for the
/// full A₄/D₄ range). The caller ensures the constant and linear parts
/// are already below tolerance.
pub fn classify_germ2(jet: &Jet2, tol: f64) -> Germ2Class {
    let order = jet.order();
    if order < 3 {
        return Germ2Class::degenerate("jet order too low");
    }
    let scale = jet.coeff_scale();
    if scale == 0.0 {
        return Germ2Class::degenerate("zero jet");
    }
    let lin = jet.coeff(1, 0).norm().max(jet.coeff(0, 1).norm());
    if lin > 1e-6 * scale {
        return Germ2Class::degenerate("jet is not singular (nonzero linear part)");
    }

    let h = [
        [jet.coeff(2, 0) * 2.0, jet.coeff(1, 1)],
        [jet.coeff(1, 1), jet.coeff(0, 2) * 2.0],
    ];
    let sv = singular_values(h);
    let quad_scale = sv[0].max(scale * tol);

    if sv[1] > tol.sqrt() * quad_scale && sv[0] > tol * scale {
        // non-degenerate quadratic part
        return Germ2Class {
            corank: 0,
            kind: GermKind::A(1),
            residual_ladder: vec![sv[0], sv[1]],
            kernel_direction: None,
            residual_jet: None,
        };
    }

    if sv[0] <= tol * scale {
        return classify_corank2(jet, tol, scale);
    }

    classify_corank1(jet, h, tol, scale)
}

fn classify_corank1(jet: &Jet2, h: [[C; 2]; 2], tol: f64, scale: f64) -> Germ2Class {
    let order = jet.order();
    let k = kernel_direction(h);
    // a direction with substantial H(w,w), from a fixed candidate set
    let cands = [
        [C::new(1.0, 0.0), C::new(0.0, 0.0)],
        [C::new(0.0, 0.0), C::new(1.0, 0.0)],
        [
            C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ],
        [
            C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C::new(-std::f64::consts::FRAC_1_SQRT_2, 0.0),
        ],
        [
            C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C::new(0.0, std::f64::consts::FRAC_1_SQRT_2),
        ],
        [
            C::new(std::f64::consts::FRAC_1_SQRT_2, 0.0),
            C::new(0.0, -std::f64::consts::FRAC_1_SQRT_2),
        ],
    ];
    let hq = |w: [C; 2]| {
        (h[0][0] * w[0] * w[0] + h[0][1] * w[0] * w[1] * 2.0 + h[1][1] * w[1] * w[1]).norm()
    };
    let w = *cands
        .iter()
        .max_by(|a, b| hq(**a).partial_cmp(&hq(**b)).unwrap())
        .unwrap();

    // change coordinates (z1, z2) = u·w + v·k and restrict to the critical
    // branch ∂f/∂u = 0
    let base = jet.base();
    let u = Jet2::variable_delta(0, base, order);
    let v = Jet2::variable_delta(1, base, order);
    let x = u.scale(w[0]).add(&v.scale(k[0]));
    let y = u.scale(w[1]).add(&v.scale(k[1]));
    let ftilde = jet.eval_jets2(&x, &y);

    let fu = ftilde.d1();
    let fuu = fu.d1();
    if fuu.value().norm() <= tol * scale {
        return Germ2Class::degenerate("borderline corank: ∂²f/∂u² too small");
    }

    // Newton for ψ(v) with ψ(0) = 0 in truncated series arithmetic
    let vjet = Jet1::variable(C::new(0.0, 0.0), order);
    let mut psi = Jet1::constant(C::new(0.0, 0.0), C::new(0.0, 0.0), order);
    for _ in 0..order + 2 {
        let g = fu.eval_jets1(&psi, &vjet);
        let gp = fuu.eval_jets1(&psi, &vjet);
        match g.div(&gp) {
            Ok(step) => psi = psi.sub(&step),
            Err(_) => return Germ2Class::degenerate("splitting Newton failed"),
        }
    }
    let residual = ftilde.eval_jets1(&psi, &vjet);

    // constant term is the critical value; drop it and ladder the rest
    let coeffs: Vec<C> = (0..=order).map(|i| residual.coeff(i)).collect();
    let ladder: Vec<f64> = coeffs.iter().map(|z| z.norm()).collect();
    let res_scale = ladder.iter().skip(2).fold(scale * tol, |a, &b| a.max(b));

    // v is the kernel direction, so the v² term must be negligible
    if ladder[2] > (tol.sqrt()) * res_scale.max(sv_guard(h)) {
        return Germ2Class::degenerate("borderline corank: residual quadratic term survives");
    }

    for ord in 3..=order {
        if ladder[ord] > tol * res_scale {
            return Germ2Class {
                corank: 1,
                kind: GermKind::A(ord - 1),
                residual_ladder: ladder,
                kernel_direction: Some(k),
                residual_jet: Some(coeffs),
            };
        }
    }
    Germ2Class {
        corank: 1,
        kind: GermKind::Degenerate("beyond jet order".into()),
        residual_ladder: ladder,
        kernel_direction: Some(k),
        residual_jet: Some(coeffs),
    }
}

fn sv_guard(h: [[C; 2]; 2]) -> f64 {
    singular_values(h)[0] * 1e-10
}

fn classify_corank2(jet: &Jet2, tol: f64, scale: f64) -> Germ2Class {
    // cubic part as a binary cubic a·z1³ + b·z1²z2 + c·z1z2² + d·z2³
    let a = jet.coeff(3, 0);
    let b = jet.coeff(2, 1);
    let c = jet.coeff(1, 2);
    let d = jet.coeff(0, 3);
    let cubic_scale = [a, b, c, d].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let ladder = vec![a.norm(), b.norm(), c.norm(), d.norm()];
    if cubic_scale <= tol * scale {
        return Germ2Class {
            corank: 2,
            kind: GermKind::Degenerate("corank 2 with vanishing cubic part".into()),
            residual_ladder: ladder,
            kernel_direction: None,
            residual_jet: None,
        };
    }
    // discriminant of the binary cubic: ≠ 0 ⇔ three distinct root
    // directions ⇔ D₄
    let disc = a * b * c * d * 18.0 - b * b * b * d * 4.0 + b * b * c * c
        - a * c * c * c * 4.0
        - a * a * d * d * 27.0;
    let kind = if disc.norm() > tol * cubic_scale.powi(4) {
        GermKind::D4
    } else {
        GermKind::Degenerate("corank 2 with degenerate cubic part".into())
    };
    Germ2Class {
        corank: 2,
        kind,
        residual_ladder: ladder,
        kernel_direction: None,
        residual_jet: None,
    }
}
