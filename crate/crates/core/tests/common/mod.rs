//! Shared generators and oracles for the property and acceptance suites.

#![allow(dead_code)]

use hologeom_core::complex::{c, C};
use hologeom_core::expr::ExprAST;
use hologeom_core::geomspec::{DomainRect, GeomSpec};
use hologeom_core::jet::{inner_jets2, Jet2};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_c(r: &mut ChaCha8Rng, scale: f64) -> C {
    c(
        r.gen_range(-scale..scale),
        r.gen_range(-scale..scale),
    )
}

fn fmt_c(z: C) -> String {
    format!("({} + {}i)", z.re, z.im)
}

/// Random polynomial expression a₁t + a₂t² + … with a nonzero linear part.
fn random_poly_src(r: &mut ChaCha8Rng, var: &str, lead: C, degree: usize, scale: f64) -> String {
    let mut s = format!("{}*{}", fmt_c(lead), var);
    for k in 2..=degree {
        let a = random_c(r, scale);
        s.push_str(&format!(" + {}*{}^{}", fmt_c(a), var, k));
    }
    s
}

/// A regular plane curve with velocity bounded away from isotropy at 0.
pub fn random_plane_curve(r: &mut ChaCha8Rng) -> GeomSpec {
    loop {
        let v = (random_c(r, 1.0), random_c(r, 1.0));
        let speed0 = v.0 * v.0 + v.1 * v.1;
        if speed0.norm() < 0.3 || v.0.norm() + v.1.norm() < 0.3 {
            continue;
        }
        let x = random_poly_src(r, "t", v.0, 4, 0.4);
        let y = random_poly_src(r, "t", v.1, 4, 0.4);
        return GeomSpec::plane_curve(&x, &y, DomainRect::square(1.0));
    }
}

pub fn random_space_curve(r: &mut ChaCha8Rng) -> GeomSpec {
    loop {
        let v = (random_c(r, 1.0), random_c(r, 1.0), random_c(r, 1.0));
        let speed0 = v.0 * v.0 + v.1 * v.1 + v.2 * v.2;
        if speed0.norm() < 0.3 {
            continue;
        }
        let x = random_poly_src(r, "t", v.0, 4, 0.4);
        let y = random_poly_src(r, "t", v.1, 4, 0.4);
        let z = random_poly_src(r, "t", v.2, 4, 0.4);
        return GeomSpec::space_curve(&x, &y, &z, DomainRect::square(1.0));
    }
}

/// A random Monge-form patch z₃ = f(z₁,z₂) with zero 1-jet, quadratic part
/// bounded away from zero.
pub fn random_monge_patch(r: &mut ChaCha8Rng) -> GeomSpec {
    let mut terms = Vec::new();
    for i in 0..=4usize {
        for j in 0..=(4 - i) {
            if i + j < 2 {
                continue;
            }
            let a = random_c(r, 0.5);
            terms.push(format!("{}*z1^{}*z2^{}", fmt_c(a), i, j));
        }
    }
    let f = terms.join(" + ");
    GeomSpec::monge_surface(&f, [DomainRect::square(0.6), DomainRect::square(0.6)])
}

// ---------------------------------------------------------------------------
// Complex orthogonal transformations (Cayley transform of a skew matrix)
// ---------------------------------------------------------------------------

fn mat_inv2(m: [[C; 2]; 2]) -> [[C; 2]; 2] {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ]
}

fn mat_mul2(a: [[C; 2]; 2], b: [[C; 2]; 2]) -> [[C; 2]; 2] {
    let mut out = [[c(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

/// Random R ∈ O(2, C): R = (I − A)⁻¹(I + A) with A skew-symmetric.
pub fn random_orthogonal2(r: &mut ChaCha8Rng) -> [[C; 2]; 2] {
    let a = random_c(r, 0.4);
    let skew = [[c(0.0, 0.0), a], [-a, c(0.0, 0.0)]];
    let id = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    let mut i_minus = id;
    let mut i_plus = id;
    for i in 0..2 {
        for j in 0..2 {
            i_minus[i][j] -= skew[i][j];
            i_plus[i][j] += skew[i][j];
        }
    }
    mat_mul2(mat_inv2(i_minus), i_plus)
}

fn mat_mul3(a: [[C; 3]; 3], b: [[C; 3]; 3]) -> [[C; 3]; 3] {
    let mut out = [[c(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            for (k, bk) in b.iter().enumerate() {
                out[i][j] += a[i][k] * bk[j];
            }
        }
    }
    out
}

fn mat_inv3(m: [[C; 3]; 3]) -> [[C; 3]; 3] {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let cof = |r1: usize, c1: usize, r2: usize, c2: usize| m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1];
    [
        [cof(1, 1, 2, 2) / det, -cof(0, 1, 2, 2) / det, cof(0, 1, 1, 2) / det],
        [-cof(1, 0, 2, 2) / det, cof(0, 0, 2, 2) / det, -cof(0, 0, 1, 2) / det],
        [cof(1, 0, 2, 1) / det, -cof(0, 0, 2, 1) / det, cof(0, 0, 1, 1) / det],
    ]
}

pub fn random_orthogonal3(r: &mut ChaCha8Rng) -> [[C; 3]; 3] {
    let (a, b, d) = (random_c(r, 0.3), random_c(r, 0.3), random_c(r, 0.3));
    let skew = [
        [c(0.0, 0.0), a, b],
        [-a, c(0.0, 0.0), d],
        [-b, -d, c(0.0, 0.0)],
    ];
    let id = [
        [c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
    ];
    let mut i_minus = id;
    let mut i_plus = id;
    for i in 0..3 {
        for j in 0..3 {
            i_minus[i][j] -= skew[i][j];
            i_plus[i][j] += skew[i][j];
        }
    }
    mat_mul3(mat_inv3(i_minus), i_plus)
}

fn lincomb(coeffs: &[(C, &ExprAST)], shift: C) -> ExprAST {
    let mut acc = ExprAST::Literal(shift);
    for (a, comp) in coeffs {
        acc = ExprAST::Add(
            Box::new(acc),
            Box::new(ExprAST::Mul(
                Box::new(ExprAST::Literal(*a)),
                Box::new((*comp).clone()),
            )),
        );
    }
    acc
}

/// Apply z ↦ R·z + b to the curve components.
pub fn transform_curve2(spec: &GeomSpec, rot: [[C; 2]; 2], shift: [C; 2]) -> GeomSpec {
    let mut out = spec.clone();
    out.components = (0..2)
        .map(|i| {
            lincomb(
                &[(rot[i][0], &spec.components[0]), (rot[i][1], &spec.components[1])],
                shift[i],
            )
        })
        .collect();
    out
}

pub fn transform_curve3(spec: &GeomSpec, rot: [[C; 3]; 3], shift: [C; 3]) -> GeomSpec {
    let mut out = spec.clone();
    out.components = (0..3)
        .map(|i| {
            lincomb(
                &[
                    (rot[i][0], &spec.components[0]),
                    (rot[i][1], &spec.components[1]),
                    (rot[i][2], &spec.components[2]),
                ],
                shift[i],
            )
        })
        .collect();
    out
}

pub fn apply3(rot: [[C; 3]; 3], v: [C; 3]) -> [C; 3] {
    let mut out = [c(0.0, 0.0); 3];
    for i in 0..3 {
        for (k, vk) in v.iter().enumerate() {
            out[i] += rot[i][k] * vk;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Brioschi intrinsic curvature (oracle for the Theorema Egregium check)
// ---------------------------------------------------------------------------

/// Intrinsic Gaussian curvature from the first-fundamental-form jets
/// (E, F, G of order ≥ 2): the Brioschi formula.
pub fn brioschi_k(e: &Jet2, f: &Jet2, g: &Jet2) -> C {
    let (e0, f0, g0) = (e.value(), f.value(), g.value());
    let e_u = e.partial(1, 0);
    let e_v = e.partial(0, 1);
    let e_vv = e.partial(0, 2);
    let f_u = f.partial(1, 0);
    let f_v = f.partial(0, 1);
    let f_uv = f.partial(1, 1);
    let g_u = g.partial(1, 0);
    let g_v = g.partial(0, 1);
    let g_uu = g.partial(2, 0);

    let m1 = [
        [
            -e_vv / 2.0 + f_uv - g_uu / 2.0,
            e_u / 2.0,
            f_u - e_v / 2.0,
        ],
        [f_v - g_u / 2.0, e0, f0],
        [g_v / 2.0, f0, g0],
    ];
    let m2 = [
        [c(0.0, 0.0), e_v / 2.0, g_u / 2.0],
        [e_v / 2.0, e0, f0],
        [g_u / 2.0, f0, g0],
    ];
    let det3 = |m: [[C; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let delta = e0 * g0 - f0 * f0;
    (det3(m1) - det3(m2)) / (delta * delta)
}

/// First-fundamental-form jets straight from the component expressions
/// (independent of the surface module's internals).
pub fn first_form_jets(spec: &GeomSpec, q: (C, C), order: usize) -> (Jet2, Jet2, Jet2) {
    use hologeom_core::expr::lift2;
    let phi: Vec<Jet2> = spec
        .components
        .iter()
        .map(|comp| lift2(comp, q, order).unwrap())
        .collect();
    let p1 = [phi[0].d1(), phi[1].d1(), phi[2].d1()];
    let p2 = [phi[0].d2(), phi[1].d2(), phi[2].d2()];
    (
        inner_jets2(&p1, &p1),
        inner_jets2(&p1, &p2),
        inner_jets2(&p2, &p2),
    )
}

// ---------------------------------------------------------------------------
// Germ normal forms under random coordinate changes
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormalForm {
    A(usize),
    D4,
}

/// Construct the 5-jet of a normal form composed with a random
/// biholomorphic coordinate change (well-conditioned linear part plus
/// higher-order terms). The class is invariant under the change.
pub fn constructed_germ(r: &mut ChaCha8Rng, which: NormalForm) -> Jet2 {
    let origin = (c(0.0, 0.0), c(0.0, 0.0));
    let order = 5;

    // normal form jet
    let mut nf = Jet2::zero(origin, order);
    match which {
        NormalForm::A(k) => {
            nf.set_coeff(2, 0, c(1.0, 0.0));
            nf.set_coeff(0, k + 1, c(1.0, 0.0));
        }
        NormalForm::D4 => {
            nf.set_coeff(3, 0, c(1.0, 0.0));
            nf.set_coeff(1, 2, c(-3.0, 0.0));
        }
    }

    // linear part kept away from singularity
    let rot = loop {
        let m = [
            [random_c(r, 1.0), random_c(r, 1.0)],
            [random_c(r, 1.0), random_c(r, 1.0)],
        ];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let scale: f64 = m.iter().flatten().map(|z| z.norm()).fold(0.0, f64::max);
        if det.norm() > 0.35 * scale * scale && scale > 0.4 {
            break m;
        }
    };

    let mut x = Jet2::variable_delta(0, origin, order).scale(rot[0][0]).add(
        &Jet2::variable_delta(1, origin, order).scale(rot[0][1]),
    );
    let mut y = Jet2::variable_delta(0, origin, order).scale(rot[1][0]).add(
        &Jet2::variable_delta(1, origin, order).scale(rot[1][1]),
    );
    // higher-order perturbation of the change (still a diffeomorphism)
    for d in 2..=3usize {
        for j in 0..=d {
            let i = d - j;
            let mut bump_x = Jet2::zero(origin, order);
            bump_x.set_coeff(i, j, random_c(r, 0.3));
            let mut bump_y = Jet2::zero(origin, order);
            bump_y.set_coeff(i, j, random_c(r, 0.3));
            x = x.add(&bump_x);
            y = y.add(&bump_y);
        }
    }

    nf.eval_jets2(&x, &y)
}
