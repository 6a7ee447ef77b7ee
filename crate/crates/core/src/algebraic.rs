//! Certified counts and locations of isotropic points, inflections and
//! vertices of a regular algebraic plane curve f(z₁,z₂) = 0 of degree d.
//!
//! Counts follow from Bézout's theorem once the hypotheses hold (the
//! circular points at infinity (1:±i:0) are not roots of the top form f_d,
//! and f_d is reduced): 2d(d−1) isotropic points, 3d(d−2) inflections,
//! 2d(3d−5) vertices. Hypotheses are checked in exact arithmetic;
//! locations come from exact resultant elimination followed by floating
//! root finding and 2×2 Newton refinement.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::complex::C;
use crate::error::GeomError;
use crate::geomspec::{GeomKind, GeomSpec};
use crate::options::NumericOptions;
use crate::polysolve::exact::{
    qc_i, qc_is_zero, qc_one, qc_to_c, qc_zero, resultant_exact, BPolyExact, ResultantError,
    UPolyExact, QC,
};
use crate::polysolve::{roots, BPolyF, CPoly, Root, RootSet};

/// An algebraic curve with its exact derived data: partials, top form, and
/// the homogenization-related quantities the hypothesis checks need.
#[derive(Debug, Clone)]
pub struct AlgCurve {
    pub f: BPolyExact,
    pub d: usize,
    pub f1: BPolyExact,
    pub f2: BPolyExact,
    pub top_form: BPolyExact,
    pub rational_input: bool,
}

impl AlgCurve {
    pub fn from_spec(spec: &GeomSpec) -> Result<AlgCurve, GeomError> {
        if spec.kind != GeomKind::AlgebraicCurve {
            return Err(GeomError::WrongKind {
                expected: "algebraic_curve",
            });
        }
        let table = spec
            .coefficients
            .as_ref()
            .ok_or(GeomError::Degenerate("missing coefficient table".into()))?;
        let f = BPolyExact::from_entries(&table.entries);
        let d = f.total_degree();
        if let Some(decl) = spec.degree {
            if decl != d {
                return Err(GeomError::Degenerate(format!(
                    "declared degree {decl} does not match actual degree {d}"
                )));
            }
        }
        Ok(Self::new(f, table.rational_input))
    }

    pub fn new(f: BPolyExact, rational_input: bool) -> AlgCurve {
        let d = f.total_degree();
        AlgCurve {
            f1: f.d1(),
            f2: f.d2(),
            top_form: f.homogeneous_part(d),
            f,
            d,
            rational_input,
        }
    }

    /// Implicit curvature numerator N_f = f₁₁f₂² − 2f₁₂f₁f₂ + f₂₂f₁².
    pub fn curvature_numerator(&self) -> BPolyExact {
        let f11 = self.f1.d1();
        let f12 = self.f1.d2();
        let f22 = self.f2.d2();
        f11.mul(&self.f2.mul(&self.f2))
            .sub(&f12.mul(&self.f1).mul(&self.f2).scale(&(qc_one() + qc_one())))
            .add(&f22.mul(&self.f1.mul(&self.f1)))
    }

    /// Isotropy polynomial g = f₁² + f₂².
    pub fn isotropy_poly(&self) -> BPolyExact {
        self.f1.mul(&self.f1).add(&self.f2.mul(&self.f2))
    }

    /// Tangential derivative along v = (−f₂, f₁).
    pub fn tangential_derivative(&self, h: &BPolyExact) -> BPolyExact {
        h.d2().mul(&self.f1).sub(&h.d1().mul(&self.f2))
    }

    /// Vertex polynomial W = 2·D_v(N_f)·g − 3·N_f·D_v(g): the tangential
    /// derivative of κ² with denominators cleared (degree 6d−8). Vanishes
    /// on the curve exactly at vertices, inflections and isotropic points.
    pub fn vertex_poly(&self) -> BPolyExact {
        let nf = self.curvature_numerator();
        let g = self.isotropy_poly();
        let two = qc_one() + qc_one();
        let three = two.clone() + qc_one();
        self.tangential_derivative(&nf)
            .mul(&g)
            .scale(&two)
            .sub(&nf.mul(&self.tangential_derivative(&g)).scale(&three))
    }

    /// Affine chart of the Hessian curve det(∂²F) = 0 of the
    /// homogenization F, a curve of degree 3(d−2).
    pub fn hessian_affine(&self) -> BPolyExact {
        let hom = TPoly::homogenize(&self.f, self.d);
        let p = [hom.partial(0), hom.partial(1), hom.partial(2)];
        let h: Vec<Vec<TPoly>> = (0..3)
            .map(|a| (0..3).map(|b| p[a].partial(b)).collect())
            .collect();
        let det = h[0][0]
            .mul(&h[1][1].mul(&h[2][2]).sub(&h[1][2].mul(&h[2][1])))
            .sub(&h[0][1].mul(&h[1][0].mul(&h[2][2]).sub(&h[1][2].mul(&h[2][0]))))
            .add(&h[0][2].mul(&h[1][0].mul(&h[2][1]).sub(&h[1][1].mul(&h[2][0]))));
        det.dehomogenize()
    }
}

/// Minimal trivariate exact polynomial, used only to form the projective
/// Hessian.
#[derive(Debug, Clone)]
struct TPoly {
    terms: BTreeMap<(usize, usize, usize), QC>,
}

impl TPoly {
    fn homogenize(f: &BPolyExact, d: usize) -> TPoly {
        let mut terms = BTreeMap::new();
        for ((i, j), c) in &f.terms {
            terms.insert((*i, *j, d - i - j), c.clone());
        }
        TPoly { terms }
    }

    fn partial(&self, var: usize) -> TPoly {
        let mut terms = BTreeMap::new();
        for (&(i, j, k), c) in &self.terms {
            let (e, key) = match var {
                0 if i > 0 => (i, (i - 1, j, k)),
                1 if j > 0 => (j, (i, j - 1, k)),
                2 if k > 0 => (k, (i, j, k - 1)),
                _ => continue,
            };
            let factor = QC::new(
                num_rational::BigRational::from_integer(e.into()),
                num_rational::BigRational::from_integer(0.into()),
            );
            let entry = terms.entry(key).or_insert_with(qc_zero);
            *entry = entry.clone() + c.clone() * factor;
        }
        TPoly { terms }
    }

    fn mul(&self, other: &TPoly) -> TPoly {
        let mut terms: BTreeMap<(usize, usize, usize), QC> = BTreeMap::new();
        for (&(i1, j1, k1), a) in &self.terms {
            if qc_is_zero(a) {
                continue;
            }
            for (&(i2, j2, k2), b) in &other.terms {
                let entry = terms
                    .entry((i1 + i2, j1 + j2, k1 + k2))
                    .or_insert_with(qc_zero);
                *entry = entry.clone() + a.clone() * b.clone();
            }
        }
        TPoly { terms }
    }

    fn sub(&self, other: &TPoly) -> TPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(qc_zero);
            *entry = entry.clone() - c.clone();
        }
        TPoly { terms }
    }

    fn add(&self, other: &TPoly) -> TPoly {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(qc_zero);
            *entry = entry.clone() + c.clone();
        }
        TPoly { terms }
    }

    /// z₃ = 1.
    fn dehomogenize(&self) -> BPolyExact {
        let mut terms: BTreeMap<(usize, usize), QC> = BTreeMap::new();
        for (&(i, j, _), c) in &self.terms {
            let entry = terms.entry((i, j)).or_insert_with(qc_zero);
            *entry = entry.clone() + c.clone();
        }
        BPolyExact::new(terms)
    }
}

// ---------------------------------------------------------------------------
// Hypotheses
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct HypothesisReport {
    /// f_d(1, i) and f_d(1, −i), floated for reporting; the pass/fail
    /// verdict uses the exact values.
    pub fd_at_circular_points: [C; 2],
    pub circular_points_ok: bool,
    pub fd_squarefree: bool,
    /// Set after a count: no computed locus point is a singular point of
    /// the curve.
    pub curve_regular_sampled: Option<bool>,
}

impl HypothesisReport {
    pub fn passed(&self) -> bool {
        self.circular_points_ok && self.fd_squarefree
    }
}

/// Exact hypothesis check: circular points at infinity are not roots of
/// f_d, and f_d is reduced (squarefree as a binary form).
pub fn check_hypotheses(curve: &AlgCurve) -> HypothesisReport {
    let one = qc_one();
    let at_i = curve.top_form.eval(&one, &qc_i());
    let at_mi = curve.top_form.eval(&one, &(-qc_i()));
    let circular_points_ok = !qc_is_zero(&at_i) && !qc_is_zero(&at_mi);

    // f_d = z₁^k · p(z₂/z₁) with p(w) = f_d(1,w): squarefree as a form
    // ⇔ p squarefree and k ≤ 1
    let mut coeffs = vec![qc_zero(); curve.d + 1];
    for ((i, j), c) in &curve.top_form.terms {
        if i + j == curve.d {
            coeffs[*j] = c.clone();
        }
    }
    let p = UPolyExact::new(coeffs);
    let z1_multiplicity = curve.d - p.degree().unwrap_or(0);
    let (_, p_squarefree) = p.gcd_squarefree();
    let fd_squarefree = p_squarefree && z1_multiplicity <= 1;

    HypothesisReport {
        fd_at_circular_points: [qc_to_c(&at_i), qc_to_c(&at_mi)],
        circular_points_ok,
        fd_squarefree,
        curve_regular_sampled: None,
    }
}

// ---------------------------------------------------------------------------
// Locus counting
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize)]
pub struct Discard {
    pub z1: C,
    pub multiplicity: usize,
    pub reason: String,
}

/// Expected-vs-found record for one locus, with per-root residuals and the
/// hypothesis diagnostics that justify the expected value.
#[derive(Debug, Clone, Serialize)]
pub struct LocusCount {
    pub expected: usize,
    pub found: usize,
    pub points: RootSet<(C, C)>,
    pub hypothesis: HypothesisReport,
    pub certified: bool,
    pub non_generic: bool,
    pub discarded: Vec<Discard>,
    pub degenerate: Option<String>,
}

/// Isotropic points: solutions of f = 0 ∧ f₁² + f₂² = 0; 2d(d−1) of them
/// under the hypotheses.
pub fn isotropic_points(curve: &AlgCurve, opts: &NumericOptions) -> Result<LocusCount, GeomError> {
    count_locus(curve, Locus::Isotropic, opts, true)
}

pub fn isotropic_points_relaxed(
    curve: &AlgCurve,
    opts: &NumericOptions,
) -> Result<LocusCount, GeomError> {
    count_locus(curve, Locus::Isotropic, opts, false)
}

/// Inflections: intersection with the Hessian curve; 3d(d−2) of them.
pub fn inflections(curve: &AlgCurve, opts: &NumericOptions) -> Result<LocusCount, GeomError> {
    count_locus(curve, Locus::Inflection, opts, true)
}

/// Vertices: zeros of the cleared tangential derivative of κ² on the
/// curve, with inflection and isotropic solutions filtered out; 2d(3d−5)
/// of them.
pub fn vertices(curve: &AlgCurve, opts: &NumericOptions) -> Result<LocusCount, GeomError> {
    count_locus(curve, Locus::Vertex, opts, true)
}

pub fn vertices_relaxed(curve: &AlgCurve, opts: &NumericOptions) -> Result<LocusCount, GeomError> {
    count_locus(curve, Locus::Vertex, opts, false)
}

#[derive(Clone, Copy, PartialEq)]
enum Locus {
    Isotropic,
    Inflection,
    Vertex,
}

fn expected_count(d: usize, which: Locus) -> usize {
    match which {
        Locus::Isotropic => 2 * d * (d - 1),
        Locus::Inflection => {
            if d < 2 {
                0
            } else {
                3 * d * (d - 2)
            }
        }
        Locus::Vertex => {
            if 3 * d < 5 {
                0
            } else {
                2 * d * (3 * d - 5)
            }
        }
    }
}

fn count_locus(
    curve: &AlgCurve,
    which: Locus,
    opts: &NumericOptions,
    enforce: bool,
) -> Result<LocusCount, GeomError> {
    let mut hypothesis = check_hypotheses(curve);
    if enforce && !hypothesis.passed() {
        return Err(GeomError::HypothesisViolated(format!(
            "circular_points_ok = {}, fd_squarefree = {}",
            hypothesis.circular_points_ok, hypothesis.fd_squarefree
        )));
    }

    let expected = expected_count(curve.d, which);
    let g = match which {
        Locus::Isotropic => curve.isotropy_poly(),
        Locus::Inflection => curve.hessian_affine(),
        Locus::Vertex => curve.vertex_poly(),
    };

    if g.is_zero() {
        // e.g. circles: κ′ ≡ 0 on the whole curve
        return Ok(LocusCount {
            expected,
            found: 0,
            points: RootSet {
                roots: Vec::new(),
                certified_count: None,
            },
            hypothesis,
            certified: false,
            non_generic: true,
            discarded: Vec::new(),
            degenerate: Some(degenerate_reason(which)),
        });
    }
    if g.total_degree() == 0 {
        // constant ≠ 0: empty intersection (conic Hessian case)
        hypothesis.curve_regular_sampled = Some(true);
        return Ok(LocusCount {
            expected,
            found: 0,
            points: RootSet {
                roots: Vec::new(),
                certified_count: Some(0),
            },
            hypothesis,
            certified: expected == 0,
            non_generic: false,
            discarded: Vec::new(),
            degenerate: None,
        });
    }

    let eliminant = match resultant_exact(&curve.f, &g, 1) {
        Ok(r) => r,
        Err(ResultantError::CommonComponent) => {
            return Ok(LocusCount {
                expected,
                found: 0,
                points: RootSet {
                    roots: Vec::new(),
                    certified_count: None,
                },
                hypothesis,
                certified: false,
                non_generic: true,
                discarded: Vec::new(),
                degenerate: Some(degenerate_reason(which)),
            })
        }
        Err(ResultantError::ZeroInput) => {
            return Err(GeomError::Degenerate(
                "zero polynomial in elimination".into(),
            ))
        }
    };

    let elim_f = to_float_normalized(&eliminant);
    if elim_f.degree() < 1 {
        hypothesis.curve_regular_sampled = Some(true);
        return Ok(LocusCount {
            expected,
            found: 0,
            points: RootSet {
                roots: Vec::new(),
                certified_count: Some(0),
            },
            hypothesis,
            certified: expected == 0,
            non_generic: false,
            discarded: Vec::new(),
            degenerate: None,
        });
    }

    let z1_roots = roots(&elim_f, opts.root_tol.max(1e-9))
        .map_err(|e| GeomError::Degenerate(format!("eliminant root finding failed: {e}")))?;

    // filters for the vertex locus
    let nf = curve.curvature_numerator();
    let iso = curve.isotropy_poly();
    let ff = curve.f.to_float();
    let gf = g.to_float();
    let nf_f = nf.to_float();
    let iso_f = iso.to_float();
    let f1f = curve.f1.to_float();
    let f2f = curve.f2.to_float();
    let g1f = g.d1().to_float();
    let g2f = g.d2().to_float();

    let mut found_points: Vec<Root<(C, C)>> = Vec::new();
    let mut discarded = Vec::new();
    let mut non_generic = false;
    let mut regular_ok = true;
    let mut residual_ok = true;

    for z1_root in &z1_roots.roots {
        let r = z1_root.value;
        // candidate partners: roots of f(r, ·)
        let fiber = ff.restrict(0, r);
        if fiber.degree() < 1 {
            discarded.push(Discard {
                z1: r,
                multiplicity: z1_root.multiplicity,
                reason: "no affine fiber (leading coefficients vanish)".into(),
            });
            continue;
        }
        let fiber_roots = match roots(&fiber, 1e-6) {
            Ok(rs) => rs,
            Err(_) => {
                discarded.push(Discard {
                    z1: r,
                    multiplicity: z1_root.multiplicity,
                    reason: "fiber root finding failed".into(),
                });
                continue;
            }
        };
        let mut partners = Vec::new();
        for cand in &fiber_roots.roots {
            let z2 = cand.value;
            let gval = gf.eval(r, z2);
            let gscale = bpoly_scale(&gf, r, z2);
            if gval.norm() > 1e-4 * gscale {
                continue;
            }
            // refine the pair on (f, g); reject basin jumps that leave the
            // eliminant root (those re-find a solution that belongs to a
            // different z1 fiber and would double-count it)
            if let Some((p1, p2)) = newton2(&ff, &gf, &f1f, &f2f, &g1f, &g2f, (r, z2)) {
                if (p1 - r).norm() <= 1e-4 * (1.0 + r.norm()) {
                    partners.push((p1, p2));
                }
            }
        }
        // dedupe partners
        let mut unique: Vec<(C, C)> = Vec::new();
        'outer: for p in partners {
            for q in &unique {
                if (p.0 - q.0).norm() + (p.1 - q.1).norm()
                    < 1e-6 * (1.0 + p.0.norm() + p.1.norm())
                {
                    continue 'outer;
                }
            }
            unique.push(p);
        }

        if unique.is_empty() {
            discarded.push(Discard {
                z1: r,
                multiplicity: z1_root.multiplicity,
                reason: "eliminant root without verified partner".into(),
            });
            continue;
        }

        // locus-specific filtering (vertices exclude inflections/isotropic)
        let mut kept = Vec::new();
        for p in unique {
            if which == Locus::Vertex {
                let nf_val = nf_f.eval(p.0, p.1).norm();
                let nf_scale = bpoly_scale(&nf_f, p.0, p.1);
                let iso_val = iso_f.eval(p.0, p.1).norm();
                let iso_scale = bpoly_scale(&iso_f, p.0, p.1);
                if nf_val <= 1e-8 * nf_scale {
                    discarded.push(Discard {
                        z1: p.0,
                        multiplicity: z1_root.multiplicity,
                        reason: "inflection point (κ numerator vanishes)".into(),
                    });
                    continue;
                }
                if iso_val <= 1e-8 * iso_scale {
                    discarded.push(Discard {
                        z1: p.0,
                        multiplicity: z1_root.multiplicity,
                        reason: "isotropic point (f₁²+f₂² vanishes)".into(),
                    });
                    continue;
                }
            }
            kept.push(p);
        }
        if kept.is_empty() {
            continue;
        }

        // multiplicity distribution: m_r spread over k_r points
        let k = kept.len();
        let m = z1_root.multiplicity;
        let per = if m % k == 0 { m / k } else { 1 };
        if m % k != 0 || per > 1 {
            non_generic = true;
        }
        for p in kept {
            let fr = ff.eval(p.0, p.1).norm() / bpoly_scale(&ff, p.0, p.1);
            let gr = gf.eval(p.0, p.1).norm() / bpoly_scale(&gf, p.0, p.1);
            let residual = fr.max(gr);
            if residual > opts.root_tol.max(1e-8) {
                residual_ok = false;
            }
            // regularity spot check: ∇f ≠ 0 at the point
            let grad = f1f.eval(p.0, p.1).norm() + f2f.eval(p.0, p.1).norm();
            if grad <= 1e-8 * (1.0 + bpoly_scale(&f1f, p.0, p.1) + bpoly_scale(&f2f, p.0, p.1)) {
                regular_ok = false;
            }
            found_points.push(Root {
                value: p,
                multiplicity: per,
                residual,
            });
        }
    }

    // global dedupe: nearby eliminant roots can both reach the same
    // vertex through Newton drift; a physical point is counted once
    let mut unique_points: Vec<Root<(C, C)>> = Vec::new();
    for p in found_points {
        let coincides = unique_points.iter().any(|q| {
            (p.value.0 - q.value.0).norm() + (p.value.1 - q.value.1).norm()
                < 1e-6 * (1.0 + p.value.0.norm() + p.value.1.norm())
        });
        if !coincides {
            unique_points.push(p);
        }
    }
    let mut found_points = unique_points;
    found_points.sort_by(|a, b| {
        (a.value.0.re, a.value.0.im, a.value.1.re, a.value.1.im)
            .partial_cmp(&(b.value.0.re, b.value.0.im, b.value.1.re, b.value.1.im))
            .unwrap()
    });

    let found: usize = found_points.iter().map(|r| r.multiplicity).sum();
    hypothesis.curve_regular_sampled = Some(regular_ok);
    // `found == expected` is the Bézout certificate: a missed or spurious
    // eliminant root cannot keep the multiplicity balance while every
    // point passes Newton verification
    let certified = hypothesis.passed() && residual_ok && regular_ok && found == expected;

    Ok(LocusCount {
        expected,
        found,
        points: RootSet {
            roots: found_points,
            certified_count: if certified { Some(found) } else { None },
        },
        hypothesis,
        certified,
        non_generic,
        discarded,
        degenerate: None,
    })
}

fn degenerate_reason(which: Locus) -> String {
    match which {
        Locus::Vertex => "constant curvature: κ′ ≡ 0 on the curve".into(),
        Locus::Inflection => "Hessian vanishes on the curve".into(),
        Locus::Isotropic => "isotropy polynomial shares a component with the curve".into(),
    }
}

/// Backward-error scale with coordinate magnitudes clamped below at 1, so
/// the scale stays meaningful at solutions with a vanishing coordinate.
fn bpoly_scale(p: &BPolyF, z1: C, z2: C) -> f64 {
    let a1 = z1.norm().max(1.0);
    let a2 = z2.norm().max(1.0);
    let s: f64 = p
        .terms
        .iter()
        .map(|((i, j), c)| c.norm() * a1.powi(*i as i32) * a2.powi(*j as i32))
        .sum();
    s.max(1e-300)
}

/// Rescale exactly by a power of two before floating conversion, so huge
/// exact coefficients do not overflow f64. Roots are unchanged.
fn to_float_normalized(p: &UPolyExact) -> CPoly {
    let max_log2: i64 = p
        .coeffs
        .iter()
        .flat_map(|c| [&c.re, &c.im])
        .filter(|q| !num_traits::Zero::is_zero(*q))
        .map(|q| q.numer().bits() as i64 - q.denom().bits() as i64)
        .max()
        .unwrap_or(0);
    let shift = (-max_log2).clamp(-900, 900) as i32;
    let scale =
        num_rational::BigRational::from_integer(num_bigint::BigInt::from(2)).pow(shift);
    let coeffs = p
        .coeffs
        .iter()
        .map(|c| {
            qc_to_c(&QC::new(
                c.re.clone() * scale.clone(),
                c.im.clone() * scale.clone(),
            ))
        })
        .collect();
    CPoly::new(coeffs)
}

/// 2×2 Newton on (f, g). Acceptance is by relative residual, not step
/// size: near a solution the steps jitter at the evaluation-noise floor
/// of the higher-degree polynomial, so we keep the best iterate seen and
/// accept it when both residuals sit at working precision.
fn newton2(
    f: &BPolyF,
    g: &BPolyF,
    f1: &BPolyF,
    f2: &BPolyF,
    g1: &BPolyF,
    g2: &BPolyF,
    start: (C, C),
) -> Option<(C, C)> {
    let (mut x, mut y) = start;
    let mut best: Option<((C, C), f64)> = None;
    for _ in 0..40 {
        let fv = f.eval(x, y);
        let gv = g.eval(x, y);
        let score = (fv.norm() / bpoly_scale(f, x, y)).max(gv.norm() / bpoly_scale(g, x, y));
        if best.as_ref().map_or(true, |(_, s)| score < *s) {
            best = Some(((x, y), score));
        }
        if score < 1e-13 {
            break;
        }
        let a = f1.eval(x, y);
        let b = f2.eval(x, y);
        let cc = g1.eval(x, y);
        let d = g2.eval(x, y);
        let det = a * d - b * cc;
        if det.norm() < 1e-280 {
            break;
        }
        let dx = (fv * d - b * gv) / det;
        let dy = (a * gv - fv * cc) / det;
        x -= dx;
        y -= dy;
        if !(x.re.is_finite() && x.im.is_finite() && y.re.is_finite() && y.im.is_finite()) {
            break;
        }
    }
    match best {
        Some((pt, score)) if score < 1e-7 => Some(pt),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ellipse() -> AlgCurve {
        // z1²/4 + z2² − 1
        let spec = GeomSpec::algebraic_curve(2, &[(2, 0, 1, 4), (0, 2, 1, 1), (0, 0, -1, 1)]);
        AlgCurve::from_spec(&spec).unwrap()
    }

    fn unit_circle() -> AlgCurve {
        let spec = GeomSpec::algebraic_curve(2, &[(2, 0, 1, 1), (0, 2, 1, 1), (0, 0, -1, 1)]);
        AlgCurve::from_spec(&spec).unwrap()
    }

    fn opts() -> NumericOptions {
        NumericOptions::default()
    }

    #[test]
    fn hypotheses_ellipse_vs_circle() {
        let rep = check_hypotheses(&ellipse());
        assert!(rep.circular_points_ok);
        assert!(rep.fd_squarefree);
        // f₂(1, i) = 1/4 − 1 = −3/4
        assert!((rep.fd_at_circular_points[0] - C::new(-0.75, 0.0)).norm() < 1e-15);

        let rep = check_hypotheses(&unit_circle());
        assert!(!rep.circular_points_ok); // z1²+z2² vanishes at (1, ±i)

        // (z1 + i z2)² + z2: top form has a repeated factor
        let mut terms = BTreeMap::new();
        terms.insert((2, 0), qc_one());
        terms.insert((1, 1), qc_i() + qc_i());
        terms.insert((0, 2), -qc_one());
        terms.insert((0, 1), qc_one());
        let curve = AlgCurve::new(BPolyExact::new(terms), true);
        let rep = check_hypotheses(&curve);
        assert!(!rep.fd_squarefree);
    }

    #[test]
    fn circle_count_is_hypothesis_error() {
        match isotropic_points(&unit_circle(), &opts()) {
            Err(GeomError::HypothesisViolated(_)) => {}
            other => panic!("expected HypothesisViolated, got {other:?}"),
        }
    }

    #[test]
    fn ellipse_isotropic_points() {
        let count = isotropic_points(&ellipse(), &opts()).unwrap();
        assert_eq!(count.expected, 4);
        assert_eq!(count.found, 4);
        assert!(count.certified, "count not certified: {count:?}");
        // closed form: z1 = ±4/√3, z2 = ±i/√3
        let x = 4.0 / 3.0f64.sqrt();
        let y = 1.0 / 3.0f64.sqrt();
        for root in &count.points.roots {
            let (z1, z2) = root.value;
            assert!((z1.re.abs() - x).abs() < 1e-10 && z1.im.abs() < 1e-10);
            assert!((z2.im.abs() - y).abs() < 1e-10 && z2.re.abs() < 1e-10);
            assert!(root.residual < 1e-10);
        }
    }

    #[test]
    fn conic_has_no_inflections() {
        let count = inflections(&ellipse(), &opts()).unwrap();
        assert_eq!(count.expected, 0);
        assert_eq!(count.found, 0);
        assert!(count.certified);
    }

    #[test]
    fn ellipse_vertices_are_the_four_real_ones() {
        let count = vertices(&ellipse(), &opts()).unwrap();
        assert_eq!(count.expected, 4);
        assert_eq!(count.found, 4, "discards: {:?}", count.discarded);
        assert!(count.certified);
        let mut pts: Vec<(f64, f64)> = count
            .points
            .roots
            .iter()
            .map(|r| (r.value.0.re, r.value.1.re))
            .collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let expect = [(-2.0, 0.0), (0.0, -1.0), (0.0, 1.0), (2.0, 0.0)];
        for ((x, y), (ex, ey)) in pts.iter().zip(expect) {
            assert!((x - ex).abs() < 1e-8 && (y - ey).abs() < 1e-8);
        }
        for r in &count.points.roots {
            assert!(r.value.0.im.abs() < 1e-8 && r.value.1.im.abs() < 1e-8);
        }
    }

    #[test]
    fn circle_vertices_degenerate() {
        let count = vertices_relaxed(&unit_circle(), &opts()).unwrap();
        assert!(count.degenerate.is_some());
        assert!(count.degenerate.unwrap().contains("constant curvature"));
    }

    #[test]
    fn parabola_isotropic_points_match_parametric() {
        // z2 − z1² fails the reduced-top-form hypothesis (f_d = −z1²), but
        // its affine isotropic points still match the parametric route:
        // speed² zeros t = ±i/2 ↦ (±i/2, −1/4)
        let spec = GeomSpec::algebraic_curve(2, &[(0, 1, 1, 1), (2, 0, -1, 1)]);
        let curve = AlgCurve::from_spec(&spec).unwrap();
        assert!(!check_hypotheses(&curve).fd_squarefree);
        let count = isotropic_points_relaxed(&curve, &opts()).unwrap();
        assert_eq!(count.found, 2);
        assert!(!count.certified); // 2 ≠ expected 4: Bézout leaks to infinity
        for r in &count.points.roots {
            let (z1, z2) = r.value;
            assert!(z1.re.abs() < 1e-10 && (z1.im.abs() - 0.5).abs() < 1e-10);
            assert!((z2.re + 0.25).abs() < 1e-10 && z2.im.abs() < 1e-10);
        }
    }

    #[test]
    fn fermat_cubic_inflections() {
        // z1³ + z2³ − 1: formula says nine, but the Fermat cubic is not
        // generic — its Hessian is −216·z1z2z3, so three inflections sit
        // on the line at infinity and six are affine
        let spec = GeomSpec::algebraic_curve(3, &[(3, 0, 1, 1), (0, 3, 1, 1), (0, 0, -1, 1)]);
        let curve = AlgCurve::from_spec(&spec).unwrap();
        let count = inflections(&curve, &opts()).unwrap();
        assert_eq!(count.expected, 9);
        assert_eq!(count.found, 6, "discards: {:?}", count.discarded);
        assert!(!count.certified);
        // independent cross-check: κ numerator vanishes at each point
        let nf = curve.curvature_numerator().to_float();
        for r in &count.points.roots {
            let v = nf.eval(r.value.0, r.value.1).norm();
            assert!(v < 1e-6 * bpoly_scale(&nf, r.value.0, r.value.1).max(1.0));
        }
    }

    #[test]
    fn generic_cubic_inflections() {
        // a perturbed cubic with all nine inflections affine
        let spec = GeomSpec::algebraic_curve(
            3,
            &[
                (3, 0, 1, 1),
                (0, 3, 1, 1),
                (1, 0, -3, 1),
                (0, 1, 2, 1),
                (2, 1, 1, 2),
                (0, 0, 1, 1),
            ],
        );
        let curve = AlgCurve::from_spec(&spec).unwrap();
        let count = inflections(&curve, &opts()).unwrap();
        assert_eq!(count.expected, 9);
        assert_eq!(count.found, 9, "discards: {:?}", count.discarded);
        assert!(count.certified);
    }
}
