//! Numerical and exact polynomial machinery: univariate complex roots
//! (Aberth–Ehrlich with Newton polish and cluster merging), Sylvester
//! resultants, gcd/squarefreeness, and certified zero-finding for
//! holomorphic functions on rectangles.

pub mod contour;
pub mod exact;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::complex::C;

pub use contour::{zeros_in_box, AnalyticFn, ZeroBoxError};
pub use exact::{resultant_exact, BPolyExact, ResultantError, UPolyExact, QC};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("root finding requires degree ≥ 1")]
    DegreeTooLow,
    #[error("root iteration did not converge within the iteration budget")]
    NonConvergence,
}

/// Dense univariate polynomial over C, low degree first, trailing zeros
/// trimmed so the leading coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct CPoly {
    pub coeffs: Vec<C>,
}

impl CPoly {
    pub fn new(mut coeffs: Vec<C>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map(|c| c.norm() == 0.0).unwrap_or(false) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(C::new(0.0, 0.0));
        }
        CPoly { coeffs }
    }

    pub fn from_roots(roots: &[C]) -> Self {
        let mut coeffs = vec![C::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![C::new(0.0, 0.0); coeffs.len() + 1];
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        CPoly::new(coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, x: C) -> C {
        let mut acc = C::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Horner evaluation of p and p′ in one pass.
    pub fn eval_with_deriv(&self, x: C) -> (C, C) {
        let mut p = C::new(0.0, 0.0);
        let mut dp = C::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            dp = dp * x + p;
            p = p * x + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> CPoly {
        if self.coeffs.len() <= 1 {
            return CPoly::new(vec![C::new(0.0, 0.0)]);
        }
        CPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * k as f64)
                .collect(),
        )
    }

    /// Backward-error scale Σ|aᵢ|·max(1,|x|)ⁱ at a point; |p(x)| below
    /// `tol · scale(x)` means x is a root to working precision. The clamp
    /// keeps the scale meaningful for roots near the origin when low-order
    /// coefficients vanish.
    pub fn residual_scale(&self, x: C) -> f64 {
        let ax = x.norm().max(1.0);
        let mut pow = 1.0;
        let mut acc = 0.0;
        for c in &self.coeffs {
            acc += c.norm() * pow;
            pow *= ax;
        }
        acc.max(f64::MIN_POSITIVE)
    }
}

/// One located root with its clustering multiplicity and relative residual.
#[derive(Debug, Clone, Serialize)]
pub struct Root<T> {
    pub value: T,
    pub multiplicity: usize,
    pub residual: f64,
}

/// Roots with an optional certification: `certified_count` is set when an
/// independent count (degree, or an argument-principle contour integral)
/// matched the multiset size with multiplicity.
#[derive(Debug, Clone, Serialize)]
pub struct RootSet<T> {
    pub roots: Vec<Root<T>>,
    pub certified_count: Option<usize>,
}

impl<T> RootSet<T> {
    pub fn total_multiplicity(&self) -> usize {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }

    pub fn is_certified(&self) -> bool {
        self.certified_count == Some(self.total_multiplicity())
    }
}

const ABERTH_MAX_ITER: usize = 200;

/// All roots of `p` by simultaneous Aberth–Ehrlich iteration, polished by
/// Newton, with nearby roots merged into multiple roots
/// (cluster radius 1e−7 · scale).
pub fn roots(p: &CPoly, tol: f64) -> Result<RootSet<C>, PolyError> {
    if p.degree() < 1 || p.is_zero() {
        return Err(PolyError::DegreeTooLow);
    }
    let n = p.degree();
    let lead = *p.coeffs.last().unwrap();

    // Cauchy-style inclusion radius (restart bound for runaway iterates)
    let radius = 1.0
        + p.coeffs[..n]
            .iter()
            .map(|c| (c / lead).norm())
            .fold(0.0, f64::max);

    let mut z = initial_guesses(p);

    let mut converged = false;
    for round in 0..ABERTH_MAX_ITER {
        let mut max_step = 0.0f64;
        let mut next = z.clone();
        for i in 0..n {
            let (pv, dv) = p.eval_with_deriv(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let newton = if dv.norm() > 0.0 {
                pv / dv
            } else {
                // flat spot: nudge instead of dividing by zero
                C::new(1e-8, 1e-8)
            };
            let mut defl = C::new(0.0, 0.0);
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if d.norm() > 1e-300 {
                        defl += C::new(1.0, 0.0) / d;
                    }
                }
            }
            let denom = C::new(1.0, 0.0) - newton * defl;
            let step = if denom.norm() > 1e-300 {
                newton / denom
            } else {
                newton
            };
            let candidate = z[i] - step;
            if !(candidate.re.is_finite() && candidate.im.is_finite()) {
                // overflow along the way; restart this iterate inside the
                // inclusion circle at a fresh angle
                next[i] = C::from_polar(radius * 0.5, 2.4 * (i + round) as f64);
                max_step = 1.0;
                continue;
            }
            next[i] = candidate;
            max_step = max_step.max(step.norm() / (1.0 + z[i].norm()));
        }
        z = next;
        if max_step < 1e-14 {
            converged = true;
            break;
        }
    }

    // Newton polish (simple roots converge to machine precision; clusters
    // are handled by the merge below)
    for zi in z.iter_mut() {
        for _ in 0..8 {
            let (pv, dv) = p.eval_with_deriv(*zi);
            if dv.norm() == 0.0 {
                break;
            }
            let step = pv / dv;
            let candidate = *zi - step;
            if !(candidate.re.is_finite() && candidate.im.is_finite()) {
                break;
            }
            *zi = candidate;
            if step.norm() <= 1e-15 * (1.0 + zi.norm()) {
                break;
            }
        }
    }
    z.retain(|zi| zi.re.is_finite() && zi.im.is_finite());
    if z.is_empty() {
        return Err(PolyError::NonConvergence);
    }

    let scale = z.iter().map(|r| r.norm()).fold(1.0, f64::max);
    let clusters = cluster(&z, 1e-7 * scale);

    let mut out = Vec::new();
    let mut all_good = true;
    for (center, mult) in clusters {
        let residual = p.eval(center).norm() / p.residual_scale(center);
        if residual > tol {
            all_good = false;
        }
        out.push(Root {
            value: center,
            multiplicity: mult,
            residual,
        });
    }
    out.sort_by(|a, b| {
        (a.value.re, a.value.im)
            .partial_cmp(&(b.value.re, b.value.im))
            .unwrap_or(std::cmp::Ordering::Equal)
    });

    let total: usize = out.iter().map(|r| r.multiplicity).sum();
    let certified = converged && all_good && total == n;
    Ok(RootSet {
        roots: out,
        certified_count: if certified { Some(n) } else { None },
    })
}

/// Newton-polygon initial guesses: circles whose radii come from the
/// slopes of the upper convex hull of (i, log|cᵢ|). Unlike a single
/// inclusion circle, this keeps the iteration stable when root magnitudes
/// span many orders.
fn initial_guesses(p: &CPoly) -> Vec<C> {
    let n = p.degree();
    let pts: Vec<(usize, f64)> = p
        .coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| c.norm() > 0.0)
        .map(|(i, c)| (i, c.norm().ln()))
        .collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for &(i, y) in &pts {
        while hull.len() >= 2 {
            let (x1, y1) = hull[hull.len() - 2];
            let (x2, y2) = hull[hull.len() - 1];
            // keep only points strictly above the chord (upper hull)
            let cross = (x2 - x1) as f64 * (y - y1) - (i - x1) as f64 * (y2 - y1);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((i, y));
    }
    let mut guesses = Vec::with_capacity(n);
    // exact zero roots when the low-order coefficients vanish
    for _ in 0..pts[0].0 {
        guesses.push(C::new(0.0, 0.0));
    }
    let mut angle_seed = 0.37;
    for w in hull.windows(2) {
        let (i1, y1) = w[0];
        let (i2, y2) = w[1];
        let k = i2 - i1;
        let r = ((y1 - y2) / k as f64).exp().clamp(1e-150, 1e150);
        for j in 0..k {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / k as f64 + angle_seed;
            guesses.push(C::from_polar(r, theta));
        }
        angle_seed += 0.91;
    }
    debug_assert_eq!(guesses.len(), n);
    guesses
}

/// Greedy merge of points within `radius`; returns (centroid, count).
pub(crate) fn cluster(points: &[C], radius: f64) -> Vec<(C, usize)> {
    let mut used = vec![false; points.len()];
    let mut out = Vec::new();
    for i in 0..points.len() {
        if used[i] {
            continue;
        }
        let mut members = vec![points[i]];
        used[i] = true;
        // grow the cluster until stable
        loop {
            let centroid = members.iter().sum::<C>() / members.len() as f64;
            let mut grew = false;
            for (j, pt) in points.iter().enumerate() {
                if !used[j] && (pt - centroid).norm() <= radius {
                    members.push(*pt);
                    used[j] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        let centroid = members.iter().sum::<C>() / members.len() as f64;
        out.push((centroid, members.len()));
    }
    out
}

/// Floating bivariate polynomial (sparse), the inexact sibling of
/// [`exact::BPolyExact`].
#[derive(Debug, Clone, PartialEq)]
pub struct BPolyF {
    pub terms: BTreeMap<(usize, usize), C>,
}

impl BPolyF {
    pub fn new(terms: BTreeMap<(usize, usize), C>) -> Self {
        BPolyF {
            terms: terms.into_iter().filter(|(_, c)| c.norm() != 0.0).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn eval(&self, z1: C, z2: C) -> C {
        self.terms
            .iter()
            .map(|((i, j), c)| c * z1.powu(*i as u32) * z2.powu(*j as u32))
            .sum()
    }

    /// Fix the eliminated variable to `value` and return the univariate
    /// polynomial in the kept variable.
    pub fn restrict(&self, eliminate: usize, value: C) -> CPoly {
        let deg_kept = self
            .terms
            .keys()
            .map(|&(i, j)| if eliminate == 0 { j } else { i })
            .max()
            .unwrap_or(0);
        let mut coeffs = vec![C::new(0.0, 0.0); deg_kept + 1];
        for ((i, j), c) in &self.terms {
            let (elim_deg, kept_deg) = if eliminate == 0 { (*i, *j) } else { (*j, *i) };
            coeffs[kept_deg] += c * value.powu(elim_deg as u32);
        }
        CPoly::new(coeffs)
    }
}

/// Floating Sylvester resultant by evaluation–interpolation: the Sylvester
/// determinant is evaluated at scaled roots of unity in the kept variable
/// and the coefficients recovered by an inverse DFT.
pub fn resultant_float(f: &BPolyF, g: &BPolyF, eliminate: usize) -> Result<CPoly, ResultantError> {
    if f.is_zero() || g.is_zero() {
        return Err(ResultantError::ZeroInput);
    }
    let bound = f.total_degree() * g.total_degree() + 1;
    let n = bound.next_power_of_two().max(2);
    let r = 1.17; // sample radius away from likely symmetry points
    let mut values = Vec::with_capacity(n);
    for m in 0..n {
        let theta = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
        let x = C::from_polar(r, theta);
        values.push(sylvester_det_at(f, g, eliminate, x));
    }
    // inverse DFT, then undo the radius scaling
    let mut coeffs = Vec::with_capacity(n);
    for k in 0..n {
        let mut acc = C::new(0.0, 0.0);
        for (m, v) in values.iter().enumerate() {
            let theta = -2.0 * std::f64::consts::PI * (k * m % n) as f64 / n as f64;
            acc += v * C::from_polar(1.0, theta);
        }
        coeffs.push(acc / n as f64 / r.powi(k as i32));
    }
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if scale == 0.0 || scale < 1e-250 {
        return Err(ResultantError::CommonComponent);
    }
    for c in coeffs.iter_mut() {
        if c.norm() < 1e-11 * scale {
            *c = C::new(0.0, 0.0);
        }
    }
    let p = CPoly::new(coeffs);
    if p.is_zero() {
        return Err(ResultantError::CommonComponent);
    }
    Ok(p)
}

fn sylvester_det_at(f: &BPolyF, g: &BPolyF, eliminate: usize, x: C) -> C {
    // coefficients of the eliminated variable, evaluated at the kept value
    let collect = |p: &BPolyF| -> Vec<C> {
        let deg = p
            .terms
            .keys()
            .map(|&(i, j)| if eliminate == 0 { i } else { j })
            .max()
            .unwrap_or(0);
        let mut out = vec![C::new(0.0, 0.0); deg + 1];
        for ((i, j), c) in &p.terms {
            let (elim_deg, kept_deg) = if eliminate == 0 { (*i, *j) } else { (*j, *i) };
            out[elim_deg] += c * x.powu(kept_deg as u32);
        }
        out
    };
    let fc = collect(f);
    let gc = collect(g);
    let m = fc.len() - 1;
    let n = gc.len() - 1;
    if m + n == 0 {
        return C::new(1.0, 0.0);
    }
    let size = m + n;
    let mut mat = vec![vec![C::new(0.0, 0.0); size]; size];
    for row in 0..n {
        for (k, c) in fc.iter().enumerate() {
            mat[row][row + (m - k)] = *c;
        }
    }
    for row in 0..m {
        for (k, c) in gc.iter().enumerate() {
            mat[n + row][row + (n - k)] = *c;
        }
    }
    lu_det(mat)
}

fn lu_det(mut m: Vec<Vec<C>>) -> C {
    let n = m.len();
    let mut det = C::new(1.0, 0.0);
    for k in 0..n {
        let (pivot, mag) = (k..n)
            .map(|i| (i, m[i][k].norm()))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        if mag == 0.0 {
            return C::new(0.0, 0.0);
        }
        if pivot != k {
            m.swap(pivot, k);
            det = -det;
        }
        det *= m[k][k];
        for i in k + 1..n {
            let factor = m[i][k] / m[k][k];
            for j in k..n {
                let sub = factor * m[k][j];
                m[i][j] -= sub;
            }
        }
    }
    det
}
