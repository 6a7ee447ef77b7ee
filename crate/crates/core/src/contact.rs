//! One-variable contact classification: the derivative-vanishing ladder.
//!
//! A contact function (height, distance squared, projection coordinate) has
//! an A_k singularity at t₀ when its derivatives of order 1..k vanish there
//! and the (k+1)-th does not; A_k contact means (k+1)-point contact with
//! the model object. The ladder decides "vanishes" with a scale-aware
//! relative tolerance: |f⁽ᵏ⁾| ≤ tol_rel · max over tested orders of |f⁽ʲ⁾|.

use serde::Serialize;

use crate::complex::C;
use crate::jet::Jet1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum ContactKind {
    /// First derivative does not vanish: no singular contact.
    Nonsingular,
    /// Derivatives 1..k vanish, k+1 does not.
    A(usize),
    /// Every tested derivative vanished (order exceeds jet depth) or the
    /// input was unusable; carries the reason.
    Degenerate(String),
}

impl ContactKind {
    pub fn at_least(&self, k: usize) -> bool {
        match self {
            ContactKind::A(j) => *j >= k,
            ContactKind::Degenerate(_) => true,
            ContactKind::Nonsingular => false,
        }
    }
}

/// Contact class with the evidence that produced it: the |f⁽ᵏ⁾| ladder and
/// whether the verdict survived recomputation under the swapped branch.
#[derive(Debug, Clone, Serialize)]
pub struct ContactClass {
    pub kind: ContactKind,
    pub residuals: Vec<f64>,
    pub branch_invariant: bool,
}

/// Classify from the derivative magnitudes |f′|, |f″|, ... (index 0 is the
/// first derivative). `scale_hint` feeds the magnitude of the function
/// itself into the vanishing scale, so a jet whose every derivative is
/// small relative to its value reads as ladder exhaustion, not as a
/// rescaled regular point.
pub fn classify_ladder(deriv_mags: &[f64], scale_hint: f64, tol_rel: f64) -> ContactKind {
    let scale = deriv_mags.iter().copied().fold(scale_hint, f64::max);
    if scale == 0.0 {
        return ContactKind::Degenerate("all derivatives vanish identically".to_string());
    }
    let vanish = |m: f64| m <= tol_rel * scale;
    if !vanish(deriv_mags[0]) {
        return ContactKind::Nonsingular;
    }
    for (idx, &m) in deriv_mags.iter().enumerate().skip(1) {
        if !vanish(m) {
            return ContactKind::A(idx); // derivatives 1..idx vanished
        }
    }
    ContactKind::Degenerate("order exceeds jet depth".to_string())
}

/// Ladder straight from a contact-function jet.
pub fn classify_jet(jet: &Jet1, tol_rel: f64) -> (ContactKind, Vec<f64>) {
    let mags: Vec<f64> = (1..=jet.order()).map(|k| jet.deriv(k).norm()).collect();
    (classify_ladder(&mags, jet.coeff_scale(), tol_rel), mags)
}

/// One geometric predicate from a contact theorem, evaluated alongside the
/// derivative ladder so the two routes can be compared.
#[derive(Debug, Clone, Serialize)]
pub struct GeometricCheck {
    pub name: &'static str,
    pub predicate_holds: bool,
    pub ladder_agrees: bool,
    pub margin: f64,
}

/// Relative parallelism defect of two complex 2-vectors: 0 when parallel.
pub fn parallel_defect2(u: [C; 2], v: [C; 2]) -> f64 {
    let det = u[0] * v[1] - u[1] * v[0];
    let nu = (u[0].norm_sqr() + u[1].norm_sqr()).sqrt();
    let nv = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if nu == 0.0 || nv == 0.0 {
        return 0.0;
    }
    det.norm() / (nu * nv)
}
