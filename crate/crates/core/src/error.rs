use thiserror::Error;

use crate::complex::C;
use crate::expr::EvalError;
use crate::jet::JetError;

/// Failure modes of the geometry analyses. Isotropy-related variants are
/// results in their own right (the caller decides whether an isotropic
/// point is the feature being looked for), the remainder are genuine
/// errors.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("spec kind does not match this analysis (expected {expected})")]
    WrongKind { expected: &'static str },
    #[error("curve is not regular at t = {t}: γ′(t) = 0")]
    NonRegular { t: C },
    #[error("point t = {t} is isotropic (⟨γ′,γ′⟩ = 0); frame data withheld")]
    IsotropicPoint { t: C },
    #[error("curve lies in an isotropic line: ⟨γ′,γ′⟩ ≡ 0 near t = {t}")]
    FullyIsotropic { t: C },
    #[error("degenerate isotropic point at t = {t}: z₁′z₂″ − z₂′z₁″ = 0, no ordinary tangent-line contact")]
    DegenerateIsotropic { t: C },
    #[error("zero curvature at t = {t}: γ′×γ″ = 0")]
    ZeroCurvature { t: C },
    #[error("osculating plane is isotropic at t = {t}")]
    IsotropicOsculatingPlane { t: C },
    #[error("surface point q = ({q0}, {q1}) lies on the isotropic locus (EG−F² = 0)")]
    OnIsotropicLocus { q0: C, q1: C },
    #[error("surface is fully isotropic: EG−F² ≡ 0 near ({q0}, {q1})")]
    FullyIsotropicSurface { q0: C, q1: C },
    #[error("umbilic point at q = ({q0}, {q1}): focal sheets meet")]
    Umbilic { q0: C, q1: C },
    #[error("unit-speed chart failure: {reason} (blocking region: {region})")]
    ChartFailure { reason: String, region: String },
    #[error("projection direction is isotropic: ⟨v,v⟩ = 0")]
    IsotropicDirection,
    #[error("family member has nonzero 1-jet at the base point")]
    Normalization,
    #[error("algebraic-count hypotheses violated: {0}")]
    HypothesisViolated(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Jet(#[from] JetError),
}
