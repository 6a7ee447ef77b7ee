//! Complex scalars and 2/3-vectors under the holomorphic inner product
//! ⟨v,w⟩ = Σ vᵢwᵢ (bilinear, symmetric, no conjugation), together with the
//! two-branch square root machinery.
//!
//! The inner product is non-degenerate but indefinite: nonzero vectors with
//! ⟨v,v⟩ = 0 exist (isotropic vectors). Lengths are therefore bi-valued —
//! they depend on a square-root branch — and every geometric quantity built
//! here carries its branch so downstream code can verify branch invariance.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The ambient complex scalar. Stored values are required to be finite.
pub type C = Complex64;

/// Shorthand constructor.
#[inline]
pub fn c(re: f64, im: f64) -> C {
    C::new(re, im)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("non-finite component")]
    NonFinite,
}

/// Choice of argument interval for the square root.
///
/// `Principal` reads the argument in (−π, π], `Other` in [0, 2π). The two
/// values coincide when the argument lies in (0, π) and differ by sign when
/// it lies in (−π, 0); on the cuts (nonnegative and nonpositive reals) the
/// half-open interval definitions apply literally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Branch {
    Principal,
    Other,
}

impl Branch {
    pub fn other(self) -> Branch {
        match self {
            Branch::Principal => Branch::Other,
            Branch::Other => Branch::Principal,
        }
    }

    /// Sign relating this branch's square root to the other branch's for a
    /// radicand with the given argument (principal convention): +1 where
    /// the two branches coincide (arg ∈ [0, π], including both cut rays
    /// under their half-open conventions), −1 where they negate each other
    /// (arg ∈ (−π, 0)).
    pub fn swap_sign(radicand: C) -> f64 {
        if radicand.im == 0.0 || radicand.arg() > 0.0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// A square-root value tagged with the branch that produced it and the
/// angular distance of the radicand's argument from that branch's cut.
///
/// `cut_margin` is in radians; 0 means the radicand sat exactly on the cut
/// (branch-ambiguous geometry downstream). `degenerate` marks a zero
/// radicand, which callers treat as an isotropy signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchedScalar {
    pub value: C,
    pub branch: Branch,
    pub cut_margin: f64,
    pub degenerate: bool,
}

impl BranchedScalar {
    pub fn negated(self) -> Self {
        Self {
            value: -self.value,
            ..self
        }
    }
}

/// Square root of `z` on the requested branch.
///
/// Principal: arg ∈ (−π, π]; other: arg ∈ [0, 2π). `z = 0` yields value 0
/// with `cut_margin` 0 and the degenerate flag set.
pub fn sqrt_branched(z: C, branch: Branch) -> BranchedScalar {
    if z == C::new(0.0, 0.0) {
        return BranchedScalar {
            value: C::new(0.0, 0.0),
            branch,
            cut_margin: 0.0,
            degenerate: true,
        };
    }
    let r = z.norm().sqrt();
    let arg_p = z.arg(); // (−π, π]
    let (half_arg, margin) = match branch {
        Branch::Principal => (arg_p / 2.0, PI - arg_p.abs()),
        Branch::Other => {
            let a = if arg_p < 0.0 { arg_p + 2.0 * PI } else { arg_p };
            (a / 2.0, a.min(2.0 * PI - a))
        }
    };
    BranchedScalar {
        value: C::from_polar(r, half_arg),
        branch,
        cut_margin: margin,
        degenerate: false,
    }
}

/// A vector in C² carrying the holomorphic inner product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVec2(pub [C; 2]);

/// A vector in C³ carrying the holomorphic inner product and cross product.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CVec3(pub [C; 3]);

impl CVec2 {
    pub fn new(x: C, y: C) -> Self {
        CVec2([x, y])
    }

    /// ⟨u,v⟩ = u₁v₁ + u₂v₂, no conjugation.
    pub fn inner(&self, other: &CVec2) -> C {
        self.0[0] * other.0[0] + self.0[1] * other.0[1]
    }

    /// Holomorphic square length ⟨v,v⟩.
    pub fn norm2(&self) -> C {
        self.inner(self)
    }

    /// Hermitian square norm Σ|vᵢ|², used only for scale estimates.
    pub fn herm_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn herm_norm(&self) -> f64 {
        self.herm_norm_sq().sqrt()
    }

    /// Scale-free isotropy test: |⟨v,v⟩| ≤ tol · max(1, ‖v‖²_H).
    pub fn is_isotropic(&self, tol: f64) -> bool {
        self.norm2().norm() <= tol * self.herm_norm_sq().max(1.0)
    }

    pub fn scale(&self, s: C) -> CVec2 {
        CVec2([self.0[0] * s, self.0[1] * s])
    }

    pub fn add(&self, other: &CVec2) -> CVec2 {
        CVec2([self.0[0] + other.0[0], self.0[1] + other.0[1]])
    }

    pub fn sub(&self, other: &CVec2) -> CVec2 {
        CVec2([self.0[0] - other.0[0], self.0[1] - other.0[1]])
    }

    /// 2×2 determinant det(u, v); |det| is the parallelism defect used for
    /// tangency checks at isotropic points.
    pub fn det_with(&self, other: &CVec2) -> C {
        self.0[0] * other.0[1] - self.0[1] * other.0[0]
    }
}

impl CVec3 {
    pub fn new(x: C, y: C, z: C) -> Self {
        CVec3([x, y, z])
    }

    pub fn inner(&self, other: &CVec3) -> C {
        self.0[0] * other.0[0] + self.0[1] * other.0[1] + self.0[2] * other.0[2]
    }

    pub fn norm2(&self) -> C {
        self.inner(self)
    }

    pub fn herm_norm_sq(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn herm_norm(&self) -> f64 {
        self.herm_norm_sq().sqrt()
    }

    pub fn is_isotropic(&self, tol: f64) -> bool {
        self.norm2().norm() <= tol * self.herm_norm_sq().max(1.0)
    }

    pub fn scale(&self, s: C) -> CVec3 {
        CVec3([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }

    pub fn add(&self, other: &CVec3) -> CVec3 {
        CVec3([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    pub fn sub(&self, other: &CVec3) -> CVec3 {
        CVec3([
            self.0[0] - other.0[0],
            self.0[1] - other.0[1],
            self.0[2] - other.0[2],
        ])
    }

    /// Determinant-expansion cross product; orthogonal (holomorphically) to
    /// both factors and satisfying the Lagrange identity
    /// ⟨u×v,u×v⟩ = ⟨u,u⟩⟨v,v⟩ − ⟨u,v⟩².
    pub fn cross(&self, other: &CVec3) -> CVec3 {
        let u = &self.0;
        let v = &other.0;
        CVec3([
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        ])
    }
}

/// Length-checked inner product over raw component slices. The typed
/// wrappers above are preferred; this is the entry point for data coming
/// from parsed specs where the component count is dynamic.
pub fn inner_slices(u: &[C], v: &[C]) -> Result<C, ComplexError> {
    if u.len() != v.len() {
        return Err(ComplexError::Dimension {
            expected: u.len(),
            got: v.len(),
        });
    }
    Ok(u.iter().zip(v).map(|(a, b)| a * b).sum())
}

/// Length-checked cross product over raw component slices.
pub fn cross_slices(u: &[C], v: &[C]) -> Result<CVec3, ComplexError> {
    if u.len() != 3 {
        return Err(ComplexError::Dimension {
            expected: 3,
            got: u.len(),
        });
    }
    if v.len() != 3 {
        return Err(ComplexError::Dimension {
            expected: 3,
            got: v.len(),
        });
    }
    Ok(CVec3([u[0], u[1], u[2]]).cross(&CVec3([v[0], v[1], v[2]])))
}
