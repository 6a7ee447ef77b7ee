//! Differential geometry of holomorphic curves in C² / C³ and complex
//! surfaces in C³ under the holomorphic (bilinear, non-Hermitian) inner
//! product ⟨v,w⟩ = Σ vᵢwᵢ.
//!
//! The crate is organised around the objects it analyses:
//!
//! * [`complex`] — complex scalars/vectors, the holomorphic inner product,
//!   isotropy predicates and branch-tracked square roots.
//! * [`jet`] — truncated Taylor arithmetic in one and two variables; every
//!   curvature, torsion and fundamental-form computation is a jet
//!   computation.
//! * [`expr`] / [`geomspec`] — the textual definition language for curves
//!   and surfaces, plus validated analysis specs.
//! * [`polysolve`] — complex polynomial roots (Aberth–Ehrlich), exact
//!   Sylvester resultants, gcd/squarefree tests, and argument-principle
//!   certified zero finding on rectangles.
//! * [`plane_curve`], [`space_curve`], [`algebraic`], [`surface`] — the
//!   geometry proper: Frenet data, evolutes, focal sets, isotropic loci and
//!   contact classification against lines, circles, planes and spheres.

pub mod algebraic;
pub mod complex;
pub mod contact;
pub mod error;
pub mod expr;
pub mod geomspec;
pub mod jet;
pub mod options;
pub mod plane_curve;
pub mod polysolve;
pub mod space_curve;
pub mod surface;

pub use complex::{Branch, BranchedScalar, CVec2, CVec3, C};
pub use contact::{ContactClass, ContactKind};
pub use error::GeomError;
pub use geomspec::{GeomKind, GeomSpec};
pub use options::NumericOptions;
