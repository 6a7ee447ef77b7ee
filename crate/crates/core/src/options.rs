use serde::{Deserialize, Serialize};

use crate::complex::Branch;

/// Tolerances and discretisation knobs shared by every analysis.
///
/// All detection predicates are scale-aware: a quantity "vanishes" when it
/// is below `tol_rel` (or `tol_iso` for isotropy tests) times the natural
/// scale of the surrounding computation, never in absolute terms alone.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericOptions {
    /// Square-root branch used for frames, curvature and Gauss maps.
    pub branch: Branch,
    /// Isotropy threshold: |⟨v,v⟩| ≤ tol_iso · max(1, ‖v‖²_H).
    pub tol_iso: f64,
    /// Relative threshold for the derivative-vanishing ladder.
    pub tol_rel: f64,
    /// Residual tolerance for polynomial/analytic root acceptance.
    pub root_tol: f64,
    /// Taylor order for one-variable (curve) jets.
    pub jet_order_curve: usize,
    /// Taylor order for two-variable (surface) jets.
    pub jet_order_surface: usize,
    /// Seed-grid resolution per axis for `zeros_in_box`.
    pub zero_grid: usize,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self {
            branch: Branch::Principal,
            tol_iso: 1e-10,
            tol_rel: 1e-8,
            root_tol: 1e-10,
            jet_order_curve: 6,
            jet_order_surface: 5,
            zero_grid: 12,
        }
    }
}

impl NumericOptions {
    /// Same options with the square-root branch swapped. Geometric outputs
    /// must not change under this swap; frames and odd-order scalars pick
    /// up the sign of the branch relation.
    pub fn swapped(&self) -> Self {
        Self {
            branch: self.branch.other(),
            ..*self
        }
    }
}
