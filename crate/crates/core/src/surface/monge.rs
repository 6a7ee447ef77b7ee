//! Contact families of a surface in Monge form z₃ = f(z₁,z₂) with zero
//! 1-jet at the origin:
//!
//! * height:     H(z, v) = z₁v₁ + z₂v₂ + f(z₁,z₂)
//! * distance²:  d(z, (a,b,c)) = (z₁−a)² + (z₂−b)² + (f − (c+c₀))²
//! * projection: P(z, v) = (z₁, f(z₁+v₁z₂, z₂) − v₂z₂)
//!
//! Each evaluator produces the two-variable jet of one family member so
//! the germ classifier can sweep parameter grids.

use crate::complex::C;
use crate::error::GeomError;
use crate::expr::{lift2, parse, ExprAST};
use crate::jet::Jet2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FamilyKind {
    Height,
    DistSq,
    Projection,
}

#[derive(Debug, Clone)]
pub struct MongeFamily {
    pub which: FamilyKind,
    f: ExprAST,
    /// Base sphere-centre height c₀ for the distance-squared family.
    pub base_center_height: C,
    pub order: usize,
}

/// Build a family from the Monge graph function `f` (source text or a
/// pre-parsed expression). Fails when f has a nonzero 1-jet at the origin.
pub fn monge_family(
    f_source: &str,
    which: FamilyKind,
    base_center_height: C,
    order: usize,
) -> Result<MongeFamily, GeomError> {
    let f = parse(f_source).map_err(|e| GeomError::Degenerate(format!("parse error: {e}")))?;
    MongeFamily::new(f, which, base_center_height, order)
}

impl MongeFamily {
    pub fn new(
        f: ExprAST,
        which: FamilyKind,
        base_center_height: C,
        order: usize,
    ) -> Result<MongeFamily, GeomError> {
        let origin = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        let jf = lift2(&f, origin, 1)?;
        let scale = jf.coeff_scale().max(1.0);
        if jf.value().norm() > 1e-12 * scale
            || jf.coeff(1, 0).norm() > 1e-12 * scale
            || jf.coeff(0, 1).norm() > 1e-12 * scale
        {
            return Err(GeomError::Normalization);
        }
        Ok(MongeFamily {
            which,
            f,
            base_center_height,
            order,
        })
    }

    fn f_jet(&self) -> Result<Jet2, GeomError> {
        let origin = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        Ok(lift2(&self.f, origin, self.order)?)
    }

    /// Height member H(·, v) as a jet at the origin.
    pub fn height_jet(&self, v: (C, C)) -> Result<Jet2, GeomError> {
        let origin = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        let z1 = Jet2::variable(0, origin, self.order);
        let z2 = Jet2::variable(1, origin, self.order);
        Ok(z1.scale(v.0).add(&z2.scale(v.1)).add(&self.f_jet()?))
    }

    /// Distance-squared member for centre (a, b, c₀ + c).
    pub fn dist_sq_jet(&self, a: C, b: C, c: C) -> Result<Jet2, GeomError> {
        let origin = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        let z1 = Jet2::variable(0, origin, self.order);
        let z2 = Jet2::variable(1, origin, self.order);
        let da = z1.sub(&Jet2::constant(a, origin, self.order));
        let db = z2.sub(&Jet2::constant(b, origin, self.order));
        let dc = self
            .f_jet()?
            .sub(&Jet2::constant(c + self.base_center_height, origin, self.order));
        Ok(da.mul(&da).add(&db.mul(&db)).add(&dc.mul(&dc)))
    }

    /// Projection member (z₁, f(z₁+v₁z₂, z₂) − v₂z₂) as component jets.
    pub fn projection_jets(&self, v: (C, C)) -> Result<[Jet2; 2], GeomError> {
        let origin = (C::new(0.0, 0.0), C::new(0.0, 0.0));
        let z1 = Jet2::variable(0, origin, self.order);
        let z2 = Jet2::variable(1, origin, self.order);
        let x = Jet2::variable_delta(0, origin, self.order)
            .add(&Jet2::variable_delta(1, origin, self.order).scale(v.0));
        let y = Jet2::variable_delta(1, origin, self.order);
        let shifted = self.f_jet()?.eval_jets2(&x, &y);
        Ok([z1, shifted.sub(&z2.scale(v.1))])
    }

    /// The family member jet for classification: Height and DistSq give a
    /// scalar jet, Projection gives two components.
    pub fn member(&self, params: &[C]) -> Result<Vec<Jet2>, GeomError> {
        match self.which {
            FamilyKind::Height => {
                let v = (params[0], params[1]);
                Ok(vec![self.height_jet(v)?])
            }
            FamilyKind::DistSq => Ok(vec![self.dist_sq_jet(params[0], params[1], params[2])?]),
            FamilyKind::Projection => {
                let v = (params[0], params[1]);
                Ok(self.projection_jets(v)?.to_vec())
            }
        }
    }
}
