//! Truncated Taylor (jet) arithmetic for holomorphic functions in one and
//! two complex variables.
//!
//! A [`Jet1`] stores the coefficients f⁽ᵏ⁾(t₀)/k! of a scalar function at a
//! base point; a [`Jet2`] stores ∂^{i+j}f/∂z₁ⁱ∂z₂ʲ(q)/(i!j!) for i+j ≤ K.
//! Arithmetic is exact truncation: no cross term below the carried order is
//! dropped. All curvature/torsion/fundamental-form formulas in this crate
//! are evaluated by lifting the defining expressions into this arithmetic,
//! so derivative correctness is concentrated here.

use num_complex::Complex64;
use thiserror::Error;

use crate::complex::{sqrt_branched, Branch, C};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum JetError {
    #[error("division by a series with zero constant term")]
    DivisionByZero,
    /// Square root of a series vanishing at the base point. The payload is
    /// the order of vanishing (index of the first nonzero coefficient, or
    /// the full carried order for an identically-zero series); geometry
    /// modules convert this into isotropic-point/locus results.
    #[error("square root of a series vanishing to order {order} at the base point")]
    SqrtVanishing { order: usize },
    #[error("jet evaluation domain error: {0}")]
    Eval(String),
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |a, b| a * b as f64)
}

/// One-variable jet: base point plus K+1 Taylor coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet1 {
    base: C,
    coeffs: Vec<C>,
}

impl Jet1 {
    pub fn new(base: C, coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty());
        Jet1 { base, coeffs }
    }

    pub fn constant(value: C, base: C, order: usize) -> Self {
        let mut coeffs = vec![C::new(0.0, 0.0); order + 1];
        coeffs[0] = value;
        Jet1 { base, coeffs }
    }

    /// The jet of the identity t ↦ t at `base`.
    pub fn variable(base: C, order: usize) -> Self {
        let mut coeffs = vec![C::new(0.0, 0.0); order + 1];
        coeffs[0] = base;
        if order >= 1 {
            coeffs[1] = C::new(1.0, 0.0);
        }
        Jet1 { base, coeffs }
    }

    pub fn base(&self) -> C {
        self.base
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).copied().unwrap_or(C::new(0.0, 0.0))
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    /// f(t₀).
    pub fn value(&self) -> C {
        self.coeffs[0]
    }

    /// f⁽ᵏ⁾(t₀) = k! · coeffs[k].
    pub fn deriv(&self, k: usize) -> C {
        self.coeff(k) * factorial(k)
    }

    /// Jet of f′, one order lower.
    pub fn derivative(&self) -> Jet1 {
        let n = self.order();
        let mut coeffs = Vec::with_capacity(n.max(1));
        if n == 0 {
            coeffs.push(C::new(0.0, 0.0));
        } else {
            for k in 1..=n {
                coeffs.push(self.coeffs[k] * k as f64);
            }
        }
        Jet1 {
            base: self.base,
            coeffs,
        }
    }

    pub fn truncated(&self, order: usize) -> Jet1 {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, C::new(0.0, 0.0));
        Jet1 {
            base: self.base,
            coeffs,
        }
    }

    fn zip_order(&self, other: &Jet1) -> usize {
        debug_assert!(
            (self.base - other.base).norm() == 0.0,
            "jet base mismatch"
        );
        self.order().min(other.order())
    }

    pub fn add(&self, other: &Jet1) -> Jet1 {
        let n = self.zip_order(other);
        let coeffs = (0..=n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Jet1 {
            base: self.base,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Jet1) -> Jet1 {
        let n = self.zip_order(other);
        let coeffs = (0..=n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Jet1 {
            base: self.base,
            coeffs,
        }
    }

    pub fn neg(&self) -> Jet1 {
        Jet1 {
            base: self.base,
            coeffs: self.coeffs.iter().map(|z| -z).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Jet1 {
        Jet1 {
            base: self.base,
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul(&self, other: &Jet1) -> Jet1 {
        let n = self.zip_order(other);
        let mut coeffs = vec![C::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = C::new(0.0, 0.0);
            for j in 0..=k {
                acc += self.coeff(j) * other.coeff(k - j);
            }
            coeffs[k] = acc;
        }
        Jet1 {
            base: self.base,
            coeffs,
        }
    }

    pub fn div(&self, other: &Jet1) -> Result<Jet1, JetError> {
        let n = self.zip_order(other);
        let b0 = other.coeff(0);
        if b0.norm() == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let mut q = vec![C::new(0.0, 0.0); n + 1];
        for k in 0..=n {
            let mut acc = self.coeff(k);
            for j in 0..k {
                acc -= q[j] * other.coeff(k - j);
            }
            q[k] = acc / b0;
        }
        Ok(Jet1 {
            base: self.base,
            coeffs: q,
        })
    }

    pub fn powi(&self, n: u32) -> Jet1 {
        let mut acc = Jet1::constant(C::new(1.0, 0.0), self.base, self.order());
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    /// Branch square root. Errors with the vanishing order when the
    /// constant term is zero; geometry modules read `SqrtVanishing` as an
    /// isotropy signal rather than attempting a Puiseux expansion.
    pub fn sqrt(&self, branch: Branch) -> Result<Jet1, JetError> {
        let a0 = self.coeff(0);
        if a0.norm() == 0.0 {
            let order = self
                .coeffs
                .iter()
                .position(|z| z.norm() != 0.0)
                .unwrap_or(self.coeffs.len());
            return Err(JetError::SqrtVanishing { order });
        }
        let n = self.order();
        let s0 = sqrt_branched(a0, branch).value;
        let mut s = vec![C::new(0.0, 0.0); n + 1];
        s[0] = s0;
        for k in 1..=n {
            let mut acc = self.coeff(k);
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / (s0 * 2.0);
        }
        Ok(Jet1 {
            base: self.base,
            coeffs: s,
        })
    }

    pub fn exp(&self) -> Jet1 {
        let n = self.order();
        let mut e = vec![C::new(0.0, 0.0); n + 1];
        e[0] = self.coeff(0).exp();
        for k in 1..=n {
            let mut acc = C::new(0.0, 0.0);
            for j in 1..=k {
                acc += self.coeff(j) * e[k - j] * j as f64;
            }
            e[k] = acc / k as f64;
        }
        Jet1 {
            base: self.base,
            coeffs: e,
        }
    }

    pub fn sin(&self) -> Jet1 {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet1 {
        self.sin_cos().1
    }

    /// Coupled recurrence: s′ = f′·c, c′ = −f′·s.
    pub fn sin_cos(&self) -> (Jet1, Jet1) {
        let n = self.order();
        let mut s = vec![C::new(0.0, 0.0); n + 1];
        let mut c = vec![C::new(0.0, 0.0); n + 1];
        s[0] = self.coeff(0).sin();
        c[0] = self.coeff(0).cos();
        for k in 1..=n {
            let mut sa = C::new(0.0, 0.0);
            let mut ca = C::new(0.0, 0.0);
            for j in 1..=k {
                let w = self.coeff(j) * j as f64;
                sa += w * c[k - j];
                ca += w * s[k - j];
            }
            s[k] = sa / k as f64;
            c[k] = -ca / k as f64;
        }
        (
            Jet1 {
                base: self.base,
                coeffs: s,
            },
            Jet1 {
                base: self.base,
                coeffs: c,
            },
        )
    }

    /// Composition: jet of (self ∘ inner). `self` must be expanded at
    /// `inner.value()`.
    pub fn compose(&self, inner: &Jet1) -> Jet1 {
        debug_assert!((self.base - inner.value()).norm() < 1e-9);
        let n = self.order().min(inner.order());
        // Horner on the series in (inner − inner0).
        let mut delta = inner.truncated(n);
        delta.coeffs[0] = C::new(0.0, 0.0);
        let mut acc = Jet1::constant(self.coeff(n), inner.base, n);
        for k in (0..n).rev() {
            acc = acc.mul(&delta);
            acc.coeffs[0] += self.coeff(k);
        }
        acc
    }

    /// Largest coefficient magnitude; the natural scale for vanishing tests.
    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Two-variable jet with coefficients for all (i,j), i+j ≤ K, stored
/// degree-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet2 {
    base: (C, C),
    order: usize,
    coeffs: Vec<C>,
}

fn tri_len(order: usize) -> usize {
    (order + 1) * (order + 2) / 2
}

fn tri_idx(i: usize, j: usize) -> usize {
    let d = i + j;
    d * (d + 1) / 2 + j
}

impl Jet2 {
    pub fn zero(base: (C, C), order: usize) -> Self {
        Jet2 {
            base,
            order,
            coeffs: vec![C::new(0.0, 0.0); tri_len(order)],
        }
    }

    pub fn constant(value: C, base: (C, C), order: usize) -> Self {
        let mut j = Jet2::zero(base, order);
        j.coeffs[0] = value;
        j
    }

    /// Jet of the coordinate z₁ (var = 0) or z₂ (var = 1).
    pub fn variable(var: usize, base: (C, C), order: usize) -> Self {
        let mut j = Jet2::zero(base, order);
        j.coeffs[0] = if var == 0 { base.0 } else { base.1 };
        if order >= 1 {
            let idx = if var == 0 { tri_idx(1, 0) } else { tri_idx(0, 1) };
            j.coeffs[idx] = C::new(1.0, 0.0);
        }
        j
    }

    /// Jet of the coordinate increment (z − q): zero constant term, unit
    /// linear term. The form substitutions expect.
    pub fn variable_delta(var: usize, base: (C, C), order: usize) -> Self {
        let mut j = Jet2::variable(var, base, order);
        j.coeffs[0] = C::new(0.0, 0.0);
        j
    }

    pub fn base(&self) -> (C, C) {
        self.base
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, i: usize, j: usize) -> C {
        if i + j > self.order {
            C::new(0.0, 0.0)
        } else {
            self.coeffs[tri_idx(i, j)]
        }
    }

    pub fn set_coeff(&mut self, i: usize, j: usize, v: C) {
        assert!(i + j <= self.order);
        self.coeffs[tri_idx(i, j)] = v;
    }

    pub fn value(&self) -> C {
        self.coeffs[0]
    }

    /// ∂^{i+j} f / ∂z₁ⁱ ∂z₂ʲ at the base point.
    pub fn partial(&self, i: usize, j: usize) -> C {
        self.coeff(i, j) * factorial(i) * factorial(j)
    }

    pub fn coeff_scale(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn zip_order(&self, other: &Jet2) -> usize {
        self.order.min(other.order)
    }

    pub fn truncated(&self, order: usize) -> Jet2 {
        let mut out = Jet2::zero(self.base, order);
        for d in 0..=order.min(self.order) {
            for j in 0..=d {
                out.coeffs[tri_idx(d - j, j)] = self.coeff(d - j, j);
            }
        }
        out
    }

    pub fn add(&self, other: &Jet2) -> Jet2 {
        let n = self.zip_order(other);
        let mut out = Jet2::zero(self.base, n);
        for d in 0..=n {
            for j in 0..=d {
                out.coeffs[tri_idx(d - j, j)] = self.coeff(d - j, j) + other.coeff(d - j, j);
            }
        }
        out
    }

    pub fn sub(&self, other: &Jet2) -> Jet2 {
        let n = self.zip_order(other);
        let mut out = Jet2::zero(self.base, n);
        for d in 0..=n {
            for j in 0..=d {
                out.coeffs[tri_idx(d - j, j)] = self.coeff(d - j, j) - other.coeff(d - j, j);
            }
        }
        out
    }

    pub fn neg(&self) -> Jet2 {
        Jet2 {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(|z| -z).collect(),
        }
    }

    pub fn scale(&self, s: C) -> Jet2 {
        Jet2 {
            base: self.base,
            order: self.order,
            coeffs: self.coeffs.iter().map(|z| z * s).collect(),
        }
    }

    pub fn mul(&self, other: &Jet2) -> Jet2 {
        let n = self.zip_order(other);
        let mut out = Jet2::zero(self.base, n);
        for d1 in 0..=n {
            for j1 in 0..=d1 {
                let a = self.coeff(d1 - j1, j1);
                if a.norm() == 0.0 {
                    continue;
                }
                for d2 in 0..=(n - d1) {
                    for j2 in 0..=d2 {
                        let b = other.coeff(d2 - j2, j2);
                        if b.norm() == 0.0 {
                            continue;
                        }
                        out.coeffs[tri_idx(d1 + d2 - j1 - j2, j1 + j2)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn div(&self, other: &Jet2) -> Result<Jet2, JetError> {
        let n = self.zip_order(other);
        let b0 = other.value();
        if b0.norm() == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let mut q = Jet2::zero(self.base, n);
        for d in 0..=n {
            for j in 0..=d {
                let i = d - j;
                // subtract Σ b[p,q]·quot[i−p, j−q] over (p,q) ≠ (0,0)
                let mut acc = self.coeff(i, j);
                for p in 0..=i {
                    for r in 0..=j {
                        if p == 0 && r == 0 {
                            continue;
                        }
                        let b = other.coeff(p, r);
                        if b.norm() != 0.0 {
                            acc -= b * q.coeff(i - p, j - r);
                        }
                    }
                }
                q.coeffs[tri_idx(i, j)] = acc / b0;
            }
        }
        Ok(q)
    }

    pub fn powi(&self, n: u32) -> Jet2 {
        let mut acc = Jet2::constant(C::new(1.0, 0.0), self.base, self.order);
        let mut b = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        acc
    }

    pub fn sqrt(&self, branch: Branch) -> Result<Jet2, JetError> {
        let a0 = self.value();
        if a0.norm() == 0.0 {
            let order = (0..=self.order)
                .find(|&d| (0..=d).any(|j| self.coeff(d - j, j).norm() != 0.0))
                .unwrap_or(self.order + 1);
            return Err(JetError::SqrtVanishing { order });
        }
        let n = self.order;
        let s0 = sqrt_branched(a0, branch).value;
        let mut s = Jet2::zero(self.base, n);
        s.coeffs[0] = s0;
        for d in 1..=n {
            for j in 0..=d {
                let i = d - j;
                let mut acc = self.coeff(i, j);
                for p in 0..=i {
                    for r in 0..=j {
                        if (p == 0 && r == 0) || (p == i && r == j) {
                            continue;
                        }
                        acc -= s.coeff(p, r) * s.coeff(i - p, j - r);
                    }
                }
                s.coeffs[tri_idx(i, j)] = acc / (s0 * 2.0);
            }
        }
        Ok(s)
    }

    /// Nilpotent part (constant term removed).
    fn delta(&self) -> Jet2 {
        let mut d = self.clone();
        d.coeffs[0] = C::new(0.0, 0.0);
        d
    }

    /// Apply a univariate Maclaurin series to the nilpotent part of `self`
    /// and combine with the constant term already folded into `series`.
    fn apply_series(&self, series: &[C]) -> Jet2 {
        let g = self.delta();
        let mut acc = Jet2::constant(series[self.order_min(series.len() - 1)], self.base, self.order);
        for k in (0..self.order_min(series.len() - 1)).rev() {
            acc = acc.mul(&g);
            acc.coeffs[0] += series[k];
        }
        acc
    }

    fn order_min(&self, other: usize) -> usize {
        self.order.min(other)
    }

    pub fn exp(&self) -> Jet2 {
        let e0 = self.value().exp();
        let series: Vec<C> = (0..=self.order)
            .map(|k| e0 / factorial(k))
            .collect();
        self.apply_series(&series)
    }

    pub fn sin(&self) -> Jet2 {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Jet2 {
        self.sin_cos().1
    }

    pub fn sin_cos(&self) -> (Jet2, Jet2) {
        let (s0, c0) = (self.value().sin(), self.value().cos());
        // sin(a0+g) = sin a0 cos g + cos a0 sin g, and likewise for cos.
        let sin_series: Vec<C> = (0..=self.order)
            .map(|k| {
                let cycle = [s0, c0, -s0, -c0][k % 4];
                cycle / factorial(k)
            })
            .collect();
        let cos_series: Vec<C> = (0..=self.order)
            .map(|k| {
                let cycle = [c0, -s0, -c0, s0][k % 4];
                cycle / factorial(k)
            })
            .collect();
        (self.apply_series(&sin_series), self.apply_series(&cos_series))
    }

    /// Jet of ∂f/∂z₁, one order lower.
    pub fn d1(&self) -> Jet2 {
        let n = self.order.saturating_sub(1);
        let mut out = Jet2::zero(self.base, n);
        for d in 0..=n {
            for j in 0..=d {
                let i = d - j;
                out.coeffs[tri_idx(i, j)] = self.coeff(i + 1, j) * (i + 1) as f64;
            }
        }
        out
    }

    /// Jet of ∂f/∂z₂, one order lower.
    pub fn d2(&self) -> Jet2 {
        let n = self.order.saturating_sub(1);
        let mut out = Jet2::zero(self.base, n);
        for d in 0..=n {
            for j in 0..=d {
                let i = d - j;
                out.coeffs[tri_idx(i, j)] = self.coeff(i, j + 1) * (j + 1) as f64;
            }
        }
        out
    }

    /// Substitute one-variable jets for the coordinate increments. Both
    /// arguments must have zero constant term (the substitution keeps the
    /// base point) — used for restricting a surface quantity to a curve.
    pub fn eval_jets1(&self, x: &Jet1, y: &Jet1) -> Jet1 {
        assert!(x.value().norm() == 0.0 && y.value().norm() == 0.0);
        let n = x.order().min(y.order());
        let one = Jet1::constant(C::new(1.0, 0.0), x.base(), n);
        // powers up to carried order
        let mut xp = vec![one.clone()];
        let mut yp = vec![one];
        for k in 1..=self.order {
            xp.push(xp[k - 1].mul(x));
            yp.push(yp[k - 1].mul(y));
        }
        let mut acc = Jet1::constant(C::new(0.0, 0.0), x.base(), n);
        for d in 0..=self.order {
            for j in 0..=d {
                let cij = self.coeff(d - j, j);
                if cij.norm() != 0.0 {
                    acc = acc.add(&xp[d - j].mul(&yp[j]).scale(cij));
                }
            }
        }
        acc
    }

    /// Substitute two-variable jets with zero constant term for the
    /// coordinate increments — linear (or higher) coordinate changes for
    /// germ reduction.
    pub fn eval_jets2(&self, x: &Jet2, y: &Jet2) -> Jet2 {
        assert!(x.value().norm() == 0.0 && y.value().norm() == 0.0);
        let n = x.order.min(y.order);
        let one = Jet2::constant(C::new(1.0, 0.0), x.base, n);
        let mut xp = vec![one.clone()];
        let mut yp = vec![one];
        for k in 1..=self.order {
            xp.push(xp[k - 1].mul(x));
            yp.push(yp[k - 1].mul(y));
        }
        let mut acc = Jet2::zero(x.base, n);
        for d in 0..=self.order {
            for j in 0..=d {
                let cij = self.coeff(d - j, j);
                if cij.norm() != 0.0 {
                    acc = acc.add(&xp[d - j].mul(&yp[j]).scale(cij));
                }
            }
        }
        acc
    }
}

/// Inner product of component jets (no conjugation).
pub fn inner_jets1(u: &[Jet1], v: &[Jet1]) -> Jet1 {
    assert_eq!(u.len(), v.len());
    let mut acc = u[0].mul(&v[0]);
    for k in 1..u.len() {
        acc = acc.add(&u[k].mul(&v[k]));
    }
    acc
}

pub fn inner_jets2(u: &[Jet2], v: &[Jet2]) -> Jet2 {
    assert_eq!(u.len(), v.len());
    let mut acc = u[0].mul(&v[0]);
    for k in 1..u.len() {
        acc = acc.add(&u[k].mul(&v[k]));
    }
    acc
}

/// Componentwise cross product of jet 3-vectors.
pub fn cross_jets1(u: &[Jet1; 3], v: &[Jet1; 3]) -> [Jet1; 3] {
    [
        u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
        u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
        u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
    ]
}

pub fn cross_jets2(u: &[Jet2; 3], v: &[Jet2; 3]) -> [Jet2; 3] {
    [
        u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
        u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
        u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
    ]
}

#[allow(unused)]
fn _complex64_is_c(x: Complex64) -> C {
    x
}
