//! Exact rational-complex polynomial arithmetic: univariate and bivariate
//! polynomials over Q(i), Euclidean gcd / squarefreeness, and fraction-free
//! (Bareiss) Sylvester resultants.
//!
//! Exactness is not a luxury here: hypothesis checks (reducedness of the
//! top form, circular points at infinity) are yes/no questions that a
//! floating tolerance cannot answer.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::complex::C;

pub type Q = BigRational;
/// Exact complex scalar: a pair of arbitrary-precision rationals.
pub type QC = Complex<BigRational>;

pub fn qc_zero() -> QC {
    QC::new(Q::zero(), Q::zero())
}

pub fn qc_one() -> QC {
    QC::new(Q::one(), Q::zero())
}

pub fn qc_i() -> QC {
    QC::new(Q::zero(), Q::one())
}

pub fn qc_from_int(n: i64) -> QC {
    QC::new(Q::from_integer(BigInt::from(n)), Q::zero())
}

/// Exact conversion: every finite double is a rational.
pub fn qc_from_c(z: C) -> QC {
    QC::new(
        Q::from_float(z.re).unwrap_or_else(Q::zero),
        Q::from_float(z.im).unwrap_or_else(Q::zero),
    )
}

pub fn qc_to_c(z: &QC) -> C {
    C::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn qc_is_zero(z: &QC) -> bool {
    z.re.is_zero() && z.im.is_zero()
}

/// Univariate polynomial over Q(i), dense, low degree first, normalized so
/// the leading coefficient is nonzero (empty = zero polynomial).
#[derive(Debug, Clone, PartialEq)]
pub struct UPolyExact {
    pub coeffs: Vec<QC>,
}

impl UPolyExact {
    pub fn new(mut coeffs: Vec<QC>) -> Self {
        while coeffs.last().map(qc_is_zero).unwrap_or(false) {
            coeffs.pop();
        }
        UPolyExact { coeffs }
    }

    pub fn zero() -> Self {
        UPolyExact { coeffs: Vec::new() }
    }

    pub fn constant(c: QC) -> Self {
        Self::new(vec![c])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the zero polynomial is reported as None.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading(&self) -> Option<&QC> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![qc_zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = out[k].clone() + c.clone();
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] = out[k].clone() + c.clone();
        }
        Self::new(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![qc_zero(); n];
        for (k, c) in self.coeffs.iter().enumerate() {
            out[k] = out[k].clone() + c.clone();
        }
        for (k, c) in other.coeffs.iter().enumerate() {
            out[k] = out[k].clone() - c.clone();
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        UPolyExact {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![qc_zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if qc_is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !qc_is_zero(b) {
                    out[i + j] = out[i + j].clone() + a.clone() * b.clone();
                }
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: &QC) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.clone() * s.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * qc_from_int(k as i64))
                .collect(),
        )
    }

    pub fn eval(&self, x: &QC) -> QC {
        let mut acc = qc_zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x.clone() + c.clone();
        }
        acc
    }

    /// Long division over the field Q(i): (quotient, remainder).
    pub fn divmod(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.degree().unwrap();
        if self.degree().map_or(true, |d| d < dd) {
            return (Self::zero(), self.clone());
        }
        let lead_inv = qc_one() / divisor.leading().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![qc_zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = rem[k].clone() * lead_inv.clone();
            if qc_is_zero(&q) {
                continue;
            }
            quot[k - dd] = q.clone();
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] = rem[k - dd + j].clone() - q.clone() * b.clone();
            }
        }
        (Self::new(quot), Self::new(rem))
    }

    /// Exact division; panics if the division leaves a remainder (the
    /// Bareiss recurrence guarantees divisibility).
    fn div_exact(&self, divisor: &Self) -> Self {
        let (q, r) = self.divmod(divisor);
        assert!(r.is_zero(), "inexact polynomial division in Bareiss step");
        q
    }

    /// Monic Euclidean gcd.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divmod(&b);
            a = b;
            b = r;
        }
        if let Some(lead) = a.leading().cloned() {
            a = a.scale(&(qc_one() / lead));
        }
        a
    }

    /// Gcd with the derivative plus a squarefreeness verdict
    /// (squarefree ⇔ that gcd has degree 0).
    pub fn gcd_squarefree(&self) -> (Self, bool) {
        let g = self.gcd(&self.derivative());
        let squarefree = g.degree() == Some(0);
        (g, squarefree)
    }

    pub fn to_float(&self) -> super::CPoly {
        super::CPoly::new(self.coeffs.iter().map(qc_to_c).collect())
    }

    /// Crude magnitude measure used to keep printed diagnostics finite.
    pub fn coeff_bits(&self) -> usize {
        self.coeffs
            .iter()
            .map(|c| c.re.numer().bits() as usize + c.im.numer().bits() as usize)
            .max()
            .unwrap_or(0)
    }
}

/// Sparse bivariate polynomial over Q(i).
#[derive(Debug, Clone, PartialEq)]
pub struct BPolyExact {
    pub terms: BTreeMap<(usize, usize), QC>,
}

impl BPolyExact {
    pub fn new(terms: BTreeMap<(usize, usize), QC>) -> Self {
        let terms = terms.into_iter().filter(|(_, c)| !qc_is_zero(c)).collect();
        BPolyExact { terms }
    }

    pub fn zero() -> Self {
        BPolyExact {
            terms: BTreeMap::new(),
        }
    }

    pub fn from_entries(entries: &BTreeMap<(usize, usize), QC>) -> Self {
        Self::new(entries.clone())
    }

    pub fn monomial(i: usize, j: usize, c: QC) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert((i, j), c);
        Self::new(terms)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> usize {
        self.terms.keys().map(|(i, j)| i + j).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (k, c) in &other.terms {
            let entry = terms.entry(*k).or_insert_with(qc_zero);
            *entry = entry.clone() + c.clone();
        }
        Self::new(terms)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BPolyExact {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut terms: BTreeMap<(usize, usize), QC> = BTreeMap::new();
        for ((i1, j1), a) in &self.terms {
            for ((i2, j2), b) in &other.terms {
                let key = (i1 + i2, j1 + j2);
                let entry = terms.entry(key).or_insert_with(qc_zero);
                *entry = entry.clone() + a.clone() * b.clone();
            }
        }
        Self::new(terms)
    }

    pub fn scale(&self, s: &QC) -> Self {
        BPolyExact {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (*k, c.clone() * s.clone()))
                .collect(),
        }
    }

    /// ∂/∂z₁.
    pub fn d1(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|((i, _), _)| *i > 0)
                .map(|((i, j), c)| ((i - 1, *j), c.clone() * qc_from_int(*i as i64)))
                .collect(),
        )
    }

    /// ∂/∂z₂.
    pub fn d2(&self) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|((_, j), _)| *j > 0)
                .map(|((i, j), c)| ((*i, j - 1), c.clone() * qc_from_int(*j as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, z1: &QC, z2: &QC) -> QC {
        let mut acc = qc_zero();
        for ((i, j), c) in &self.terms {
            let mut term = c.clone();
            for _ in 0..*i {
                term = term * z1.clone();
            }
            for _ in 0..*j {
                term = term * z2.clone();
            }
            acc = acc + term;
        }
        acc
    }

    pub fn eval_c(&self, z1: C, z2: C) -> C {
        self.terms
            .iter()
            .map(|((i, j), c)| qc_to_c(c) * z1.powu(*i as u32) * z2.powu(*j as u32))
            .sum()
    }

    /// Homogeneous part of the given total degree, as a polynomial in
    /// (z₁, z₂).
    pub fn homogeneous_part(&self, d: usize) -> Self {
        Self::new(
            self.terms
                .iter()
                .filter(|((i, j), _)| i + j == d)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        )
    }

    /// Coefficients with respect to the eliminated variable, each a
    /// univariate polynomial in the kept variable, low degree first.
    /// `eliminate` is 0 for z₁, 1 for z₂.
    pub fn coeffs_in(&self, eliminate: usize) -> Vec<UPolyExact> {
        let deg = self
            .terms
            .keys()
            .map(|&(i, j)| if eliminate == 0 { i } else { j })
            .max()
            .unwrap_or(0);
        let mut out = vec![Vec::new(); deg + 1];
        for ((i, j), c) in &self.terms {
            let (elim_deg, kept_deg) = if eliminate == 0 { (*i, *j) } else { (*j, *i) };
            let v = &mut out[elim_deg];
            if v.len() <= kept_deg {
                v.resize(kept_deg + 1, qc_zero());
            }
            v[kept_deg] = c.clone();
        }
        out.into_iter().map(UPolyExact::new).collect()
    }

    /// Restrict to a line z_elim = const, producing a univariate polynomial
    /// in the kept variable (floating coefficients).
    pub fn to_float(&self) -> super::BPolyF {
        super::BPolyF {
            terms: self.terms.iter().map(|(k, c)| (*k, qc_to_c(c))).collect(),
        }
    }

    /// Size guard for diagnostics.
    pub fn max_coeff_abs(&self) -> f64 {
        self.terms
            .values()
            .map(|c| qc_to_c(c).norm())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ResultantError {
    #[error("the polynomials share a common component (identically zero resultant)")]
    CommonComponent,
    #[error("resultant of a zero polynomial")]
    ZeroInput,
}

/// Sylvester resultant eliminating one variable, computed exactly by
/// fraction-free Bareiss elimination on the polynomial-entry matrix.
/// Returns the resultant as a univariate polynomial in the kept variable.
pub fn resultant_exact(
    f: &BPolyExact,
    g: &BPolyExact,
    eliminate: usize,
) -> Result<UPolyExact, ResultantError> {
    if f.is_zero() || g.is_zero() {
        return Err(ResultantError::ZeroInput);
    }
    let fc = f.coeffs_in(eliminate);
    let gc = g.coeffs_in(eliminate);
    let m = fc.len() - 1; // degree of f in the eliminated variable
    let n = gc.len() - 1;
    if m == 0 && n == 0 {
        // no elimination to do; resultant convention: 1
        return Ok(UPolyExact::constant(qc_one()));
    }
    let size = m + n;
    let mut mat = vec![vec![UPolyExact::zero(); size]; size];
    // n rows of f coefficients (high degree first), then m rows of g
    for row in 0..n {
        for (k, coeff) in fc.iter().enumerate() {
            mat[row][row + (m - k)] = coeff.clone();
        }
    }
    for row in 0..m {
        for (k, coeff) in gc.iter().enumerate() {
            mat[n + row][row + (n - k)] = coeff.clone();
        }
    }
    let det = bareiss_det(mat)?;
    if det.is_zero() {
        return Err(ResultantError::CommonComponent);
    }
    Ok(det)
}

fn bareiss_det(mut m: Vec<Vec<UPolyExact>>) -> Result<UPolyExact, ResultantError> {
    let n = m.len();
    if n == 0 {
        return Ok(UPolyExact::constant(qc_one()));
    }
    let mut sign = 1i32;
    let mut prev = UPolyExact::constant(qc_one());
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let pivot = (k + 1..n).find(|&i| !m[i][k].is_zero());
            match pivot {
                Some(i) => {
                    m.swap(k, i);
                    sign = -sign;
                }
                None => return Ok(UPolyExact::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev);
            }
            m[i][k] = UPolyExact::zero();
        }
        prev = m[k][k].clone();
    }
    let mut det = m[n - 1][n - 1].clone();
    if sign < 0 {
        det = det.neg();
    }
    Ok(det)
}

/// Positivity-free absolute value guard used in tests.
pub fn q_abs(q: &Q) -> Q {
    q.abs()
}
