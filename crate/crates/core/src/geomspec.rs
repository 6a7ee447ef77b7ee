//! Parsed and validated descriptions of the geometry under analysis: a
//! curve/surface given by component expressions, or an algebraic plane
//! curve given by an exact coefficient table, plus the analysis domain.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::complex::{Branch, C};
use crate::expr::{self, ExprAST, ParseError, Symbol};
use crate::options::NumericOptions;
use crate::polysolve::exact::QC;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeomKind {
    PlaneCurve,
    SpaceCurve,
    Surface,
    AlgebraicCurve,
}

impl GeomKind {
    pub fn component_count(self) -> usize {
        match self {
            GeomKind::PlaneCurve => 2,
            GeomKind::SpaceCurve | GeomKind::Surface => 3,
            GeomKind::AlgebraicCurve => 0,
        }
    }

    pub fn parameter_symbols(self) -> &'static [Symbol] {
        match self {
            GeomKind::PlaneCurve | GeomKind::SpaceCurve => &[Symbol::T],
            GeomKind::Surface => &[Symbol::Z1, Symbol::Z2],
            GeomKind::AlgebraicCurve => &[],
        }
    }
}

/// A rectangle [re_min, re_max] × [im_min, im_max] in one complex variable.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct DomainRect {
    pub re: [f64; 2],
    pub im: [f64; 2],
}

impl DomainRect {
    pub fn new(re: [f64; 2], im: [f64; 2]) -> Self {
        DomainRect { re, im }
    }

    pub fn square(half_width: f64) -> Self {
        DomainRect {
            re: [-half_width, half_width],
            im: [-half_width, half_width],
        }
    }

    pub fn is_well_formed(&self) -> bool {
        self.re[0] <= self.re[1]
            && self.im[0] <= self.im[1]
            && self.re.iter().chain(self.im.iter()).all(|x| x.is_finite())
    }

    pub fn center(&self) -> C {
        C::new(
            0.5 * (self.re[0] + self.re[1]),
            0.5 * (self.im[0] + self.im[1]),
        )
    }

    pub fn contains(&self, z: C, slack: f64) -> bool {
        z.re >= self.re[0] - slack
            && z.re <= self.re[1] + slack
            && z.im >= self.im[0] - slack
            && z.im <= self.im[1] + slack
    }
}

/// A real 2-plane slice of the complex 2-dimensional surface parameter
/// space: q(u,v) = base + u·u_dir + v·v_dir. Loci on surfaces are complex
/// curves (real surfaces); exports trace their intersection with such a
/// slice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceSpec {
    pub base: [[f64; 2]; 2],
    pub u_dir: [[f64; 2]; 2],
    pub v_dir: [[f64; 2]; 2],
}

impl SliceSpec {
    /// Vary (Re z₁, Re z₂), imaginary parts fixed at the base.
    pub fn re_re() -> Self {
        SliceSpec {
            base: [[0.0, 0.0], [0.0, 0.0]],
            u_dir: [[1.0, 0.0], [0.0, 0.0]],
            v_dir: [[0.0, 0.0], [1.0, 0.0]],
        }
    }

    /// Vary (Im z₁, Im z₂).
    pub fn im_im() -> Self {
        SliceSpec {
            base: [[0.0, 0.0], [0.0, 0.0]],
            u_dir: [[0.0, 1.0], [0.0, 0.0]],
            v_dir: [[0.0, 0.0], [0.0, 1.0]],
        }
    }

    pub fn at(&self, u: f64, v: f64) -> (C, C) {
        let comp = |k: usize| {
            C::new(self.base[k][0], self.base[k][1])
                + C::new(self.u_dir[k][0], self.u_dir[k][1]) * u
                + C::new(self.v_dir[k][0], self.v_dir[k][1]) * v
        };
        (comp(0), comp(1))
    }
}

/// Per-spec overrides of the numeric defaults.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct SpecOptions {
    pub branch: Option<Branch>,
    pub tol_iso: Option<f64>,
    pub tol_rel: Option<f64>,
    pub root_tol: Option<f64>,
    pub sampling: Option<usize>,
    pub jet_order: Option<usize>,
    pub slice: Option<SliceSpec>,
}

impl SpecOptions {
    pub fn numeric(&self, base: &NumericOptions) -> NumericOptions {
        NumericOptions {
            branch: self.branch.unwrap_or(base.branch),
            tol_iso: self.tol_iso.unwrap_or(base.tol_iso),
            tol_rel: self.tol_rel.unwrap_or(base.tol_rel),
            root_tol: self.root_tol.unwrap_or(base.root_tol),
            jet_order_curve: self.jet_order.unwrap_or(base.jet_order_curve),
            jet_order_surface: self.jet_order.unwrap_or(base.jet_order_surface),
            zero_grid: self.sampling.unwrap_or(base.zero_grid),
        }
    }
}

/// Exact coefficient table of a bivariate polynomial: (i,j) ↦ coefficient
/// of z₁ⁱ z₂ʲ. Float input converts exactly (every finite double is
/// rational); `rational_input` records whether the user supplied exact
/// rationals.
#[derive(Debug, Clone)]
pub struct CoeffTable {
    pub entries: BTreeMap<(usize, usize), QC>,
    pub rational_input: bool,
}

impl CoeffTable {
    pub fn total_degree(&self) -> usize {
        self.entries
            .iter()
            .filter(|(_, v)| !v.re.is_zero() || !v.im.is_zero())
            .map(|((i, j), _)| i + j)
            .max()
            .unwrap_or(0)
    }
}

/// A validated geometry description: what object, which expressions or
/// coefficients, over which parameter domain, with which analysis options.
#[derive(Debug, Clone)]
pub struct GeomSpec {
    pub kind: GeomKind,
    pub components: Vec<ExprAST>,
    pub coefficients: Option<CoeffTable>,
    pub degree: Option<usize>,
    pub domain: Vec<DomainRect>,
    pub options: SpecOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagCode {
    ComponentCount,
    DegreeMismatch,
    UnknownSymbol,
    EmptyDomain,
    DomainCount,
    MissingCoefficients,
    MissingDegree,
    BadCoefficient,
    ParseFailure,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Diagnostic {
    pub code: DiagCode,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagCode, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
        }
    }
}

fn collect_symbols(ast: &ExprAST, out: &mut Vec<Symbol>) {
    match ast {
        ExprAST::Param(s) => {
            if !out.contains(s) {
                out.push(*s);
            }
        }
        ExprAST::Neg(a) | ExprAST::Pow(a, _) | ExprAST::Func(_, a) | ExprAST::Sqrt(_, a) => {
            collect_symbols(a, out)
        }
        ExprAST::Add(a, b) | ExprAST::Sub(a, b) | ExprAST::Mul(a, b) | ExprAST::Div(a, b) => {
            collect_symbols(a, out);
            collect_symbols(b, out);
        }
        ExprAST::Literal(_) => {}
    }
}

/// Validate a spec against its declared kind. Empty diagnostics iff the
/// spec is well formed; the spec itself is never mutated.
pub fn validate(spec: &GeomSpec) -> Vec<Diagnostic> {
    let mut diags = Vec::new();

    match spec.kind {
        GeomKind::AlgebraicCurve => {
            if !spec.components.is_empty() {
                diags.push(Diagnostic::new(
                    DiagCode::ComponentCount,
                    "algebraic curves take a coefficient table, not component expressions",
                ));
            }
            match (&spec.coefficients, spec.degree) {
                (None, _) => diags.push(Diagnostic::new(
                    DiagCode::MissingCoefficients,
                    "algebraic curve requires a coefficient table",
                )),
                (Some(_), None) => diags.push(Diagnostic::new(
                    DiagCode::MissingDegree,
                    "algebraic curve requires a declared degree",
                )),
                (Some(table), Some(d)) => {
                    let actual = table.total_degree();
                    if actual != d {
                        diags.push(Diagnostic::new(
                            DiagCode::DegreeMismatch,
                            format!("declared degree {d} but coefficient table has total degree {actual}"),
                        ));
                    }
                }
            }
        }
        kind => {
            let expect = kind.component_count();
            if spec.components.len() != expect {
                diags.push(Diagnostic::new(
                    DiagCode::ComponentCount,
                    format!(
                        "{:?} requires {} components, got {}",
                        kind,
                        expect,
                        spec.components.len()
                    ),
                ));
            }
            if spec.coefficients.is_some() {
                diags.push(Diagnostic::new(
                    DiagCode::MissingCoefficients,
                    "coefficient tables are only valid for algebraic curves",
                ));
            }
            let allowed = kind.parameter_symbols();
            for (idx, comp) in spec.components.iter().enumerate() {
                let mut used = Vec::new();
                collect_symbols(comp, &mut used);
                for sym in used {
                    if !allowed.contains(&sym) {
                        diags.push(Diagnostic::new(
                            DiagCode::UnknownSymbol,
                            format!("component {idx} uses symbol `{sym}` not available for {kind:?}"),
                        ));
                    }
                }
            }
            let expected_domains = allowed.len();
            if spec.domain.len() != expected_domains {
                diags.push(Diagnostic::new(
                    DiagCode::DomainCount,
                    format!(
                        "{kind:?} requires {expected_domains} domain rectangle(s), got {}",
                        spec.domain.len()
                    ),
                ));
            }
        }
    }

    for (idx, rect) in spec.domain.iter().enumerate() {
        if !rect.is_well_formed() {
            diags.push(Diagnostic::new(
                DiagCode::EmptyDomain,
                format!("domain rectangle {idx} is empty or non-finite"),
            ));
        }
    }

    diags
}

// ---------------------------------------------------------------------------
// JSON document form (the on-disk spec file)
// ---------------------------------------------------------------------------

/// Coefficient value in the JSON coefficient table: `[re_num, re_den,
/// im_num, im_den]` for exact rationals, `[re, im]` or a bare number for
/// floating input.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoeffValue {
    Rational([i64; 4]),
    Complex([f64; 2]),
    Real(f64),
}

/// The serialized form of [`GeomSpec`]: expressions as source text,
/// coefficients keyed by `"i,j"`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpecDocument {
    pub kind: GeomKind,
    #[serde(default)]
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<BTreeMap<String, CoeffValue>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    #[serde(default)]
    pub domain: Vec<DomainRect>,
    #[serde(default)]
    pub options: SpecOptions,
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("component {index}: {source}")]
    Parse {
        index: usize,
        #[source]
        source: ParseError,
    },
    #[error("coefficient key `{0}` is not of the form \"i,j\"")]
    BadCoefficientKey(String),
    #[error("coefficient `{0}` has a zero denominator")]
    ZeroDenominator(String),
}

fn rational(num: i64, den: i64) -> Option<BigRational> {
    if den == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

impl SpecDocument {
    /// Parse the textual parts into a [`GeomSpec`]. Validation is a
    /// separate step ([`validate`]) so callers can gather all diagnostics.
    pub fn build(&self) -> Result<GeomSpec, SpecError> {
        let mut components = Vec::with_capacity(self.components.len());
        for (index, src) in self.components.iter().enumerate() {
            let ast = expr::parse(src).map_err(|source| SpecError::Parse { index, source })?;
            components.push(ast);
        }

        let coefficients = match &self.coefficients {
            None => None,
            Some(raw) => {
                let mut entries = BTreeMap::new();
                let mut rational_input = true;
                for (key, value) in raw {
                    let parts: Vec<&str> = key.split(',').map(str::trim).collect();
                    let (i, j) = match parts.as_slice() {
                        [a, b] => match (a.parse::<usize>(), b.parse::<usize>()) {
                            (Ok(i), Ok(j)) => (i, j),
                            _ => return Err(SpecError::BadCoefficientKey(key.clone())),
                        },
                        _ => return Err(SpecError::BadCoefficientKey(key.clone())),
                    };
                    let qc = match value {
                        CoeffValue::Rational([rn, rd, im_n, im_d]) => QC::new(
                            rational(*rn, *rd).ok_or_else(|| SpecError::ZeroDenominator(key.clone()))?,
                            rational(*im_n, *im_d)
                                .ok_or_else(|| SpecError::ZeroDenominator(key.clone()))?,
                        ),
                        CoeffValue::Complex([re, im]) => {
                            rational_input = false;
                            QC::new(
                                BigRational::from_float(*re)
                                    .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0))),
                                BigRational::from_float(*im)
                                    .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0))),
                            )
                        }
                        CoeffValue::Real(re) => {
                            rational_input = false;
                            QC::new(
                                BigRational::from_float(*re)
                                    .unwrap_or_else(|| BigRational::from_integer(BigInt::from(0))),
                                BigRational::from_integer(BigInt::from(0)),
                            )
                        }
                    };
                    entries.insert((i, j), qc);
                }
                Some(CoeffTable {
                    entries,
                    rational_input,
                })
            }
        };

        Ok(GeomSpec {
            kind: self.kind,
            components,
            coefficients,
            degree: self.degree,
            domain: self.domain.clone(),
            options: self.options.clone(),
        })
    }
}

// ---------------------------------------------------------------------------
// Builders used across the test suites and the CLI examples
// ---------------------------------------------------------------------------

impl GeomSpec {
    pub fn plane_curve(x: &str, y: &str, domain: DomainRect) -> Self {
        GeomSpec {
            kind: GeomKind::PlaneCurve,
            components: vec![expr::parse(x).unwrap(), expr::parse(y).unwrap()],
            coefficients: None,
            degree: None,
            domain: vec![domain],
            options: SpecOptions::default(),
        }
    }

    pub fn space_curve(x: &str, y: &str, z: &str, domain: DomainRect) -> Self {
        GeomSpec {
            kind: GeomKind::SpaceCurve,
            components: vec![
                expr::parse(x).unwrap(),
                expr::parse(y).unwrap(),
                expr::parse(z).unwrap(),
            ],
            coefficients: None,
            degree: None,
            domain: vec![domain],
            options: SpecOptions::default(),
        }
    }

    pub fn surface(x: &str, y: &str, z: &str, domain: [DomainRect; 2]) -> Self {
        GeomSpec {
            kind: GeomKind::Surface,
            components: vec![
                expr::parse(x).unwrap(),
                expr::parse(y).unwrap(),
                expr::parse(z).unwrap(),
            ],
            coefficients: None,
            degree: None,
            domain: domain.to_vec(),
            options: SpecOptions::default(),
        }
    }

    /// Monge-form surface (z₁, z₂, f(z₁,z₂)).
    pub fn monge_surface(f: &str, domain: [DomainRect; 2]) -> Self {
        Self::surface("z1", "z2", f, domain)
    }

    /// Algebraic curve from integer coefficients (i, j, numerator,
    /// denominator) of z₁ⁱ z₂ʲ.
    pub fn algebraic_curve(degree: usize, coeffs: &[(usize, usize, i64, i64)]) -> Self {
        let mut entries = BTreeMap::new();
        for &(i, j, num, den) in coeffs {
            entries.insert(
                (i, j),
                QC::new(
                    BigRational::new(BigInt::from(num), BigInt::from(den)),
                    BigRational::from_integer(BigInt::from(0)),
                ),
            );
        }
        GeomSpec {
            kind: GeomKind::AlgebraicCurve,
            components: Vec::new(),
            coefficients: Some(CoeffTable {
                entries,
                rational_input: true,
            }),
            degree: Some(degree),
            domain: Vec::new(),
            options: SpecOptions::default(),
        }
    }

    pub fn numeric_options(&self, base: &NumericOptions) -> NumericOptions {
        self.options.numeric(base)
    }
}
