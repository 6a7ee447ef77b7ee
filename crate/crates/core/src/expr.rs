//! The textual definition language for curves and surfaces.
//!
//! Grammar (usual precedence, tightest first): integer power `^`, unary
//! minus, `*` `/`, `+` `-`; parentheses; function application `f(x)` for
//! `exp`, `sin`, `cos`, `sqrt`; complex literals `2`, `3i`, `1+2i`,
//! `1.5e-3i`; parameter symbols `t` (curves) and `z1`, `z2` (surfaces).
//!
//! The language is total on C except for division, and the only
//! multi-valued primitive is the explicitly branch-annotated square root,
//! so jets lifted from these expressions stay single-valued everywhere
//! else.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{c, Branch, C};
use crate::jet::{Jet1, Jet2, JetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Symbol {
    T,
    Z1,
    Z2,
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::T => write!(f, "t"),
            Symbol::Z1 => write!(f, "z1"),
            Symbol::Z2 => write!(f, "z2"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnaryFn {
    Exp,
    Sin,
    Cos,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprAST {
    Literal(C),
    Param(Symbol),
    Neg(Box<ExprAST>),
    Add(Box<ExprAST>, Box<ExprAST>),
    Sub(Box<ExprAST>, Box<ExprAST>),
    Mul(Box<ExprAST>, Box<ExprAST>),
    Div(Box<ExprAST>, Box<ExprAST>),
    /// Integer power with nonnegative exponent.
    Pow(Box<ExprAST>, u32),
    Func(UnaryFn, Box<ExprAST>),
    /// Square root annotated with the branch it draws values from.
    Sqrt(Branch, Box<ExprAST>),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("unknown identifier `{name}` at line {line}, column {col}")]
    UnknownIdentifier { name: String, line: usize, col: usize },
    #[error("exponent must be a nonnegative integer literal (line {line}, column {col})")]
    NonIntegerExponent { line: usize, col: usize },
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("division by zero while evaluating expression")]
    DivisionByZero,
    #[error("square root of zero radicand (vanishing order {order})")]
    SqrtVanishing { order: usize },
    #[error("symbol `{0}` not bound in this context")]
    UnboundSymbol(Symbol),
}

impl From<JetError> for EvalError {
    fn from(e: JetError) -> Self {
        match e {
            JetError::DivisionByZero => EvalError::DivisionByZero,
            JetError::SqrtVanishing { order } => EvalError::SqrtVanishing { order },
            JetError::Eval(_) => EvalError::DivisionByZero,
        }
    }
}

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(C),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Comma,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src: src.as_bytes(),
            pos: 0,
            line: 1,
            col: 1,
        }
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.src.get(self.pos).copied()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn tokens(mut self) -> Result<Vec<Spanned>, ParseError> {
        let mut out = Vec::new();
        while let Some(b) = self.peek() {
            let (line, col) = (self.line, self.col);
            match b {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.bump();
                }
                b'+' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::Plus, line, col });
                }
                b'-' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::Minus, line, col });
                }
                b'*' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::Star, line, col });
                }
                b'/' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::Slash, line, col });
                }
                b'^' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::Caret, line, col });
                }
                b'(' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::LParen, line, col });
                }
                b')' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::RParen, line, col });
                }
                b',' => {
                    self.bump();
                    out.push(Spanned { tok: Tok::Comma, line, col });
                }
                b'0'..=b'9' | b'.' => {
                    let tok = self.number(line, col)?;
                    out.push(Spanned { tok, line, col });
                }
                b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                    let mut name = String::new();
                    while let Some(ch) = self.peek() {
                        if ch.is_ascii_alphanumeric() || ch == b'_' {
                            name.push(ch as char);
                            self.bump();
                        } else {
                            break;
                        }
                    }
                    // A bare `i` is the imaginary unit.
                    if name == "i" {
                        out.push(Spanned { tok: Tok::Num(c(0.0, 1.0)), line, col });
                    } else {
                        out.push(Spanned { tok: Tok::Ident(name), line, col });
                    }
                }
                other => {
                    return Err(ParseError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character `{}`", other as char),
                    })
                }
            }
        }
        Ok(out)
    }

    fn number(&mut self, line: usize, col: usize) -> Result<Tok, ParseError> {
        let start = self.pos;
        let mut seen_exp = false;
        while let Some(ch) = self.peek() {
            match ch {
                b'0'..=b'9' | b'.' => {
                    self.bump();
                }
                b'e' | b'E' if !seen_exp => {
                    // exponent only when followed by digit or sign+digit
                    let next = self.src.get(self.pos + 1).copied();
                    let next2 = self.src.get(self.pos + 2).copied();
                    let is_exp = matches!(next, Some(b'0'..=b'9'))
                        || (matches!(next, Some(b'+') | Some(b'-'))
                            && matches!(next2, Some(b'0'..=b'9')));
                    if !is_exp {
                        break;
                    }
                    seen_exp = true;
                    self.bump();
                    if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
            line,
            col,
            msg: format!("malformed number `{text}`"),
        })?;
        // trailing `i` folds into an imaginary literal: 3i, 1.5e-3i
        if self.peek() == Some(b'i') {
            let after = self.src.get(self.pos + 1).copied();
            let ident_continues =
                matches!(after, Some(ch) if ch.is_ascii_alphanumeric() || ch == b'_');
            if !ident_continues {
                self.bump();
                return Ok(Tok::Num(c(0.0, value)));
            }
        }
        Ok(Tok::Num(c(value, 0.0)))
    }
}

// ---------------------------------------------------------------------------
// Parser (recursive descent)
// ---------------------------------------------------------------------------

struct Parser {
    toks: Vec<Spanned>,
    pos: usize,
    allowed: Vec<Symbol>,
}

impl Parser {
    fn peek(&self) -> Option<&Spanned> {
        self.toks.get(self.pos)
    }

    fn bump(&mut self) -> Option<Spanned> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn err_here(&self, msg: &str) -> ParseError {
        match self.peek() {
            Some(s) => ParseError::Syntax {
                line: s.line,
                col: s.col,
                msg: msg.to_string(),
            },
            None => ParseError::Syntax {
                line: 0,
                col: 0,
                msg: format!("{msg} (at end of input)"),
            },
        }
    }

    fn expr(&mut self) -> Result<ExprAST, ParseError> {
        let mut lhs = self.term()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Plus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = fold_complex_literal(lhs, rhs, false);
                }
                Tok::Minus => {
                    self.bump();
                    let rhs = self.term()?;
                    lhs = fold_complex_literal(lhs, rhs, true);
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<ExprAST, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(s) = self.peek() {
            match s.tok {
                Tok::Star => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = ExprAST::Mul(Box::new(lhs), Box::new(rhs));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    lhs = ExprAST::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => break,
            }
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<ExprAST, ParseError> {
        if let Some(s) = self.peek() {
            if s.tok == Tok::Minus {
                self.bump();
                let inner = self.unary()?;
                // constant-fold so `-3` is a literal, not Neg(3)
                if let ExprAST::Literal(z) = inner {
                    return Ok(ExprAST::Literal(-z));
                }
                return Ok(ExprAST::Neg(Box::new(inner)));
            }
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAST, ParseError> {
        let base = self.atom()?;
        if let Some(s) = self.peek() {
            if s.tok == Tok::Caret {
                self.bump();
                let (line, col) = self
                    .peek()
                    .map(|s| (s.line, s.col))
                    .unwrap_or((0, 0));
                let exp = match self.bump() {
                    Some(Spanned { tok: Tok::Num(z), .. })
                        if z.im == 0.0 && z.re >= 0.0 && z.re.fract() == 0.0 =>
                    {
                        z.re as u32
                    }
                    _ => return Err(ParseError::NonIntegerExponent { line, col }),
                };
                return Ok(ExprAST::Pow(Box::new(base), exp));
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExprAST, ParseError> {
        let s = self.bump().ok_or_else(|| self.err_here("expected expression"))?;
        match s.tok {
            Tok::Num(z) => Ok(ExprAST::Literal(z)),
            Tok::LParen => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Spanned { tok: Tok::RParen, .. }) => Ok(inner),
                    _ => Err(ParseError::Syntax {
                        line: s.line,
                        col: s.col,
                        msg: "unbalanced parenthesis".to_string(),
                    }),
                }
            }
            Tok::Ident(name) => match name.as_str() {
                "t" | "z1" | "z2" => {
                    let sym = match name.as_str() {
                        "t" => Symbol::T,
                        "z1" => Symbol::Z1,
                        _ => Symbol::Z2,
                    };
                    if !self.allowed.contains(&sym) {
                        return Err(ParseError::UnknownIdentifier {
                            name,
                            line: s.line,
                            col: s.col,
                        });
                    }
                    Ok(ExprAST::Param(sym))
                }
                "exp" | "sin" | "cos" | "sqrt" | "sqrt_other" => {
                    match self.bump() {
                        Some(Spanned { tok: Tok::LParen, .. }) => {}
                        _ => {
                            return Err(ParseError::Syntax {
                                line: s.line,
                                col: s.col,
                                msg: format!("`{name}` requires an argument list"),
                            })
                        }
                    }
                    let arg = self.expr()?;
                    match self.bump() {
                        Some(Spanned { tok: Tok::RParen, .. }) => {}
                        _ => {
                            return Err(ParseError::Syntax {
                                line: s.line,
                                col: s.col,
                                msg: "unbalanced parenthesis".to_string(),
                            })
                        }
                    }
                    Ok(match name.as_str() {
                        "exp" => ExprAST::Func(UnaryFn::Exp, Box::new(arg)),
                        "sin" => ExprAST::Func(UnaryFn::Sin, Box::new(arg)),
                        "cos" => ExprAST::Func(UnaryFn::Cos, Box::new(arg)),
                        "sqrt" => ExprAST::Sqrt(Branch::Principal, Box::new(arg)),
                        _ => ExprAST::Sqrt(Branch::Other, Box::new(arg)),
                    })
                }
                _ => Err(ParseError::UnknownIdentifier {
                    name,
                    line: s.line,
                    col: s.col,
                }),
            },
            _ => Err(ParseError::Syntax {
                line: s.line,
                col: s.col,
                msg: "expected a literal, symbol or parenthesised expression".to_string(),
            }),
        }
    }
}

/// `a + bi` / `a - bi` with a pure-real left and pure-imaginary right side
/// is a single complex literal, per the literal grammar.
fn fold_complex_literal(lhs: ExprAST, rhs: ExprAST, subtract: bool) -> ExprAST {
    if let (ExprAST::Literal(a), ExprAST::Literal(b)) = (&lhs, &rhs) {
        if a.im == 0.0 && b.re == 0.0 && b.im != 0.0 {
            let b = if subtract { -b } else { *b };
            return ExprAST::Literal(a + b);
        }
    }
    if subtract {
        ExprAST::Sub(Box::new(lhs), Box::new(rhs))
    } else {
        ExprAST::Add(Box::new(lhs), Box::new(rhs))
    }
}

/// Parse an expression allowing the given parameter symbols.
pub fn parse_with_symbols(source: &str, allowed: &[Symbol]) -> Result<ExprAST, ParseError> {
    let toks = Lexer::new(source).tokens()?;
    let mut p = Parser {
        toks,
        pos: 0,
        allowed: allowed.to_vec(),
    };
    let ast = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err_here("trailing input after expression"));
    }
    Ok(ast)
}

/// Parse allowing every symbol; spec validation restricts usage later.
pub fn parse(source: &str) -> Result<ExprAST, ParseError> {
    parse_with_symbols(source, &[Symbol::T, Symbol::Z1, Symbol::Z2])
}

// ---------------------------------------------------------------------------
// Pretty printer — minimal parentheses, round-trips through `parse`
// ---------------------------------------------------------------------------

fn precedence(e: &ExprAST) -> u8 {
    match e {
        ExprAST::Add(..) | ExprAST::Sub(..) => 1,
        ExprAST::Mul(..) | ExprAST::Div(..) => 2,
        ExprAST::Neg(..) => 3,
        ExprAST::Pow(..) => 4,
        _ => 5,
    }
}

fn fmt_literal(z: C) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        // mixed literals print as a parenthesised sum so they re-parse
        // into the same (folded) literal node
        format!("({} - {}i)", z.re, -z.im)
    } else {
        format!("({} + {}i)", z.re, z.im)
    }
}

impl ExprAST {
    fn print_prec(&self, parent: u8, out: &mut String) {
        let prec = precedence(self);
        let needs_parens = prec < parent;
        if needs_parens {
            out.push('(');
        }
        match self {
            ExprAST::Literal(z) => {
                let s = fmt_literal(*z);
                // negative literals re-parse through the unary-minus fold,
                // which needs them isolated from tighter operators
                let negative = s.starts_with('-');
                if negative && parent > 1 {
                    out.push('(');
                    out.push_str(&s);
                    out.push(')');
                } else {
                    out.push_str(&s);
                }
            }
            ExprAST::Param(s) => out.push_str(&s.to_string()),
            ExprAST::Neg(inner) => {
                out.push('-');
                inner.print_prec(prec + 1, out);
            }
            ExprAST::Add(a, b) => {
                a.print_prec(prec, out);
                out.push_str(" + ");
                b.print_prec(prec + 1, out);
            }
            ExprAST::Sub(a, b) => {
                a.print_prec(prec, out);
                out.push_str(" - ");
                b.print_prec(prec + 1, out);
            }
            ExprAST::Mul(a, b) => {
                a.print_prec(prec, out);
                out.push('*');
                b.print_prec(prec + 1, out);
            }
            ExprAST::Div(a, b) => {
                a.print_prec(prec, out);
                out.push('/');
                b.print_prec(prec + 1, out);
            }
            ExprAST::Pow(a, n) => {
                a.print_prec(prec + 1, out);
                out.push('^');
                out.push_str(&n.to_string());
            }
            ExprAST::Func(f, a) => {
                out.push_str(match f {
                    UnaryFn::Exp => "exp",
                    UnaryFn::Sin => "sin",
                    UnaryFn::Cos => "cos",
                });
                out.push('(');
                a.print_prec(0, out);
                out.push(')');
            }
            ExprAST::Sqrt(branch, a) => {
                out.push_str(match branch {
                    Branch::Principal => "sqrt",
                    Branch::Other => "sqrt_other",
                });
                out.push('(');
                a.print_prec(0, out);
                out.push(')');
            }
        }
        if needs_parens {
            out.push(')');
        }
    }

    pub fn pretty(&self) -> String {
        let mut s = String::new();
        self.print_prec(0, &mut s);
        s
    }
}

impl fmt::Display for ExprAST {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pretty())
    }
}

// ---------------------------------------------------------------------------
// Evaluation over pluggable scalar algebras
// ---------------------------------------------------------------------------

/// Evaluation algebra: supplies constants, bound symbols, and the operation
/// set of the expression language for a value type `V` (points, 1-jets,
/// 2-jets).
pub trait EvalAlgebra {
    type V: Clone;

    fn constant(&self, z: C) -> Self::V;
    fn symbol(&self, s: Symbol) -> Result<Self::V, EvalError>;
    fn add(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn sub(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn neg(&self, a: &Self::V) -> Self::V;
    fn mul(&self, a: &Self::V, b: &Self::V) -> Self::V;
    fn div(&self, a: &Self::V, b: &Self::V) -> Result<Self::V, EvalError>;
    fn powi(&self, a: &Self::V, n: u32) -> Self::V;
    fn func(&self, f: UnaryFn, a: &Self::V) -> Self::V;
    fn sqrt(&self, branch: Branch, a: &Self::V) -> Result<Self::V, EvalError>;
}

pub fn eval<A: EvalAlgebra>(ast: &ExprAST, alg: &A) -> Result<A::V, EvalError> {
    match ast {
        ExprAST::Literal(z) => Ok(alg.constant(*z)),
        ExprAST::Param(s) => alg.symbol(*s),
        ExprAST::Neg(a) => Ok(alg.neg(&eval(a, alg)?)),
        ExprAST::Add(a, b) => Ok(alg.add(&eval(a, alg)?, &eval(b, alg)?)),
        ExprAST::Sub(a, b) => Ok(alg.sub(&eval(a, alg)?, &eval(b, alg)?)),
        ExprAST::Mul(a, b) => Ok(alg.mul(&eval(a, alg)?, &eval(b, alg)?)),
        ExprAST::Div(a, b) => alg.div(&eval(a, alg)?, &eval(b, alg)?),
        ExprAST::Pow(a, n) => Ok(alg.powi(&eval(a, alg)?, *n)),
        ExprAST::Func(f, a) => Ok(alg.func(*f, &eval(a, alg)?)),
        ExprAST::Sqrt(branch, a) => alg.sqrt(*branch, &eval(a, alg)?),
    }
}

/// Plain point evaluation at `t` or `(z1,z2)`.
pub struct PointAlgebra {
    pub t: Option<C>,
    pub z: Option<(C, C)>,
}

impl EvalAlgebra for PointAlgebra {
    type V = C;

    fn constant(&self, z: C) -> C {
        z
    }

    fn symbol(&self, s: Symbol) -> Result<C, EvalError> {
        match s {
            Symbol::T => self.t.ok_or(EvalError::UnboundSymbol(s)),
            Symbol::Z1 => self.z.map(|z| z.0).ok_or(EvalError::UnboundSymbol(s)),
            Symbol::Z2 => self.z.map(|z| z.1).ok_or(EvalError::UnboundSymbol(s)),
        }
    }

    fn add(&self, a: &C, b: &C) -> C {
        a + b
    }

    fn sub(&self, a: &C, b: &C) -> C {
        a - b
    }

    fn neg(&self, a: &C) -> C {
        -a
    }

    fn mul(&self, a: &C, b: &C) -> C {
        a * b
    }

    fn div(&self, a: &C, b: &C) -> Result<C, EvalError> {
        if b.norm() == 0.0 {
            return Err(EvalError::DivisionByZero);
        }
        Ok(a / b)
    }

    fn powi(&self, a: &C, n: u32) -> C {
        a.powu(n)
    }

    fn func(&self, f: UnaryFn, a: &C) -> C {
        match f {
            UnaryFn::Exp => a.exp(),
            UnaryFn::Sin => a.sin(),
            UnaryFn::Cos => a.cos(),
        }
    }

    fn sqrt(&self, branch: Branch, a: &C) -> Result<C, EvalError> {
        Ok(crate::complex::sqrt_branched(*a, branch).value)
    }
}

/// Taylor-mode lifting in one variable at base point `t0`.
pub struct Jet1Algebra {
    pub t0: C,
    pub order: usize,
}

impl EvalAlgebra for Jet1Algebra {
    type V = Jet1;

    fn constant(&self, z: C) -> Jet1 {
        Jet1::constant(z, self.t0, self.order)
    }

    fn symbol(&self, s: Symbol) -> Result<Jet1, EvalError> {
        match s {
            Symbol::T => Ok(Jet1::variable(self.t0, self.order)),
            other => Err(EvalError::UnboundSymbol(other)),
        }
    }

    fn add(&self, a: &Jet1, b: &Jet1) -> Jet1 {
        a.add(b)
    }

    fn sub(&self, a: &Jet1, b: &Jet1) -> Jet1 {
        a.sub(b)
    }

    fn neg(&self, a: &Jet1) -> Jet1 {
        a.neg()
    }

    fn mul(&self, a: &Jet1, b: &Jet1) -> Jet1 {
        a.mul(b)
    }

    fn div(&self, a: &Jet1, b: &Jet1) -> Result<Jet1, EvalError> {
        Ok(a.div(b)?)
    }

    fn powi(&self, a: &Jet1, n: u32) -> Jet1 {
        a.powi(n)
    }

    fn func(&self, f: UnaryFn, a: &Jet1) -> Jet1 {
        match f {
            UnaryFn::Exp => a.exp(),
            UnaryFn::Sin => a.sin(),
            UnaryFn::Cos => a.cos(),
        }
    }

    fn sqrt(&self, branch: Branch, a: &Jet1) -> Result<Jet1, EvalError> {
        Ok(a.sqrt(branch)?)
    }
}

/// Taylor-mode lifting in two variables at base point `q`.
pub struct Jet2Algebra {
    pub q: (C, C),
    pub order: usize,
}

impl EvalAlgebra for Jet2Algebra {
    type V = Jet2;

    fn constant(&self, z: C) -> Jet2 {
        Jet2::constant(z, self.q, self.order)
    }

    fn symbol(&self, s: Symbol) -> Result<Jet2, EvalError> {
        match s {
            Symbol::Z1 => Ok(Jet2::variable(0, self.q, self.order)),
            Symbol::Z2 => Ok(Jet2::variable(1, self.q, self.order)),
            other => Err(EvalError::UnboundSymbol(other)),
        }
    }

    fn add(&self, a: &Jet2, b: &Jet2) -> Jet2 {
        a.add(b)
    }

    fn sub(&self, a: &Jet2, b: &Jet2) -> Jet2 {
        a.sub(b)
    }

    fn neg(&self, a: &Jet2) -> Jet2 {
        a.neg()
    }

    fn mul(&self, a: &Jet2, b: &Jet2) -> Jet2 {
        a.mul(b)
    }

    fn div(&self, a: &Jet2, b: &Jet2) -> Result<Jet2, EvalError> {
        Ok(a.div(b)?)
    }

    fn powi(&self, a: &Jet2, n: u32) -> Jet2 {
        a.powi(n)
    }

    fn func(&self, f: UnaryFn, a: &Jet2) -> Jet2 {
        match f {
            UnaryFn::Exp => a.exp(),
            UnaryFn::Sin => a.sin(),
            UnaryFn::Cos => a.cos(),
        }
    }

    fn sqrt(&self, branch: Branch, a: &Jet2) -> Result<Jet2, EvalError> {
        Ok(a.sqrt(branch)?)
    }
}

/// Convenience: evaluate at a point of a curve parameter.
pub fn eval_at_t(ast: &ExprAST, t: C) -> Result<C, EvalError> {
    eval(ast, &PointAlgebra { t: Some(t), z: None })
}

/// Convenience: evaluate at a surface parameter point.
pub fn eval_at_q(ast: &ExprAST, q: (C, C)) -> Result<C, EvalError> {
    eval(ast, &PointAlgebra { t: None, z: Some(q) })
}

/// Lift to a one-variable jet of the given order.
pub fn lift1(ast: &ExprAST, t0: C, order: usize) -> Result<Jet1, EvalError> {
    eval(ast, &Jet1Algebra { t0, order })
}

/// Lift to a two-variable jet of the given order.
pub fn lift2(ast: &ExprAST, q: (C, C), order: usize) -> Result<Jet2, EvalError> {
    eval(ast, &Jet2Algebra { q, order })
}
