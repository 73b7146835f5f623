//! Holomorphic expressions of one complex variable `w`.
//!
//! The grammar is deliberately small: complex literals, the variable `w`,
//! the four arithmetic operators, integer powers and a handful of entire
//! functions. There is no way to write a conjugate, a modulus or a real
//! part, so every expression the parser accepts is holomorphic wherever it
//! is defined.
//!
//! ```text
//! expr    = term { ("+" | "-") term } ;
//! term    = unary { ("*" | "/") unary } ;
//! unary   = ("-" | "+") unary | power ;
//! power   = primary [ "^" exponent ] ;
//! exponent= ["-" | "+"] integer | "(" ["-" | "+"] integer ")" ;
//! primary = number [ "i" ] | "i" | "w" | func "(" expr ")" | "(" expr ")" ;
//! func    = "sin" | "cos" | "exp" | "sinh" | "cosh" ;
//! ```
//!
//! A number directly followed by `i` (`4i`, `2.5i`) is lexed as a single
//! imaginary literal, so `3+4i` and `3+4*i` denote the same constant.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

/// Function names that are rejected outright because they are not holomorphic
/// or carry a branch cut.
const REJECTED_FUNCTIONS: &[&str] = &[
    "conj", "abs", "re", "im", "real", "imag", "arg", "norm", "sqrt", "log", "ln", "pow",
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("function `{name}` at byte {offset} is not an allowed holomorphic primitive")]
    DisallowedFunction { name: String, offset: usize },
}

#[derive(Debug, Error, Clone, Copy, PartialEq)]
pub enum EvalError {
    #[error("singular evaluation at w = {w}: division by zero")]
    Singularity { w: Complex64 },
    #[error("non-finite value at w = {w}")]
    NonFinite { w: Complex64 },
}

/// Immutable expression tree over the single variable `w`.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Const(Complex64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    PowInt(Box<Expr>, i32),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    Exp(Box<Expr>),
    Sinh(Box<Expr>),
    Cosh(Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Func {
    Sin,
    Cos,
    Exp,
    Sinh,
    Cosh,
}

impl Func {
    fn from_name(name: &str) -> Option<Self> {
        match name {
            "sin" => Some(Func::Sin),
            "cos" => Some(Func::Cos),
            "exp" => Some(Func::Exp),
            "sinh" => Some(Func::Sinh),
            "cosh" => Some(Func::Cosh),
            _ => None,
        }
    }

    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Func::Sin => z.sin(),
            Func::Cos => z.cos(),
            Func::Exp => z.exp(),
            Func::Sinh => z.sinh(),
            Func::Cosh => z.cosh(),
        }
    }
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == Complex64::new(0.0, 0.0))
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Const(c) if *c == Complex64::new(1.0, 0.0))
}

fn folded(c: Complex64) -> Option<Expr> {
    (c.re.is_finite() && c.im.is_finite()).then_some(Expr::Const(c))
}

// Smart constructors. They fold constants and drop neutral elements; none of
// the rewrites changes the value of the expression at any point.
#[allow(clippy::should_implement_trait)]
impl Expr {
    pub fn constant(re: f64, im: f64) -> Expr {
        Expr::Const(Complex64::new(re, im))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => folded(x + y).unwrap_or_else(|| Expr::Add(a.into(), b.into())),
            _ if is_zero(&a) => b,
            _ if is_zero(&b) => a,
            _ => Expr::Add(Box::new(a), Box::new(b)),
        }
    }

    pub fn sub(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => folded(x - y).unwrap_or_else(|| Expr::Sub(a.into(), b.into())),
            _ if is_zero(&b) => a,
            _ if is_zero(&a) => Expr::neg(b),
            _ => Expr::Sub(Box::new(a), Box::new(b)),
        }
    }

    pub fn mul(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            (Expr::Const(x), Expr::Const(y)) => folded(x * y).unwrap_or_else(|| Expr::Mul(a.into(), b.into())),
            _ if is_zero(&a) || is_zero(&b) => Expr::constant(0.0, 0.0),
            _ if is_one(&a) => b,
            _ if is_one(&b) => a,
            _ => Expr::Mul(Box::new(a), Box::new(b)),
        }
    }

    pub fn div(a: Expr, b: Expr) -> Expr {
        match (&a, &b) {
            // 1/0 is left unfolded so that evaluation reports the singularity.
            (Expr::Const(x), Expr::Const(y)) if !is_zero(&b) => {
                folded(x / y).unwrap_or_else(|| Expr::Div(a.into(), b.into()))
            }
            _ if is_one(&b) => a,
            _ => Expr::Div(Box::new(a), Box::new(b)),
        }
    }

    pub fn neg(a: Expr) -> Expr {
        match a {
            Expr::Const(x) => Expr::Const(-x),
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    pub fn powi(base: Expr, n: i32) -> Expr {
        match (&base, n) {
            (_, 0) => Expr::constant(1.0, 0.0),
            (_, 1) => base,
            (Expr::Const(x), _) if !(is_zero(&base) && n < 0) => {
                folded(x.powi(n)).unwrap_or_else(|| Expr::PowInt(base.into(), n))
            }
            _ => Expr::PowInt(Box::new(base), n),
        }
    }

    fn func(f: Func, arg: Expr) -> Expr {
        if let Expr::Const(c) = arg {
            if let Some(e) = folded(f.apply(c)) {
                return e;
            }
        }
        let arg = Box::new(arg);
        match f {
            Func::Sin => Expr::Sin(arg),
            Func::Cos => Expr::Cos(arg),
            Func::Exp => Expr::Exp(arg),
            Func::Sinh => Expr::Sinh(arg),
            Func::Cosh => Expr::Cosh(arg),
        }
    }

    pub fn sin(a: Expr) -> Expr {
        Expr::func(Func::Sin, a)
    }
    pub fn cos(a: Expr) -> Expr {
        Expr::func(Func::Cos, a)
    }
    pub fn exp(a: Expr) -> Expr {
        Expr::func(Func::Exp, a)
    }
    pub fn sinh(a: Expr) -> Expr {
        Expr::func(Func::Sinh, a)
    }
    pub fn cosh(a: Expr) -> Expr {
        Expr::func(Func::Cosh, a)
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Var => false,
            Expr::Const(_) => true,
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.is_constant() && b.is_constant()
            }
            Expr::Neg(a)
            | Expr::PowInt(a, _)
            | Expr::Sin(a)
            | Expr::Cos(a)
            | Expr::Exp(a)
            | Expr::Sinh(a)
            | Expr::Cosh(a) => a.is_constant(),
        }
    }
}

/// Parses an expression in `w`.
pub fn parse(source: &str) -> Result<Expr, ParseError> {
    let tokens = lex(source)?;
    let mut p = Parser { tokens, pos: 0, len: source.len() };
    let e = p.expr()?;
    match p.peek() {
        None => Ok(e),
        Some(t) => Err(ParseError::Syntax { offset: t.offset, message: format!("unexpected {}", t.kind) }),
    }
}

/// Evaluates `f` at `w`.
pub fn eval(f: &Expr, w: Complex64) -> Result<Complex64, EvalError> {
    let v = eval_inner(f, w)?;
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(EvalError::NonFinite { w })
    }
}

fn eval_inner(f: &Expr, w: Complex64) -> Result<Complex64, EvalError> {
    Ok(match f {
        Expr::Var => w,
        Expr::Const(c) => *c,
        Expr::Add(a, b) => eval_inner(a, w)? + eval_inner(b, w)?,
        Expr::Sub(a, b) => eval_inner(a, w)? - eval_inner(b, w)?,
        Expr::Mul(a, b) => eval_inner(a, w)? * eval_inner(b, w)?,
        Expr::Div(a, b) => {
            let num = eval_inner(a, w)?;
            let den = eval_inner(b, w)?;
            if den.re == 0.0 && den.im == 0.0 {
                return Err(EvalError::Singularity { w });
            }
            num / den
        }
        Expr::Neg(a) => -eval_inner(a, w)?,
        Expr::PowInt(a, n) => {
            let base = eval_inner(a, w)?;
            if *n < 0 && base.re == 0.0 && base.im == 0.0 {
                return Err(EvalError::Singularity { w });
            }
            base.powi(*n)
        }
        Expr::Sin(a) => eval_inner(a, w)?.sin(),
        Expr::Cos(a) => eval_inner(a, w)?.cos(),
        Expr::Exp(a) => eval_inner(a, w)?.exp(),
        Expr::Sinh(a) => eval_inner(a, w)?.sinh(),
        Expr::Cosh(a) => eval_inner(a, w)?.cosh(),
    })
}

/// Symbolic derivative with respect to `w`.
pub fn differentiate(f: &Expr) -> Expr {
    match f {
        Expr::Var => Expr::constant(1.0, 0.0),
        Expr::Const(_) => Expr::constant(0.0, 0.0),
        Expr::Add(a, b) => Expr::add(differentiate(a), differentiate(b)),
        Expr::Sub(a, b) => Expr::sub(differentiate(a), differentiate(b)),
        Expr::Mul(a, b) => Expr::add(
            Expr::mul(differentiate(a), (**b).clone()),
            Expr::mul((**a).clone(), differentiate(b)),
        ),
        Expr::Div(a, b) => {
            // (a'b - ab') / b^2
            let num = Expr::sub(
                Expr::mul(differentiate(a), (**b).clone()),
                Expr::mul((**a).clone(), differentiate(b)),
            );
            Expr::div(num, Expr::powi((**b).clone(), 2))
        }
        Expr::Neg(a) => Expr::neg(differentiate(a)),
        Expr::PowInt(a, n) => {
            let outer = Expr::mul(Expr::constant(f64::from(*n), 0.0), Expr::powi((**a).clone(), n - 1));
            Expr::mul(outer, differentiate(a))
        }
        Expr::Sin(a) => Expr::mul(Expr::cos((**a).clone()), differentiate(a)),
        Expr::Cos(a) => Expr::mul(Expr::neg(Expr::sin((**a).clone())), differentiate(a)),
        Expr::Exp(a) => Expr::mul(Expr::exp((**a).clone()), differentiate(a)),
        Expr::Sinh(a) => Expr::mul(Expr::cosh((**a).clone()), differentiate(a)),
        Expr::Cosh(a) => Expr::mul(Expr::sinh((**a).clone()), differentiate(a)),
    }
}

fn fmt_complex(c: Complex64, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    // Always parenthesised so the literal reparses regardless of context.
    // `{:?}` on f64 is the shortest round-trip representation.
    if c.im == 0.0 {
        write!(f, "({:?})", c.re)
    } else if c.re == 0.0 {
        write!(f, "({:?}i)", c.im)
    } else if c.im < 0.0 {
        write!(f, "({:?}-{:?}i)", c.re, -c.im)
    } else {
        write!(f, "({:?}+{:?}i)", c.re, c.im)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Var => write!(f, "w"),
            Expr::Const(c) => fmt_complex(*c, f),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div(a, b) => write!(f, "({a} / {b})"),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::PowInt(a, n) => write!(f, "({a}^({n}))"),
            Expr::Sin(a) => write!(f, "sin({a})"),
            Expr::Cos(a) => write!(f, "cos({a})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sinh(a) => write!(f, "sinh({a})"),
            Expr::Cosh(a) => write!(f, "cosh({a})"),
        }
    }
}

/// A holomorphic function together with its symbolic derivative.
#[derive(Debug, Clone, PartialEq)]
pub struct HolomorphicFn {
    source: String,
    expr: Expr,
    deriv: Expr,
}

impl HolomorphicFn {
    pub fn parse(source: &str) -> Result<Self, ParseError> {
        let expr = parse(source)?;
        Ok(Self::from_expr_with_source(expr, source.trim().to_string()))
    }

    pub fn from_expr(expr: Expr) -> Self {
        let source = expr.to_string();
        Self::from_expr_with_source(expr, source)
    }

    fn from_expr_with_source(expr: Expr, source: String) -> Self {
        let deriv = differentiate(&expr);
        Self { source, expr, deriv }
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn deriv(&self) -> &Expr {
        &self.deriv
    }

    pub fn eval(&self, w: Complex64) -> Result<Complex64, EvalError> {
        eval(&self.expr, w)
    }

    pub fn eval_deriv(&self, w: Complex64) -> Result<Complex64, EvalError> {
        eval(&self.deriv, w)
    }

    /// The derivative as a function in its own right.
    pub fn derivative(&self) -> HolomorphicFn {
        HolomorphicFn::from_expr(self.deriv.clone())
    }
}

// ---------------------------------------------------------------------------
// lexer

#[derive(Debug, Clone, PartialEq)]
enum TokenKind {
    Real(f64),
    Imag(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Real(x) => write!(f, "number `{x}`"),
            TokenKind::Imag(x) => write!(f, "imaginary literal `{x}i`"),
            TokenKind::Ident(s) => write!(f, "identifier `{s}`"),
            TokenKind::Plus => write!(f, "`+`"),
            TokenKind::Minus => write!(f, "`-`"),
            TokenKind::Star => write!(f, "`*`"),
            TokenKind::Slash => write!(f, "`/`"),
            TokenKind::Caret => write!(f, "`^`"),
            TokenKind::LParen => write!(f, "`(`"),
            TokenKind::RParen => write!(f, "`)`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokenKind,
    offset: usize,
}

fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' | b'-' | b'*' | b'/' | b'^' | b'(' | b')' => {
                let kind = match c {
                    b'+' => TokenKind::Plus,
                    b'-' => TokenKind::Minus,
                    b'*' => TokenKind::Star,
                    b'/' => TokenKind::Slash,
                    b'^' => TokenKind::Caret,
                    b'(' => TokenKind::LParen,
                    _ => TokenKind::RParen,
                };
                out.push(Token { kind, offset: start });
                i += 1;
            }
            b'0'..=b'9' | b'.' => {
                while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                    i += 1;
                }
                // exponent part: e.g. 1e-3, 2.5E+4
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        while j < bytes.len() && bytes[j].is_ascii_digit() {
                            j += 1;
                        }
                        i = j;
                    }
                }
                let text = &src[start..i];
                let value: f64 = text.parse().map_err(|_| ParseError::Syntax {
                    offset: start,
                    message: format!("malformed number `{text}`"),
                })?;
                // `4i` is an imaginary literal, unless the `i` begins a longer identifier.
                let imag = i < bytes.len()
                    && bytes[i] == b'i'
                    && !bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_');
                if imag {
                    i += 1;
                    out.push(Token { kind: TokenKind::Imag(value), offset: start });
                } else {
                    out.push(Token { kind: TokenKind::Real(value), offset: start });
                }
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &src[start..i];
                let kind = if name == "i" { TokenKind::Imag(1.0) } else { TokenKind::Ident(name.to_string()) };
                out.push(Token { kind, offset: start });
            }
            _ => {
                let ch = src[start..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax { offset: start, message: format!("unexpected character `{ch}`") });
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// recursive-descent parser

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    len: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn offset(&self) -> usize {
        self.peek().map_or(self.len, |t| t.offset)
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::Syntax { offset: self.offset(), message: message.into() })
    }

    fn expect(&mut self, kind: TokenKind) -> Result<(), ParseError> {
        if self.eat(&kind) {
            Ok(())
        } else {
            match self.peek() {
                Some(t) => self.error(format!("expected {kind}, found {}", t.kind)),
                None => self.error(format!("expected {kind}, found end of input")),
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(&TokenKind::Plus) {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(&TokenKind::Minus) {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(&TokenKind::Star) {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat(&TokenKind::Slash) {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat(&TokenKind::Minus) {
            Ok(Expr::neg(self.unary()?))
        } else if self.eat(&TokenKind::Plus) {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.primary()?;
        if !self.eat(&TokenKind::Caret) {
            return Ok(base);
        }
        let paren = self.eat(&TokenKind::LParen);
        let n = self.integer()?;
        if paren {
            self.expect(TokenKind::RParen)?;
        }
        if self.peek().is_some_and(|t| t.kind == TokenKind::Caret) {
            return self.error("chained powers are ambiguous; use parentheses");
        }
        Ok(Expr::powi(base, n))
    }

    fn integer(&mut self) -> Result<i32, ParseError> {
        let negative = if self.eat(&TokenKind::Minus) {
            true
        } else {
            self.eat(&TokenKind::Plus);
            false
        };
        let offset = self.offset();
        match self.next().map(|t| t.kind) {
            Some(TokenKind::Real(x)) if x.fract() == 0.0 && x.abs() <= f64::from(i32::MAX) => {
                let n = x as i32;
                Ok(if negative { -n } else { n })
            }
            _ => Err(ParseError::Syntax { offset, message: "exponent must be an integer literal".into() }),
        }
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let offset = self.offset();
        let Some(tok) = self.next() else {
            return self.error("unexpected end of input");
        };
        match tok.kind {
            TokenKind::Real(x) => Ok(Expr::constant(x, 0.0)),
            TokenKind::Imag(y) => Ok(Expr::constant(0.0, y)),
            TokenKind::LParen => {
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                if name == "w" {
                    return Ok(Expr::Var);
                }
                let is_call = self.peek().is_some_and(|t| t.kind == TokenKind::LParen);
                match Func::from_name(&name) {
                    Some(func) if is_call => {
                        self.expect(TokenKind::LParen)?;
                        let arg = self.expr()?;
                        self.expect(TokenKind::RParen)?;
                        Ok(Expr::func(func, arg))
                    }
                    Some(_) => Err(ParseError::Syntax {
                        offset,
                        message: format!("function `{name}` requires a parenthesised argument"),
                    }),
                    None if is_call || REJECTED_FUNCTIONS.contains(&name.as_str()) => {
                        Err(ParseError::DisallowedFunction { name, offset })
                    }
                    None => Err(ParseError::Syntax { offset, message: format!("unknown identifier `{name}`") }),
                }
            }
            other => Err(ParseError::Syntax { offset, message: format!("unexpected {other}") }),
        }
    }
}
