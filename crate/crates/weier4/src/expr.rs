//! Holomorphic-expression parser: turns source text like `exp(-z)` or
//! `(z^2+1)/(z-2)` into a truncated power series around a chosen base point.
//!
//! Grammar, lowest precedence first:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := 'z' | number | func '(' expr ')' | '(' expr ')'
//! func   := 'exp' | 'cosh' | 'sinh' | 'log'
//! ```
//!
//! Numbers are decimal with optional fraction and exponent (`1.5e-3`) and an
//! optional trailing `i` marking an imaginary literal; `re+im i` values such
//! as `1+2i` fall out of the addition rule. Whitespace is insignificant.
//! Exponents of `^` must be integers with magnitude at most 16.

use std::fmt;

use num_complex::Complex64;
use weier4_core::TaylorSeries;

/// Why a source string failed to become a series. Offsets are byte
/// positions into the original source.
#[derive(Debug)]
pub enum ParseError {
    Syntax { offset: usize },
    UnknownIdentifier { offset: usize, name: String },
    /// The text parsed, but expanding it as a series failed (for example
    /// division by an expression that vanishes at the base point).
    Expand(weier4_core::Error),
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseError::Syntax { offset } => write!(f, "syntax error at byte {offset}"),
            ParseError::UnknownIdentifier { offset, name } => {
                write!(f, "unknown identifier `{name}` at byte {offset}")
            }
            ParseError::Expand(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ParseError {}

const MAX_POW: i64 = 16;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num { value: f64, imaginary: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let bytes = src.as_bytes();
    let mut toks = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        let start = i;
        match b {
            b' ' | b'\t' | b'\r' | b'\n' => {
                i += 1;
            }
            b'+' => {
                toks.push((start, Tok::Plus));
                i += 1;
            }
            b'-' => {
                toks.push((start, Tok::Minus));
                i += 1;
            }
            b'*' => {
                toks.push((start, Tok::Star));
                i += 1;
            }
            b'/' => {
                toks.push((start, Tok::Slash));
                i += 1;
            }
            b'^' => {
                toks.push((start, Tok::Caret));
                i += 1;
            }
            b'(' => {
                toks.push((start, Tok::LParen));
                i += 1;
            }
            b')' => {
                toks.push((start, Tok::RParen));
                i += 1;
            }
            b'0'..=b'9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'.' {
                    i += 1;
                    if i >= bytes.len() || !bytes[i].is_ascii_digit() {
                        return Err(ParseError::Syntax { offset: i.min(bytes.len()) });
                    }
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                }
                // Exponent marker only counts when digits follow; `2e` keeps
                // the `e` as a separate (unknown) identifier.
                if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                    let mut j = i + 1;
                    if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                        j += 1;
                    }
                    if j < bytes.len() && bytes[j].is_ascii_digit() {
                        i = j;
                        while i < bytes.len() && bytes[i].is_ascii_digit() {
                            i += 1;
                        }
                    }
                }
                let text = &src[start..i];
                let value: f64 = text
                    .parse()
                    .map_err(|_| ParseError::Syntax { offset: start })?;
                let imaginary = i < bytes.len() && bytes[i] == b'i';
                if imaginary {
                    i += 1;
                }
                toks.push((start, Tok::Num { value, imaginary }));
            }
            b'a'..=b'z' | b'A'..=b'Z' | b'_' => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_')
                {
                    i += 1;
                }
                toks.push((start, Tok::Ident(src[start..i].to_string())));
            }
            _ => return Err(ParseError::Syntax { offset: start }),
        }
    }
    Ok(toks)
}

#[derive(Debug, Clone)]
enum Ast {
    Z,
    Lit(Complex64),
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
    Call(Func, Box<Ast>),
}

#[derive(Debug, Clone, Copy)]
enum Func {
    Exp,
    Cosh,
    Sinh,
    Log,
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    /// Byte length of the source, reported as the offset of "unexpected end".
    end: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(o, _)| *o)
    }

    fn bump(&mut self) -> Option<&Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        if self.peek() == Some(want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::Syntax { offset: self.offset() })
        }
    }

    fn parse_expr(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Ast::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.parse_term()?;
                    lhs = Ast::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Ast, ParseError> {
        let mut lhs = self.parse_unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Ast::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(Tok::Slash) => {
                    self.pos += 1;
                    let rhs = self.parse_unary()?;
                    lhs = Ast::Div(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_unary(&mut self) -> Result<Ast, ParseError> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let inner = self.parse_unary()?;
            Ok(Ast::Neg(Box::new(inner)))
        } else {
            self.parse_power()
        }
    }

    fn parse_power(&mut self) -> Result<Ast, ParseError> {
        let base = self.parse_atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num { value, imaginary: false }) => {
                let value = *value;
                if value.fract() != 0.0 || !value.is_finite() || value.abs() > MAX_POW as f64 {
                    return Err(ParseError::Syntax { offset });
                }
                let mut n = value as i32;
                if negative {
                    n = -n;
                }
                Ok(Ast::Pow(Box::new(base), n))
            }
            _ => Err(ParseError::Syntax { offset }),
        }
    }

    fn parse_atom(&mut self) -> Result<Ast, ParseError> {
        let offset = self.offset();
        match self.bump() {
            Some(Tok::Num { value, imaginary }) => {
                let c = if *imaginary {
                    Complex64::new(0.0, *value)
                } else {
                    Complex64::new(*value, 0.0)
                };
                Ok(Ast::Lit(c))
            }
            Some(Tok::Ident(name)) => {
                let name = name.clone();
                if name == "z" {
                    return Ok(Ast::Z);
                }
                let func = match name.as_str() {
                    "exp" => Func::Exp,
                    "cosh" => Func::Cosh,
                    "sinh" => Func::Sinh,
                    "log" => Func::Log,
                    _ => return Err(ParseError::UnknownIdentifier { offset, name }),
                };
                self.expect(&Tok::LParen)?;
                let arg = self.parse_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(Ast::Call(func, Box::new(arg)))
            }
            Some(Tok::LParen) => {
                let inner = self.parse_expr()?;
                self.expect(&Tok::RParen)?;
                Ok(inner)
            }
            _ => Err(ParseError::Syntax { offset }),
        }
    }
}

fn expand(ast: &Ast, base: Complex64, order: usize) -> Result<TaylorSeries, weier4_core::Error> {
    match ast {
        Ast::Z => Ok(TaylorSeries::variable(base, order)),
        Ast::Lit(c) => Ok(TaylorSeries::constant(base, *c, order)),
        Ast::Neg(a) => Ok(expand(a, base, order)?.neg()),
        Ast::Add(a, b) => expand(a, base, order)?.add(&expand(b, base, order)?),
        Ast::Sub(a, b) => expand(a, base, order)?.sub(&expand(b, base, order)?),
        Ast::Mul(a, b) => expand(a, base, order)?.mul(&expand(b, base, order)?),
        Ast::Div(a, b) => expand(a, base, order)?.div(&expand(b, base, order)?),
        Ast::Pow(a, n) => expand(a, base, order)?.powi(*n),
        Ast::Call(func, a) => {
            let arg = expand(a, base, order)?;
            match func {
                Func::Exp => Ok(arg.exp()),
                Func::Cosh => Ok(arg.cosh()),
                Func::Sinh => Ok(arg.sinh()),
                Func::Log => arg.log(),
            }
        }
    }
}

/// Parse `src` and expand it as a power series of the given order around
/// `base`. The order counts derivatives: the result has `order + 1`
/// coefficients.
pub fn parse_holo(src: &str, base: Complex64, order: usize) -> Result<TaylorSeries, ParseError> {
    let toks = tokenize(src)?;
    let mut parser = Parser { toks: &toks, pos: 0, end: src.len() };
    let ast = parser.parse_expr()?;
    if parser.pos != parser.toks.len() {
        return Err(ParseError::Syntax { offset: parser.offset() });
    }
    expand(&ast, base, order).map_err(ParseError::Expand)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn zero() -> Complex64 {
        Complex64::new(0.0, 0.0)
    }

    #[test]
    fn exponential_series_coefficients() {
        let s = parse_holo("exp(-z)", zero(), 4).unwrap();
        let expect = [1.0, -1.0, 0.5, -1.0 / 6.0, 1.0 / 24.0];
        assert_eq!(s.coeffs().len(), 5);
        for (k, &e) in expect.iter().enumerate() {
            assert_relative_eq!(s.coeff(k).re, e, max_relative = 1e-15);
            assert_relative_eq!(s.coeff(k).im, 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn rational_expression_expands() {
        let s = parse_holo("(z^2+1)/(z-2)", zero(), 16).unwrap();
        // Compare against direct evaluation of the rational function; the
        // order-16 truncation error at |t| ~ 0.11 is far below 1e-10.
        let t = Complex64::new(0.1, 0.05);
        let exact = (t * t + 1.0) / (t - 2.0);
        let got = s.evaluate(t).unwrap();
        assert_relative_eq!(got.re, exact.re, max_relative = 1e-10);
        assert_relative_eq!(got.im, exact.im, max_relative = 1e-10);
    }

    #[test]
    fn unterminated_call_reports_offset() {
        match parse_holo("exp(", zero(), 4) {
            Err(ParseError::Syntax { offset }) => assert_eq!(offset, 4),
            other => panic!("expected syntax error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_identifier_reports_name_and_offset() {
        match parse_holo("2*tan(z)", zero(), 4) {
            Err(ParseError::UnknownIdentifier { offset, name }) => {
                assert_eq!(offset, 2);
                assert_eq!(name, "tan");
            }
            other => panic!("expected unknown identifier, got {other:?}"),
        }
    }

    #[test]
    fn division_by_vanishing_constant_term_fails() {
        match parse_holo("1/z", zero(), 4) {
            Err(ParseError::Expand(weier4_core::Error::DivisionByZeroConstantTerm)) => {}
            other => panic!("expected expansion failure, got {other:?}"),
        }
    }

    #[test]
    fn complex_literals_combine() {
        let s = parse_holo("1+2i", zero(), 2).unwrap();
        assert_relative_eq!(s.coeff(0).re, 1.0, epsilon = 1e-15);
        assert_relative_eq!(s.coeff(0).im, 2.0, epsilon = 1e-15);
        let s = parse_holo("2.5i*z", zero(), 2).unwrap();
        assert_relative_eq!(s.coeff(1).im, 2.5, epsilon = 1e-15);
        let s = parse_holo("1.5e-1", zero(), 1).unwrap();
        assert_relative_eq!(s.coeff(0).re, 0.15, epsilon = 1e-15);
    }

    #[test]
    fn unary_minus_binds_below_power() {
        // -z^2 means -(z^2): coefficient of z^2 is -1.
        let s = parse_holo("-z^2", zero(), 4).unwrap();
        assert_relative_eq!(s.coeff(2).re, -1.0, epsilon = 1e-15);
        // Negative exponents go through the reciprocal route.
        let s = parse_holo("(1+z)^-2", zero(), 24).unwrap();
        let t = Complex64::new(0.2, -0.1);
        let exact = ((Complex64::new(1.0, 0.0) + t) * (Complex64::new(1.0, 0.0) + t))
            .finv();
        let got = s.evaluate(t).unwrap();
        assert_relative_eq!(got.re, exact.re, max_relative = 1e-9);
        assert_relative_eq!(got.im, exact.im, max_relative = 1e-9);
    }

    #[test]
    fn power_magnitude_is_capped() {
        assert!(matches!(
            parse_holo("z^17", zero(), 4),
            Err(ParseError::Syntax { offset: 2 })
        ));
        assert!(parse_holo("z^16", zero(), 20).is_ok());
        // Fractional and imaginary exponents are rejected.
        assert!(matches!(
            parse_holo("z^1.5", zero(), 4),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_holo("z^2i", zero(), 4),
            Err(ParseError::Syntax { .. })
        ));
    }

    #[test]
    fn stray_tokens_rejected() {
        assert!(matches!(
            parse_holo("", zero(), 4),
            Err(ParseError::Syntax { offset: 0 })
        ));
        assert!(matches!(
            parse_holo("z z", zero(), 4),
            Err(ParseError::Syntax { offset: 2 })
        ));
        assert!(matches!(
            parse_holo("1..2", zero(), 4),
            Err(ParseError::Syntax { .. })
        ));
        assert!(matches!(
            parse_holo("z @ 2", zero(), 4),
            Err(ParseError::Syntax { offset: 2 })
        ));
    }

    #[test]
    fn whitespace_is_insignificant() {
        let a = parse_holo("exp( - z )", zero(), 6).unwrap();
        let b = parse_holo("exp(-z)", zero(), 6).unwrap();
        assert!(a.max_coeff_distance(&b) < 1e-15);
    }

    #[test]
    fn nonzero_base_point() {
        let base = Complex64::new(0.5, -0.25);
        let s = parse_holo("z^2", base, 4).unwrap();
        let got = s.evaluate(base + Complex64::new(0.01, 0.02)).unwrap();
        let t = base + Complex64::new(0.01, 0.02);
        let exact = t * t;
        assert_relative_eq!(got.re, exact.re, max_relative = 1e-12);
        assert_relative_eq!(got.im, exact.im, max_relative = 1e-12);
    }
}
