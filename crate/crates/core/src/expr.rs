//! A small infix grammar for polynomials and rational expressions in `t`.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' integer)?
//! atom  := integer | identifier | '(' expr ')'
//! ```
//!
//! Rational literals are written `a/b`. Unknown identifiers are errors.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::algebra::{
    BaseField, FieldElement, FunctionField, PolyRing, RingElement, SparsePolynomial,
};
use crate::error::{Error, Result};
use crate::series::SeriesExpression;

/// Name reserved for the series variable.
pub const SERIES_VARIABLE: &str = "t";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Op(char),
    End,
}

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Int(s.parse().expect("digits")), pos));
        } else if c.is_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek().filter(|d| d.is_alphanumeric() || **d == '_') {
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Ident(s), pos));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), pos));
            chars.next();
            column += 1;
        } else {
            return Err(Error::Parse {
                line,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Int(BigInt),
    Sym(String, Pos),
    Neg(Box<Expr>),
    Bin(char, Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let p = self.pos();
        Err(Error::Parse {
            line: p.line,
            column: p.column,
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        while let Tok::Op(c @ ('+' | '-')) = *self.peek() {
            let pos = self.pos();
            self.at += 1;
            let rhs = self.term()?;
            lhs = Expr::Bin(c, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        while let Tok::Op(c @ ('*' | '/')) = *self.peek() {
            let pos = self.pos();
            self.at += 1;
            let rhs = self.unary()?;
            lhs = Expr::Bin(c, Box::new(lhs), Box::new(rhs), pos);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr> {
        match self.peek() {
            Tok::Op('-') => {
                self.at += 1;
                Ok(Expr::Neg(Box::new(self.unary()?)))
            }
            Tok::Op('+') => {
                self.at += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if *self.peek() != Tok::Op('^') {
            return Ok(base);
        }
        self.at += 1;
        match self.peek().clone() {
            Tok::Int(n) => match u32::try_from(&n) {
                Ok(e) => {
                    self.at += 1;
                    Ok(Expr::Pow(Box::new(base), e))
                }
                Err(_) => self.error("exponent too large"),
            },
            _ => self.error("expected a nonnegative integer exponent"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.at += 1;
                Ok(Expr::Int(n))
            }
            Tok::Ident(s) => {
                self.at += 1;
                Ok(Expr::Sym(s, pos))
            }
            Tok::Op('(') => {
                self.at += 1;
                let e = self.expr()?;
                if *self.peek() != Tok::Op(')') {
                    return self.error("expected `)`");
                }
                self.at += 1;
                Ok(e)
            }
            Tok::End => self.error("unexpected end of input"),
            t => self.error(format!("unexpected token {t:?}")),
        }
    }
}

fn parse_expr(src: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(src)?,
        at: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("trailing input");
    }
    Ok(e)
}

fn at(pos: Pos, message: impl Into<String>) -> Error {
    Error::Parse {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

fn eval<R: RingElement>(
    e: &Expr,
    field: BaseField,
    one: &R,
    lookup: &dyn Fn(&str) -> Option<R>,
    div: &dyn Fn(&R, &R) -> Result<R>,
) -> Result<R> {
    let rec = |x: &Expr| eval(x, field, one, lookup, div);
    Ok(match e {
        Expr::Int(n) => one.scaled(&field.from_rational(&BigRational::from_integer(n.clone()))?),
        Expr::Sym(s, pos) => lookup(s).ok_or_else(|| at(*pos, format!("unknown symbol `{s}`")))?,
        Expr::Neg(x) => rec(x)?.negated(),
        Expr::Pow(x, k) => rec(x)?.pow(*k),
        Expr::Bin(op, a, b, pos) => {
            let (a, b) = (rec(a)?, rec(b)?);
            match op {
                '+' => a.plus(&b),
                '-' => a.minus(&b),
                '*' => a.times(&b),
                '/' => div(&a, &b).map_err(|err| at(*pos, err.to_string()))?,
                _ => unreachable!(),
            }
        }
    })
}

/// Parses a polynomial in the variables of `ring`. Division is allowed only
/// by nonzero constants.
pub fn parse_polynomial(src: &str, ring: &PolyRing) -> Result<SparsePolynomial> {
    let e = parse_expr(src)?;
    let lookup = |s: &str| ring.var_index(s).map(|i| ring.var(i));
    let div = |a: &SparsePolynomial, b: &SparsePolynomial| {
        let c = b
            .as_constant()
            .ok_or_else(|| Error::InvalidInput("division by a non-constant polynomial".into()))?;
        Ok(a.scaled(&c.inv().ok_or(Error::DivisionByZero)?))
    };
    eval(&e, ring.field(), &ring.one(), &lookup, &div)
}

/// Parses an element of `k(u_1..u_m)`.
pub fn parse_field_element(src: &str, field: &FunctionField) -> Result<FieldElement> {
    let e = parse_expr(src)?;
    let lookup = |s: &str| field.transcendental_named(s).ok();
    let div = |a: &FieldElement, b: &FieldElement| a.div(b);
    eval(&e, field.base(), &field.one(), &lookup, &div)
}

/// Parses a rational expression in `t` whose coefficients may involve the
/// transcendentals of `field` and any extra named series in `symbols`.
pub fn parse_series(
    src: &str,
    field: &FunctionField,
    symbols: &HashMap<String, SeriesExpression>,
) -> Result<SeriesExpression> {
    let e = parse_expr(src)?;
    let lookup = |s: &str| {
        if s == SERIES_VARIABLE {
            return Some(SeriesExpression::t(field));
        }
        if let Some(x) = symbols.get(s) {
            return Some(x.clone());
        }
        field
            .transcendental_named(s)
            .ok()
            .map(SeriesExpression::constant)
    };
    let div = |a: &SeriesExpression, b: &SeriesExpression| a.div(b);
    eval(
        &e,
        field.base(),
        &SeriesExpression::constant(field.one()),
        &lookup,
        &div,
    )
}
