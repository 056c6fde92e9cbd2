//! Truncated power series in `t`, exact rational expressions in `t` that
//! expand to any precision, and orders of vanishing with precision
//! saturation.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{FieldElement, FunctionField, RingElement, Scalar};
use crate::error::{Error, Result};

/// Order of vanishing of a series known to some precision. `AtLeast(p)`
/// means no nonzero coefficient below `t^p` was observed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum OrderValue {
    Finite(u64),
    AtLeast(u64),
}

impl OrderValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, OrderValue::Finite(_))
    }

    pub fn finite(&self) -> Option<u64> {
        match *self {
            OrderValue::Finite(e) => Some(e),
            OrderValue::AtLeast(_) => None,
        }
    }

    /// The known lower bound (exact value when finite).
    pub fn bound(&self) -> u64 {
        match *self {
            OrderValue::Finite(e) | OrderValue::AtLeast(e) => e,
        }
    }

    pub fn min_with(self, other: OrderValue) -> OrderValue {
        use OrderValue::*;
        match (self, other) {
            (Finite(a), Finite(b)) => Finite(a.min(b)),
            (AtLeast(a), AtLeast(b)) => AtLeast(a.min(b)),
            (Finite(e), AtLeast(p)) | (AtLeast(p), Finite(e)) => {
                if e < p {
                    Finite(e)
                } else {
                    AtLeast(p)
                }
            }
        }
    }

    /// Reinterprets the value at precision `p`: finite orders at or beyond
    /// `p` are no longer observable.
    pub fn clamp(self, p: u64) -> OrderValue {
        match self {
            OrderValue::Finite(e) if e < p => OrderValue::Finite(e),
            OrderValue::Finite(_) => OrderValue::AtLeast(p),
            OrderValue::AtLeast(q) => OrderValue::AtLeast(q.min(p)),
        }
    }
}

/// Saturating sum: anything plus an `AtLeast` is an `AtLeast`.
impl std::ops::Add for OrderValue {
    type Output = OrderValue;
    fn add(self, rhs: OrderValue) -> OrderValue {
        match (self, rhs) {
            (OrderValue::Finite(a), OrderValue::Finite(b)) => OrderValue::Finite(a + b),
            (a, b) => OrderValue::AtLeast(a.bound() + b.bound()),
        }
    }
}

impl fmt::Display for OrderValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderValue::Finite(e) => write!(f, "{e}"),
            OrderValue::AtLeast(p) => write!(f, ">={p}"),
        }
    }
}

/// Coefficients `c_0..c_{P-1}` of a power series modulo `t^P`, `P >= 1`.
#[derive(Clone)]
pub struct TruncatedSeries<R = FieldElement> {
    coeffs: Vec<R>,
}

impl<R: RingElement> TruncatedSeries<R> {
    pub fn new(coeffs: Vec<R>) -> Self {
        assert!(!coeffs.is_empty(), "series precision must be at least 1");
        TruncatedSeries { coeffs }
    }

    pub fn zero(template: &R, precision: usize) -> Self {
        Self::new(vec![template.zero_like(); precision])
    }

    pub fn constant(c: R, precision: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); precision];
        coeffs[0] = c;
        Self::new(coeffs)
    }

    /// `c * t^k` to the given precision.
    pub fn monomial(c: R, k: usize, precision: usize) -> Self {
        let mut coeffs = vec![c.zero_like(); precision];
        if k < precision {
            coeffs[k] = c;
        }
        Self::new(coeffs)
    }

    /// Pads with zeros or truncates to exactly `precision` coefficients.
    pub fn from_coeffs(mut coeffs: Vec<R>, precision: usize, template: &R) -> Self {
        coeffs.resize(precision, template.zero_like());
        Self::new(coeffs)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> &R {
        &self.coeffs[i]
    }

    pub fn coefficients(&self) -> &[R] {
        &self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<R> {
        self.coeffs
    }

    pub fn order(&self) -> OrderValue {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(i) => OrderValue::Finite(i as u64),
            None => OrderValue::AtLeast(self.precision() as u64),
        }
    }

    pub fn truncated(&self, precision: usize) -> Self {
        assert!(precision >= 1 && precision <= self.precision());
        Self::new(self.coeffs[..precision].to_vec())
    }

    /// Division by `t^e`, which must divide the series; the precision drops
    /// by `e`.
    pub fn shift_down(&self, e: usize) -> Self {
        assert!(e < self.precision(), "shift beyond precision");
        debug_assert!(self.coeffs[..e].iter().all(R::is_zero));
        Self::new(self.coeffs[e..].to_vec())
    }

    /// Multiplication by `t^e`; the precision grows by `e`.
    pub fn shift_up(&self, e: usize) -> Self {
        let mut coeffs = vec![self.coeffs[0].zero_like(); e];
        coeffs.extend(self.coeffs.iter().cloned());
        Self::new(coeffs)
    }

    pub fn map<S: RingElement>(&self, f: impl Fn(&R) -> S) -> TruncatedSeries<S> {
        TruncatedSeries::new(self.coeffs.iter().map(f).collect())
    }
}

impl TruncatedSeries<FieldElement> {
    /// Inverse of a unit series.
    pub fn invert(&self) -> Result<Self> {
        let ord = self.order();
        if ord != OrderValue::Finite(0) {
            return Err(Error::NotAUnit(ord));
        }
        let p = self.precision();
        let inv0 = self.coeffs[0].inv()?;
        let mut out: Vec<FieldElement> = Vec::with_capacity(p);
        out.push(inv0.clone());
        for k in 1..p {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                if !self.coeffs[j].is_zero() && !out[k - j].is_zero() {
                    acc = acc.plus(&self.coeffs[j].times(&out[k - j]));
                }
            }
            out.push(acc.times(&inv0).negated());
        }
        Ok(Self::new(out))
    }
}

impl<R: RingElement> RingElement for TruncatedSeries<R> {
    fn zero_like(&self) -> Self {
        Self::zero(&self.coeffs[0], self.precision())
    }

    fn one_like(&self) -> Self {
        Self::constant(self.coeffs[0].one_like(), self.precision())
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(R::is_zero)
    }

    fn plus(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        Self::new(
            (0..p)
                .map(|i| self.coeffs[i].plus(&rhs.coeffs[i]))
                .collect(),
        )
    }

    fn minus(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        Self::new(
            (0..p)
                .map(|i| self.coeffs[i].minus(&rhs.coeffs[i]))
                .collect(),
        )
    }

    fn times(&self, rhs: &Self) -> Self {
        let p = self.precision().min(rhs.precision());
        let mut out: Vec<R> = vec![self.coeffs[0].zero_like(); p];
        for (i, a) in self.coeffs[..p].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..p - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = out[i + j].plus(&a.times(b));
                }
            }
        }
        Self::new(out)
    }

    fn negated(&self) -> Self {
        self.map(R::negated)
    }

    fn scaled(&self, c: &Scalar) -> Self {
        self.map(|x| x.scaled(c))
    }
}

impl<R: RingElement + PartialEq> PartialEq for TruncatedSeries<R> {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl<R: RingElement + fmt::Display> fmt::Display for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(t^{})", self.precision())
    }
}

impl<R: RingElement> fmt::Debug for TruncatedSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesOp {
    Add,
    Sub,
    Mul,
}

pub fn series_arith<R: RingElement>(
    a: &TruncatedSeries<R>,
    b: &TruncatedSeries<R>,
    op: SeriesOp,
) -> TruncatedSeries<R> {
    match op {
        SeriesOp::Add => a.plus(b),
        SeriesOp::Sub => a.minus(b),
        SeriesOp::Mul => a.times(b),
    }
}

fn trim(mut p: Vec<FieldElement>) -> Vec<FieldElement> {
    while p.last().is_some_and(RingElement::is_zero) {
        p.pop();
    }
    p
}

fn poly_add(a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) => x.plus(y),
                (Some(x), None) | (None, Some(x)) => x.clone(),
                (None, None) => unreachable!(),
            })
            .collect(),
    )
}

fn poly_mul(a: &[FieldElement], b: &[FieldElement], zero: &FieldElement) -> Vec<FieldElement> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].plus(&x.times(y));
            }
        }
    }
    trim(out)
}

/// `numerator(t) / denominator(t)` with polynomial numerator and
/// denominator over `k(u)`, the denominator having nonzero constant term.
#[derive(Clone)]
pub struct SeriesExpression {
    field: FunctionField,
    num: Vec<FieldElement>,
    den: Vec<FieldElement>,
}

impl SeriesExpression {
    /// Builds `num / den` from coefficient lists (index = power of `t`).
    /// Common factors of `t` are cancelled first.
    pub fn new(
        field: &FunctionField,
        num: Vec<FieldElement>,
        den: Vec<FieldElement>,
    ) -> Result<Self> {
        let mut num = trim(num);
        let mut den = trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        while den[0].is_zero() {
            if num.first().is_some_and(|c| !c.is_zero()) {
                return Err(Error::DenominatorNotUnit);
            }
            den.remove(0);
            if !num.is_empty() {
                num.remove(0);
            }
        }
        Ok(SeriesExpression {
            field: field.clone(),
            num,
            den,
        })
    }

    pub fn polynomial(field: &FunctionField, coeffs: Vec<FieldElement>) -> Self {
        SeriesExpression {
            field: field.clone(),
            num: trim(coeffs),
            den: vec![field.one()],
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field();
        Self::polynomial(&field, vec![c])
    }

    pub fn t(field: &FunctionField) -> Self {
        Self::polynomial(field, vec![field.zero(), field.one()])
    }

    pub fn field(&self) -> &FunctionField {
        &self.field
    }

    pub fn numerator(&self) -> &[FieldElement] {
        &self.num
    }

    pub fn denominator(&self) -> &[FieldElement] {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.len() == 1 && self.den[0].as_scalar().is_some()
    }

    /// First `precision` coefficients of the power-series expansion.
    pub fn expand(&self, precision: usize) -> Result<TruncatedSeries> {
        assert!(precision >= 1, "precision must be at least 1");
        let zero = self.field.zero();
        if self.den.first().is_none_or(RingElement::is_zero) {
            return Err(Error::DenominatorNotUnit);
        }
        let inv0 = self.den[0].inv()?;
        let unit_lead = inv0 == self.field.one();
        let mut out: Vec<FieldElement> = Vec::with_capacity(precision);
        for k in 0..precision {
            let mut acc = self.num.get(k).cloned().unwrap_or_else(|| zero.clone());
            for j in 1..self.den.len().min(k + 1) {
                if !self.den[j].is_zero() && !out[k - j].is_zero() {
                    acc = acc.minus(&self.den[j].times(&out[k - j]));
                }
            }
            out.push(if unit_lead { acc } else { acc.times(&inv0) });
        }
        Ok(TruncatedSeries::new(out))
    }

    pub fn div(&self, rhs: &SeriesExpression) -> Result<SeriesExpression> {
        let zero = self.field.zero();
        Self::new(
            &self.field,
            poly_mul(&self.num, &rhs.den, &zero),
            poly_mul(&self.den, &rhs.num, &zero),
        )
    }

    fn combine(&self, rhs: &SeriesExpression, negate: bool) -> SeriesExpression {
        let zero = self.field.zero();
        let rnum: Vec<FieldElement> = if negate {
            rhs.num.iter().map(RingElement::negated).collect()
        } else {
            rhs.num.clone()
        };
        if self.den == rhs.den {
            return SeriesExpression {
                field: self.field.clone(),
                num: poly_add(&self.num, &rnum),
                den: self.den.clone(),
            };
        }
        SeriesExpression {
            field: self.field.clone(),
            num: poly_add(
                &poly_mul(&self.num, &rhs.den, &zero),
                &poly_mul(&rnum, &self.den, &zero),
            ),
            den: poly_mul(&self.den, &rhs.den, &zero),
        }
    }
}

impl RingElement for SeriesExpression {
    fn zero_like(&self) -> Self {
        Self::polynomial(&self.field, Vec::new())
    }

    fn one_like(&self) -> Self {
        Self::polynomial(&self.field, vec![self.field.one()])
    }

    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self.combine(rhs, false)
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.combine(rhs, true)
    }

    fn times(&self, rhs: &Self) -> Self {
        let zero = self.field.zero();
        let den = if rhs.is_polynomial() && rhs.den[0] == self.field.one() {
            self.den.clone()
        } else if self.is_polynomial() && self.den[0] == self.field.one() {
            rhs.den.clone()
        } else {
            poly_mul(&self.den, &rhs.den, &zero)
        };
        SeriesExpression {
            field: self.field.clone(),
            num: poly_mul(&self.num, &rhs.num, &zero),
            den,
        }
    }

    fn negated(&self) -> Self {
        SeriesExpression {
            field: self.field.clone(),
            num: self.num.iter().map(RingElement::negated).collect(),
            den: self.den.clone(),
        }
    }

    fn scaled(&self, c: &Scalar) -> Self {
        SeriesExpression {
            field: self.field.clone(),
            num: trim(self.num.iter().map(|x| x.scaled(c)).collect()),
            den: self.den.clone(),
        }
    }
}

fn fmt_t_poly(p: &[FieldElement]) -> String {
    let terms: Vec<String> = p
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| {
            let c = c.to_string();
            let c = if c.contains([' ', '/']) {
                format!("({c})")
            } else {
                c
            };
            let tp = match i {
                0 => return c,
                1 => "t".to_string(),
                _ => format!("t^{i}"),
            };
            match c.as_str() {
                "1" => tp,
                "-1" => format!("-{tp}"),
                _ => format!("{c}*{tp}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

impl fmt::Display for SeriesExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 && self.den[0] == self.field.one() {
            write!(f, "{}", fmt_t_poly(&self.num))
        } else {
            write!(f, "({})/({})", fmt_t_poly(&self.num), fmt_t_poly(&self.den))
        }
    }
}

impl fmt::Debug for SeriesExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub fn expand(e: &SeriesExpression, precision: usize) -> Result<TruncatedSeries> {
    e.expand(precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BaseField;

    fn q() -> FunctionField {
        FunctionField::constants(BaseField::Rationals)
    }

    fn ints(k: &FunctionField, cs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::new(cs.iter().map(|&c| k.from_int(c)).collect())
    }

    #[test]
    fn arithmetic_examples() {
        let k = q();
        let a = ints(&k, &[1, 1, 0]);
        let b = ints(&k, &[1, -1, 0]);
        assert_eq!(series_arith(&a, &b, SeriesOp::Mul), ints(&k, &[1, 0, -1]));
        // t^2 + t^3 at precision 3 keeps only t^2
        let t2 = TruncatedSeries::monomial(k.one(), 2, 3);
        let t3 = TruncatedSeries::monomial(k.one(), 3, 3);
        assert_eq!(t2.plus(&t3), ints(&k, &[0, 0, 1]));

        let kk = FunctionField::new(BaseField::Rationals, ["u1", "u2"]);
        let a = TruncatedSeries::monomial(kk.transcendental(0), 1, 4);
        let b = TruncatedSeries::monomial(kk.transcendental(1), 1, 4);
        let prod = a.times(&b);
        assert_eq!(
            *prod.coeff(2),
            &kk.transcendental(0) * &kk.transcendental(1)
        );
        assert_eq!(prod.order(), OrderValue::Finite(2));
    }

    #[test]
    fn inversion_examples() {
        let k = q();
        assert_eq!(
            ints(&k, &[1, -1, 0]).invert().unwrap(),
            ints(&k, &[1, 1, 1])
        );
        let two = ints(&k, &[2, 0]).invert().unwrap();
        assert_eq!(two.coeff(0).to_string(), "1/2");
        assert_eq!(
            ints(&k, &[0, 1, 0]).invert().unwrap_err(),
            Error::NotAUnit(OrderValue::Finite(1))
        );
    }

    #[test]
    fn expansion_examples() {
        let k = q();
        let geo = SeriesExpression::new(&k, vec![k.one()], vec![k.one(), k.from_int(-1)]).unwrap();
        assert_eq!(geo.expand(4).unwrap(), ints(&k, &[1, 1, 1, 1]));
        let t2 = SeriesExpression::polynomial(&k, vec![k.zero(), k.zero(), k.one()]);
        let e = t2.expand(2).unwrap();
        assert_eq!(e.order(), OrderValue::AtLeast(2));
        // (t + t^2)/(1 + t) = t by long division
        let e = SeriesExpression::new(&k, vec![k.zero(), k.one(), k.one()], vec![k.one(), k.one()])
            .unwrap();
        assert_eq!(e.expand(5).unwrap(), ints(&k, &[0, 1, 0, 0, 0]));
        assert_eq!(
            SeriesExpression::new(&k, vec![k.one()], vec![k.zero(), k.one()]).unwrap_err(),
            Error::DenominatorNotUnit
        );
        // t^2 / t cancels
        let e = SeriesExpression::new(
            &k,
            vec![k.zero(), k.zero(), k.one()],
            vec![k.zero(), k.one()],
        )
        .unwrap();
        assert_eq!(e.expand(3).unwrap(), ints(&k, &[0, 1, 0]));
    }

    #[test]
    fn order_examples() {
        let k = q();
        assert_eq!(ints(&k, &[0, 0, 0, 2, 1, 0]).order(), OrderValue::Finite(3));
        assert_eq!(ints(&k, &[0; 6]).order(), OrderValue::AtLeast(6));
        let kk = FunctionField::new(BaseField::Rationals, ["u1"]);
        let a = TruncatedSeries::monomial(kk.transcendental(0), 1, 2);
        assert_eq!(a.minus(&a).order(), OrderValue::AtLeast(2));
    }

    #[test]
    fn order_value_algebra() {
        use OrderValue::*;
        assert_eq!(Finite(2) + AtLeast(5), AtLeast(7));
        assert_eq!(Finite(2).min_with(AtLeast(5)), Finite(2));
        assert_eq!(Finite(7).min_with(AtLeast(5)), AtLeast(5));
        assert_eq!(Finite(7).clamp(5), AtLeast(5));
        assert_eq!(Finite(3).to_string(), "3");
        assert_eq!(AtLeast(24).to_string(), ">=24");
    }
}
