//! Rational functions in transcendentals `u_1..u_m` over a base field, kept
//! as unreduced fractions of polynomials.

use std::fmt;

use super::{BaseField, Monomial, PolyRing, RingElement, Scalar, SparsePolynomial};
use crate::error::{Error, Result};

/// The field `k(u_1..u_m)`; with `m = 0` this is just `k`.
#[derive(Clone, PartialEq, Eq)]
pub struct FunctionField {
    ring: PolyRing,
}

impl FunctionField {
    pub fn new<S: Into<String>>(
        base: BaseField,
        transcendentals: impl IntoIterator<Item = S>,
    ) -> Self {
        FunctionField {
            ring: PolyRing::new(base, transcendentals),
        }
    }

    /// The ground field itself, without transcendentals.
    pub fn constants(base: BaseField) -> Self {
        Self::new::<String>(base, [])
    }

    pub fn base(&self) -> BaseField {
        self.ring.field()
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn transcendentals(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::from_poly(self.ring.zero())
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::from_poly(self.ring.one())
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement::from_poly(self.ring.from_int(n))
    }

    pub fn constant(&self, c: Scalar) -> FieldElement {
        FieldElement::from_poly(self.ring.constant(c))
    }

    pub fn transcendental(&self, index: usize) -> FieldElement {
        FieldElement::from_poly(self.ring.var(index))
    }

    pub fn transcendental_named(&self, name: &str) -> Result<FieldElement> {
        self.ring.var_named(name).map(FieldElement::from_poly)
    }
}

impl fmt::Debug for FunctionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.ring)
    }
}

/// `numerator / denominator` with a nonzero denominator. Equality is by
/// cross-multiplication; no gcd reduction is attempted.
#[derive(Clone)]
pub struct FieldElement {
    num: SparsePolynomial,
    den: SparsePolynomial,
}

impl FieldElement {
    pub fn from_poly(num: SparsePolynomial) -> Self {
        let den = num.ring().one();
        FieldElement { num, den }
    }

    pub fn new(num: SparsePolynomial, den: SparsePolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement { num, den }.normalized())
    }

    pub fn numerator(&self) -> &SparsePolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &SparsePolynomial {
        &self.den
    }

    pub fn field(&self) -> FunctionField {
        FunctionField {
            ring: self.num.ring().clone(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    /// Value as a ground-field scalar, when there is no dependence on the
    /// transcendentals.
    pub fn as_scalar(&self) -> Option<Scalar> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(&n * &d.inv()?)
    }

    pub fn has_unit_denominator(&self) -> bool {
        self.den.is_one()
    }

    /// Cheap normal form: constant denominators are folded into the
    /// numerator and common monomial factors cancelled.
    fn normalized(mut self) -> Self {
        if self.num.is_zero() {
            self.den = self.num.ring().one();
            return self;
        }
        if self.den.is_one() {
            return self;
        }
        if let Some(c) = self.den.as_constant() {
            let inv = c.inv().expect("nonzero denominator");
            self.num = self.num.scaled(&inv);
            self.den = self.num.ring().one();
            return self;
        }
        let g = self
            .num
            .monomial_content()
            .gcd(&self.den.monomial_content());
        if !g.is_one() {
            self.num = self.num.div_monomial(&g);
            self.den = self.den.div_monomial(&g);
        }
        if let Some(c) = self.den.as_constant() {
            let inv = c.inv().expect("nonzero denominator");
            self.num = self.num.scaled(&inv);
            self.den = self.num.ring().one();
        } else if let Some(lc) = self.den.leading_coefficient().cloned() {
            if !lc.is_one() {
                let inv = lc.inv().expect("nonzero");
                self.num = self.num.scaled(&inv);
                self.den = self.den.scaled(&inv);
            }
        }
        if self.num == self.den {
            return FieldElement::from_poly(self.num.ring().one());
        }
        self
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.num.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(FieldElement {
            num: self.den.clone(),
            den: self.num.clone(),
        }
        .normalized())
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self.times(&rhs.inv()?))
    }

    /// Partial derivative with respect to the `var`-th transcendental.
    pub fn derivative(&self, var: usize) -> FieldElement {
        let dn = self.num.derivative(var);
        if self.den.is_one() {
            return FieldElement::from_poly(dn);
        }
        let dd = self.den.derivative(var);
        if dd.is_zero() {
            return FieldElement {
                num: dn,
                den: self.den.clone(),
            }
            .normalized();
        }
        let num = &(&dn * &self.den) - &(&self.num * &dd);
        FieldElement {
            num,
            den: &self.den * &self.den,
        }
        .normalized()
    }

    /// Variables occurring in numerator or denominator.
    pub fn support(&self) -> Vec<usize> {
        let mut s = self.num.support();
        s.extend(self.den.support());
        s.sort_unstable();
        s.dedup();
        s
    }

    /// A rough size measure used for pivot selection.
    pub fn cost(&self) -> (usize, u32) {
        (
            self.num.num_terms() + self.den.num_terms(),
            self.num.total_degree() + self.den.total_degree(),
        )
    }

    pub fn monomial_factor(&self) -> Monomial {
        self.num.monomial_content()
    }
}

impl RingElement for FieldElement {
    fn zero_like(&self) -> Self {
        FieldElement::from_poly(self.num.zero_like())
    }

    fn one_like(&self) -> Self {
        FieldElement::from_poly(self.num.one_like())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        if self.den == rhs.den {
            return FieldElement {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
            .normalized();
        }
        FieldElement {
            num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            den: &self.den * &rhs.den,
        }
        .normalized()
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negated())
    }

    fn times(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return self.zero_like();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return FieldElement::from_poly(&self.num * &rhs.num);
        }
        FieldElement {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }

    fn negated(&self) -> Self {
        FieldElement {
            num: self.num.negated(),
            den: self.den.clone(),
        }
    }

    fn scaled(&self, c: &Scalar) -> Self {
        FieldElement {
            num: self.num.scaled(c),
            den: self.den.clone(),
        }
        .normalized()
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let wrap = |p: &SparsePolynomial| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! fe_op {
    ($trait:ident, $method:ident, $via:ident) => {
        impl std::ops::$trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: Self) -> FieldElement {
                self.$via(rhs)
            }
        }
    };
}

fe_op!(Add, add, plus);
fe_op!(Sub, sub, minus);
fe_op!(Mul, mul, times);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.negated()
    }
}

/// Binary field operations, as a single entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn fe_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => Ok(a.plus(b)),
        FieldOp::Sub => Ok(a.minus(b)),
        FieldOp::Mul => Ok(a.times(b)),
        FieldOp::Div => a.div(b),
    }
}
