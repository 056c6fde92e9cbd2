//! Sparse multivariate polynomials over a [`BaseField`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use smallvec::SmallVec;

use super::{BaseField, RingElement, Scalar};
use crate::error::{Error, Result};

/// A power product, stored sparsely as `(variable index, exponent)` pairs
/// sorted by index with no zero exponents.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(SmallVec<[(u32, u32); 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Self {
        let mut m = SmallVec::new();
        if exp > 0 {
            m.push((index as u32, exp));
        }
        Monomial(m)
    }

    /// Builds a monomial from a dense exponent vector.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i as u32, e))
                .collect(),
        )
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.0
            .iter()
            .find(|&&(v, _)| v as usize == var)
            .map_or(0, |&(_, e)| e)
    }

    pub fn factors(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|&(v, e)| (v as usize, e))
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        let mut out = vec![0; nvars];
        for &(v, e) in &self.0 {
            out[v as usize] = e;
        }
        out
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = SmallVec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Largest monomial dividing both.
    pub fn gcd(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let f = other.degree_in(v as usize);
                    (f > 0).then_some((v, e.min(f)))
                })
                .collect(),
        )
    }

    /// `self / other`, assuming `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Monomial {
        Monomial(
            self.0
                .iter()
                .filter_map(|&(v, e)| {
                    let r = e - other.degree_in(v as usize);
                    (r > 0).then_some((v, r))
                })
                .collect(),
        )
    }

    /// `(exponent of var, monomial with that exponent lowered by one)`.
    fn lower(&self, var: usize) -> Option<(u32, Monomial)> {
        let e = self.degree_in(var);
        if e == 0 {
            return None;
        }
        let lowered = Monomial(
            self.0
                .iter()
                .filter_map(|&(v, x)| {
                    if v as usize == var {
                        (x > 1).then_some((v, x - 1))
                    } else {
                        Some((v, x))
                    }
                })
                .collect(),
        );
        Some((e, lowered))
    }
}

struct RingData {
    field: BaseField,
    vars: Vec<String>,
}

/// The polynomial ring `k[v_1..v_n]` a polynomial lives in.
#[derive(Clone)]
pub struct PolyRing(Arc<RingData>);

impl PolyRing {
    pub fn new<S: Into<String>>(field: BaseField, vars: impl IntoIterator<Item = S>) -> Self {
        PolyRing(Arc::new(RingData {
            field,
            vars: vars.into_iter().map(Into::into).collect(),
        }))
    }

    pub fn field(&self) -> BaseField {
        self.0.field
    }

    pub fn vars(&self) -> &[String] {
        &self.0.vars
    }

    pub fn nvars(&self) -> usize {
        self.0.vars.len()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.0.vars.iter().position(|v| v == name)
    }

    pub fn zero(&self) -> SparsePolynomial {
        SparsePolynomial {
            ring: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> SparsePolynomial {
        self.constant(self.field().one())
    }

    pub fn constant(&self, c: Scalar) -> SparsePolynomial {
        self.term(c, Monomial::one())
    }

    pub fn from_int(&self, n: i64) -> SparsePolynomial {
        self.constant(self.field().from_int(n))
    }

    pub fn var(&self, index: usize) -> SparsePolynomial {
        assert!(index < self.nvars(), "variable index out of range");
        self.term(self.field().one(), Monomial::var(index))
    }

    pub fn var_named(&self, name: &str) -> Result<SparsePolynomial> {
        self.var_index(name)
            .map(|i| self.var(i))
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn term(&self, c: Scalar, m: Monomial) -> SparsePolynomial {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePolynomial {
            ring: self.clone(),
            terms,
        }
    }
}

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.vars == other.0.vars)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.0.field, self.0.vars.join(","))
    }
}

/// A polynomial with exact coefficients and no stored zero terms.
#[derive(Clone)]
pub struct SparsePolynomial {
    ring: PolyRing,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePolynomial {
    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn field(&self) -> BaseField {
        self.ring.field()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms
            .get(&Monomial::one())
            .cloned()
            .unwrap_or_else(|| self.field().zero())
    }

    /// The coefficient, when the polynomial is a constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        self.is_constant().then(|| self.constant_term())
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.degree_in(var))
            .max()
            .unwrap_or(0)
    }

    /// Indices of variables that occur in some term.
    pub fn support(&self) -> Vec<usize> {
        let mut vars: Vec<usize> = self
            .terms
            .keys()
            .flat_map(|m| m.factors().map(|(v, _)| v))
            .collect();
        vars.sort_unstable();
        vars.dedup();
        vars
    }

    /// Same polynomial viewed in a ring with the same variables in the same
    /// order (possibly extended by new trailing variables).
    pub fn with_ring(&self, ring: &PolyRing) -> Result<SparsePolynomial> {
        let ok = ring.field() == self.field()
            && ring.nvars() >= self.ring.nvars()
            && ring.vars()[..self.ring.nvars()] == *self.ring.vars();
        if !ok {
            return Err(Error::IncompatibleOperands(format!(
                "{:?} does not extend {:?}",
                ring, self.ring
            )));
        }
        Ok(SparsePolynomial {
            ring: ring.clone(),
            terms: self.terms.clone(),
        })
    }

    fn check_ring(&self, other: &SparsePolynomial) {
        debug_assert!(
            self.ring == other.ring,
            "polynomial ring mismatch: {:?} vs {:?}",
            self.ring,
            other.ring
        );
    }

    fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Formal partial derivative; exponents divisible by the characteristic
    /// differentiate to zero.
    pub fn derivative(&self, var: usize) -> SparsePolynomial {
        let mut out = self.ring.zero();
        for (m, c) in &self.terms {
            if let Some((e, lowered)) = m.lower(var) {
                out.add_term(lowered, c.mul_int(e as u64));
            }
        }
        out
    }

    pub fn derivative_by_name(&self, name: &str) -> Result<SparsePolynomial> {
        let var = self
            .ring
            .var_index(name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        Ok(self.derivative(var))
    }

    /// Evaluates at `values[i]` for variable `i`, in any ring containing the
    /// ground field. `one` is used when the polynomial is constant.
    pub fn evaluate<R: RingElement>(&self, values: &[R], one: &R) -> R {
        assert_eq!(values.len(), self.ring.nvars(), "wrong number of values");
        let mut powers: Vec<Vec<R>> = vec![Vec::new(); values.len()];
        let mut acc = one.zero_like();
        for (m, c) in &self.terms {
            let mut term = one.scaled(c);
            for (v, e) in m.factors() {
                let cache = &mut powers[v];
                if cache.is_empty() {
                    cache.push(values[v].clone());
                }
                while cache.len() < e as usize {
                    let next = cache.last().unwrap().times(&values[v]);
                    cache.push(next);
                }
                term = term.times(&cache[e as usize - 1]);
                if term.is_zero() {
                    break;
                }
            }
            acc = acc.plus(&term);
        }
        acc
    }

    /// Substitutes polynomials (in some other ring) for the variables.
    pub fn compose(&self, values: &[SparsePolynomial], target: &PolyRing) -> SparsePolynomial {
        self.evaluate(values, &target.one())
    }

    /// Divides by a monomial that divides every term.
    pub fn div_monomial(&self, m: &Monomial) -> SparsePolynomial {
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.div(m), c.clone()))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SparsePolynomial {
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    /// Monomial gcd of all terms (one for the zero polynomial).
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        let Some(first) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |g, m| if g.is_one() { g } else { g.gcd(m) })
    }

    /// Coefficient of the largest term in the internal order; used only for
    /// normalization.
    pub fn leading_coefficient(&self) -> Option<&Scalar> {
        self.terms.values().next_back()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(m, c)| m.is_one() && c.is_one())
    }

    fn sorted_terms(&self) -> Vec<(Vec<u32>, &Scalar)> {
        let n = self.ring.nvars();
        let mut v: Vec<_> = self
            .terms
            .iter()
            .map(|(m, c)| (m.exponents(n), c))
            .collect();
        v.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        v
    }
}

/// Removes the common monomial factor and the common scalar content from a
/// collection of polynomials, in place. Scaling by a nonzero constant or
/// dividing by a common monomial preserves linear (in)dependence over the
/// fraction field.
pub fn strip_common_factors(polys: &mut [SparsePolynomial]) {
    let mut common: Option<Monomial> = None;
    for p in polys.iter().filter(|p| !p.is_zero()) {
        let c = p.monomial_content();
        common = Some(match common {
            None => c,
            Some(g) => g.gcd(&c),
        });
        if common.as_ref().is_some_and(Monomial::is_one) {
            break;
        }
    }
    if let Some(g) = common.filter(|g| !g.is_one()) {
        for p in polys.iter_mut() {
            *p = p.div_monomial(&g);
        }
    }
    let Some(first) = polys.iter().find(|p| !p.is_zero()) else {
        return;
    };
    let factor = match first.field() {
        BaseField::PrimeField(_) => first.leading_coefficient().and_then(Scalar::inv),
        BaseField::Rationals => {
            let mut num_gcd = BigInt::zero();
            let mut den_lcm = BigInt::one();
            for p in polys.iter() {
                for c in p.terms.values() {
                    let q = c.as_rational().expect("rational coefficients");
                    num_gcd = num_gcd.gcd(q.numer());
                    den_lcm = den_lcm.lcm(q.denom());
                }
            }
            let lead_negative = first.leading_coefficient().is_some_and(Scalar::is_negative);
            let mut f = BigRational::new(den_lcm, num_gcd);
            if lead_negative {
                f = -f;
            }
            (!f.is_one()).then_some(Scalar::Rational(f))
        }
    };
    if let Some(f) = factor.filter(|f| !f.is_one()) {
        for p in polys.iter_mut() {
            *p = p.scaled(&f);
        }
    }
}

impl RingElement for SparsePolynomial {
    fn zero_like(&self) -> Self {
        self.ring.zero()
    }

    fn one_like(&self) -> Self {
        self.ring.one()
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn plus(&self, rhs: &Self) -> Self {
        self.check_ring(rhs);
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.check_ring(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }

    fn times(&self, rhs: &Self) -> Self {
        self.check_ring(rhs);
        let mut out = self.ring.zero();
        if self.is_zero() || rhs.is_zero() {
            return out;
        }
        if rhs.terms.len() == 1 {
            let (m, c) = rhs.terms.iter().next().unwrap();
            if m.is_one() {
                return self.scaled(c);
            }
        }
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    fn negated(&self) -> Self {
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    fn scaled(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return self.ring.zero();
        }
        if c.is_one() {
            return self.clone();
        }
        SparsePolynomial {
            ring: self.ring.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }
}

impl PartialEq for SparsePolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for SparsePolynomial {}

impl fmt::Display for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (i, (exps, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = if negative { -c } else { c.clone() };
            match (i, negative) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = exps.iter().all(|&e| e == 0);
            if !abs.is_one() || is_const {
                factors.push(abs.to_string());
            }
            for (v, &e) in exps.iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[v].clone()),
                    _ => factors.push(format!("{}^{}", vars[v], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl std::ops::Add for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn add(self, rhs: Self) -> SparsePolynomial {
        self.plus(rhs)
    }
}

impl std::ops::Sub for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn sub(self, rhs: Self) -> SparsePolynomial {
        self.minus(rhs)
    }
}

impl std::ops::Mul for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn mul(self, rhs: Self) -> SparsePolynomial {
        self.times(rhs)
    }
}

impl std::ops::Neg for &SparsePolynomial {
    type Output = SparsePolynomial;
    fn neg(self) -> SparsePolynomial {
        self.negated()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qxy() -> PolyRing {
        PolyRing::new(BaseField::Rationals, ["x", "y"])
    }

    fn cusp(r: &PolyRing) -> SparsePolynomial {
        let x = r.var(0);
        let y = r.var(1);
        &(&y * &y) - &(&(&x * &x) * &x)
    }

    #[test]
    fn derivative_power_rule() {
        let r = qxy();
        let f = cusp(&r);
        assert_eq!(f.derivative_by_name("x").unwrap().to_string(), "-3*x^2");
        assert_eq!(f.derivative_by_name("y").unwrap().to_string(), "2*y");
        assert_eq!(
            f.derivative_by_name("z"),
            Err(Error::UnknownVariable("z".into()))
        );
    }

    #[test]
    fn derivative_vanishes_in_char_p() {
        let r = PolyRing::new(BaseField::prime(2).unwrap(), ["x"]);
        let x = r.var(0);
        assert!((&x * &x).derivative(0).is_zero());
        let r3 = PolyRing::new(BaseField::prime(3).unwrap(), ["x"]);
        let x3 = r3.var(0);
        let f = &(&x3 * &x3) * &x3;
        assert!(f.derivative(0).is_zero());
        assert_eq!((&x3 * &x3).derivative(0).to_string(), "2*x");
    }

    #[test]
    fn display_orders_terms_by_degree() {
        let r = qxy();
        let x = r.var(0);
        let y = r.var(1);
        let f = (&x * &y).plus(&r.from_int(3)).plus(&(&x * &x));
        assert_eq!(f.to_string(), "x^2 + x*y + 3");
    }

    #[test]
    fn evaluation_and_composition() {
        let r = qxy();
        let f = cusp(&r);
        let s = PolyRing::new(BaseField::Rationals, ["s"]);
        let sv = s.var(0);
        let param = vec![&sv * &sv, &(&sv * &sv) * &sv];
        assert!(f.compose(&param, &s).is_zero());
    }

    #[test]
    fn strip_removes_monomial_and_content() {
        let r = qxy();
        let x = r.var(0);
        let y = r.var(1);
        let mut row = vec![
            (&x * &y).scaled(&r.field().from_int(4)),
            (&x * &x).scaled(&r.field().from_int(-6)),
        ];
        strip_common_factors(&mut row);
        assert_eq!(row[0].to_string(), "2*y");
        assert_eq!(row[1].to_string(), "-3*x");
    }
}
