//! Ground-field scalars: the rationals and prime fields.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A perfect ground field: `Q` or `F_p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum BaseField {
    Rationals,
    PrimeField(u64),
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseField {
    /// `F_p`, with `p` checked by trial division.
    pub fn prime(p: u64) -> Result<Self> {
        if p > u32::MAX as u64 || !is_prime(p) {
            return Err(Error::InvalidPrime(p));
        }
        Ok(BaseField::PrimeField(p))
    }

    pub fn characteristic(&self) -> u64 {
        match self {
            BaseField::Rationals => 0,
            BaseField::PrimeField(p) => *p,
        }
    }

    pub fn zero(&self) -> Scalar {
        self.from_int(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_int(1)
    }

    pub fn from_int(&self, n: i64) -> Scalar {
        match *self {
            BaseField::Rationals => Scalar::Rational(BigRational::from_integer(n.into())),
            BaseField::PrimeField(p) => Scalar::Modular {
                value: n.rem_euclid(p as i64) as u64,
                modulus: p,
            },
        }
    }

    /// Image of a rational number; fails when the denominator vanishes mod p.
    pub fn from_rational(&self, q: &BigRational) -> Result<Scalar> {
        match *self {
            BaseField::Rationals => Ok(Scalar::Rational(q.clone())),
            BaseField::PrimeField(p) => {
                let modulus = BigInt::from(p);
                let reduce = |x: &BigInt| x.mod_floor(&modulus).to_u64().expect("reduced");
                let num = reduce(q.numer());
                let den = reduce(q.denom());
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                let den = Scalar::Modular {
                    value: den,
                    modulus: p,
                };
                let num = Scalar::Modular {
                    value: num,
                    modulus: p,
                };
                Ok(&num * &den.inv().expect("nonzero"))
            }
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::PrimeField(p) => write!(f, "F_{p}"),
        }
    }
}

/// An element of a [`BaseField`]. Operands of a binary operation must come
/// from the same field; mixing fields is a programming error and panics.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Modular { value: u64, modulus: u64 },
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

impl Scalar {
    pub fn field(&self) -> BaseField {
        match self {
            Scalar::Rational(_) => BaseField::Rationals,
            Scalar::Modular { modulus, .. } => BaseField::PrimeField(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Modular { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Modular { value, .. } => *value == 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_negative(),
            Scalar::Modular { .. } => false,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    /// Multiplication by an integer, i.e. by its image in the field.
    pub fn mul_int(&self, n: u64) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q * BigRational::from_integer(n.into())),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: mul_mod(*value, n % modulus, *modulus),
                modulus: *modulus,
            },
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Modular { .. } => None,
        }
    }
}

fn mismatch(a: &Scalar, b: &Scalar) -> ! {
    panic!("scalar field mismatch: {} vs {}", a.field(), b.field())
}

macro_rules! binop {
    ($trait:ident, $method:ident, $rat:expr, $modular:expr) => {
        impl<'a> std::ops::$trait<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            #[allow(clippy::suspicious_arithmetic_impl)]
            fn $method(self, rhs: &'a Scalar) -> Scalar {
                match (self, rhs) {
                    (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational($rat(a, b)),
                    (
                        Scalar::Modular {
                            value: a,
                            modulus: m,
                        },
                        Scalar::Modular {
                            value: b,
                            modulus: n,
                        },
                    ) if m == n => Scalar::Modular {
                        value: $modular(*a, *b, *m),
                        modulus: *m,
                    },
                    _ => mismatch(self, rhs),
                }
            }
        }
    };
}

binop!(
    Add,
    add,
    |a: &BigRational, b: &BigRational| a + b,
    |a: u64, b: u64, m: u64| (a + b) % m
);
binop!(
    Sub,
    sub,
    |a: &BigRational, b: &BigRational| a - b,
    |a: u64, b: u64, m: u64| (a + m - b) % m
);
binop!(Mul, mul, |a: &BigRational, b: &BigRational| a * b, mul_mod);

impl std::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Modular { value, modulus } => Scalar::Modular {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => {
                if q.is_integer() {
                    write!(f, "{}", q.numer())
                } else {
                    write!(f, "{}/{}", q.numer(), q.denom())
                }
            }
            Scalar::Modular { value, .. } => write!(f, "{value}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_check() {
        assert!(BaseField::prime(2).is_ok());
        assert!(BaseField::prime(97).is_ok());
        assert_eq!(BaseField::prime(9), Err(Error::InvalidPrime(9)));
        assert_eq!(BaseField::prime(1), Err(Error::InvalidPrime(1)));
    }

    #[test]
    fn modular_arithmetic() {
        let f5 = BaseField::prime(5).unwrap();
        assert_eq!(&f5.from_int(3) * &f5.from_int(2), f5.one());
        assert_eq!(&f5.from_int(1) - &f5.from_int(3), f5.from_int(3));
        assert_eq!(f5.from_int(2).inv().unwrap(), f5.from_int(3));
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(f5.from_rational(&half).unwrap(), f5.from_int(3));
    }

    #[test]
    fn rational_display() {
        let q = BaseField::Rationals;
        let third = q
            .from_rational(&BigRational::new((-1).into(), 3.into()))
            .unwrap();
        assert_eq!(third.to_string(), "-1/3");
        assert_eq!(q.from_int(7).to_string(), "7");
    }
}
