use std::fmt;

use super::Scalar;

/// Commutative ring elements that carry their own context (coefficient
/// field, variable set, precision), so zero and one can be produced from
/// any existing element.
pub trait RingElement: Clone + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negated(&self) -> Self;
    /// Multiplication by a ground-field scalar.
    fn scaled(&self, c: &Scalar) -> Self;

    fn pow(&self, mut exp: u32) -> Self {
        let mut acc = self.one_like();
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.times(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.times(&base);
            }
        }
        acc
    }
}
