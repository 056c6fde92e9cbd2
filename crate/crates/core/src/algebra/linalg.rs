//! Exact linear algebra over `k(u_1..u_m)`.
//!
//! Rows are cleared of denominators and reduced fraction-free; after every
//! step the common monomial factor and scalar content of the row are
//! stripped. On the structured Jacobians this crate produces (triangular,
//! Toeplitz-like, monomial pivots) the rows collapse to near unit vectors
//! instead of growing.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{strip_common_factors, FieldElement, RingElement, SparsePolynomial};

type SparseRow = BTreeMap<usize, SparsePolynomial>;

/// A row-echelon basis that grows one row at a time.
#[derive(Debug, Clone, Default)]
pub struct EchelonBasis {
    rows: Vec<(usize, SparseRow)>,
}

fn clear_denominators(row: &[(usize, FieldElement)]) -> SparseRow {
    let mut dens: Vec<&SparsePolynomial> = Vec::new();
    for (_, x) in row {
        if !x.is_zero() && !x.has_unit_denominator() && !dens.contains(&x.denominator()) {
            dens.push(x.denominator());
        }
    }
    row.iter()
        .filter(|(_, x)| !x.is_zero())
        .map(|(c, x)| {
            let mut p = x.numerator().clone();
            for d in dens.iter().filter(|d| **d != x.denominator()) {
                p = &p * d;
            }
            (*c, p)
        })
        .collect()
}

fn strip_row(row: &mut SparseRow) {
    let mut values: Vec<SparsePolynomial> = row.values().cloned().collect();
    strip_common_factors(&mut values);
    for (slot, v) in row.values_mut().zip(values) {
        *slot = v;
    }
}

impl EchelonBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a sparse row given as `(column, value)` pairs; returns whether
    /// the rank increased.
    pub fn insert(&mut self, row: &[(usize, FieldElement)]) -> bool {
        let mut row = clear_denominators(row);
        if row.is_empty() {
            return false;
        }
        strip_row(&mut row);
        for (pc, brow) in &self.rows {
            let Some(a) = row.get(pc).cloned() else {
                continue;
            };
            let p = &brow[pc];
            let mut next = SparseRow::new();
            let cols: Vec<usize> = row.keys().chain(brow.keys()).copied().collect();
            for c in cols {
                if next.contains_key(&c) || c == *pc {
                    continue;
                }
                let lhs = row.get(&c).map(|x| match p.as_constant() {
                    Some(s) => x.scaled(&s),
                    None => x * p,
                });
                let rhs = brow.get(&c).map(|y| &a * y);
                let v = match (lhs, rhs) {
                    (Some(l), Some(r)) => &l - &r,
                    (Some(l), None) => l,
                    (None, Some(r)) => r.negated(),
                    (None, None) => continue,
                };
                if !v.is_zero() {
                    next.insert(c, v);
                }
            }
            row = next;
            if row.is_empty() {
                return false;
            }
            strip_row(&mut row);
        }
        let pivot = row
            .iter()
            .min_by_key(|(c, p)| (p.num_terms(), p.total_degree(), **c))
            .map(|(c, _)| *c)
            .expect("nonempty row");
        self.rows.push((pivot, row));
        true
    }

    pub fn insert_dense(&mut self, row: &[FieldElement]) -> bool {
        let sparse: Vec<(usize, FieldElement)> = row.iter().cloned().enumerate().collect();
        self.insert(&sparse)
    }
}

/// Rank over the fraction field.
pub fn matrix_rank(rows: &[Vec<FieldElement>]) -> usize {
    let mut basis = EchelonBasis::new();
    for r in rows {
        basis.insert_dense(r);
    }
    basis.rank()
}

/// Transcendence degree with a marker for the characteristic-p case, where
/// the Jacobian rank is the separable transcendence degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscendenceDegree {
    pub value: usize,
    pub char_p_jacobian: bool,
}

/// Incremental transcendence degree of a growing list of rational
/// functions, via the rank of their Jacobian in the transcendentals.
#[derive(Debug, Clone, Default)]
pub struct TranscendenceTracker {
    basis: EchelonBasis,
    char_p: bool,
}

impl TranscendenceTracker {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, g: &FieldElement) {
        if g.field().base().characteristic() != 0 {
            self.char_p = true;
        }
        let gradient: Vec<(usize, FieldElement)> = g
            .support()
            .into_iter()
            .map(|v| (v, g.derivative(v)))
            .filter(|(_, d)| !d.is_zero())
            .collect();
        if !gradient.is_empty() {
            self.basis.insert(&gradient);
        }
    }

    pub fn degree(&self) -> TranscendenceDegree {
        TranscendenceDegree {
            value: self.basis.rank(),
            char_p_jacobian: self.char_p,
        }
    }
}

pub fn transcendence_degree(coeffs: &[FieldElement]) -> TranscendenceDegree {
    let mut t = TranscendenceTracker::new();
    for g in coeffs {
        t.push(g);
    }
    t.degree()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseField, FunctionField};

    fn field(m: usize) -> FunctionField {
        FunctionField::new(BaseField::Rationals, (1..=m).map(|i| format!("u{i}")))
    }

    #[test]
    fn identity_and_zero() {
        let k = field(0);
        let id: Vec<Vec<FieldElement>> = (0..3)
            .map(|i| (0..3).map(|j| k.from_int((i == j) as i64)).collect())
            .collect();
        assert_eq!(matrix_rank(&id), 3);
        let zero = vec![vec![k.zero(); 3]; 2];
        assert_eq!(matrix_rank(&zero), 0);
    }

    #[test]
    fn proportional_rows() {
        let k = field(1);
        let u = k.transcendental(0);
        let m = vec![vec![u.clone(), &u * &u], vec![k.one(), u.clone()]];
        assert_eq!(matrix_rank(&m), 1);
    }

    #[test]
    fn transcendence_examples() {
        let k = field(2);
        let (u1, u2) = (k.transcendental(0), k.transcendental(1));
        let d = transcendence_degree(&[u1.clone(), u2.clone(), &u1 * &u2]);
        assert_eq!(d.value, 2);
        assert!(!d.char_p_jacobian);
        let consts = [k.from_int(3), k.one().div(&k.from_int(2)).unwrap()];
        assert_eq!(transcendence_degree(&consts).value, 0);
        let sq = &u1 * &u1;
        assert_eq!(transcendence_degree(&[sq.clone(), &sq * &u1]).value, 1);
    }

    #[test]
    fn char_p_flag() {
        let k = FunctionField::new(BaseField::prime(3).unwrap(), ["u"]);
        let d = transcendence_degree(&[k.transcendental(0)]);
        assert_eq!(d.value, 1);
        assert!(d.char_p_jacobian);
    }

    #[test]
    fn rational_entries() {
        let k = field(2);
        let (u, v) = (k.transcendental(0), k.transcendental(1));
        let a = u.div(&(&u + &v)).unwrap();
        let b = v.div(&(&u + &v)).unwrap();
        // rows (a, b) and (1, v/u) are proportional: (u, v)/(u+v)
        let c = v.div(&u).unwrap();
        assert_eq!(
            matrix_rank(&[vec![a.clone(), b.clone()], vec![k.one(), c]]),
            1
        );
        assert_eq!(matrix_rank(&[vec![a, b], vec![k.one(), k.one()]]), 2);
    }
}
