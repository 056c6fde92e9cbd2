//! Invariant factors, Betti numbers and Fitting invariants of a finitely
//! presented module pulled back along an arc or jet.
//!
//! Diagonalization is fraction-free over `L[t]/(t^P)`: a pivot `t^e w` of
//! minimal order clears its column by `row_i <- w row_i - (a_i / t^e) row_r`,
//! which is unimodular because `w` is a unit. No series is ever inverted.

use serde::{Deserialize, Serialize};

use crate::algebra::RingElement;
use crate::arc::FormalArc;
use crate::error::{Error, Result};
use crate::geometry::{omega_presentation, DifferentialPresentation};
use crate::series::{OrderValue, TruncatedSeries};

/// Default ceiling for precision refinement at level infinity.
pub const DEFAULT_PRECISION_CAP: usize = 192;

/// Largest matrix dimension the minor oracle accepts.
pub const MINOR_ORACLE_BOUND: usize = 6;

/// Jet level `n`, or the arc itself (computed to its working precision).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Level {
    Finite(usize),
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub level: Level,
    /// Precision of the series the profile was computed from.
    pub precision: usize,
    pub num_columns: usize,
    pub betti: usize,
    /// `e_d >= e_{d+1} >= ...`, the orders of the torsion summands.
    pub factors: Vec<OrderValue>,
    /// `c_0, ..., c_N`.
    pub fitting: Vec<OrderValue>,
    /// Some rows never produced a pivot below the precision, so `betti` is
    /// an upper bound.
    pub precision_limited: bool,
}

impl InvariantProfile {
    /// Value used for the free summands: `n+1` at level `n`, `>= P` at
    /// level infinity.
    pub fn cap(&self) -> OrderValue {
        match self.level {
            Level::Finite(n) => OrderValue::Finite(n as u64 + 1),
            Level::Infinite => OrderValue::AtLeast(self.precision as u64),
        }
    }

    /// The full sequence `e_0, ..., e_{N-1}`, free summands first.
    pub fn invariant_factors(&self) -> Vec<OrderValue> {
        let mut out = vec![self.cap(); self.betti];
        out.extend(self.factors.iter().copied());
        out
    }

    /// `c_i`, with `c_i = 0` for `i >= N`.
    pub fn fitting_invariant(&self, i: usize) -> OrderValue {
        self.fitting
            .get(i)
            .copied()
            .unwrap_or(OrderValue::Finite(0))
    }
}

fn build_profile(
    level: Level,
    precision: usize,
    num_columns: usize,
    mut pivots: Vec<u64>,
    limited: bool,
) -> InvariantProfile {
    pivots.sort_unstable_by(|a, b| b.cmp(a));
    let betti = num_columns - pivots.len();
    let cap = match level {
        Level::Finite(n) => n as u64 + 1,
        Level::Infinite => precision as u64,
    };
    let mut fitting = Vec::with_capacity(num_columns + 1);
    for i in 0..=num_columns {
        let c = if i < betti {
            match level {
                Level::Finite(_) => OrderValue::Finite(cap),
                Level::Infinite => OrderValue::AtLeast(cap),
            }
        } else {
            let s: u64 = pivots[i - betti..].iter().sum();
            match level {
                Level::Finite(_) => OrderValue::Finite(s.min(cap)),
                Level::Infinite => OrderValue::Finite(s).clamp(cap),
            }
        };
        fitting.push(c);
    }
    InvariantProfile {
        level,
        precision,
        num_columns,
        betti,
        factors: pivots.into_iter().map(OrderValue::Finite).collect(),
        fitting,
        precision_limited: limited,
    }
}

/// Pivot orders of the Smith form of `m` (rows are relations) together with
/// whether a nonzero-but-unresolved block remained. Entries that are zero
/// mod `t^P` never pivot.
fn smith_pivots(m: &[Vec<TruncatedSeries>], num_columns: usize) -> (Vec<u64>, bool) {
    let mut rows: Vec<Vec<TruncatedSeries>> = m.to_vec();
    let mut active_cols: Vec<usize> = (0..num_columns).collect();
    let mut pivots = Vec::new();
    loop {
        let mut best: Option<(u64, usize, usize)> = None;
        for (r, row) in rows.iter().enumerate() {
            for &c in &active_cols {
                if let OrderValue::Finite(e) = row[c].order() {
                    if best.is_none_or(|(b, _, _)| e < b) {
                        best = Some((e, r, c));
                    }
                }
            }
        }
        let Some((e, r, c)) = best else { break };
        let pivot_row = rows.remove(r);
        let ue = e as usize;
        let w = pivot_row[c].shift_down(ue);
        let scaled: Vec<Option<TruncatedSeries>> = active_cols
            .iter()
            .map(|&j| (j != c).then(|| pivot_row[j].shift_down(ue)))
            .collect();
        for row in rows.iter_mut() {
            if row[c].is_zero() {
                continue;
            }
            let a = row[c].shift_down(ue);
            for (k, &j) in active_cols.iter().enumerate() {
                let Some(pj) = &scaled[k] else { continue };
                let lhs = w.times(&row[j].shift_down(ue));
                let rhs = a.times(pj);
                row[j] = lhs.minus(&rhs).shift_up(ue);
            }
            row[c] = row[c].zero_like();
        }
        active_cols.retain(|&j| j != c);
        pivots.push(e);
    }
    let limited = !rows.is_empty() && !active_cols.is_empty();
    (pivots, limited)
}

/// Invariant profile of the cokernel of `m` at the given level. At level
/// `n` the entries are first reduced mod `t^{n+1}`.
pub fn smith_orders(
    m: &[Vec<TruncatedSeries>],
    num_columns: usize,
    level: Level,
) -> Result<InvariantProfile> {
    let precision = m
        .iter()
        .flatten()
        .map(TruncatedSeries::precision)
        .min()
        .unwrap_or(usize::MAX);
    smith_at(m, num_columns, level, precision)
}

fn smith_at(
    m: &[Vec<TruncatedSeries>],
    num_columns: usize,
    level: Level,
    precision: usize,
) -> Result<InvariantProfile> {
    if let Some(row) = m.iter().find(|r| r.len() != num_columns) {
        return Err(Error::InvalidInput(format!(
            "matrix row has {} entries, expected {num_columns}",
            row.len()
        )));
    }
    match level {
        Level::Finite(n) => {
            if n >= precision {
                return Err(Error::PrecisionTooLow {
                    level: n,
                    precision,
                });
            }
            let cut: Vec<Vec<TruncatedSeries>> = m
                .iter()
                .map(|r| r.iter().map(|s| s.truncated(n + 1)).collect())
                .collect();
            let (pivots, _) = smith_pivots(&cut, num_columns);
            Ok(build_profile(level, n + 1, num_columns, pivots, false))
        }
        Level::Infinite => {
            let (pivots, limited) = smith_pivots(m, num_columns);
            Ok(build_profile(
                level,
                precision,
                num_columns,
                pivots,
                limited,
            ))
        }
    }
}

fn determinant(m: &[Vec<TruncatedSeries>]) -> TruncatedSeries {
    if m.len() == 1 {
        return m[0][0].clone();
    }
    let mut acc = m[0][0].zero_like();
    for (j, a) in m[0].iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let minor: Vec<Vec<TruncatedSeries>> = m[1..]
            .iter()
            .map(|r| {
                r.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let term = a.times(&determinant(&minor));
        acc = if j % 2 == 0 {
            acc.plus(&term)
        } else {
            acc.minus(&term)
        };
    }
    acc
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// `ord` of the `i`-th Fitting ideal: the minimum order over all
/// `(N - i)`-minors, by brute force.
pub fn fitting_minor_oracle(
    m: &[Vec<TruncatedSeries>],
    num_columns: usize,
    i: usize,
) -> Result<OrderValue> {
    let rows = m.len();
    if rows > MINOR_ORACLE_BOUND || num_columns > MINOR_ORACLE_BOUND {
        return Err(Error::MatrixTooLarge {
            rows,
            cols: num_columns,
            bound: MINOR_ORACLE_BOUND,
        });
    }
    if i >= num_columns {
        return Ok(OrderValue::Finite(0));
    }
    let k = num_columns - i;
    let precision = m
        .iter()
        .flatten()
        .map(TruncatedSeries::precision)
        .min()
        .unwrap_or(1) as u64;
    let mut best = OrderValue::AtLeast(precision);
    for rs in subsets(rows, k) {
        for cs in subsets(num_columns, k) {
            let sub: Vec<Vec<TruncatedSeries>> = rs
                .iter()
                .map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect())
                .collect();
            best = best.min_with(determinant(&sub).order());
        }
    }
    Ok(best)
}

/// Entries of `pres` evaluated along the arc; rows are relations, columns
/// the differentials.
pub fn pull_back(pres: &DifferentialPresentation, arc: &FormalArc) -> Vec<Vec<TruncatedSeries>> {
    let one = TruncatedSeries::constant(arc.field().one(), arc.precision());
    pres.pull_back(arc.components(), &one)
}

pub fn profile_of_presentation(
    pres: &DifferentialPresentation,
    arc: &FormalArc,
    level: Level,
) -> Result<InvariantProfile> {
    smith_at(
        &pull_back(pres, arc),
        pres.num_columns(),
        level,
        arc.precision(),
    )
}

/// Profile of `Omega_{X/k}` along the arc.
pub fn profile_of_omega(arc: &FormalArc, level: Level) -> Result<InvariantProfile> {
    profile_of_presentation(&omega_presentation(arc.variety()), arc, level)
}

/// A level-infinity profile together with the arc at the precision where
/// it was computed.
#[derive(Debug, Clone)]
pub struct Refined {
    pub profile: InvariantProfile,
    pub arc: FormalArc,
}

/// Level-infinity profile, doubling the precision of expression-backed
/// arcs while the result is precision-limited or `c_need` is unresolved.
pub fn refined_profile(
    pres: &DifferentialPresentation,
    arc: &FormalArc,
    cap: usize,
    need: Option<usize>,
) -> Result<Refined> {
    let mut arc = arc.clone();
    loop {
        let profile = profile_of_presentation(pres, &arc, Level::Infinite)?;
        let unresolved = profile.precision_limited
            || need.is_some_and(|i| !profile.fitting_invariant(i).is_finite());
        let p = arc.precision();
        if !unresolved || !arc.is_refinable() || p >= cap {
            return Ok(Refined { profile, arc });
        }
        arc = arc.with_precision((2 * p).min(cap))?;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseField, FunctionField};

    fn q() -> FunctionField {
        FunctionField::constants(BaseField::Rationals)
    }

    fn s(k: &FunctionField, cs: &[i64], p: usize) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(cs.iter().map(|&c| k.from_int(c)).collect(), p, &k.zero())
    }

    #[test]
    fn cusp_row() {
        let k = q();
        let m = vec![vec![s(&k, &[0, 0, 0, 0, -3], 12), s(&k, &[0, 0, 0, 2], 12)]];
        let p = smith_orders(&m, 2, Level::Infinite).unwrap();
        assert_eq!(p.betti, 1);
        assert_eq!(p.factors, vec![OrderValue::Finite(3)]);
        assert_eq!(
            p.fitting,
            vec![
                OrderValue::AtLeast(12),
                OrderValue::Finite(3),
                OrderValue::Finite(0)
            ]
        );
        assert!(!p.precision_limited);
    }

    #[test]
    fn empty_matrix_is_free() {
        let p = smith_orders(&[], 2, Level::Infinite).unwrap();
        assert_eq!(p.betti, 2);
        assert!(p.factors.is_empty());
    }

    #[test]
    fn diagonal_against_oracle() {
        let k = q();
        let z = s(&k, &[0], 10);
        let m = vec![
            vec![s(&k, &[0, 1], 10), z.clone()],
            vec![z, s(&k, &[0, 0, 1], 10)],
        ];
        let p = smith_orders(&m, 2, Level::Infinite).unwrap();
        assert_eq!(p.betti, 0);
        assert_eq!(
            p.factors,
            vec![OrderValue::Finite(2), OrderValue::Finite(1)]
        );
        assert_eq!(p.fitting[0], OrderValue::Finite(3));
        assert_eq!(p.fitting[1], OrderValue::Finite(1));
        assert_eq!(
            fitting_minor_oracle(&m, 2, 0).unwrap(),
            OrderValue::Finite(3)
        );
        assert_eq!(
            fitting_minor_oracle(&m, 2, 1).unwrap(),
            OrderValue::Finite(1)
        );
        assert_eq!(
            fitting_minor_oracle(&m, 2, 2).unwrap(),
            OrderValue::Finite(0)
        );
    }

    #[test]
    fn finite_level_caps() {
        let k = q();
        let m = vec![vec![s(&k, &[0, 0, 0, 0, -3], 12), s(&k, &[0, 0, 0, 2], 12)]];
        let p = smith_orders(&m, 2, Level::Finite(1)).unwrap();
        assert_eq!(p.betti, 2);
        assert_eq!(p.fitting_invariant(2), OrderValue::Finite(0));
        let p = smith_orders(&m, 2, Level::Finite(3)).unwrap();
        assert_eq!(p.betti, 1);
        assert_eq!(
            p.invariant_factors(),
            vec![OrderValue::Finite(4), OrderValue::Finite(3)]
        );
    }

    #[test]
    fn oracle_bound() {
        let k = q();
        let m = vec![vec![s(&k, &[1], 3); 7]; 1];
        assert!(matches!(
            fitting_minor_oracle(&m, 7, 0),
            Err(Error::MatrixTooLarge { .. })
        ));
    }

    #[test]
    fn zero_block_is_limited() {
        let k = q();
        let m = vec![vec![s(&k, &[0], 8), s(&k, &[0], 8)]];
        let p = smith_orders(&m, 2, Level::Infinite).unwrap();
        assert!(p.precision_limited);
        assert_eq!(p.betti, 2);
    }
}
