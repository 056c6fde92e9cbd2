//! Equations of jet schemes by substituting `x_i = sum_p x_{i,p} t^p`, and
//! the brute-force Jacobian of those equations at a jet point.

use crate::algebra::{EchelonBasis, FieldElement, PolyRing, RingElement, SparsePolynomial};
use crate::error::{Error, Result};
use crate::geometry::VarietyPresentation;
use crate::series::TruncatedSeries;

/// Generators of the ideal of `X_n` in `k[x_{i,p}]`.
#[derive(Debug, Clone)]
pub struct JetIdeal {
    pub level: usize,
    /// `x_{i,p}` is variable `i * (level + 1) + p`.
    pub ring: PolyRing,
    /// `generators[j][p]` is the coefficient of `t^p` in `f_j(x(t))`.
    pub generators: Vec<Vec<SparsePolynomial>>,
}

impl JetIdeal {
    pub fn var_index(&self, i: usize, p: usize) -> usize {
        i * (self.level + 1) + p
    }

    /// All `F_{j,p}` in `(j, p)` order.
    pub fn flat(&self) -> impl Iterator<Item = (usize, usize, &SparsePolynomial)> {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(j, row)| row.iter().enumerate().map(move |(p, g)| (j, p, g)))
    }
}

/// Jet variable names: `x_0, x_1, ...` for ambient variable `x`.
pub fn jet_variable_names(x: &VarietyPresentation, n: usize) -> Vec<String> {
    x.ambient_vars()
        .iter()
        .flat_map(|v| (0..=n).map(move |p| format!("{v}_{p}")))
        .collect()
}

pub fn jet_ideal(x: &VarietyPresentation, n: usize) -> JetIdeal {
    let ring = PolyRing::new(x.base(), jet_variable_names(x, n));
    let subst: Vec<TruncatedSeries<SparsePolynomial>> = (0..x.ambient_dim())
        .map(|i| TruncatedSeries::new((0..=n).map(|p| ring.var(i * (n + 1) + p)).collect()))
        .collect();
    let one = TruncatedSeries::constant(ring.one(), n + 1);
    let generators = x
        .generators()
        .iter()
        .map(|f| f.evaluate(&subst, &one).into_coefficients())
        .collect();
    JetIdeal {
        level: n,
        ring,
        generators,
    }
}

/// `(n+1) N - rank` of the Jacobian of the jet equations at `point`, which
/// must lie on `X_n`. Coordinates are ordered as in [`JetIdeal`].
pub fn jet_jacobian_corank(
    x: &VarietyPresentation,
    n: usize,
    point: &[FieldElement],
) -> Result<usize> {
    let ideal = jet_ideal(x, n);
    let nvars = ideal.ring.nvars();
    if point.len() != nvars {
        return Err(Error::InvalidInput(format!(
            "jet point has {} coordinates, expected {nvars}",
            point.len()
        )));
    }
    let Some(one) = point.first().map(RingElement::one_like) else {
        return Ok(0);
    };
    for (j, p, g) in ideal.flat() {
        if !g.evaluate(point, &one).is_zero() {
            return Err(Error::PointNotOnJetScheme {
                generator: j + 1,
                power: p,
            });
        }
    }
    let mut basis = EchelonBasis::new();
    for (_, _, g) in ideal.flat() {
        let row: Vec<(usize, FieldElement)> = g
            .support()
            .into_iter()
            .map(|v| (v, g.derivative(v).evaluate(point, &one)))
            .filter(|(_, e)| !e.is_zero())
            .collect();
        basis.insert(&row);
    }
    Ok(nvars - basis.rank())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{BaseField, FunctionField};
    use crate::expr::parse_polynomial;

    fn variety(vars: &[&str], gens: &[&str]) -> VarietyPresentation {
        let ring = PolyRing::new(BaseField::Rationals, vars.iter().copied());
        let gens = gens
            .iter()
            .map(|g| parse_polynomial(g, &ring).unwrap())
            .collect();
        VarietyPresentation::new(ring, gens, None).unwrap()
    }

    #[test]
    fn cusp_one_jets() {
        let cusp = variety(&["x", "y"], &["y^2 - x^3"]);
        let j = jet_ideal(&cusp, 1);
        let g: Vec<String> = j.flat().map(|(_, _, g)| g.to_string()).collect();
        assert_eq!(g, ["-x_0^3 + y_0^2", "-3*x_0^2*x_1 + 2*y_0*y_1"]);
        assert_eq!(j.ring.vars(), ["x_0", "x_1", "y_0", "y_1"]);
    }

    #[test]
    fn linear_and_empty() {
        let line = variety(&["x"], &["x"]);
        let g: Vec<String> = jet_ideal(&line, 2)
            .flat()
            .map(|(_, _, g)| g.to_string())
            .collect();
        assert_eq!(g, ["x_0", "x_1", "x_2"]);
        assert_eq!(jet_ideal(&variety(&["x"], &[]), 4).flat().count(), 0);
    }

    fn ints(k: &FunctionField, v: &[i64]) -> Vec<FieldElement> {
        v.iter().map(|&c| k.from_int(c)).collect()
    }

    #[test]
    fn coranks() {
        let k = FunctionField::constants(BaseField::Rationals);
        let line = variety(&["x"], &[]);
        assert_eq!(
            jet_jacobian_corank(&line, 3, &ints(&k, &[5, 0, 1, 2])).unwrap(),
            4
        );

        let cusp = variety(&["x", "y"], &["y^2 - x^3"]);
        // (t^2, t^3) truncated at n = 3
        let pt = ints(&k, &[0, 0, 1, 0, 0, 0, 0, 1]);
        assert_eq!(jet_jacobian_corank(&cusp, 3, &pt).unwrap(), 7);
        assert_eq!(
            jet_jacobian_corank(&cusp, 1, &ints(&k, &[0, 0, 0, 0])).unwrap(),
            4
        );
        assert_eq!(
            jet_jacobian_corank(&cusp, 1, &ints(&k, &[1, 0, 0, 0])).unwrap_err(),
            Error::PointNotOnJetScheme {
                generator: 1,
                power: 0
            }
        );
    }
}
