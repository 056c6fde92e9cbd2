//! Affine varieties, morphisms between them, and presentations of their
//! modules of differentials by Jacobian matrices.

use crate::algebra::{BaseField, PolyRing, RingElement, SparsePolynomial};
use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// `X = Spec k[x_1..x_N]/(f_1..f_r)`.
#[derive(Debug, Clone)]
pub struct VarietyPresentation {
    ring: PolyRing,
    generators: Vec<SparsePolynomial>,
    declared_dim: Option<usize>,
}

impl VarietyPresentation {
    pub fn new(
        ring: PolyRing,
        generators: Vec<SparsePolynomial>,
        declared_dim: Option<usize>,
    ) -> Result<Self> {
        if let Some(g) = generators.iter().find(|g| *g.ring() != ring) {
            return Err(Error::IncompatibleOperands(format!(
                "generator {g} is not in the ambient ring {ring:?}"
            )));
        }
        Ok(VarietyPresentation {
            ring,
            generators,
            declared_dim,
        })
    }

    pub fn affine_space<S: Into<String>>(
        field: BaseField,
        vars: impl IntoIterator<Item = S>,
    ) -> Self {
        let ring = PolyRing::new(field, vars);
        let n = ring.nvars();
        VarietyPresentation {
            ring,
            generators: Vec::new(),
            declared_dim: Some(n),
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn base(&self) -> BaseField {
        self.ring.field()
    }

    pub fn ambient_vars(&self) -> &[String] {
        self.ring.vars()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ring.nvars()
    }

    pub fn generators(&self) -> &[SparsePolynomial] {
        &self.generators
    }

    pub fn declared_dim(&self) -> Option<usize> {
        self.declared_dim
    }

    pub fn is_affine_space(&self) -> bool {
        self.generators.is_empty()
    }
}

/// A presentation `F_1 -> F_0 -> M -> 0`: one row per relation, one column
/// per generator of `M`.
#[derive(Debug, Clone)]
pub struct DifferentialPresentation {
    column_symbols: Vec<String>,
    relation_matrix: Vec<Vec<SparsePolynomial>>,
}

impl DifferentialPresentation {
    pub fn column_symbols(&self) -> &[String] {
        &self.column_symbols
    }

    pub fn num_columns(&self) -> usize {
        self.column_symbols.len()
    }

    pub fn relation_matrix(&self) -> &[Vec<SparsePolynomial>] {
        &self.relation_matrix
    }

    /// Evaluates every entry along series values of the ambient variables.
    pub fn pull_back<R: RingElement>(
        &self,
        values: &[TruncatedSeries<R>],
        one: &TruncatedSeries<R>,
    ) -> Vec<Vec<TruncatedSeries<R>>> {
        self.relation_matrix
            .iter()
            .map(|row| row.iter().map(|e| e.evaluate(values, one)).collect())
            .collect()
    }
}

fn gradient(f: &SparsePolynomial) -> Vec<SparsePolynomial> {
    (0..f.ring().nvars()).map(|i| f.derivative(i)).collect()
}

/// Jacobian presentation of `Omega_{X/k}`; with no generators the module is
/// free of rank `N` and the relation matrix is empty.
pub fn omega_presentation(x: &VarietyPresentation) -> DifferentialPresentation {
    DifferentialPresentation {
        column_symbols: x.ambient_vars().iter().map(|v| format!("d{v}")).collect(),
        relation_matrix: x.generators.iter().map(gradient).collect(),
    }
}

/// `f: Y -> X` given by `x_k = components[k](y)`.
#[derive(Debug, Clone)]
pub struct MorphismPresentation {
    source: VarietyPresentation,
    target: VarietyPresentation,
    components: Vec<SparsePolynomial>,
}

impl MorphismPresentation {
    pub fn new(
        source: VarietyPresentation,
        target: VarietyPresentation,
        components: Vec<SparsePolynomial>,
    ) -> Result<Self> {
        if components.len() != target.ambient_dim() {
            return Err(Error::InvalidInput(format!(
                "morphism has {} components but the target has {} variables",
                components.len(),
                target.ambient_dim()
            )));
        }
        if source.base() != target.base() {
            return Err(Error::IncompatibleOperands(
                "source and target have different base fields".into(),
            ));
        }
        if let Some(c) = components.iter().find(|c| c.ring() != source.ring()) {
            return Err(Error::IncompatibleOperands(format!(
                "component {c} is not a polynomial in the source variables"
            )));
        }
        Ok(MorphismPresentation {
            source,
            target,
            components,
        })
    }

    pub fn source(&self) -> &VarietyPresentation {
        &self.source
    }

    pub fn target(&self) -> &VarietyPresentation {
        &self.target
    }

    pub fn components(&self) -> &[SparsePolynomial] {
        &self.components
    }

    /// Target generators pulled back to the source ring.
    pub fn pulled_back_generators(&self) -> Vec<SparsePolynomial> {
        self.target
            .generators()
            .iter()
            .map(|g| g.compose(&self.components, self.source.ring()))
            .collect()
    }

    /// When the source is an affine space, checks that the image lies in the
    /// target by substitution. Returns `None` when the source has equations
    /// (membership would need a Groebner basis; see arc-wise validation).
    pub fn static_check(&self) -> Option<bool> {
        self.source.is_affine_space().then(|| {
            self.pulled_back_generators()
                .iter()
                .all(RingElement::is_zero)
        })
    }

    /// `f` restricted to the divisor `y_var = 0`: `Some` when every component
    /// becomes a constant, i.e. the divisor maps to a closed point.
    pub fn image_of_hyperplane_is_point(&self, var: usize) -> bool {
        let ring = self.source.ring();
        let mut values: Vec<SparsePolynomial> = (0..ring.nvars()).map(|i| ring.var(i)).collect();
        values[var] = ring.zero();
        self.components
            .iter()
            .all(|c| c.compose(&values, ring).is_constant())
    }
}

/// Presentation of `Omega_{Y/X}`: source gradients plus the Jacobian rows
/// of the components, all in the `dy` columns.
pub fn relative_omega_presentation(f: &MorphismPresentation) -> DifferentialPresentation {
    let mut rows: Vec<Vec<SparsePolynomial>> = f.source.generators.iter().map(gradient).collect();
    rows.extend(f.components.iter().map(gradient));
    DifferentialPresentation {
        column_symbols: f
            .source
            .ambient_vars()
            .iter()
            .map(|v| format!("d{v}"))
            .collect(),
        relation_matrix: rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_polynomial;

    fn variety(vars: &[&str], gens: &[&str]) -> VarietyPresentation {
        let ring = PolyRing::new(BaseField::Rationals, vars.iter().copied());
        let gens = gens
            .iter()
            .map(|g| parse_polynomial(g, &ring).unwrap())
            .collect();
        VarietyPresentation::new(ring, gens, None).unwrap()
    }

    fn rows(p: &DifferentialPresentation) -> Vec<Vec<String>> {
        p.relation_matrix()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect()
    }

    #[test]
    fn omega_examples() {
        let cusp = variety(&["x", "y"], &["y^2 - x^3"]);
        assert_eq!(
            rows(&omega_presentation(&cusp)),
            vec![vec!["-3*x^2", "2*y"]]
        );
        let plane = variety(&["x", "y"], &[]);
        let p = omega_presentation(&plane);
        assert!(p.relation_matrix().is_empty());
        assert_eq!(p.num_columns(), 2);
        let whitney = variety(&["x", "y", "z"], &["x*y^2 - z^2"]);
        assert_eq!(
            rows(&omega_presentation(&whitney)),
            vec![vec!["y^2", "2*x*y", "-2*z"]]
        );
    }

    fn morphism(src: &[&str], tgt: &[&str], comps: &[&str]) -> MorphismPresentation {
        let s = variety(src, &[]);
        let t = variety(tgt, &[]);
        let comps = comps
            .iter()
            .map(|c| parse_polynomial(c, s.ring()).unwrap())
            .collect();
        MorphismPresentation::new(s, t, comps).unwrap()
    }

    #[test]
    fn relative_examples() {
        let blowup = morphism(&["u", "v"], &["x", "y"], &["u", "u*v"]);
        assert_eq!(
            rows(&relative_omega_presentation(&blowup)),
            vec![vec!["1", "0"], vec!["v", "u"]]
        );
        assert!(blowup.image_of_hyperplane_is_point(0));
        assert!(!blowup.image_of_hyperplane_is_point(1));
        let id = morphism(&["s"], &["x"], &["s"]);
        assert_eq!(rows(&relative_omega_presentation(&id)), vec![vec!["1"]]);
        let sq = morphism(&["s"], &["x"], &["s^2"]);
        assert_eq!(rows(&relative_omega_presentation(&sq)), vec![vec!["2*s"]]);
    }

    #[test]
    fn static_membership() {
        let s = variety(&["s"], &[]);
        let cusp = variety(&["x", "y"], &["y^2 - x^3"]);
        let comps = vec![
            parse_polynomial("s^2", s.ring()).unwrap(),
            parse_polynomial("s^3", s.ring()).unwrap(),
        ];
        let f = MorphismPresentation::new(s.clone(), cusp.clone(), comps).unwrap();
        assert_eq!(f.static_check(), Some(true));
        let bad = vec![
            parse_polynomial("s^2", s.ring()).unwrap(),
            parse_polynomial("s^2", s.ring()).unwrap(),
        ];
        let g = MorphismPresentation::new(s, cusp, bad).unwrap();
        assert_eq!(g.static_check(), Some(false));
    }
}
