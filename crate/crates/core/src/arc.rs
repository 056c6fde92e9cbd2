//! Arcs on an affine variety: validated tuples of power series, their
//! truncations to jets, and orders of ideals along them.

use crate::algebra::{
    FieldElement, FunctionField, SparsePolynomial, TranscendenceDegree, TranscendenceTracker,
};
use crate::error::{Error, Result};
use crate::geometry::{MorphismPresentation, VarietyPresentation};
use crate::series::{OrderValue, SeriesExpression, TruncatedSeries};

#[derive(Debug, Clone)]
enum Source {
    Expressions(Vec<SeriesExpression>),
    Raw,
}

/// A point `Spec L[[t]] -> X` known to precision `P`. Named to stay clear of
/// `std::sync::Arc`.
#[derive(Debug, Clone)]
pub struct FormalArc {
    variety: VarietyPresentation,
    field: FunctionField,
    source: Source,
    series: Vec<TruncatedSeries>,
}

/// The truncation `alpha_n` as a point of the jet scheme. Coordinates are
/// ordered component-major: `x_{i,p}` sits at `i * (n + 1) + p`.
#[derive(Debug, Clone)]
pub struct JetPoint {
    pub level: usize,
    pub coordinates: Vec<FieldElement>,
    pub residue_dim: TranscendenceDegree,
}

fn check_arity(variety: &VarietyPresentation, len: usize) -> Result<()> {
    if len != variety.ambient_dim() {
        return Err(Error::InvalidInput(format!(
            "arc has {len} components but the variety has {} variables",
            variety.ambient_dim()
        )));
    }
    Ok(())
}

/// Builds an arc from rational expressions in `t`, expanded to precision
/// `precision`, and checks that every generator vanishes mod `t^P`.
pub fn make_arc(
    variety: &VarietyPresentation,
    comps: Vec<SeriesExpression>,
    precision: usize,
) -> Result<FormalArc> {
    check_arity(variety, comps.len())?;
    let field = match comps.first() {
        Some(c) => c.field().clone(),
        None => FunctionField::constants(variety.base()),
    };
    if field.base() != variety.base() {
        return Err(Error::IncompatibleOperands(
            "arc coefficients and variety have different base fields".into(),
        ));
    }
    if comps.iter().any(|c| *c.field() != field) {
        return Err(Error::IncompatibleOperands(
            "arc components use different coefficient fields".into(),
        ));
    }
    let series = comps
        .iter()
        .map(|c| c.expand(precision))
        .collect::<Result<Vec<_>>>()?;
    let arc = FormalArc {
        variety: variety.clone(),
        field,
        source: Source::Expressions(comps),
        series,
    };
    arc.validate()?;
    Ok(arc)
}

impl FormalArc {
    /// An arc given by raw truncated series; it cannot be refined beyond the
    /// given precision.
    pub fn from_series(
        variety: &VarietyPresentation,
        field: &FunctionField,
        series: Vec<TruncatedSeries>,
    ) -> Result<FormalArc> {
        check_arity(variety, series.len())?;
        let p = series
            .iter()
            .map(TruncatedSeries::precision)
            .min()
            .unwrap_or(1);
        let arc = FormalArc {
            variety: variety.clone(),
            field: field.clone(),
            source: Source::Raw,
            series: series.iter().map(|s| s.truncated(p)).collect(),
        };
        arc.validate()?;
        Ok(arc)
    }

    fn validate(&self) -> Result<()> {
        for (j, g) in self.variety.generators().iter().enumerate() {
            if let OrderValue::Finite(order) = self.evaluate(g).order() {
                return Err(Error::NotOnVariety {
                    generator: j + 1,
                    order,
                });
            }
        }
        Ok(())
    }

    pub fn variety(&self) -> &VarietyPresentation {
        &self.variety
    }

    pub fn field(&self) -> &FunctionField {
        &self.field
    }

    pub fn precision(&self) -> usize {
        self.series
            .first()
            .map_or(usize::MAX, TruncatedSeries::precision)
    }

    pub fn components(&self) -> &[TruncatedSeries] {
        &self.series
    }

    /// The defining expressions, when the arc can be re-expanded.
    pub fn expressions(&self) -> Option<&[SeriesExpression]> {
        match &self.source {
            Source::Expressions(e) => Some(e),
            Source::Raw => None,
        }
    }

    pub fn is_refinable(&self) -> bool {
        matches!(self.source, Source::Expressions(_))
    }

    /// The same arc at another precision. Raising the precision of a raw arc
    /// fails with `PrecisionTooLow`.
    pub fn with_precision(&self, precision: usize) -> Result<FormalArc> {
        if precision <= self.precision() {
            return Ok(FormalArc {
                series: self.series.iter().map(|s| s.truncated(precision)).collect(),
                ..self.clone()
            });
        }
        match &self.source {
            Source::Expressions(e) => make_arc(&self.variety, e.clone(), precision),
            Source::Raw => Err(Error::PrecisionTooLow {
                level: precision,
                precision: self.precision(),
            }),
        }
    }

    fn one(&self) -> TruncatedSeries {
        TruncatedSeries::constant(self.field.one(), self.precision())
    }

    /// `g(alpha(t))` mod `t^P` for a polynomial in the ambient variables.
    pub fn evaluate(&self, g: &SparsePolynomial) -> TruncatedSeries {
        g.evaluate(&self.series, &self.one())
    }

    /// `ord_alpha` of the ideal generated by `gens`: the minimum order over
    /// the generators. The zero ideal has order `AtLeast(P)`.
    pub fn ord_ideal(&self, gens: &[SparsePolynomial]) -> OrderValue {
        gens.iter().map(|g| self.evaluate(g).order()).fold(
            OrderValue::AtLeast(self.precision() as u64),
            OrderValue::min_with,
        )
    }

    /// `alpha_n`, requiring `n < P`.
    pub fn truncate(&self, n: usize) -> Result<JetPoint> {
        if n >= self.precision() {
            return Err(Error::PrecisionTooLow {
                level: n,
                precision: self.precision(),
            });
        }
        let coordinates: Vec<FieldElement> = self
            .series
            .iter()
            .flat_map(|s| s.coefficients()[..=n].iter().cloned())
            .collect();
        let residue_dim = self.residue_dims(n)?[n];
        Ok(JetPoint {
            level: n,
            coordinates,
            residue_dim,
        })
    }

    /// `dim(alpha_n)` for `n = 0..=n_max`, computed incrementally.
    pub fn residue_dims(&self, n_max: usize) -> Result<Vec<TranscendenceDegree>> {
        if n_max >= self.precision() {
            return Err(Error::PrecisionTooLow {
                level: n_max,
                precision: self.precision(),
            });
        }
        let mut tracker = TranscendenceTracker::new();
        let mut out = Vec::with_capacity(n_max + 1);
        for p in 0..=n_max {
            for s in &self.series {
                tracker.push(s.coeff(p));
            }
            out.push(tracker.degree());
        }
        Ok(out)
    }
}

/// Checks that `f` maps `beta` into the target: every target generator
/// pulled back along `f` vanishes on `beta` mod `t^P`.
pub fn validate_morphism_on_arc(f: &MorphismPresentation, beta: &FormalArc) -> Result<()> {
    if beta.variety().ring() != f.source().ring() {
        return Err(Error::IncompatibleOperands(
            "arc does not live on the source of the morphism".into(),
        ));
    }
    for (j, g) in f.pulled_back_generators().iter().enumerate() {
        let order = beta.evaluate(g).order();
        if order.is_finite() {
            return Err(Error::MorphismInvalidOnArc {
                generator: j + 1,
                order,
            });
        }
    }
    Ok(())
}

/// `f o beta`, validated on the target. Expression-backed arcs stay
/// refinable.
pub fn compose(f: &MorphismPresentation, beta: &FormalArc) -> Result<FormalArc> {
    validate_morphism_on_arc(f, beta)?;
    match beta.expressions() {
        Some(exprs) => {
            let one = SeriesExpression::constant(beta.field().one());
            let comps = f
                .components()
                .iter()
                .map(|c| c.evaluate(exprs, &one))
                .collect();
            make_arc(f.target(), comps, beta.precision())
        }
        None => {
            let comps = f.components().iter().map(|c| beta.evaluate(c)).collect();
            FormalArc::from_series(f.target(), beta.field(), comps)
        }
    }
}
