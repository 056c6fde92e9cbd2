//! JSON problem documents: a variety, named arcs, an optional morphism and
//! default task parameters, all given as strings in the infix grammar of
//! [`crate::expr`].

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{BaseField, FunctionField, PolyRing};
use crate::analysis::DimSource;
use crate::arc::{make_arc, FormalArc};
use crate::error::{Error, Result};
use crate::expr::{parse_polynomial, parse_series, SERIES_VARIABLE};
use crate::geometry::{MorphismPresentation, VarietyPresentation};
use crate::series::SeriesExpression;

pub const DEFAULT_PRECISION: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarietySpec {
    pub variables: Vec<String>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub declared_dim: Option<usize>,
}

/// A symbol standing for `sum_{p=from}^{P-1} {prefix}{p} t^p` with fresh
/// transcendentals, i.e. a series that is generic to precision `P`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericSeries {
    pub symbol: String,
    pub prefix: String,
    #[serde(default)]
    pub from: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArcHome {
    /// The document's variety (the target of the morphism, if any).
    #[default]
    Variety,
    /// The source of the morphism.
    Source,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub name: String,
    pub components: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub generic: Vec<GenericSeries>,
    #[serde(default, skip_serializing_if = "is_default_home")]
    pub on: ArcHome,
}

fn is_default_home(h: &ArcHome) -> bool {
    *h == ArcHome::Variety
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub source: VarietySpec,
    /// One polynomial in the source variables per target variable.
    pub components: Vec<String>,
}

/// A divisor variable given by name or by 1-based index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DivisorVar {
    Index(usize),
    Name(String),
}

/// Parameters for one command; the CLI uses the first task naming a
/// command as defaults for its flags.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskSpec {
    pub command: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arc: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub divisor_var: Option<DivisorVar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_source: Option<DimSource>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub field: BaseField,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transcendentals: Vec<String>,
    pub variety: VarietySpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub arcs: Vec<ArcSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub morphism: Option<MorphismSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precision: Option<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tasks: Vec<TaskSpec>,
}

/// A validated document with its presentations built.
#[derive(Debug, Clone)]
pub struct Problem {
    pub document: ProblemDocument,
    pub variety: VarietyPresentation,
    pub morphism: Option<MorphismPresentation>,
}

fn in_context(what: &str, e: Error) -> Error {
    match e {
        Error::Parse {
            line,
            column,
            message,
        } => Error::Parse {
            line,
            column,
            message: format!("{what}: {message}"),
        },
        other => other,
    }
}

fn check_names(names: &[String], what: &str) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        let ok = n
            .chars()
            .next()
            .is_some_and(|c| c.is_alphabetic() || c == '_')
            && n.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok {
            return Err(Error::InvalidInput(format!(
                "{what} `{n}` is not an identifier"
            )));
        }
        if n == SERIES_VARIABLE {
            return Err(Error::InvalidInput(format!(
                "`{n}` is reserved for the series variable"
            )));
        }
        if names[..i].contains(n) {
            return Err(Error::InvalidInput(format!(
                "{what} `{n}` is declared twice"
            )));
        }
    }
    Ok(())
}

fn build_variety(spec: &VarietySpec, base: BaseField, what: &str) -> Result<VarietyPresentation> {
    check_names(&spec.variables, "variable")?;
    let ring = PolyRing::new(base, spec.variables.iter().cloned());
    let gens = spec
        .generators
        .iter()
        .enumerate()
        .map(|(j, g)| {
            parse_polynomial(g, &ring)
                .map_err(|e| in_context(&format!("{what}.generators[{j}]"), e))
        })
        .collect::<Result<Vec<_>>>()?;
    VarietyPresentation::new(ring, gens, spec.declared_dim)
}

impl ProblemDocument {
    pub fn from_json(src: &str) -> Result<ProblemDocument> {
        serde_json::from_str(src).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("documents serialize")
    }
}

impl Problem {
    pub fn new(document: ProblemDocument) -> Result<Problem> {
        let base = match document.field {
            BaseField::PrimeField(p) => BaseField::prime(p)?,
            b => b,
        };
        check_names(&document.transcendentals, "transcendental")?;
        let variety = build_variety(&document.variety, base, "variety")?;
        let morphism = match &document.morphism {
            Some(m) => {
                let source = build_variety(&m.source, base, "morphism.source")?;
                let comps = m
                    .components
                    .iter()
                    .enumerate()
                    .map(|(k, c)| {
                        parse_polynomial(c, source.ring())
                            .map_err(|e| in_context(&format!("morphism.components[{k}]"), e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Some(MorphismPresentation::new(source, variety.clone(), comps)?)
            }
            None => None,
        };
        let mut names: Vec<&str> = Vec::new();
        for a in &document.arcs {
            if names.contains(&a.name.as_str()) {
                return Err(Error::InvalidInput(format!(
                    "arc `{}` is declared twice",
                    a.name
                )));
            }
            names.push(&a.name);
            if a.on == ArcHome::Source && morphism.is_none() {
                return Err(Error::InvalidInput(format!(
                    "arc `{}` lives on the morphism source but no morphism is given",
                    a.name
                )));
            }
        }
        if let Some(p) = document.precision {
            if p == 0 {
                return Err(Error::InvalidInput("precision must be positive".into()));
            }
        }
        Ok(Problem {
            document,
            variety,
            morphism,
        })
    }

    pub fn from_json(src: &str) -> Result<Problem> {
        Problem::new(ProblemDocument::from_json(src)?)
    }

    pub fn base(&self) -> BaseField {
        self.variety.base()
    }

    pub fn precision(&self) -> usize {
        self.document.precision.unwrap_or(DEFAULT_PRECISION)
    }

    pub fn arc_spec(&self, name: &str) -> Result<&ArcSpec> {
        self.document
            .arcs
            .iter()
            .find(|a| a.name == name)
            .ok_or_else(|| Error::InvalidInput(format!("no arc named `{name}`")))
    }

    /// The first task naming `command`.
    pub fn task(&self, command: &str) -> Option<&TaskSpec> {
        self.document.tasks.iter().find(|t| t.command == command)
    }

    /// Builds the named arc at precision `precision`; generic symbols get
    /// coefficients up to `t^{P-1}`.
    pub fn arc(&self, name: &str, precision: usize) -> Result<FormalArc> {
        let spec = self.arc_spec(name)?;
        let what = format!("arc `{name}`");
        let mut names = self.document.transcendentals.clone();
        for g in &spec.generic {
            names.extend((g.from..precision).map(|p| format!("{}{p}", g.prefix)));
        }
        check_names(&names, "transcendental")?;
        let field = FunctionField::new(self.base(), names);
        let mut symbols: HashMap<String, SeriesExpression> = HashMap::new();
        let mut next = self.document.transcendentals.len();
        for g in &spec.generic {
            if g.symbol == SERIES_VARIABLE
                || field.transcendental_named(&g.symbol).is_ok()
                || symbols.contains_key(&g.symbol)
            {
                return Err(Error::InvalidInput(format!(
                    "{what}: generic symbol `{}` clashes with another name",
                    g.symbol
                )));
            }
            let mut coeffs = vec![field.zero(); precision];
            for c in coeffs.iter_mut().skip(g.from) {
                *c = field.transcendental(next);
                next += 1;
            }
            symbols.insert(
                g.symbol.clone(),
                SeriesExpression::polynomial(&field, coeffs),
            );
        }
        let comps = spec
            .components
            .iter()
            .enumerate()
            .map(|(i, c)| {
                parse_series(c, &field, &symbols)
                    .map_err(|e| in_context(&format!("{what}.components[{i}]"), e))
            })
            .collect::<Result<Vec<_>>>()?;
        let home = match spec.on {
            ArcHome::Variety => &self.variety,
            ArcHome::Source => self.morphism.as_ref().expect("checked at load").source(),
        };
        make_arc(home, comps, precision)
    }

    /// Resolves a divisor variable of the morphism source to a 0-based
    /// index.
    pub fn divisor_index(&self, var: &DivisorVar) -> Result<usize> {
        let m = self
            .morphism
            .as_ref()
            .ok_or_else(|| Error::InvalidInput("the document has no morphism".into()))?;
        let vars = m.source().ambient_vars();
        match var {
            DivisorVar::Index(i) if (1..=vars.len()).contains(i) => Ok(i - 1),
            DivisorVar::Index(i) => Err(Error::InvalidInput(format!(
                "divisor variable index {i} is outside 1..={}",
                vars.len()
            ))),
            DivisorVar::Name(n) => vars
                .iter()
                .position(|v| v == n)
                .ok_or_else(|| Error::UnknownVariable(n.clone())),
        }
    }
}
