//! Exact computation of arc-space and jet-scheme invariants of affine
//! varieties.

pub mod algebra;
pub mod analysis;
pub mod arc;
pub mod catalog;
pub mod document;
pub mod error;
pub mod expr;
pub mod geometry;
pub mod invariants;
pub mod jets;
pub mod series;

pub use algebra::{BaseField, FieldElement, FunctionField, PolyRing, Scalar, SparsePolynomial};
pub use analysis::{DimSource, Options, StabilizationReport, Verdict};
pub use arc::FormalArc;
pub use document::{Problem, ProblemDocument};
pub use error::{Error, Result};
pub use geometry::{DifferentialPresentation, MorphismPresentation, VarietyPresentation};
pub use invariants::{InvariantProfile, Level};
pub use series::{OrderValue, SeriesExpression, TruncatedSeries};
