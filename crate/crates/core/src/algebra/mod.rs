//! Exact scalar arithmetic: ground fields, sparse polynomials, rational
//! function fields and linear algebra over them.

mod fraction;
mod linalg;
mod poly;
mod ring;
mod scalar;

pub use fraction::{fe_arith, FieldElement, FieldOp, FunctionField};
pub use linalg::{
    matrix_rank, transcendence_degree, EchelonBasis, TranscendenceDegree, TranscendenceTracker,
};
pub use poly::{strip_common_factors, Monomial, PolyRing, SparsePolynomial};
pub use ring::RingElement;
pub use scalar::{BaseField, Scalar};
