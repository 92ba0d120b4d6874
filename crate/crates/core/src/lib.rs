//! Nonarithmetic associative search over binary and ternary logic vectors.
//!
//! The building blocks are [`BitVector`] with the five primitive operations
//! (`and`, `or`, `xor`, `not`, `sls`) plus `orf`, ternary cubes
//! ([`TernaryVector`]) with intersection and interaction classes, three forms
//! of the query/associator quality criterion, and [`AssocTable`] lookups that
//! return the best matching rows.
//!
//! The normalized score is generic over [`Scalar`]; the aliases below fix the
//! common choices.

pub mod assoc;
pub mod error;
pub mod quality;
pub mod scalar;
pub mod ternary;
pub mod vector;

pub use assoc::{AssocTable, Mode, QueryResult, RowMatch, RowScore};
pub use error::{Error, Result};
pub use quality::{
    choose_best, criterion_arith, criterion_vector, quality_arith, quality_index, Decision,
    QualityIndex, QualityScoreInt, QualityScoreNorm, QualityVector,
};
pub use scalar::Scalar;
pub use ternary::{InteractionClass, IntersectionResult, Symbol, TernaryVector};
pub use vector::BitVector;

/// Exact rational used for normalized scores.
pub type Rational = num_rational::BigRational;

pub type ExactScore = QualityScoreNorm<Rational>;
pub type ScoreF64 = QualityScoreNorm<f64>;
pub type ScoreF32 = QualityScoreNorm<f32>;
