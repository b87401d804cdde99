//! Exact decision procedures for freeness of the composition semigroup
//! generated by two polynomials, truncated power series or rational
//! functions over a field.
//!
//! The crate is organised bottom-up: [`field`] supplies exact coefficient
//! arithmetic, [`poly`] and [`series`] the objects being composed,
//! [`semigroup`] words, relations and the bounded relation search, and
//! [`classify`] the verdicts with verified witnesses.

pub mod classify;
pub mod field;
pub mod poly;
pub mod semigroup;
pub mod series;
pub mod text;

pub use classify::{classify_poly, classify_rational, classify_series, Case, Classification, Verdict};
pub use field::{Field, FieldElement, FieldError};
pub use poly::{LinearMap, PolyError, Polynomial, RationalFunction};
pub use semigroup::{Letter, Relation, SemigroupError, Word};
pub use series::{SeriesError, TruncatedSeries};
pub use text::ParseError;
