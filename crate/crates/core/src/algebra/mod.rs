//! Exact arithmetic foundation: rationals, Gaussian rationals, multiindices,
//! multivariate polynomials over symbolic parameters, and the
//! polynomial-exponential algebra of closed-form solutions.

mod gaussian;
mod multiindex;
mod polyexp;
mod polynomial;
mod rational;

pub use gaussian::GaussianRational;
pub(crate) use multiindex::for_each_of_degree as multiindex_for_each_of_degree;
pub use multiindex::Multiindex;
pub use polyexp::PolyExp;
pub use polynomial::{Polynomial, SymbolTable};
pub use rational::{parse_rational, rational, Rational};

use thiserror::Error;

/// Errors raised while building algebra values from external data.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("cannot parse `{0}` as a rational number")]
    ParseRational(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
    #[error("empty symbol name")]
    EmptySymbolName,
    #[error("duplicate symbol `{0}`")]
    DuplicateSymbol(String),
}
