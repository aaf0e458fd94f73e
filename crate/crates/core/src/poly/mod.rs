//! Exact polynomial arithmetic over the rationals.

mod monomial;
mod mpoly;
mod parse;
pub mod rational;
mod sturm;
mod upoly;

use thiserror::Error;

pub use monomial::{binomial, monomials_up_to, Monomial};
pub use mpoly::{Degree, F64Poly, MPoly};
pub use parse::ParseError;
pub use rational::Rational;
pub use sturm::{all_roots_nonnegative, all_roots_real, count_real_roots, sign_right_of, Bound, Interval, SturmChain};
pub use upoly::{root_multiplicity, UPoly};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("line direction must be nonzero")]
    ZeroDirection,
    #[error("degree {degree} exceeds the bound {bound}")]
    DegreeBound { degree: u32, bound: u32 },
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("interval endpoints are out of order")]
    InvalidInterval,
    #[error(transparent)]
    Parse(#[from] ParseError),
}
