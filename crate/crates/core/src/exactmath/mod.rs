//! Exact arithmetic: cyclotomic numbers, univariate and sparse multivariate
//! polynomials, rational functions, and the expression parser.

mod cyclo;
mod multipoly;
mod parse;
mod ratfunc;
mod unipoly;

pub use cyclo::{cyclotomic_polynomial, euler_phi, Cyclo, SquareTest, Q};
pub use multipoly::{MultiPoly, Roster};
pub use parse::{parse_expression, parse_with, ParseError};
pub use ratfunc::RatFunc;
pub use unipoly::{SquarefreePart, UniPoly};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("zero input: {0}")]
    ZeroInput(&'static str),
    #[error("element of Q(zeta_{element}) does not lie in Q(zeta_{field})")]
    FieldMismatch { element: u32, field: u32 },
    #[error("division is not exact")]
    InexactDivision,
}
