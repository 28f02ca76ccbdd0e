//! Exact scalars and multivariate polynomial arithmetic.

pub mod parse;
pub mod poly;
pub mod scalar;

pub use parse::{parse_poly, ParseError};
pub use poly::{Poly, Ring};
pub use scalar::{rat, rat_int, CoeffKind, Rat, RatFun, Scalar, TruncSeries, UniPoly};
