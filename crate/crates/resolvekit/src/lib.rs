//! Exact algorithmic resolution of marked ideals on affine charts over
//! characteristic-zero coefficient rings, together with equiresolution
//! condition checks for one-parameter families.
//!
//! The crate is organised in layers:
//!
//! * [`exactalg`] — exact scalars (rationals, truncated power series,
//!   univariate rational functions) and sparse multivariate polynomials;
//! * [`idealkit`] — Gröbner bases and ideal-theoretic operations
//!   (membership, radical membership, derivative ideals, coefficient
//!   ideals, homogenisation, elimination);
//! * [`geom`] — marked charts, divisors, blow-ups and chart trees;
//! * [`resolver`] — the resolution invariants and the descent-driven
//!   resolution, principalisation and embedded-resolution drivers;
//! * [`families`] — one-parameter families and the equiresolution
//!   condition checkers;
//! * [`cli`] — the JSON problem interface used by the `resolvekit` binary.

pub mod exactalg;
pub mod idealkit;
pub mod geom;
pub mod resolver;
pub mod families;
pub mod cli;

pub use exactalg::{CoeffKind, Poly, Ring, Scalar};
pub use idealkit::Ideal;
pub use geom::{ChartTree, Divisor, MarkedChart};
pub use resolver::{
    principalize, resolve, resolve_embedded, RFValue, Resolution, ResolveError, ResolveOptions,
};
