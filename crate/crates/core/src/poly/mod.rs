//! Exact polynomial arithmetic.
//!
//! [`CoeffPoly`] is a commutative polynomial in the scheme unknowns with
//! rational coefficients; [`NCPoly`] attaches such polynomials to words in
//! the noncommuting operator symbols.

mod coeff;
mod ncpoly;
pub mod text;

use thiserror::Error;

pub use coeff::{rational_to_f64, CoeffMonomial, CoeffPoly, Family, Unknown};
pub use ncpoly::NCPoly;
pub use text::parse_rational;

/// Arbitrary-precision rational number.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("unbound unknown {0}")]
    Unbound(Unknown),
    #[error("invalid unknown name {0:?}")]
    BadUnknown(String),
    #[error("invalid number {0:?}")]
    BadNumber(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    coeff::fmt_rational(r)
}
