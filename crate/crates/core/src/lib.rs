//! Order conditions for operator splitting methods.
//!
//! The crate expands the Taylor coefficients of the local error of a
//! splitting scheme `S(h) = S_s(h) ⋯ S_1(h)`, `S_j(h) = e^{h b_j B} e^{h a_j A}`
//! (optionally with a third operator `C`) as noncommutative polynomials,
//! reads off the coefficients at Lyndon words to obtain polynomial order
//! conditions in the unknowns `a[j]`, `b[j]`, `c[j]`, and checks schemes
//! against those conditions numerically.
//!
//! ```
//! use ocgen_core::expansion::{order_conditions, SchemeSpec};
//!
//! let sys = order_conditions(&SchemeSpec::plain(2), 2).unwrap();
//! let second = sys.block(2).unwrap();
//! assert_eq!(second.conditions[0].poly.to_string(), "2*a[2]*b[1]-1");
//! ```

pub mod expansion;
pub mod numeric;
pub mod poly;
pub mod words;

use thiserror::Error;

pub use expansion::{
    derivative_term, leading_error, order_conditions, Ansatz, ConditionBlock, ExpansionError,
    LeadingErrorTerm, OrderConditionSystem, SchemeSpec,
};
pub use numeric::{SchemeCoefficients, VerifyError};
pub use poly::{CoeffPoly, NCPoly, PolyError, Rational, Unknown};
pub use words::{Alphabet, IntNCPoly, Word, WordError};

/// Any error raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Word(#[from] WordError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Expansion(#[from] ExpansionError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
}
