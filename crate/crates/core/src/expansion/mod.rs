//! Symbolic expansion of the local error and generation of order-condition
//! systems.

mod ansatz;
mod compositions;
mod generate;
mod spec;
mod system;

use thiserror::Error;

pub use ansatz::{apply_ansatz, apply_ansatz_nc, Resolution, Resolved};
pub use compositions::{Composition, Compositions};
pub use generate::{
    default_workers, derivative_term, leading_error, leading_error_with_workers,
    lyndon_coefficients_by_expansion, multinomial, order_conditions, order_conditions_with_workers,
    stage_expansion, WORKERS_ENV,
};
pub use spec::{fixed_from_pairs, Ansatz, SchemeSpec};
pub use system::{Condition, ConditionBlock, LeadingErrorTerm, OrderConditionSystem};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("malformed system document: {0}")]
    Format(String),
    #[error(transparent)]
    Word(#[from] crate::words::WordError),
}
