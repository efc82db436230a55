//! Numerical checks of schemes and generated systems on concrete matrices.

mod check;
mod coeffs;
mod expm;
mod matrix;
mod scheme;

use thiserror::Error;

pub use check::{
    check_conditions, lie_residual, ConditionReport, LieResidual, Residual, LIE_PRECONDITION_TOL,
};
pub use coeffs::{Coefficient, SchemeCoefficients};
pub use expm::{matrix_exp, series_exp};
pub use matrix::{
    eval_int_ncpoly, eval_ncpoly, eval_word, frobenius, random_operators, random_unit_matrix,
    Scalar,
};
pub use scheme::{
    default_h_grid, estimate_order, geometric_grid, local_error_norm, palindromic_defect,
    scheme_step, symmetry_defect, FitWarning, OrderEstimate, ERROR_FLOOR,
};

pub use num_complex::Complex64;

/// Dense matrix over `f64` or `Complex64`.
pub type DenseMatrix<T> = nalgebra::DMatrix<T>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum VerifyError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("coefficient {0} is complex where a real value is required")]
    NotReal(String),
    #[error("unbound unknown {0}")]
    Unbound(crate::poly::Unknown),
    #[error("singular Padé denominator")]
    Singular,
    #[error("coefficient file: {0}")]
    Format(String),
    #[error("lower-order condition at {word} (q={q}) has residual {residual:e}; the Lie-element residual is meaningless")]
    PreconditionViolated {
        q: usize,
        word: String,
        residual: f64,
    },
    #[error(transparent)]
    Expansion(#[from] crate::expansion::ExpansionError),
}

impl From<crate::poly::PolyError> for VerifyError {
    fn from(e: crate::poly::PolyError) -> Self {
        match e {
            crate::poly::PolyError::Unbound(u) => VerifyError::Unbound(u),
            other => VerifyError::Format(other.to_string()),
        }
    }
}
