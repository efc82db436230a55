use nalgebra::{ComplexField, DMatrix};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Coefficient, SchemeCoefficients, VerifyError};
use crate::poly::{rational_to_f64, NCPoly, Rational, Unknown};
use crate::words::{IntNCPoly, Word};

/// Field of matrix entries: `f64` or `Complex64`.
pub trait Scalar: ComplexField<RealField = f64> + Copy {
    fn from_coefficient(c: &Coefficient) -> Result<Self, VerifyError>;

    fn from_rational(r: &Rational) -> Self {
        Self::from_real(rational_to_f64(r))
    }
}

impl Scalar for f64 {
    fn from_coefficient(c: &Coefficient) -> Result<Self, VerifyError> {
        match c {
            Coefficient::Exact(r) => Ok(rational_to_f64(r)),
            Coefficient::Real(x) => Ok(*x),
            Coefficient::Complex(z) if z.im == 0.0 => Ok(z.re),
            Coefficient::Complex(z) => Err(VerifyError::NotReal(z.to_string())),
        }
    }
}

impl Scalar for Complex64 {
    fn from_coefficient(c: &Coefficient) -> Result<Self, VerifyError> {
        Ok(c.as_complex())
    }
}

pub fn frobenius<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.iter().map(|x| x.modulus_squared()).sum::<f64>().sqrt()
}

/// `dim × dim` matrix with entries uniform in `[-1, 1]`, scaled to unit
/// Frobenius norm.
pub fn random_unit_matrix<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..=1.0));
    let n = frobenius(&m);
    if n == 0.0 {
        m
    } else {
        m / n
    }
}

/// `count` independent random unit-norm matrices from a fixed seed.
pub fn random_operators(count: usize, dim: usize, seed: u64) -> Vec<DMatrix<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| random_unit_matrix(dim, &mut rng))
        .collect()
}

pub(crate) fn check_operators<T: Scalar>(
    ops: &[DMatrix<T>],
    count: usize,
) -> Result<usize, VerifyError> {
    if ops.len() != count {
        return Err(VerifyError::Dimension(format!(
            "expected {count} operator matrices, got {}",
            ops.len()
        )));
    }
    let d = ops[0].nrows();
    for (i, m) in ops.iter().enumerate() {
        if m.nrows() != d || m.ncols() != d {
            return Err(VerifyError::Dimension(format!(
                "operator {i} is {}x{}, expected {d}x{d}",
                m.nrows(),
                m.ncols()
            )));
        }
    }
    Ok(d)
}

/// Product of the operator matrices spelled by `w` (identity for the empty word).
pub fn eval_word<T: Scalar>(w: &Word, ops: &[DMatrix<T>]) -> DMatrix<T> {
    let d = ops[0].nrows();
    let mut out = DMatrix::<T>::identity(d, d);
    for l in w.letters() {
        out = &out * &ops[l as usize];
    }
    out
}

pub fn eval_int_ncpoly<T: Scalar>(p: &IntNCPoly, ops: &[DMatrix<T>]) -> DMatrix<T> {
    let d = ops[0].nrows();
    let mut out = DMatrix::<T>::zeros(d, d);
    for (w, c) in p.iter() {
        out += eval_word(w, ops) * T::from_real(*c as f64);
    }
    out
}

/// Substitutes matrices for the symbols and `coeffs` for the unknowns.
/// Also returns `Σ |c_w|·‖W_w‖`, the magnitude scale of the summed terms.
pub fn eval_ncpoly<T: Scalar>(
    p: &NCPoly,
    coeffs: &SchemeCoefficients,
    ops: &[DMatrix<T>],
) -> Result<(DMatrix<T>, f64), VerifyError> {
    let d = check_operators(ops, ops.len().max(1))?;
    let mut out = DMatrix::<T>::zeros(d, d);
    let mut scale = 0.0;
    for (w, c) in p.iter() {
        if w.max_letter().is_some_and(|l| l as usize >= ops.len()) {
            return Err(VerifyError::Dimension(format!(
                "word {w} needs more than {} operators",
                ops.len()
            )));
        }
        let value = eval_coeff::<T>(c, coeffs)?;
        let term = eval_word(w, ops) * value;
        scale += frobenius(&term);
        out += term;
    }
    Ok((out, scale))
}

pub(crate) fn eval_coeff<T: Scalar>(
    c: &crate::poly::CoeffPoly,
    coeffs: &SchemeCoefficients,
) -> Result<T, VerifyError> {
    let mut err = None;
    let value = c.eval_with(
        |u: &Unknown| match coeffs.get(u).map(T::from_coefficient) {
            Some(Ok(v)) => Some(v),
            Some(Err(e)) => {
                err.get_or_insert(e);
                Some(T::zero())
            }
            None => None,
        },
        T::from_rational,
    )?;
    match err {
        Some(e) => Err(e),
        None => Ok(value),
    }
}
