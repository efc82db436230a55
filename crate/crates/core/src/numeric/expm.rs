//! Matrix exponential by scaling and squaring with the degree-13 diagonal
//! Padé approximant (Higham 2005).

use nalgebra::DMatrix;

use super::{Scalar, VerifyError};

/// Padé(13, 13) numerator coefficients `b_0 … b_13`.
const PADE13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Largest 1-norm for which Padé(13) needs no scaling at double precision.
const THETA13: f64 = 5.371_920_351_148_152;

fn norm1<T: Scalar>(m: &DMatrix<T>) -> f64 {
    m.column_iter()
        .map(|col| col.iter().map(|x| x.modulus()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn matrix_exp<T: Scalar>(m: &DMatrix<T>) -> Result<DMatrix<T>, VerifyError> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(VerifyError::Dimension(format!(
            "matrix exponential of a non-square {}x{} matrix",
            n,
            m.ncols()
        )));
    }
    if m.iter().any(|x| !x.modulus().is_finite()) {
        return Err(VerifyError::Invalid("matrix has non-finite entries".into()));
    }
    if n == 0 {
        return Ok(m.clone());
    }
    let norm = norm1(m);
    let squarings = if norm > THETA13 {
        (norm / THETA13).log2().ceil().max(0.0) as i32
    } else {
        0
    };
    let scaled = m * T::from_real(0.5f64.powi(squarings));

    let c = |k: usize| T::from_real(PADE13[k]);
    let id = DMatrix::<T>::identity(n, n);
    let a2 = &scaled * &scaled;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * c(13) + &a4 * c(11) + &a2 * c(9))
        + &a6 * c(7)
        + &a4 * c(5)
        + &a2 * c(3)
        + &id * c(1);
    let u = &scaled * u_inner;
    let v = &a6 * (&a6 * c(12) + &a4 * c(10) + &a2 * c(8))
        + &a6 * c(6)
        + &a4 * c(4)
        + &a2 * c(2)
        + &id * c(0);

    let mut result = (&v - &u)
        .lu()
        .solve(&(&v + &u))
        .ok_or(VerifyError::Singular)?;
    for _ in 0..squarings {
        result = &result * &result;
    }
    Ok(result)
}

/// Truncated Taylor series `Σ_{k≤terms} M^k/k!`; reference for small norms.
pub fn series_exp<T: Scalar>(m: &DMatrix<T>, terms: usize) -> DMatrix<T> {
    let n = m.nrows();
    let mut sum = DMatrix::<T>::identity(n, n);
    let mut term = DMatrix::<T>::identity(n, n);
    for k in 1..=terms {
        term = &term * m * T::from_real(1.0 / k as f64);
        sum += &term;
    }
    sum
}
