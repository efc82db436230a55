use nalgebra::DMatrix;

use super::matrix::check_operators;
use super::{frobenius, matrix_exp, Scalar, SchemeCoefficients, VerifyError};
use crate::poly::Family;

/// Errors below this are treated as rounding noise in order fits.
pub const ERROR_FLOOR: f64 = 1e-12;

/// One step `S(h) = S_s(h) ⋯ S_1(h)`, `S_j(h) = e^{h c_j C} e^{h b_j B} e^{h a_j A}`.
pub fn scheme_step<T: Scalar>(
    coeffs: &SchemeCoefficients,
    ops: &[DMatrix<T>],
    h: f64,
) -> Result<DMatrix<T>, VerifyError> {
    let m = coeffs.operators();
    let d = check_operators(ops, m)?;
    let mut step = DMatrix::<T>::identity(d, d);
    for j in 0..coeffs.stages() {
        let mut stage = DMatrix::<T>::identity(d, d);
        for (f, op) in Family::ALL[..m].iter().zip(ops) {
            let c = T::from_coefficient(&coeffs.family(*f).expect("family present")[j])?;
            // later families act last, so they multiply from the left
            stage = matrix_exp(&(op * (c * T::from_real(h))))? * stage;
        }
        step = stage * step;
    }
    Ok(step)
}

fn exact_flow<T: Scalar>(ops: &[DMatrix<T>], h: f64) -> Result<DMatrix<T>, VerifyError> {
    let d = ops[0].nrows();
    let sum = ops
        .iter()
        .fold(DMatrix::<T>::zeros(d, d), |acc, op| acc + op);
    matrix_exp(&(sum * T::from_real(h)))
}

/// `‖S(h) − e^{h(A+B(+C))}‖_F`.
pub fn local_error_norm<T: Scalar>(
    coeffs: &SchemeCoefficients,
    ops: &[DMatrix<T>],
    h: f64,
) -> Result<f64, VerifyError> {
    let step = scheme_step(coeffs, ops, h)?;
    Ok(frobenius(&(step - exact_flow(ops, h)?)))
}

/// `‖S(−h)·S(h) − I‖_F`; zero for symmetric schemes.
pub fn symmetry_defect<T: Scalar>(
    coeffs: &SchemeCoefficients,
    ops: &[DMatrix<T>],
    h: f64,
) -> Result<f64, VerifyError> {
    let fwd = scheme_step(coeffs, ops, h)?;
    let back = scheme_step(coeffs, ops, -h)?;
    let d = fwd.nrows();
    Ok(frobenius(&(back * fwd - DMatrix::<T>::identity(d, d))))
}

/// `‖S(−h)·Š(h) − I‖_F` where `Š` is the scheme with `A` and `B`
/// interchanged; zero for palindromic schemes.
pub fn palindromic_defect<T: Scalar>(
    coeffs: &SchemeCoefficients,
    ops: &[DMatrix<T>],
    h: f64,
) -> Result<f64, VerifyError> {
    if coeffs.operators() != 2 {
        return Err(VerifyError::Invalid(
            "the palindromic identity is defined for two operators".into(),
        ));
    }
    check_operators(ops, 2)?;
    let swapped = [ops[1].clone(), ops[0].clone()];
    let fwd = scheme_step(coeffs, &swapped, h)?;
    let back = scheme_step(coeffs, ops, -h)?;
    let d = fwd.nrows();
    Ok(frobenius(&(back * fwd - DMatrix::<T>::identity(d, d))))
}

/// `count` step sizes geometrically spaced from `start` down to `end`.
pub fn geometric_grid(start: f64, end: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![start];
    }
    let ratio = (end / start).powf(1.0 / (count - 1) as f64);
    (0..count).map(|i| start * ratio.powi(i as i32)).collect()
}

/// Eight points from `1e-1` to `1e-3`.
pub fn default_h_grid() -> Vec<f64> {
    geometric_grid(1e-1, 1e-3, 8)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitWarning {
    /// Too few errors above [`ERROR_FLOOR`] for a meaningful fit; the
    /// scheme is exact to rounding or the grid is too fine.
    Degenerate { usable: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderEstimate {
    /// Least-squares slope of `log err` against `log h`; `None` when fewer
    /// than two usable points remain.
    pub slope: Option<f64>,
    /// `(h, error)` for every grid point.
    pub samples: Vec<(f64, f64)>,
    pub used: usize,
    pub warning: Option<FitWarning>,
}

impl OrderEstimate {
    /// Observed order of the scheme, `slope − 1`.
    pub fn order(&self) -> Option<f64> {
        self.slope.map(|s| s - 1.0)
    }
}

fn ls_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Slope of the local error in a log-log fit over `h_grid`. Points with
/// error below [`ERROR_FLOOR`] are dropped.
pub fn estimate_order<T: Scalar>(
    coeffs: &SchemeCoefficients,
    ops: &[DMatrix<T>],
    h_grid: &[f64],
) -> Result<OrderEstimate, VerifyError> {
    if h_grid.len() < 4 {
        return Err(VerifyError::Invalid(format!(
            "order fit needs at least 4 step sizes, got {}",
            h_grid.len()
        )));
    }
    if h_grid.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(VerifyError::Invalid(
            "step sizes must be positive and finite".into(),
        ));
    }
    let samples = h_grid
        .iter()
        .map(|&h| local_error_norm(coeffs, ops, h).map(|e| (h, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let usable: Vec<(f64, f64)> = samples
        .iter()
        .filter(|(_, e)| *e >= ERROR_FLOOR)
        .map(|&(h, e)| (h.ln(), e.ln()))
        .collect();
    let used = usable.len();
    let slope = (used >= 2).then(|| ls_slope(&usable));
    let warning = (used < 4).then_some(FitWarning::Degenerate { usable: used });
    Ok(OrderEstimate {
        slope,
        samples,
        used,
        warning,
    })
}
