use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Signed;

use super::matrix::{check_operators, eval_coeff, eval_int_ncpoly, eval_ncpoly};
use super::{frobenius, Scalar, SchemeCoefficients, VerifyError};
use crate::expansion::{
    derivative_term, leading_error_with_workers, order_conditions_with_workers, ConditionBlock,
    OrderConditionSystem, Resolved, SchemeSpec,
};
use crate::poly::{rational_to_f64, Rational};
use crate::words::{bracket_expansion, IntNCPoly, Word};

/// Lower-order residuals above this make [`lie_residual`] refuse to run.
pub const LIE_PRECONDITION_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub q: usize,
    pub word: Word,
    /// `|P(coeffs)|`.
    pub magnitude: f64,
    /// Exact value when every coefficient is rational.
    pub exact: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub tol: f64,
    pub residuals: Vec<Residual>,
    /// Unknowns whose value disagrees with the system's ansatz, with the
    /// size of the disagreement.
    pub ansatz_violations: Vec<(crate::poly::Unknown, f64)>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.ansatz_violations.is_empty() && self.residuals.iter().all(|r| self.within(r))
    }

    pub fn within(&self, r: &Residual) -> bool {
        match &r.exact {
            Some(x) if self.tol == 0.0 => num_traits::Zero::is_zero(x),
            _ => r.magnitude <= self.tol,
        }
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.magnitude)
            .fold(0.0, f64::max)
    }

    /// Residuals of one order.
    pub fn block(&self, q: usize) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(move |r| r.q == q)
    }
}

/// Evaluates every condition of `system` at `coeffs`.
pub fn check_conditions(
    system: &OrderConditionSystem,
    coeffs: &SchemeCoefficients,
    tol: f64,
) -> Result<ConditionReport, VerifyError> {
    if tol.is_nan() || tol < 0.0 {
        return Err(VerifyError::Invalid(format!(
            "tolerance {tol} must be nonnegative"
        )));
    }
    let spec = &system.spec;
    if coeffs.stages() != spec.stages() || coeffs.operators() != spec.operators() {
        return Err(VerifyError::Dimension(format!(
            "system is for s={}, m={} but coefficients have s={}, m={}",
            spec.stages(),
            spec.operators(),
            coeffs.stages(),
            coeffs.operators()
        )));
    }
    let exact = coeffs.exact_assignment();
    let mut residuals = Vec::new();
    for (q, cond) in system.conditions() {
        let (magnitude, exact_value) = match &exact {
            Some(assign) => {
                let v = cond.poly.eval(assign)?;
                (rational_to_f64(&v.abs()), Some(v))
            }
            None => (eval_coeff::<Complex64>(&cond.poly, coeffs)?.norm(), None),
        };
        residuals.push(Residual {
            q,
            word: cond.word,
            magnitude,
            exact: exact_value,
        });
    }

    let resolution = spec.resolution()?;
    let mut ansatz_violations = Vec::new();
    for u in spec.unknowns() {
        let actual = coeffs.get(&u).ok_or(VerifyError::Unbound(u))?;
        let implied = match resolution.resolve(&u) {
            Some(Resolved::Free(rep)) if *rep == u => continue,
            Some(Resolved::Free(rep)) => coeffs.get(rep).ok_or(VerifyError::Unbound(*rep))?.clone(),
            Some(Resolved::Zero) => super::Coefficient::ratio(0, 1),
            Some(Resolved::Value(v)) => super::Coefficient::Exact(v.clone()),
            None => continue,
        };
        let gap = match (actual.as_exact(), implied.as_exact()) {
            (Some(x), Some(y)) => rational_to_f64(&(x - y).abs()),
            _ => (actual.as_complex() - implied.as_complex()).norm(),
        };
        let exact_pair = actual.as_exact().is_some() && implied.as_exact().is_some();
        if (exact_pair && gap != 0.0) || gap > tol {
            ansatz_violations.push((u, gap));
        }
    }
    Ok(ConditionReport {
        tol,
        residuals,
        ansatz_violations,
    })
}

/// Unreduced Lyndon coefficients of order `q`.
fn lyndon_block(raw: &SchemeSpec, q: usize) -> Result<ConditionBlock, VerifyError> {
    let one = std::num::NonZeroUsize::MIN;
    Ok(if q == 1 {
        order_conditions_with_workers(raw, 1, one)?.blocks.remove(0)
    } else {
        leading_error_with_workers(raw, q - 1, one)?.block
    })
}

/// Distance between the `q`-th Taylor coefficient of the local error and
/// its Lie-element representation `Σ_k P_{q,k} · [w_k]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LieResidual {
    pub absolute: f64,
    /// `absolute` divided by the summed magnitude of all terms on both sides.
    pub relative: f64,
    pub lhs_norm: f64,
}

/// Compares the numeric value of the `q`-th derivative term with its
/// expansion in standard brackets of the degree-`q` Lyndon words. The
/// bracket coordinates are recovered from the order-`q` condition values;
/// while no bracket contains another Lyndon word (two operators, `q ≤ 4`)
/// they are those values themselves. The coefficients must satisfy every
/// condition of order below `q`.
pub fn lie_residual<T: Scalar>(
    spec: &SchemeSpec,
    coeffs: &SchemeCoefficients,
    q: usize,
    ops: &[DMatrix<T>],
) -> Result<LieResidual, VerifyError> {
    if q == 0 {
        return Err(VerifyError::Invalid("q must be at least 1".into()));
    }
    if coeffs.stages() != spec.stages() || coeffs.operators() != spec.operators() {
        return Err(VerifyError::Dimension(
            "coefficients do not match the scheme shape".into(),
        ));
    }
    check_operators(ops, spec.operators())?;
    let raw = SchemeSpec::new(spec.stages(), spec.operators())?;

    for lower in 1..q {
        for cond in &lyndon_block(&raw, lower)?.conditions {
            let r = eval_coeff::<Complex64>(&cond.poly, coeffs)?.norm();
            if r > LIE_PRECONDITION_TOL {
                return Err(VerifyError::PreconditionViolated {
                    q: lower,
                    word: cond.word.to_string(),
                    residual: r,
                });
            }
        }
    }

    let (lhs, lhs_scale) = eval_ncpoly(&derivative_term(&raw, q)?, coeffs, ops)?;
    let d = lhs.nrows();
    let mut rhs = DMatrix::<T>::zeros(d, d);
    let mut rhs_scale = 0.0;
    // The Lyndon-word coefficients are not yet the coordinates in the basis
    // of standard brackets: a bracket may contain other, larger Lyndon words.
    // The coordinate matrix is unitriangular, so back-substitute in lex order.
    let top = lyndon_block(&raw, q)?;
    let mut basis: Vec<(Word, IntNCPoly, T)> = Vec::with_capacity(top.len());
    for cond in &top.conditions {
        let mut coord: T = eval_coeff(&cond.poly, coeffs)?;
        for (_, expansion, c) in &basis {
            let overlap = expansion.coeff(&cond.word);
            if overlap != 0 {
                coord -= *c * T::from_real(overlap as f64);
            }
        }
        let expansion =
            bracket_expansion(&cond.word).map_err(crate::expansion::ExpansionError::from)?;
        basis.push((cond.word, expansion, coord));
    }
    for (_, expansion, coord) in &basis {
        let bracket = eval_int_ncpoly(expansion, ops) * *coord;
        rhs_scale += frobenius(&bracket);
        rhs += bracket;
    }
    let absolute = frobenius(&(&lhs - &rhs));
    let scale = lhs_scale + rhs_scale;
    let relative = if scale == 0.0 { 0.0 } else { absolute / scale };
    Ok(LieResidual {
        absolute,
        relative,
        lhs_norm: frobenius(&lhs),
    })
}
