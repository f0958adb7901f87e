use alloc::vec::Vec;

use super::{check_sparsity, is_zero_measurement, zero_result, RecoveryResult, SolverParams};
use crate::error::{Error, Result};
use crate::linalg::{self, top_by_score, DesignMatrix, SupportVector};
use crate::math;

/// Relative residual tolerance for the early exit: `‖r‖ ≤ 1e-9 ‖y‖`.
const RESIDUAL_TOL: f64 = 1e-9;

/// Compressive sampling matching pursuit.
///
/// Runs `⌈d/4⌉` iterations or until the residual falls below `1e-9 ‖y‖`.
/// `params` is accepted for interface symmetry; only its validity is checked.
pub fn cosamp(phi: &DesignMatrix, y: &[f64], m: usize, params: &SolverParams) -> Result<RecoveryResult> {
    params.validate()?;
    check_sparsity(phi, m)?;
    phi.check_rows(y.len(), "measurement vector")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    if is_zero_measurement(y) || m == 0 {
        return Ok(zero_result(m, math::norm2(y)));
    }

    let d = phi.cols();
    let max_iter = d.div_ceil(4).max(1);
    let stop = RESIDUAL_TOL * math::norm2(y);

    let mut support = SupportVector::empty();
    let mut coefficients: Vec<f64> = Vec::new();
    let mut r = y.to_vec();
    let mut r_norm = math::norm2(&r);
    let mut trace = Vec::new();
    let mut iterations = 0;

    while iterations < max_iter && r_norm > stop {
        let proxy: Vec<f64> = phi.t_matvec(&r)?.into_iter().map(f64::abs).collect();
        let omega = top_by_score(&proxy, (2 * m).min(d));
        let merged = omega.union(&support);
        let b = linalg::fit_unchecked(phi, &merged, y).coefficients;

        let pruned = top_by_score(&b.iter().map(|v| v.abs()).collect::<Vec<_>>(), m);
        let next_support =
            SupportVector::from_sorted_unchecked(pruned.iter().map(|&p| merged[p]).collect());
        let next_coef: Vec<f64> = pruned.iter().map(|&p| b[p]).collect();

        iterations += 1;
        let unchanged = next_support == support && next_coef == coefficients;
        support = next_support;
        coefficients = next_coef;
        let fitted = phi.support_matvec(&support, &coefficients);
        r = y.iter().zip(&fitted).map(|(a, f)| a - f).collect();
        r_norm = math::norm2(&r);
        trace.push(r_norm);
        if unchanged {
            break;
        }
    }

    Ok(RecoveryResult {
        support,
        coefficients,
        iterations,
        final_residual_norm: r_norm,
        residual_trace: trace,
        converged: r_norm <= stop,
    })
}
