use alloc::vec::Vec;

use super::{check_sparsity, is_zero_measurement, refit, zero_result, RecoveryResult};
use crate::error::{Error, Result};
use crate::linalg::{self, DesignMatrix, SupportVector};
use crate::lire::{pad_support, FillPolicy};
use crate::math;

/// Orthogonal matching pursuit with `m` iterations.
///
/// Each iteration adds the feature maximizing `|Φ_iᵀ r| / ‖Φ_i‖` and refits
/// on the accumulated support. If the residual vanishes early the support is
/// completed to `m` entries with correlation fill.
pub fn omp(phi: &DesignMatrix, y: &[f64], m: usize) -> Result<RecoveryResult> {
    check_sparsity(phi, m)?;
    phi.check_rows(y.len(), "measurement vector")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    if is_zero_measurement(y) {
        return Ok(zero_result(m, 0.0));
    }

    let y_norm = math::norm2(y);
    let mut support = SupportVector::empty();
    let mut r = y.to_vec();
    let mut trace = Vec::with_capacity(m);
    let mut iterations = 0;

    while support.len() < m {
        if linalg::residual_is_zero(&r, y_norm) {
            break;
        }
        let corr = phi.t_matvec(&r)?;
        let mut best: Option<(usize, f64)> = None;
        for (i, c) in corr.iter().enumerate() {
            let norm = phi.column_norm(i);
            if norm == 0.0 || support.contains_index(i) {
                continue;
            }
            let score = c.abs() / norm;
            if best.is_none_or(|(_, b)| score > b) {
                best = Some((i, score));
            }
        }
        let Some((pick, _)) = best else { break };
        support = support.with_index(pick);
        let fit = linalg::fit_unchecked(phi, &support, y);
        r = fit.residual;
        trace.push(fit.residual_norm);
        iterations += 1;
    }

    if support.len() < m {
        support = pad_support(phi, y, &support, m, FillPolicy::Correlation)?;
    }
    let (coefficients, final_residual_norm) = refit(phi, &support, y);
    Ok(RecoveryResult {
        support,
        coefficients,
        iterations,
        final_residual_norm,
        residual_trace: trace,
        converged: true,
    })
}
