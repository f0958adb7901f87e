//! Baseline support recoverers: OMP, CoSaMP, basis pursuit and LASSO.

use alloc::vec::Vec;

use crate::error::{config_err, Result};
use crate::linalg::{self, DesignMatrix, SupportVector};

mod bp;
mod cosamp;
mod lasso;
mod omp;

pub use bp::{basis_pursuit, bp_support, BpSolution};
pub use cosamp::cosamp;
pub use lasso::{lasso, lasso_cv, LassoCvResult, LassoSolution};
pub use omp::omp;

/// Outcome of a greedy recoverer.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecoveryResult {
    pub support: SupportVector,
    /// Coefficients aligned with `support`.
    pub coefficients: Vec<f64>,
    pub iterations: usize,
    /// `‖y − Φ_support · coefficients‖₂`.
    pub final_residual_norm: f64,
    /// Residual norm after each iteration.
    pub residual_trace: Vec<f64>,
    pub converged: bool,
}

/// Regularization choice for LASSO-based recovery.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum LassoLambda {
    Fixed(f64),
    /// Log-spaced grid from `λ_max = ‖Φᵀy‖_∞ / n` down to `min_ratio · λ_max`.
    CrossValidated {
        folds: usize,
        grid_points: usize,
        min_ratio: f64,
    },
}

impl Default for LassoLambda {
    fn default() -> Self {
        Self::CrossValidated {
            folds: 10,
            grid_points: 50,
            min_ratio: 1e-3,
        }
    }
}

/// Iterative-solver knobs shared by basis pursuit and LASSO.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolverParams {
    /// ADMM iterations for BP, coordinate sweeps for LASSO.
    pub max_iterations: usize,
    pub tolerance: f64,
    pub admm_rho: f64,
    pub lasso_lambda: LassoLambda,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            max_iterations: 5000,
            tolerance: 1e-6,
            admm_rho: 1.0,
            lasso_lambda: LassoLambda::default(),
        }
    }
}

impl SolverParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > 0.0) {
            return Err(config_err("tolerance must be positive"));
        }
        if !(self.admm_rho > 0.0) {
            return Err(config_err("ADMM rho must be positive"));
        }
        if self.max_iterations == 0 {
            return Err(config_err("max_iterations must be positive"));
        }
        match self.lasso_lambda {
            LassoLambda::Fixed(l) if !(l >= 0.0) => Err(config_err("lambda must be nonnegative")),
            LassoLambda::CrossValidated {
                folds,
                grid_points,
                min_ratio,
            } if folds < 2 || grid_points < 1 || !(min_ratio > 0.0 && min_ratio <= 1.0) => {
                Err(config_err("invalid cross-validation grid"))
            }
            _ => Ok(()),
        }
    }
}

pub(crate) fn check_sparsity(phi: &DesignMatrix, m: usize) -> Result<()> {
    if m > phi.rows() || m > phi.cols() {
        return Err(config_err(alloc::format!(
            "m={m} exceeds n={} or d={}",
            phi.rows(),
            phi.cols()
        )));
    }
    Ok(())
}

/// Lowest-index support of size `m` with zero coefficients.
pub(crate) fn zero_result(m: usize, residual_norm: f64) -> RecoveryResult {
    RecoveryResult {
        support: SupportVector::full(m),
        coefficients: alloc::vec![0.0; m],
        iterations: 0,
        final_residual_norm: residual_norm,
        residual_trace: Vec::new(),
        converged: true,
    }
}

pub(crate) fn is_zero_measurement(y: &[f64]) -> bool {
    y.iter().all(|v| v.abs() <= f64::MIN_POSITIVE)
}

pub(crate) fn refit(phi: &DesignMatrix, support: &SupportVector, y: &[f64]) -> (Vec<f64>, f64) {
    let fit = linalg::fit_unchecked(phi, support, y);
    (fit.coefficients, fit.residual_norm)
}
