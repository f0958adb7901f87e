//! Column-restricted least squares, residuals and correlation lists.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::math;

pub mod dense;
mod matrix;
mod qr;
mod support;

pub use matrix::DesignMatrix;
pub use qr::RANK_TOLERANCE;
pub use support::SupportVector;

pub(crate) use matrix::axpy;

/// Relative tolerance of the "residual is zero" test: `‖r‖ ≤ tol · max(‖y‖, 1)`.
pub const RESIDUAL_ZERO_TOL: f64 = 1e-9;

/// Least-squares fit of `y` on the columns of a support.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LeastSquaresFit {
    /// Coefficients aligned with the support entries.
    pub coefficients: Vec<f64>,
    pub residual: Vec<f64>,
    pub residual_norm: f64,
    /// Numerical rank of `Φ_s`.
    pub rank: usize,
}

/// Minimizer of `‖y − Φ_s z‖₂`, minimum-norm when `Φ_s` is rank deficient.
pub fn restricted_least_squares(
    phi: &DesignMatrix,
    s: &SupportVector,
    y: &[f64],
) -> Result<LeastSquaresFit> {
    validate(phi, s, y)?;
    Ok(fit_unchecked(phi, s, y))
}

/// `y^{⊥s}`: the component of `y` orthogonal to the span of `Φ_s`.
pub fn residual(phi: &DesignMatrix, s: &SupportVector, y: &[f64]) -> Result<Vec<f64>> {
    validate(phi, s, y)?;
    if s.is_empty() {
        return Ok(y.to_vec());
    }
    Ok(fit_unchecked(phi, s, y).residual)
}

pub(crate) fn fit_unchecked(phi: &DesignMatrix, s: &[usize], y: &[f64]) -> LeastSquaresFit {
    let n = phi.rows();
    if s.is_empty() {
        return LeastSquaresFit {
            coefficients: Vec::new(),
            residual: y.to_vec(),
            residual_norm: math::norm2(y),
            rank: 0,
        };
    }
    let mut block = Vec::with_capacity(n * s.len());
    for &c in s {
        block.extend_from_slice(phi.column(c));
    }
    let qr = qr::PivotedQr::factor(n, s.len(), block);
    let coefficients = qr.solve(y);
    let fitted = phi.support_matvec(s, &coefficients);
    let residual: Vec<f64> = y.iter().zip(&fitted).map(|(a, b)| a - b).collect();
    let residual_norm = math::norm2(&residual);
    LeastSquaresFit {
        coefficients,
        residual,
        residual_norm,
        rank: qr.rank(),
    }
}

fn validate(phi: &DesignMatrix, s: &SupportVector, y: &[f64]) -> Result<()> {
    phi.check_rows(y.len(), "measurement vector")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    s.check_range(phi.cols())
}

/// Whether `r` passes the zero-residual exit test relative to `y`.
pub fn residual_is_zero(r: &[f64], y_norm: f64) -> bool {
    math::norm2(r) <= RESIDUAL_ZERO_TOL * y_norm.max(1.0)
}

/// The `ell` features with the largest `|Φ_iᵀ r|`, ascending; ties go to the lower index.
///
/// Equivalently the argmax of `‖Φ_qᵀ r‖₁` over all size-`ell` supports `q`.
pub fn top_correlated(phi: &DesignMatrix, r: &[f64], ell: usize) -> Result<SupportVector> {
    phi.check_rows(r.len(), "residual")?;
    if ell == 0 || ell > phi.cols() {
        return Err(Error::Config(alloc::format!(
            "list size {ell} outside [1, {}]",
            phi.cols()
        )));
    }
    if r.iter().all(|v| *v == 0.0) {
        return Err(Error::Precondition("residual is identically zero"));
    }
    let scores: Vec<f64> = phi.t_matvec(r)?.into_iter().map(f64::abs).collect();
    Ok(top_by_score(&scores, ell))
}

/// Indices of the `count` largest scores, ascending; ties go to the lower index.
pub(crate) fn top_by_score(scores: &[f64], count: usize) -> SupportVector {
    let count = count.min(scores.len());
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    let order = |a: &usize, b: &usize| -> Ordering {
        scores[*b].total_cmp(&scores[*a]).then(a.cmp(b))
    };
    if count < idx.len() && count > 0 {
        idx.select_nth_unstable_by(count - 1, order);
    }
    idx.truncate(count);
    idx.sort_unstable();
    SupportVector::from_sorted_unchecked(idx)
}

/// Support of the `m` largest-magnitude entries of a full-length vector.
pub fn top_magnitude_support(values: &[f64], m: usize) -> SupportVector {
    let scores: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    top_by_score(&scores, m)
}

/// Scatters support-aligned coefficients into a length-`d` vector.
pub fn scatter(d: usize, s: &[usize], coefficients: &[f64]) -> Vec<f64> {
    let mut x = alloc::vec![0.0; d];
    for (&i, &c) in s.iter().zip(coefficients) {
        x[i] = c;
    }
    x
}

/// Row-major Gram block `Φ_sᵀ Φ_s`.
pub fn gram(phi: &DesignMatrix, s: &[usize]) -> Vec<f64> {
    let k = s.len();
    let mut g = alloc::vec![0.0; k * k];
    for a in 0..k {
        for b in a..k {
            let v = math::dot(phi.column(s[a]), phi.column(s[b]));
            g[a * k + b] = v;
            g[b * k + a] = v;
        }
    }
    g
}
