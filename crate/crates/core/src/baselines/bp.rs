use alloc::vec::Vec;

use super::SolverParams;
use crate::error::{Error, Result};
use crate::linalg::{dense::Cholesky, top_magnitude_support, DesignMatrix, SupportVector};
use crate::math;

/// Basis pursuit solution from ADMM.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BpSolution {
    /// The feasible iterate, `Φ x = y` up to rounding.
    pub x: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub primal_residual: f64,
    pub dual_residual: f64,
}

/// `min ‖x‖₁ s.t. Φx = y` by ADMM on the splitting `x = z`.
///
/// The x-update projects onto the affine feasible set through a cached
/// Cholesky factor of `ΦΦᵀ`; the z-update soft-thresholds at `1/ρ`. Stops when
/// `‖x − z‖ ≤ √d·tol + tol·max(‖x‖, ‖z‖)` and
/// `ρ‖z − z_prev‖ ≤ √d·tol + tol·ρ‖u‖`.
pub fn basis_pursuit(phi: &DesignMatrix, y: &[f64], params: &SolverParams) -> Result<BpSolution> {
    params.validate()?;
    phi.check_rows(y.len(), "measurement vector")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    let (n, d) = (phi.rows(), phi.cols());
    if y.iter().all(|v| *v == 0.0) {
        return Ok(BpSolution {
            x: alloc::vec![0.0; d],
            iterations: 0,
            converged: true,
            primal_residual: 0.0,
            dual_residual: 0.0,
        });
    }

    // ΦΦᵀ, row-major n × n.
    let mut aat = alloc::vec![0.0; n * n];
    for c in 0..d {
        let col = phi.column(c);
        for i in 0..n {
            let ci = col[i];
            if ci == 0.0 {
                continue;
            }
            for j in i..n {
                aat[i * n + j] += ci * col[j];
            }
        }
    }
    for i in 0..n {
        for j in 0..i {
            aat[i * n + j] = aat[j * n + i];
        }
    }
    let chol = Cholesky::factor(n, &aat).map_err(|_| Error::Singular("Φ Φᵀ is singular"))?;

    let project = |v: &[f64]| -> Vec<f64> {
        // v − Φᵀ (ΦΦᵀ)⁻¹ (Φv − y)
        let mut gap = phi.matvec(v).expect("length d");
        for (g, yi) in gap.iter_mut().zip(y) {
            *g -= yi;
        }
        chol.solve_in_place(&mut gap);
        let corr = phi.t_matvec(&gap).expect("length n");
        v.iter().zip(&corr).map(|(a, b)| a - b).collect()
    };

    let rho = params.admm_rho;
    let tol = params.tolerance;
    let sqrt_d = math::sqrt(d as f64);
    let mut z = alloc::vec![0.0; d];
    let mut u = alloc::vec![0.0; d];
    let mut x = alloc::vec![0.0; d];
    let mut v = alloc::vec![0.0; d];
    let (mut r_pri, mut r_dual) = (f64::INFINITY, f64::INFINITY);
    let mut iterations = 0;
    let mut converged = false;

    while iterations < params.max_iterations {
        iterations += 1;
        for i in 0..d {
            v[i] = z[i] - u[i];
        }
        x = project(&v);

        let mut dz = 0.0;
        let mut dx = 0.0;
        for i in 0..d {
            let z_new = math::soft_threshold(x[i] + u[i], 1.0 / rho);
            dz += (z_new - z[i]) * (z_new - z[i]);
            z[i] = z_new;
            u[i] += x[i] - z[i];
            dx += (x[i] - z[i]) * (x[i] - z[i]);
        }
        r_pri = math::sqrt(dx);
        r_dual = rho * math::sqrt(dz);
        let eps_pri = sqrt_d * tol + tol * math::norm2(&x).max(math::norm2(&z));
        let eps_dual = sqrt_d * tol + tol * rho * math::norm2(&u);
        if r_pri <= eps_pri && r_dual <= eps_dual {
            converged = true;
            break;
        }
    }

    Ok(BpSolution {
        x,
        iterations,
        converged,
        primal_residual: r_pri,
        dual_residual: r_dual,
    })
}

/// Support of the `m` largest-magnitude basis pursuit coefficients.
pub fn bp_support(
    phi: &DesignMatrix,
    y: &[f64],
    m: usize,
    params: &SolverParams,
) -> Result<(SupportVector, BpSolution)> {
    super::check_sparsity(phi, m)?;
    let sol = basis_pursuit(phi, y, params)?;
    Ok((top_magnitude_support(&sol.x, m), sol))
}
