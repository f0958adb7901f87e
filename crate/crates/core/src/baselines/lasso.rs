use alloc::vec::Vec;

use super::{check_sparsity, LassoLambda, SolverParams};
use crate::error::{config_err, Error, Result};
use crate::linalg::{axpy, top_magnitude_support, DesignMatrix, SupportVector};
use crate::lire::{pad_support, FillPolicy};
use crate::math;

/// LASSO solution from cyclic coordinate descent.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LassoSolution {
    pub coefficients: Vec<f64>,
    /// Coordinate sweeps performed, full and active-set.
    pub sweeps: usize,
    pub converged: bool,
    /// Objective after each sweep.
    pub objective_trace: Vec<f64>,
}

/// Minimizes `(1/(2n))‖y − Φx‖² + λ‖x‖₁` by cyclic coordinate descent.
///
/// Convergence is declared when a full sweep changes no coordinate by more
/// than `params.tolerance`. Between full sweeps the solver iterates on the
/// current nonzero coordinates only.
pub fn lasso(phi: &DesignMatrix, y: &[f64], lambda: f64, params: &SolverParams) -> Result<LassoSolution> {
    params.validate()?;
    phi.check_rows(y.len(), "measurement vector")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(config_err("lambda must be finite and nonnegative"));
    }
    let mut state = CdState::new(phi, y);
    let (sweeps, converged, objective_trace) = state.solve(lambda, params);
    Ok(LassoSolution {
        coefficients: state.x,
        sweeps,
        converged,
        objective_trace,
    })
}

/// Coordinate descent in covariance form.
///
/// Keeps the gradient `c = Φᵀ(y − Φx)` instead of the residual, so a
/// coordinate update costs `O(1)` unless the coordinate moves, in which case
/// `c` is updated with the Gram column `ΦᵀΦ_j`. Gram columns are computed
/// on first activation and cached, and the state persists along a `λ` path.
struct CdState<'a> {
    phi: &'a DesignMatrix,
    n: f64,
    yty: f64,
    b: Vec<f64>,
    col_sq: Vec<f64>,
    gram: Vec<Option<Vec<f64>>>,
    x: Vec<f64>,
    c: Vec<f64>,
}

impl<'a> CdState<'a> {
    fn new(phi: &'a DesignMatrix, y: &[f64]) -> Self {
        let b: Vec<f64> = (0..phi.cols()).map(|j| math::dot(phi.column(j), y)).collect();
        Self {
            phi,
            n: phi.rows() as f64,
            yty: math::dot(y, y),
            c: b.clone(),
            b,
            col_sq: phi.column_norms().iter().map(|v| v * v).collect(),
            gram: alloc::vec![None; phi.cols()],
            x: alloc::vec![0.0; phi.cols()],
        }
    }


    fn ensure_gram(&mut self, j: usize) {
        if self.gram[j].is_none() {
            let col = self.phi.column(j);
            self.gram[j] = Some((0..self.phi.cols()).map(|k| math::dot(self.phi.column(k), col)).collect());
        }
    }

    fn step(&self, j: usize, threshold: f64) -> f64 {
        if self.col_sq[j] == 0.0 {
            0.0
        } else {
            math::soft_threshold(self.c[j] + self.col_sq[j] * self.x[j], threshold) / self.col_sq[j]
        }
    }

    /// Full update of coordinate `j`, refreshing the whole gradient.
    fn update(&mut self, j: usize, threshold: f64) -> f64 {
        let old = self.x[j];
        let new = self.step(j, threshold);
        if new != old {
            self.x[j] = new;
            self.ensure_gram(j);
            axpy(old - new, self.gram[j].as_deref().unwrap(), &mut self.c);
        }
        (new - old).abs()
    }

    fn objective(&self, lambda: f64) -> f64 {
        // ‖y − Φx‖² = yᵀy − xᵀΦᵀy − xᵀc
        let mut rss = self.yty;
        let mut l1 = 0.0;
        for j in 0..self.x.len() {
            if self.x[j] != 0.0 {
                rss -= self.x[j] * (self.b[j] + self.c[j]);
                l1 += self.x[j].abs();
            }
        }
        rss.max(0.0) / (2.0 * self.n) + lambda * l1
    }

    fn solve(&mut self, lambda: f64, params: &SolverParams) -> (usize, bool, Vec<f64>) {
        let threshold = lambda * self.n;
        let d = self.x.len();
        let mut trace = Vec::new();
        let mut sweeps = 0;
        let mut converged = false;
        let mut active: Vec<usize> = Vec::with_capacity(d);

        while sweeps < params.max_iterations {
            let mut max_change = 0.0_f64;
            for j in 0..d {
                max_change = max_change.max(self.update(j, threshold));
            }
            sweeps += 1;
            trace.push(self.objective(lambda));
            if max_change <= params.tolerance {
                converged = true;
                break;
            }

            active.clear();
            active.extend((0..d).filter(|&j| self.x[j] != 0.0));
            while sweeps < params.max_iterations {
                let mut max_change = 0.0_f64;
                for &j in &active {
                    max_change = max_change.max(self.update(j, threshold));
                }
                sweeps += 1;
                trace.push(self.objective(lambda));
                if max_change <= params.tolerance {
                    break;
                }
            }
        }
        (sweeps, converged, trace)
    }
}

/// Outcome of cross-validated LASSO support estimation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LassoCvResult {
    pub support: SupportVector,
    pub lambda: f64,
    pub lambdas: Vec<f64>,
    /// Mean held-out squared error per grid point.
    pub cv_errors: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// The refit at the selected `λ` reached its tolerance.
    pub converged: bool,
    /// Every fold fit along the path reached its tolerance.
    pub cv_converged: bool,
}

/// Chooses `λ` by k-fold cross-validation and returns the top-`m` support of the refit.
///
/// Row `i` belongs to fold `i mod folds`. The grid and fold count come from
/// `params.lasso_lambda` (a fixed `λ` skips the search); `folds` overrides the
/// fold count.
pub fn lasso_cv(
    phi: &DesignMatrix,
    y: &[f64],
    m: usize,
    folds: usize,
    params: &SolverParams,
) -> Result<LassoCvResult> {
    params.validate()?;
    check_sparsity(phi, m)?;
    phi.check_rows(y.len(), "measurement vector")?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    let n = phi.rows();
    if folds < 2 || n < folds {
        return Err(config_err(alloc::format!("need 2 <= folds <= n, got folds={folds}, n={n}")));
    }

    let lambda_max = phi.t_matvec(y)?.iter().fold(0.0_f64, |a, v| a.max(v.abs())) / n as f64;
    let lambdas: Vec<f64> = match params.lasso_lambda {
        LassoLambda::Fixed(l) => alloc::vec![l],
        LassoLambda::CrossValidated {
            grid_points,
            min_ratio,
            ..
        } => {
            if lambda_max == 0.0 {
                alloc::vec![0.0]
            } else {
                log_grid(lambda_max, min_ratio, grid_points)
            }
        }
    };

    let mut cv_errors = alloc::vec![0.0; lambdas.len()];
    let mut cv_converged = true;
    if lambdas.len() > 1 {
        for fold in 0..folds {
            let train: Vec<usize> = (0..n).filter(|i| i % folds != fold).collect();
            let test: Vec<usize> = (0..n).filter(|i| i % folds == fold).collect();
            let phi_train = phi.select_rows(&train)?;
            let y_train: Vec<f64> = train.iter().map(|&i| y[i]).collect();
            let mut state = CdState::new(&phi_train, &y_train);
            for (k, &lam) in lambdas.iter().enumerate() {
                cv_converged &= state.solve(lam, params).1;
                let mut err = 0.0;
                for &i in &test {
                    let mut pred = 0.0;
                    for (j, &xj) in state.x.iter().enumerate() {
                        if xj != 0.0 {
                            pred += phi.get(i, j) * xj;
                        }
                    }
                    err += (y[i] - pred) * (y[i] - pred);
                }
                cv_errors[k] += err / test.len() as f64 / folds as f64;
            }
        }
    }

    // Ties resolve to the larger λ (earlier grid point).
    let best = (0..lambdas.len())
        .min_by(|&a, &b| cv_errors[a].total_cmp(&cv_errors[b]).then(a.cmp(&b)))
        .unwrap_or(0);

    let mut state = CdState::new(phi, y);
    let mut converged = false;
    for &lam in &lambdas[..=best] {
        converged = state.solve(lam, params).1;
    }
    let x = state.x.clone();

    // With fewer than m nonzeros the magnitude ranking is a tie at zero;
    // the remaining slots go to features in the order they enter further
    // down the path.
    let mut support = top_magnitude_support(&x, m);
    if x.iter().filter(|v| **v != 0.0).count() < m {
        let mut chosen: Vec<usize> = (0..x.len()).filter(|&j| x[j] != 0.0).collect();
        let mut tail = lambdas[best + 1..].iter().copied().chain(core::iter::once(0.0));
        while chosen.len() < m {
            let Some(lam) = tail.next() else { break };
            state.solve(lam, params);
            let z = &state.x;
            let mut entering: Vec<usize> = (0..z.len()).filter(|j| z[*j] != 0.0 && !chosen.contains(j)).collect();
            entering.sort_by(|&a, &b| z[b].abs().total_cmp(&z[a].abs()).then(a.cmp(&b)));
            chosen.extend(entering.into_iter().take(m - chosen.len()));
        }
        let partial = SupportVector::from_unsorted(chosen, phi.cols())?;
        support = pad_support(phi, y, &partial, m, FillPolicy::Correlation)?;
    }

    Ok(LassoCvResult {
        support,
        lambda: lambdas[best],
        lambdas,
        cv_errors,
        coefficients: x,
        converged,
        cv_converged,
    })
}

fn log_grid(lambda_max: f64, min_ratio: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return alloc::vec![lambda_max];
    }
    let step = libm::log(min_ratio) / (points - 1) as f64;
    (0..points)
        .map(|k| lambda_max * libm::exp(step * k as f64))
        .collect()
}
