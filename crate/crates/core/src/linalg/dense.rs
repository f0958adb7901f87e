//! Small dense kernels on square matrices stored row-major.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;

/// Cholesky factor `L` of a symmetric positive-definite matrix, `A = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    dim: usize,
    lower: Vec<f64>,
}

impl Cholesky {
    pub fn factor(dim: usize, a: &[f64]) -> Result<Self> {
        if a.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                what: "square matrix",
                expected: dim * dim,
                found: a.len(),
            });
        }
        let mut l = alloc::vec![0.0; dim * dim];
        for i in 0..dim {
            for j in 0..=i {
                let mut s = a[i * dim + j];
                for k in 0..j {
                    s -= l[i * dim + k] * l[j * dim + k];
                }
                if i == j {
                    if !(s > 0.0) {
                        return Err(Error::Singular("matrix is not positive definite"));
                    }
                    l[i * dim + i] = math::sqrt(s);
                } else {
                    l[i * dim + j] = s / l[j * dim + j];
                }
            }
        }
        Ok(Self { dim, lower: l })
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64]) {
        let (n, l) = (self.dim, &self.lower);
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= l[i * n + k] * b[k];
            }
            b[i] = s / l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in i + 1..n {
                s -= l[k * n + i] * b[k];
            }
            b[i] = s / l[i * n + i];
        }
    }
}

/// Solves `A x = b` by Gaussian elimination with partial pivoting.
pub fn lu_solve(dim: usize, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != dim * dim || b.len() != dim {
        return Err(Error::DimensionMismatch {
            what: "linear system",
            expected: dim,
            found: b.len(),
        });
    }
    let mut m = a.to_vec();
    let mut x = b.to_vec();
    let scale = m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if scale == 0.0 {
        return Err(Error::Singular("zero matrix"));
    }
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&p, &q| m[p * dim + col].abs().total_cmp(&m[q * dim + col].abs()).then(q.cmp(&p)))
            .unwrap();
        if m[pivot * dim + col].abs() <= 1e-13 * scale {
            return Err(Error::Singular("pivot below tolerance"));
        }
        if pivot != col {
            for k in 0..dim {
                m.swap(col * dim + k, pivot * dim + k);
            }
            x.swap(col, pivot);
        }
        let p = m[col * dim + col];
        for row in col + 1..dim {
            let f = m[row * dim + col] / p;
            if f != 0.0 {
                for k in col..dim {
                    m[row * dim + k] -= f * m[col * dim + k];
                }
                x[row] -= f * x[col];
            }
        }
    }
    for row in (0..dim).rev() {
        let mut s = x[row];
        for k in row + 1..dim {
            s -= m[row * dim + k] * x[k];
        }
        x[row] = s / m[row * dim + row];
    }
    Ok(x)
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
///
/// `a` is overwritten. Intended for the small Gram blocks met in RIP
/// enumeration, where Jacobi is accurate to a few ulps of `‖A‖`.
pub fn symmetric_eigenvalues(dim: usize, a: &mut [f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), dim * dim);
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..dim {
            for q in p + 1..dim {
                off += a[p * dim + q] * a[p * dim + q];
            }
        }
        let diag: f64 = (0..dim).map(|i| a[i * dim + i] * a[i * dim + i]).sum();
        if off <= 1e-32 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * dim + p];
                let aqq = a[q * dim + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..dim).map(|i| a[i * dim + i]).collect();
    eig.sort_by(f64::total_cmp);
    eig
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cholesky_solves() {
        let a = [4.0, 2.0, 2.0, 3.0];
        let ch = Cholesky::factor(2, &a).unwrap();
        let mut b = vec![2.0, 1.0];
        ch.solve_in_place(&mut b);
        // 4x + 2y = 2, 2x + 3y = 1 -> x = 0.5, y = 0
        assert!((b[0] - 0.5).abs() < 1e-14 && b[1].abs() < 1e-14);
        assert!(Cholesky::factor(2, &[1.0, 2.0, 2.0, 1.0]).is_err());
    }

    #[test]
    fn lu_solves_with_pivoting() {
        let x = lu_solve(2, &[0.0, 1.0, 1.0, 0.0], &[3.0, 4.0]).unwrap();
        assert_eq!(x, vec![4.0, 3.0]);
        assert!(lu_solve(2, &[1.0, 2.0, 2.0, 4.0], &[1.0, 1.0]).is_err());
    }

    #[test]
    fn jacobi_two_by_two() {
        let rho = 0.3;
        let mut a = [1.0, rho, rho, 1.0];
        let e = symmetric_eigenvalues(2, &mut a);
        assert!((e[0] - 0.7).abs() < 1e-15 && (e[1] - 1.3).abs() < 1e-15);
    }

    #[test]
    fn jacobi_matches_trace_and_known_spectrum() {
        // Tridiagonal 2,-1 matrix of size 5: eigenvalues 2 - 2cos(kπ/6).
        let n = 5;
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 2.0;
            if i + 1 < n {
                a[i * n + i + 1] = -1.0;
                a[(i + 1) * n + i] = -1.0;
            }
        }
        let e = symmetric_eigenvalues(n, &mut a);
        for (k, ev) in e.iter().enumerate() {
            let expected = 2.0 - 2.0 * libm::cos((k + 1) as f64 * core::f64::consts::PI / 6.0);
            assert!((ev - expected).abs() < 1e-13, "{ev} vs {expected}");
        }
    }
}
