//! Householder QR with column pivoting, used for every column-restricted
//! least-squares solve.

use alloc::vec::Vec;

use crate::math;

/// Relative threshold on `|R_jj| / |R_00|` below which a pivot is treated as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// Compact Householder factorization `A P = Q R` of an `n × k` matrix.
#[derive(Debug, Clone)]
pub(crate) struct PivotedQr {
    n: usize,
    k: usize,
    /// Column-major; R on and above the diagonal, reflector tails below.
    a: Vec<f64>,
    tau: Vec<f64>,
    perm: Vec<usize>,
    rank: usize,
}

impl PivotedQr {
    /// Factors the column-major `n × k` matrix `a`.
    pub(crate) fn factor(n: usize, k: usize, mut a: Vec<f64>) -> Self {
        debug_assert_eq!(a.len(), n * k);
        let steps = n.min(k);
        let mut tau = alloc::vec![0.0; steps];
        let mut perm: Vec<usize> = (0..k).collect();
        let mut col_norms: Vec<f64> = (0..k).map(|c| sq_norm(&a[c * n..c * n + n])).collect();

        for j in 0..steps {
            // Pivot: largest remaining partial column norm, lowest index on ties.
            let mut best = j;
            for c in j + 1..k {
                if col_norms[c] > col_norms[best] {
                    best = c;
                }
            }
            if best != j {
                for r in 0..n {
                    a.swap(j * n + r, best * n + r);
                }
                col_norms.swap(j, best);
                perm.swap(j, best);
            }

            tau[j] = householder(&mut a[j * n + j..j * n + n]);
            if tau[j] != 0.0 {
                let (head, tail) = a.split_at_mut((j + 1) * n);
                let v = &head[j * n + j..j * n + n];
                for c in 0..k - j - 1 {
                    let col = &mut tail[c * n + j..c * n + n];
                    apply_reflector(v, tau[j], col);
                }
            }
            // Recompute partial norms from scratch; k is small.
            for c in j + 1..k {
                col_norms[c] = sq_norm(&a[c * n + j + 1..c * n + n]);
            }
        }

        let mut rank = 0;
        if steps > 0 {
            let lead = a[0].abs();
            if lead > 0.0 {
                rank = (0..steps)
                    .take_while(|&j| a[j * n + j].abs() > RANK_TOLERANCE * lead)
                    .count();
            }
        }

        Self {
            n,
            k,
            a,
            tau,
            perm,
            rank,
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rank
    }

    /// Minimum-norm minimizer of `‖y − A z‖₂`.
    pub(crate) fn solve(&self, y: &[f64]) -> Vec<f64> {
        let (n, k, r) = (self.n, self.k, self.rank);
        let mut z = alloc::vec![0.0; k];
        if r == 0 {
            return z;
        }
        let mut c = y.to_vec();
        for (j, &t) in self.tau.iter().enumerate() {
            if t != 0.0 {
                apply_reflector(&self.a[j * n + j..j * n + n], t, &mut c[j..]);
            }
        }

        let w = if r == k {
            let mut w = c[..k].to_vec();
            for i in (0..k).rev() {
                let mut s = w[i];
                for jj in i + 1..k {
                    s -= self.r(i, jj) * w[jj];
                }
                w[i] = s / self.r(i, i);
            }
            w
        } else {
            self.min_norm_trapezoidal(&c[..r])
        };

        for (j, &p) in self.perm.iter().enumerate() {
            z[p] = w[j];
        }
        z
    }

    #[inline]
    fn r(&self, i: usize, j: usize) -> f64 {
        self.a[j * self.n + i]
    }

    /// Minimum-norm solution of `R[..r, ..k] w = c` through a QR of its transpose.
    fn min_norm_trapezoidal(&self, c: &[f64]) -> Vec<f64> {
        let (k, r) = (self.k, self.rank);
        // M = R_topᵀ, k × r column-major.
        let mut m = alloc::vec![0.0; k * r];
        for col in 0..r {
            for row in col..k {
                m[col * k + row] = self.r(col, row);
            }
        }
        let mut tau = alloc::vec![0.0; r];
        for j in 0..r {
            tau[j] = householder(&mut m[j * k + j..j * k + k]);
            if tau[j] != 0.0 {
                let (head, tail) = m.split_at_mut((j + 1) * k);
                let v = &head[j * k + j..j * k + k];
                for cc in 0..r - j - 1 {
                    apply_reflector(v, tau[j], &mut tail[cc * k + j..cc * k + k]);
                }
            }
        }
        // R2ᵀ u = c by forward substitution.
        let mut u = alloc::vec![0.0; k];
        for i in 0..r {
            let mut s = c[i];
            for jj in 0..i {
                s -= m[i * k + jj] * u[jj];
            }
            u[i] = s / m[i * k + i];
        }
        // w = Q2 [u; 0]
        for j in (0..r).rev() {
            if tau[j] != 0.0 {
                apply_reflector(&m[j * k + j..j * k + k], tau[j], &mut u[j..]);
            }
        }
        u
    }
}

/// Overwrites `x` with `[β, v₁, v₂, …]` where `(I − τ v vᵀ) x = β e₁`, `v₀ = 1`.
fn householder(x: &mut [f64]) -> f64 {
    let alpha = x[0];
    let tail_sq = sq_norm(&x[1..]);
    if tail_sq == 0.0 {
        return 0.0;
    }
    let norm = math::sqrt(alpha * alpha + tail_sq);
    let beta = if alpha >= 0.0 { -norm } else { norm };
    let tau = (beta - alpha) / beta;
    let scale = 1.0 / (alpha - beta);
    x[1..].iter_mut().for_each(|v| *v *= scale);
    x[0] = beta;
    tau
}

/// Applies `I − τ v vᵀ` to `x`, where `v` is stored with an implicit leading 1.
#[inline]
fn apply_reflector(v: &[f64], tau: f64, x: &mut [f64]) {
    let mut w = x[0];
    for (vi, xi) in v[1..].iter().zip(&x[1..]) {
        w += vi * xi;
    }
    w *= tau;
    x[0] -= w;
    for (vi, xi) in v[1..].iter().zip(x[1..].iter_mut()) {
        *xi -= w * vi;
    }
}

#[inline]
fn sq_norm(v: &[f64]) -> f64 {
    math::dot(v, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn solves_square_system() {
        // [[2, 1], [1, 3]] z = [3, 5] -> z = [0.8, 1.4]
        let qr = PivotedQr::factor(2, 2, vec![2.0, 1.0, 1.0, 3.0]);
        assert_eq!(qr.rank(), 2);
        let z = qr.solve(&[3.0, 5.0]);
        assert!((z[0] - 0.8).abs() < 1e-12 && (z[1] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn minimum_norm_on_duplicate_columns() {
        // Two identical columns e1: minimizers z0 + z1 = 2, min-norm is (1, 1).
        let qr = PivotedQr::factor(2, 2, vec![1.0, 0.0, 1.0, 0.0]);
        assert_eq!(qr.rank(), 1);
        let z = qr.solve(&[2.0, 5.0]);
        assert!((z[0] - 1.0).abs() < 1e-12 && (z[1] - 1.0).abs() < 1e-12, "{z:?}");
    }

    #[test]
    fn wide_system_is_minimum_norm() {
        // 1 × 2 system [3, 4] z = 5 -> z = (0.6, 0.8)
        let qr = PivotedQr::factor(1, 2, vec![3.0, 4.0]);
        assert_eq!(qr.rank(), 1);
        let z = qr.solve(&[5.0]);
        assert!((z[0] - 0.6).abs() < 1e-12 && (z[1] - 0.8).abs() < 1e-12, "{z:?}");
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let qr = PivotedQr::factor(3, 2, vec![0.0; 6]);
        assert_eq!(qr.rank(), 0);
        assert_eq!(qr.solve(&[1.0, 2.0, 3.0]), vec![0.0, 0.0]);
    }
}
