#![allow(dead_code)]

use lire_core::model::{generate_instance, EnsembleConfig};
use lire_core::{DesignMatrix, SupportVector};

/// Seeded `N(0, 1/n)` matrix.
pub fn gaussian(n: usize, d: usize, seed: u64) -> DesignMatrix {
    generate_instance(&EnsembleConfig::new(d, n, 1, seed)).unwrap().phi
}

/// Deterministic pseudo-random vector independent of the library's PRNG.
pub fn wobble(len: usize, phase: f64) -> Vec<f64> {
    (0..len)
        .map(|i| (i as f64 * 1.618 + phase).sin() + 0.5 * (i as f64 * 0.37 + 2.0 * phase).cos())
        .collect()
}

/// Dense Gaussian elimination with partial pivoting on a row-major system.
pub fn gauss_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let k = b.len();
    for col in 0..k {
        let p = (col..k)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .unwrap();
        a.swap(col, p);
        b.swap(col, p);
        for row in col + 1..k {
            let f = a[row][col] / a[col][col];
            for c in col..k {
                a[row][c] -= f * a[col][c];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; k];
    for row in (0..k).rev() {
        let s: f64 = (row + 1..k).map(|c| a[row][c] * x[c]).sum();
        x[row] = (b[row] - s) / a[row][row];
    }
    x
}

/// `(Φ_sᵀΦ_s)⁻¹Φ_sᵀy`, assembled entry by entry.
pub fn normal_equations(phi: &DesignMatrix, s: &[usize], y: &[f64]) -> Vec<f64> {
    let dot = |a: usize, b: &[f64]| (0..phi.rows()).map(|r| phi.get(r, a) * b[r]).sum::<f64>();
    let a: Vec<Vec<f64>> = s
        .iter()
        .map(|&i| s.iter().map(|&j| dot(i, phi.column(j))).collect())
        .collect();
    let b: Vec<f64> = s.iter().map(|&i| dot(i, y)).collect();
    gauss_solve(a, b)
}

pub fn residual_of(phi: &DesignMatrix, s: &[usize], coef: &[f64], y: &[f64]) -> Vec<f64> {
    let mut r = y.to_vec();
    for (&j, &c) in s.iter().zip(coef) {
        for (row, v) in r.iter_mut().enumerate() {
            *v -= phi.get(row, j) * c;
        }
    }
    r
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// All size-`k` subsets of `0..d` in lexicographic order.
pub fn subsets(d: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, d: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..d {
            cur.push(i);
            rec(i + 1, d, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, k, &mut Vec::new(), &mut out);
    out
}

pub fn sv(v: &[usize], d: usize) -> SupportVector {
    SupportVector::new(v.to_vec(), d).unwrap()
}
