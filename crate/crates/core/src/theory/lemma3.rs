use alloc::vec::Vec;

use crate::error::{config_err, Error, Result};
use crate::linalg::{self, dense::lu_solve, gram, DesignMatrix, SupportVector};
use crate::math;

/// Maximum deviation between two routes to the `s1` block of the joint fit on `s1 ∪ s2`.
///
/// Route one is the pivoted-QR least-squares fit on the union, restricted to
/// `s1`. Route two is the Schur-complement formula
/// `x_{s1} = (Φ_{s1}ᵀ(I − P_{s2})Φ_{s1})⁻¹ Φ_{s1}ᵀ y^{⊥s2}`, evaluated with
/// normal equations and Gaussian elimination.
pub fn lemma3_identity_check(
    phi: &DesignMatrix,
    s1: &SupportVector,
    s2: &SupportVector,
    y: &[f64],
) -> Result<f64> {
    phi.check_rows(y.len(), "measurement vector")?;
    s1.check_range(phi.cols())?;
    s2.check_range(phi.cols())?;
    if s1.is_empty() {
        return Err(config_err("s1 must be nonempty"));
    }
    if s1.iter().any(|i| s2.contains_index(*i)) {
        return Err(config_err("s1 and s2 must be disjoint"));
    }

    let union = s1.union(s2);
    let joint = linalg::restricted_least_squares(phi, &union, y)?;
    let lhs: Vec<f64> = s1
        .iter()
        .map(|i| joint.coefficients[union.binary_search(i).unwrap()])
        .collect();

    let rhs = schur_route(phi, s1, s2, y)?;
    Ok(lhs
        .iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}

fn schur_route(phi: &DesignMatrix, s1: &[usize], s2: &[usize], y: &[f64]) -> Result<Vec<f64>> {
    let (k1, k2) = (s1.len(), s2.len());
    let g11 = gram(phi, s1);
    let b1: Vec<f64> = s1.iter().map(|&i| math::dot(phi.column(i), y)).collect();
    if k2 == 0 {
        return lu_solve(k1, &g11, &b1).map_err(|_| Error::Singular("Φ_s1ᵀΦ_s1"));
    }

    let g22 = gram(phi, s2);
    // G12 (k1 × k2)
    let mut g12 = alloc::vec![0.0; k1 * k2];
    for (a, &i) in s1.iter().enumerate() {
        for (b, &j) in s2.iter().enumerate() {
            g12[a * k2 + b] = math::dot(phi.column(i), phi.column(j));
        }
    }
    let b2: Vec<f64> = s2.iter().map(|&j| math::dot(phi.column(j), y)).collect();

    // G22⁻¹ G21 column by column, and G22⁻¹ b2.
    let mut w = alloc::vec![0.0; k2 * k1];
    for a in 0..k1 {
        let col: Vec<f64> = (0..k2).map(|b| g12[a * k2 + b]).collect();
        let sol = lu_solve(k2, &g22, &col).map_err(|_| Error::Singular("Φ_s2ᵀΦ_s2"))?;
        for b in 0..k2 {
            w[b * k1 + a] = sol[b];
        }
    }
    let v = lu_solve(k2, &g22, &b2).map_err(|_| Error::Singular("Φ_s2ᵀΦ_s2"))?;

    // Ψ = G11 − G12 G22⁻¹ G21,  rhs = b1 − G12 G22⁻¹ b2
    let mut psi = g11;
    let mut rhs = b1;
    for a in 0..k1 {
        for c in 0..k1 {
            let s: f64 = (0..k2).map(|b| g12[a * k2 + b] * w[b * k1 + c]).sum();
            psi[a * k1 + c] -= s;
        }
        rhs[a] -= (0..k2).map(|b| g12[a * k2 + b] * v[b]).sum::<f64>();
    }
    lu_solve(k1, &psi, &rhs).map_err(|_| Error::Singular("Schur complement"))
}
