use alloc::vec::Vec;
use core::ops::Range;

use rand::{seq::index, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{config_err, Error, Result};
use crate::linalg::{dense::symmetric_eigenvalues, DesignMatrix, SupportVector};
use crate::math;

/// Largest number of subsets [`rip_constant`] will enumerate.
pub const MAX_EXACT_SUBSETS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RipMethod {
    ExactBruteforce,
    /// Lower bound from randomly sampled supports.
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RipReport {
    pub order: usize,
    pub delta: f64,
    /// A support attaining `delta` (first in colex order on ties).
    pub extremal_support: SupportVector,
    pub method: RipMethod,
    /// `delta ≥ 1`: some order-`t` Gram block is singular or worse.
    pub exceeds_one: bool,
    pub subsets_examined: u64,
}

impl RipReport {
    /// Combines two partial reports over disjoint subset ranges; `self` wins ties.
    pub fn merge(self, other: RipReport) -> RipReport {
        let examined = self.subsets_examined + other.subsets_examined;
        let mut best = if other.delta > self.delta { other } else { self };
        best.subsets_examined = examined;
        best
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn check_order(phi: &DesignMatrix, t: usize) -> Result<()> {
    if t < 1 || t > phi.cols() {
        return Err(config_err(alloc::format!(
            "RIP order {t} outside [1, d={}]",
            phi.cols()
        )));
    }
    Ok(())
}

/// Exact order-`t` RIP constant by enumerating all `C(d, t)` supports.
///
/// For each support the deviation `max(λ_max(G) − 1, 1 − λ_min(G))` of the
/// Gram block `G = Φ_sᵀΦ_s` is computed by a symmetric eigensolve.
pub fn rip_constant(phi: &DesignMatrix, t: usize) -> Result<RipReport> {
    check_order(phi, t)?;
    let total = binomial(phi.cols(), t);
    if total > MAX_EXACT_SUBSETS as u128 {
        return Err(Error::TooManySubsets {
            order: t,
            subsets: total,
            limit: MAX_EXACT_SUBSETS,
        });
    }
    rip_constant_ranks(phi, t, 0..total as u64)
}

/// Exact RIP deviation maximized over the supports whose colex rank lies in `ranks`.
///
/// Disjoint rank ranges can be evaluated independently and combined with
/// [`RipReport::merge`] in range order.
pub fn rip_constant_ranks(phi: &DesignMatrix, t: usize, ranks: Range<u64>) -> Result<RipReport> {
    check_order(phi, t)?;
    let total = binomial(phi.cols(), t);
    if ranks.end as u128 > total {
        return Err(config_err("subset rank range exceeds C(d, t)"));
    }
    let gram = full_gram(phi);
    let d = phi.cols();
    let mut best = RipReport {
        order: t,
        delta: f64::NEG_INFINITY,
        extremal_support: SupportVector::empty(),
        method: RipMethod::ExactBruteforce,
        exceeds_one: false,
        subsets_examined: 0,
    };
    if ranks.is_empty() {
        best.delta = 0.0;
        return Ok(best);
    }
    let mut combo = unrank_colex(ranks.start, t);
    let mut block = alloc::vec![0.0; t * t];
    for _ in ranks.clone() {
        let dev = deviation(&gram, d, &combo, &mut block);
        if dev > best.delta {
            best.delta = dev;
            best.extremal_support = SupportVector::from_sorted_unchecked(combo.clone());
        }
        next_colex(&mut combo, d);
    }
    best.subsets_examined = ranks.end - ranks.start;
    best.exceeds_one = best.delta >= 1.0;
    Ok(best)
}

/// Lower bound on `δ_t` from `samples` uniformly drawn supports.
///
/// Falls back to exact enumeration when `samples ≥ C(d, t)`.
pub fn rip_monte_carlo(phi: &DesignMatrix, t: usize, samples: u64, seed: u64) -> Result<RipReport> {
    check_order(phi, t)?;
    if samples == 0 {
        return Err(config_err("Monte-Carlo RIP needs at least one sample"));
    }
    let total = binomial(phi.cols(), t);
    if samples as u128 >= total && total <= MAX_EXACT_SUBSETS as u128 {
        return rip_constant(phi, t);
    }
    let d = phi.cols();
    let gram = full_gram(phi);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut block = alloc::vec![0.0; t * t];
    let mut best = RipReport {
        order: t,
        delta: f64::NEG_INFINITY,
        extremal_support: SupportVector::empty(),
        method: RipMethod::MonteCarlo,
        exceeds_one: false,
        subsets_examined: samples,
    };
    for _ in 0..samples {
        let mut combo = index::sample(&mut rng, d, t).into_vec();
        combo.sort_unstable();
        let dev = deviation(&gram, d, &combo, &mut block);
        if dev > best.delta {
            best.delta = dev;
            best.extremal_support = SupportVector::from_sorted_unchecked(combo);
        }
    }
    best.exceeds_one = best.delta >= 1.0;
    Ok(best)
}

fn full_gram(phi: &DesignMatrix) -> Vec<f64> {
    let d = phi.cols();
    let mut g = alloc::vec![0.0; d * d];
    for a in 0..d {
        for b in a..d {
            let v = math::dot(phi.column(a), phi.column(b));
            g[a * d + b] = v;
            g[b * d + a] = v;
        }
    }
    g
}

fn deviation(gram: &[f64], d: usize, combo: &[usize], block: &mut [f64]) -> f64 {
    let t = combo.len();
    if t == 1 {
        return (gram[combo[0] * d + combo[0]] - 1.0).abs();
    }
    if t == 2 {
        // Closed form for 2 × 2 symmetric blocks.
        let (a, b) = (combo[0], combo[1]);
        let (p, q, r) = (gram[a * d + a], gram[b * d + b], gram[a * d + b]);
        let mean = 0.5 * (p + q);
        let half_gap = math::sqrt(0.25 * (p - q) * (p - q) + r * r);
        return (mean + half_gap - 1.0).max(1.0 - (mean - half_gap));
    }
    for (i, &ci) in combo.iter().enumerate() {
        for (j, &cj) in combo.iter().enumerate() {
            block[i * t + j] = gram[ci * d + cj];
        }
    }
    let eig = symmetric_eigenvalues(t, block);
    (eig[t - 1] - 1.0).max(1.0 - eig[0])
}

/// The `rank`-th size-`t` subset in colex order.
fn unrank_colex(mut rank: u64, t: usize) -> Vec<usize> {
    let mut combo = alloc::vec![0usize; t];
    for i in (0..t).rev() {
        // Largest c with C(c, i+1) <= rank.
        let mut c = i;
        while binomial(c + 1, i + 1) <= rank as u128 {
            c += 1;
        }
        combo[i] = c;
        rank -= binomial(c, i + 1) as u64;
    }
    combo
}

fn next_colex(combo: &mut [usize], d: usize) {
    let t = combo.len();
    for i in 0..t {
        let limit = if i + 1 < t { combo[i + 1] } else { d };
        if combo[i] + 1 < limit {
            combo[i] += 1;
            for (k, c) in combo[..i].iter_mut().enumerate() {
                *c = k;
            }
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), 120);
        assert_eq!(binomial(24, 6), 134_596);
        assert_eq!(binomial(5, 6), 0);
        assert_eq!(binomial(5, 0), 1);
    }

    #[test]
    fn colex_walk_matches_unranking() {
        let (d, t) = (7, 3);
        let mut combo = unrank_colex(0, t);
        assert_eq!(combo, alloc::vec![0, 1, 2]);
        for rank in 0..binomial(d, t) as u64 {
            assert_eq!(combo, unrank_colex(rank, t), "rank {rank}");
            next_colex(&mut combo, d);
        }
    }

    #[test]
    fn orthonormal_columns_have_zero_delta() {
        let phi = DesignMatrix::identity(5);
        for t in 1..=5 {
            assert!(rip_constant(&phi, t).unwrap().delta.abs() < 1e-15);
        }
    }

    #[test]
    fn two_column_coherence() {
        let rho: f64 = -0.37;
        let s = libm::sqrt(1.0 - rho * rho);
        let phi = DesignMatrix::from_row_major(2, 2, &[1.0, rho, 0.0, s]).unwrap();
        let rep = rip_constant(&phi, 2).unwrap();
        assert!((rep.delta - rho.abs()).abs() < 1e-12);
        assert_eq!(rep.extremal_support.as_ref(), &[0, 1]);
    }

    #[test]
    fn guard_and_order_errors() {
        let phi = DesignMatrix::from_col_major(1, 40, alloc::vec![1.0; 40]).unwrap();
        assert!(matches!(rip_constant(&phi, 12), Err(Error::TooManySubsets { .. })));
        assert!(rip_constant(&phi, 0).is_err());
        assert!(rip_constant(&phi, 41).is_err());
        assert!(rip_monte_carlo(&phi, 2, 0, 1).is_err());
    }

    #[test]
    fn singular_blocks_flagged() {
        // Two identical unit columns: Gram [[1,1],[1,1]] has eigenvalue 0 and 2.
        let phi = DesignMatrix::from_row_major(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        let rep = rip_constant(&phi, 2).unwrap();
        assert!(rep.exceeds_one);
        assert!((rep.delta - 1.0).abs() < 1e-12);
    }

    #[test]
    fn split_ranges_merge_to_whole() {
        let entries: Vec<f64> = (0..40).map(|i| libm::sin(i as f64 * 1.7)).collect();
        let phi = DesignMatrix::from_row_major(4, 10, &entries).unwrap().normalized();
        let whole = rip_constant(&phi, 3).unwrap();
        let total = binomial(10, 3) as u64;
        let merged = rip_constant_ranks(&phi, 3, 0..37)
            .unwrap()
            .merge(rip_constant_ranks(&phi, 3, 37..total).unwrap());
        assert_eq!(whole, merged);
    }
}
