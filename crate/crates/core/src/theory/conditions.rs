//! Sufficient conditions for one corrector pass to recover every missed feature.

use alloc::collections::BTreeMap;
use core::cell::RefCell;

use super::rip::rip_constant;
use crate::error::{config_err, Error, Result};
use crate::linalg::DesignMatrix;
use crate::math;

/// Supplies RIP constants by order.
pub trait DeltaProvider {
    fn delta(&self, order: usize) -> Result<f64>;
}

impl<F> DeltaProvider for F
where
    F: Fn(usize) -> Result<f64>,
{
    fn delta(&self, order: usize) -> Result<f64> {
        self(order)
    }
}

/// The same value at every order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformDelta(pub f64);

impl DeltaProvider for UniformDelta {
    fn delta(&self, _order: usize) -> Result<f64> {
        Ok(self.0)
    }
}

/// Explicit per-order values; missing orders are an error.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DeltaTable(pub BTreeMap<usize, f64>);

impl DeltaTable {
    pub fn with(mut self, order: usize, delta: f64) -> Self {
        self.0.insert(order, delta);
        self
    }
}

impl DeltaProvider for DeltaTable {
    fn delta(&self, order: usize) -> Result<f64> {
        self.0
            .get(&order)
            .copied()
            .ok_or_else(|| config_err(alloc::format!("no RIP constant supplied for order {order}")))
    }
}

/// Brute-force constants of a matrix, memoized per order.
///
/// Orders above `d` are clamped to `d`, where every vector is `t`-sparse.
#[derive(Debug)]
pub struct ExactDelta<'a> {
    phi: &'a DesignMatrix,
    cache: RefCell<BTreeMap<usize, f64>>,
}

impl<'a> ExactDelta<'a> {
    pub fn new(phi: &'a DesignMatrix) -> Self {
        Self {
            phi,
            cache: RefCell::new(BTreeMap::new()),
        }
    }
}

impl DeltaProvider for ExactDelta<'_> {
    fn delta(&self, order: usize) -> Result<f64> {
        let order = order.min(self.phi.cols());
        if order == 0 {
            return Ok(0.0);
        }
        if let Some(v) = self.cache.borrow().get(&order) {
            return Ok(*v);
        }
        let v = rip_constant(self.phi, order)?.delta;
        self.cache.borrow_mut().insert(order, v);
        Ok(v)
    }
}

/// `η_t = √2 δ (1 − δ²) / ((1 − δ − δ²)(1 − 2δ))`.
pub fn eta(delta: f64) -> Result<f64> {
    let a = 1.0 - delta - delta * delta;
    let b = 1.0 - 2.0 * delta;
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain("eta requires 1 - δ - δ² > 0 and 1 - 2δ > 0"));
    }
    Ok(core::f64::consts::SQRT_2 * delta * (1.0 - delta * delta) / (a * b))
}

/// The four sufficient conditions, in order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Conditions {
    /// `ℓ ≤ max{e, 1}`.
    pub list_size: bool,
    /// `√(e+1) ≤ √2(1−δ−δ²)(1−2δ) / (δ(1+δ)(1+2δ−δ²))`.
    pub error_bound: bool,
    /// `√ℓ > [(1−δ²+δ)η√(e+1) − 1 + δ] / (1 − δ − δη√(e+1)) · √(e+1)`.
    pub list_bound: bool,
    /// `δ_{ℓ+m−1} < 0.5`.
    pub low_order_delta: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.list_size && self.error_bound && self.list_bound && self.low_order_delta
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TheoremCheck {
    pub m: usize,
    pub e: usize,
    pub ell: usize,
    /// `max{m + e, ℓ + e + 1}`.
    pub t: usize,
    pub delta_t: f64,
    /// `None` outside the formula domain (`δ_t ≥ 0.5`).
    pub eta_t: Option<f64>,
    /// `δ_{ℓ+m−1}`.
    pub delta_lm1: f64,
    pub conditions: Conditions,
    pub satisfied: bool,
}

/// Evaluates the sufficient conditions for `e` missed features and list size `ell`.
pub fn theorem1_check(m: usize, e: usize, ell: usize, deltas: &impl DeltaProvider) -> Result<TheoremCheck> {
    if ell < 1 || ell > m {
        return Err(config_err(alloc::format!("list size {ell} outside [1, m={m}]")));
    }
    if e > m {
        return Err(config_err(alloc::format!("e={e} exceeds m={m}")));
    }
    let t = (m + e).max(ell + e + 1);
    let delta_t = deltas.delta(t)?;
    let delta_lm1 = deltas.delta(ell + m - 1)?;
    let eta_t = if delta_t == 0.0 { Some(0.0) } else { eta(delta_t).ok() };
    let root_e1 = math::sqrt((e + 1) as f64);
    let d = delta_t;

    let error_bound = if d == 0.0 {
        true
    } else if eta_t.is_none() {
        false
    } else {
        let rhs = core::f64::consts::SQRT_2 * (1.0 - d - d * d) * (1.0 - 2.0 * d)
            / (d * (1.0 + d) * (1.0 + 2.0 * d - d * d));
        root_e1 <= rhs
    };

    let list_bound = match eta_t {
        None => false,
        Some(h) => {
            let den = 1.0 - d - d * h * root_e1;
            if den <= 0.0 {
                false
            } else {
                let rhs = ((1.0 - d * d + d) * h * root_e1 - 1.0 + d) / den * root_e1;
                math::sqrt(ell as f64) > rhs
            }
        }
    };

    let conditions = Conditions {
        list_size: ell <= e.max(1),
        error_bound,
        list_bound,
        low_order_delta: delta_lm1 < 0.5,
    };
    Ok(TheoremCheck {
        m,
        e,
        ell,
        t,
        delta_t,
        eta_t,
        delta_lm1,
        conditions,
        satisfied: conditions.all(),
    })
}

/// Right-hand side of the exact-`e` bound, `∞` at `δ = 0`, `None` off-domain.
pub fn corollary1_bound(delta: f64) -> Option<f64> {
    let (a, b) = (1.0 - delta - delta * delta, 1.0 - 2.0 * delta);
    if !(a > 0.0 && b > 0.0) || delta < 0.0 {
        return None;
    }
    if delta == 0.0 {
        return Some(f64::INFINITY);
    }
    let base = core::f64::consts::SQRT_2 * a * b / (delta * (1.0 + 2.0 * delta - delta * delta) * (1.0 + delta));
    Some(base * base)
}

/// Right-hand side of the up-to-`ē` bound, `∞` at `δ = 0`, `None` off-domain.
pub fn corollary2_bound(delta: f64) -> Option<f64> {
    let (a, b) = (1.0 - delta - delta * delta, 1.0 - 2.0 * delta);
    if !(a > 0.0 && b > 0.0) || delta < 0.0 {
        return None;
    }
    if delta == 0.0 {
        return Some(f64::INFINITY);
    }
    let base = a * b / (delta * core::f64::consts::SQRT_2 * (1.0 + delta - delta * delta) * (1.0 + delta));
    Some(base * base)
}

/// List size `max{e,1}` corrects exactly `e` errors:
/// `δ_{m+e} < 0.5` and `e + 1 <` [`corollary1_bound`]`(δ_{m+e+2})`.
pub fn corollary1_check(m: usize, e: usize, deltas: &impl DeltaProvider) -> Result<bool> {
    if deltas.delta(m + e)? >= 0.5 {
        return Ok(false);
    }
    Ok(corollary1_bound(deltas.delta(m + e + 2)?).is_some_and(|b| ((e + 1) as f64) < b))
}

/// List size 1 corrects up to `ē` errors:
/// `δ_m < 0.5` and `ē + 1 ≤` [`corollary2_bound`]`(δ_{m+ē+1})`.
pub fn corollary2_check(m: usize, e_bar: usize, deltas: &impl DeltaProvider) -> Result<bool> {
    if deltas.delta(m)? >= 0.5 {
        return Ok(false);
    }
    Ok(corollary2_bound(deltas.delta(m + e_bar + 1)?).is_some_and(|b| ((e_bar + 1) as f64) <= b))
}

/// OMP recovers every `m`-sparse signal in `m` steps iff `δ_{m+1} < 1/√(m+1)`.
pub fn omp_recovery_condition(m: usize, deltas: &impl DeltaProvider) -> Result<bool> {
    Ok(deltas.delta(m + 1)? < 1.0 / math::sqrt((m + 1) as f64))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta_values() {
        assert_eq!(eta(0.0).unwrap(), 0.0);
        // Frozen from direct evaluation of the closed form in double precision.
        assert!((eta(0.1).unwrap() - 0.196_639_245_329_966_9).abs() < 1e-14);
        assert!(matches!(eta(0.5), Err(Error::Domain(_))));
        assert!(eta(0.7).is_err());
    }

    #[test]
    fn theorem_spot_values() {
        let c = theorem1_check(10, 1, 1, &UniformDelta(0.1)).unwrap();
        assert_eq!(c.t, 11);
        assert!(c.conditions.error_bound && c.conditions.list_bound && c.satisfied);

        let c = theorem1_check(10, 1, 2, &UniformDelta(0.1)).unwrap();
        assert!(!c.conditions.list_size && !c.satisfied);

        let c = theorem1_check(10, 1, 1, &UniformDelta(0.4)).unwrap();
        assert!(!c.conditions.error_bound && !c.satisfied);

        let c = theorem1_check(10, 1, 1, &UniformDelta(0.5)).unwrap();
        assert!(c.eta_t.is_none() && !c.satisfied);
    }

    #[test]
    fn theorem_order_bookkeeping() {
        let table = DeltaTable::default().with(7, 0.05).with(5, 0.02);
        let c = theorem1_check(3, 3, 3, &table).unwrap();
        assert_eq!(c.t, 7);
        assert_eq!(c.delta_t, 0.05);
        assert_eq!(c.delta_lm1, 0.02);
        // t = max{6, 6} = 6 is not in the table.
        assert!(theorem1_check(3, 3, 2, &table).is_err());
    }

    #[test]
    fn theorem_argument_errors() {
        assert!(theorem1_check(3, 1, 0, &UniformDelta(0.1)).is_err());
        assert!(theorem1_check(3, 1, 4, &UniformDelta(0.1)).is_err());
        assert!(theorem1_check(3, 4, 1, &UniformDelta(0.1)).is_err());
        let failing = |_: usize| -> Result<f64> { Err(Error::Singular("x")) };
        assert!(theorem1_check(3, 1, 1, &failing).is_err());
    }

    #[test]
    fn corollary_spot_values() {
        assert!(!corollary1_check(5, 1, &UniformDelta(0.6)).unwrap());
        let table = DeltaTable::default().with(4, 0.1).with(6, 0.2);
        assert!(corollary1_check(4, 0, &table).unwrap());
        assert!((corollary1_bound(0.2).unwrap() - 3.903_546_712_802_770).abs() < 1e-12);
        assert_eq!(corollary1_bound(0.0), Some(f64::INFINITY));

        assert!((corollary2_bound(0.05).unwrap() - 120.222_786_684_179_4).abs() < 1e-9);
        assert!(corollary2_check(5, 119, &UniformDelta(0.05)).unwrap());
        assert!(!corollary2_check(5, 120, &UniformDelta(0.05)).unwrap());
        assert!(!corollary2_check(5, 0, &UniformDelta(0.5)).unwrap());
        assert!(corollary2_check(5, 0, &UniformDelta(0.01)).unwrap());
    }

    #[test]
    fn omp_threshold() {
        assert!(omp_recovery_condition(15, &UniformDelta(0.2)).unwrap());
        assert!(!omp_recovery_condition(3, &UniformDelta(0.5)).unwrap());
    }

    #[test]
    fn exact_provider_clamps_and_caches() {
        let phi = DesignMatrix::identity(3);
        let p = ExactDelta::new(&phi);
        assert_eq!(p.delta(2).unwrap(), 0.0);
        assert_eq!(p.delta(9).unwrap(), 0.0);
        assert_eq!(p.cache.borrow().len(), 2);
    }
}
