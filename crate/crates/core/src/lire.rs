//! List-regression error correction.
//!
//! One pass visits every slot of the current support estimate. The feature in
//! the slot is left out, the `ℓ` features most correlated with the
//! leave-one-out residual are added, a joint least-squares fit is computed on
//! the enlarged set, and the slot receives the list member with the largest
//! fitted magnitude (possibly the feature that was left out).

use alloc::vec::Vec;

use crate::error::{config_err, Error, Result};
use crate::linalg::{self, DesignMatrix, SupportVector, RESIDUAL_ZERO_TOL};
use crate::math;
use crate::model;

/// How a short initial estimate is completed to `m` features.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum FillPolicy {
    /// Repeatedly add the feature most correlated with the current residual.
    #[default]
    Correlation,
    /// Add the lowest unused indices.
    LowestIndex,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LireConfig {
    /// Target support size.
    pub m: usize,
    /// List size `ℓ`; `None` selects [`default_list_size`].
    pub list_size: Option<usize>,
    pub passes: usize,
    pub fill_policy: FillPolicy,
    /// Relative tolerance of the zero-residual exit.
    pub residual_zero_tol: f64,
}

impl LireConfig {
    pub fn new(m: usize) -> Self {
        Self {
            m,
            list_size: None,
            passes: 1,
            fill_policy: FillPolicy::default(),
            residual_zero_tol: RESIDUAL_ZERO_TOL,
        }
    }

    pub fn with_list_size(mut self, ell: usize) -> Self {
        self.list_size = Some(ell);
        self
    }

    pub fn with_passes(mut self, passes: usize) -> Self {
        self.passes = passes;
        self
    }

    pub fn with_fill_policy(mut self, policy: FillPolicy) -> Self {
        self.fill_policy = policy;
        self
    }

    /// The list size used on an `n`-row design.
    pub fn list_size_for(&self, n: usize) -> usize {
        self.list_size.unwrap_or_else(|| default_list_size(self.m, n))
    }

    fn validate(&self, phi: &DesignMatrix) -> Result<usize> {
        let (n, m) = (phi.rows(), self.m);
        if m < 1 || m > n || m > phi.cols() {
            return Err(config_err(alloc::format!(
                "need 1 <= m <= n <= d, got m={m}, n={n}, d={}",
                phi.cols()
            )));
        }
        let ell = self.list_size_for(n);
        if ell < 1 || ell > m {
            return Err(config_err(alloc::format!("list size {ell} outside [1, m={m}]")));
        }
        if self.passes < 1 {
            return Err(config_err("passes must be at least 1"));
        }
        if !(self.residual_zero_tol >= 0.0) {
            return Err(config_err("residual tolerance must be nonnegative"));
        }
        Ok(ell)
    }
}

/// One slot visit of a pass.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LireStep {
    pub step: usize,
    pub removed: usize,
    pub list: SupportVector,
    pub chosen: usize,
    /// Norm of the leave-one-out residual.
    pub residual_norm: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LireTrace {
    pub steps: Vec<LireStep>,
    /// The zero-residual test ended the pass before all slots were visited.
    pub exited_early: bool,
}

/// `⌊m/2⌋` when `1.5m ≤ n`, otherwise `n − m`, clamped to `[1, m]`.
pub fn default_list_size(m: usize, n: usize) -> usize {
    let raw = if 3 * m <= 2 * n { m / 2 } else { n.saturating_sub(m) };
    raw.clamp(1, m.max(1))
}

/// Completes `s` to `m` features according to `policy`.
pub fn pad_support(
    phi: &DesignMatrix,
    y: &[f64],
    s: &SupportVector,
    m: usize,
    policy: FillPolicy,
) -> Result<SupportVector> {
    if s.len() > m {
        return Err(config_err(alloc::format!(
            "initial support has {} entries, more than m={m}",
            s.len()
        )));
    }
    if m > phi.cols() {
        return Err(config_err(alloc::format!("m={m} exceeds d={}", phi.cols())));
    }
    s.check_range(phi.cols())?;
    phi.check_rows(y.len(), "measurement vector")?;

    let mut out = s.clone();
    let y_norm = math::norm2(y);
    while out.len() < m {
        let next = match policy {
            FillPolicy::LowestIndex => lowest_unused(&out),
            FillPolicy::Correlation => {
                let r = linalg::fit_unchecked(phi, &out, y).residual;
                if linalg::residual_is_zero(&r, y_norm) {
                    lowest_unused(&out)
                } else {
                    let corr = phi.t_matvec(&r)?;
                    let mut best: Option<(usize, f64)> = None;
                    for (i, c) in corr.iter().enumerate() {
                        if out.contains_index(i) {
                            continue;
                        }
                        if best.is_none_or(|(_, b)| c.abs() > b) {
                            best = Some((i, c.abs()));
                        }
                    }
                    best.map(|(i, _)| i).expect("m <= d leaves an unused feature")
                }
            }
        };
        out = out.with_index(next);
    }
    Ok(out)
}

fn lowest_unused(s: &SupportVector) -> usize {
    (0..).find(|i| !s.contains_index(*i)).unwrap()
}

/// One pass of list-regression error correction over every slot.
pub fn lire_pass(
    phi: &DesignMatrix,
    y: &[f64],
    s_in: &SupportVector,
    cfg: &LireConfig,
) -> Result<(SupportVector, LireTrace)> {
    let ell = cfg.validate(phi)?;
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("measurement vector"));
    }
    let mut current = pad_support(phi, y, s_in, cfg.m, cfg.fill_policy)?;
    // Slots are visited in the order of the padded input, by identity.
    let mut slots: Vec<usize> = current.to_vec();
    let zero_bound = cfg.residual_zero_tol * math::norm2(y).max(1.0);
    let mut trace = LireTrace::default();

    for step in 0..slots.len() {
        let removed = slots[step];
        let rest = current.without_index(removed);
        let r = linalg::fit_unchecked(phi, &rest, y).residual;
        let residual_norm = math::norm2(&r);
        if residual_norm <= zero_bound {
            trace.exited_early = true;
            break;
        }
        let list = linalg::top_correlated(phi, &r, ell)?;
        let union = rest.union(&list);
        let fit = linalg::fit_unchecked(phi, &union, y);

        let mut chosen = removed;
        let mut best = f64::NEG_INFINITY;
        for &j in list.iter() {
            if j != removed && rest.contains_index(j) {
                continue;
            }
            let pos = union.binary_search(&j).expect("list is contained in union");
            let mag = fit.coefficients[pos].abs();
            if mag > best {
                best = mag;
                chosen = j;
            }
        }

        slots[step] = chosen;
        current = rest.with_index(chosen);
        trace.steps.push(LireStep {
            step,
            removed,
            list,
            chosen,
            residual_norm,
        });
    }
    Ok((current, trace))
}

/// Applies [`lire_pass`] up to `cfg.passes` times, stopping at a fixed point.
pub fn lire_correct(
    phi: &DesignMatrix,
    y: &[f64],
    s_in: &SupportVector,
    cfg: &LireConfig,
) -> Result<(SupportVector, Vec<LireTrace>)> {
    cfg.validate(phi)?;
    let mut traces = Vec::with_capacity(cfg.passes);
    let (mut current, trace) = lire_pass(phi, y, s_in, cfg)?;
    traces.push(trace);
    for _ in 1..cfg.passes {
        let (next, trace) = lire_pass(phi, y, &current, cfg)?;
        traces.push(trace);
        if next == current {
            break;
        }
        current = next;
    }
    Ok((current, traces))
}

/// Runs the corrector from a uniformly random initial support.
pub fn lire_standalone(
    phi: &DesignMatrix,
    y: &[f64],
    m: usize,
    cfg: &LireConfig,
    seed: u64,
) -> Result<SupportVector> {
    if m > phi.rows() {
        return Err(config_err(alloc::format!("m={m} exceeds n={}", phi.rows())));
    }
    let s_in = model::random_support(phi.cols(), m, seed)?;
    let cfg = LireConfig { m, ..*cfg };
    lire_correct(phi, y, &s_in, &cfg).map(|(s, _)| s)
}
