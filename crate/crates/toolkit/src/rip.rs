//! Parallel exact RIP enumeration.

use lire_core::theory::{binomial, rip_constant_ranks, RipReport, MAX_EXACT_SUBSETS};
use lire_core::DesignMatrix;
use rayon::prelude::*;

use crate::error::Result;

/// [`lire_core::theory::rip_constant`] split over `jobs` rank ranges.
///
/// Chunks are merged in rank order, so the reported extremal support is the
/// same as the sequential one.
pub fn rip_constant_parallel(phi: &DesignMatrix, t: usize, jobs: usize) -> Result<RipReport> {
    let total = binomial(phi.cols(), t);
    if jobs <= 1 || t == 0 || t > phi.cols() || total > MAX_EXACT_SUBSETS as u128 {
        return Ok(lire_core::theory::rip_constant(phi, t)?);
    }
    let total = total as u64;
    let chunks = (jobs as u64 * 4).min(total.max(1));
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| (total * c / chunks, total * (c + 1) / chunks))
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| crate::error::ToolkitError::Usage(e.to_string()))?;
    let parts: Vec<RipReport> = pool.install(|| {
        bounds
            .par_iter()
            .map(|&(a, b)| rip_constant_ranks(phi, t, a..b))
            .collect::<lire_core::Result<Vec<_>>>()
    })?;
    Ok(parts.into_iter().reduce(RipReport::merge).expect("at least one chunk"))
}
