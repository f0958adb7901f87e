//! Seeded Gaussian problem instances `y = Φ x* + z`.
//!
//! Randomness comes from ChaCha20 seeded with [`SeedableRng::seed_from_u64`].
//! Each quantity draws from its own ChaCha stream of the same key, so the
//! noise level can change without perturbing the matrix, the support or the
//! signal:
//!
//! | stream | quantity                                     |
//! |--------|----------------------------------------------|
//! | 0      | `Φ`, row-major, entries `N(0, 1/n)`          |
//! | 1      | support, uniform size-`m` subset             |
//! | 2      | nonzeros of `x*`, `N(0, 1)` in support order |
//! | 3      | noise `z`, `N(0, σ²)`                        |

use alloc::vec::Vec;

use rand::{seq::index, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{config_err, Result};
use crate::linalg::{DesignMatrix, SupportVector};
use crate::math;

const STREAM_MATRIX: u64 = 0;
const STREAM_SUPPORT: u64 = 1;
const STREAM_SIGNAL: u64 = 2;
const STREAM_NOISE: u64 = 3;

/// Parameters of the Gaussian ensemble.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnsembleConfig {
    pub d: usize,
    pub n: usize,
    pub m: usize,
    pub sigma2: f64,
    pub normalize_columns: bool,
    pub seed: u64,
}

impl EnsembleConfig {
    /// Raw `N(0, 1/n)` columns, noiseless.
    pub fn new(d: usize, n: usize, m: usize, seed: u64) -> Self {
        Self {
            d,
            n,
            m,
            sigma2: 0.0,
            normalize_columns: false,
            seed,
        }
    }

    pub fn with_noise(mut self, sigma2: f64) -> Self {
        self.sigma2 = sigma2;
        self
    }

    pub fn normalized(mut self, on: bool) -> Self {
        self.normalize_columns = on;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.m < 1 || self.m > self.n || self.n > self.d {
            return Err(config_err(alloc::format!(
                "need 1 <= m <= n <= d, got m={}, n={}, d={}",
                self.m,
                self.n,
                self.d
            )));
        }
        if !(self.sigma2 >= 0.0) || !self.sigma2.is_finite() {
            return Err(config_err("sigma2 must be finite and nonnegative"));
        }
        Ok(())
    }
}

/// A planted sparse recovery problem.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseInstance {
    pub phi: DesignMatrix,
    pub x_star: Vec<f64>,
    pub s_star: SupportVector,
    pub y: Vec<f64>,
    pub sigma2: f64,
    pub seed: u64,
}

impl SparseInstance {
    pub fn config(&self) -> EnsembleConfig {
        EnsembleConfig {
            d: self.phi.cols(),
            n: self.phi.rows(),
            m: self.s_star.len(),
            sigma2: self.sigma2,
            normalize_columns: false,
            seed: self.seed,
        }
    }
}

fn stream(seed: u64, id: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Draws an instance; identical configs give bit-identical instances.
pub fn generate_instance(cfg: &EnsembleConfig) -> Result<SparseInstance> {
    cfg.validate()?;
    let (d, n, m) = (cfg.d, cfg.n, cfg.m);

    let scale = 1.0 / math::sqrt(n as f64);
    let mut rng = stream(cfg.seed, STREAM_MATRIX);
    let entries: Vec<f64> = (0..n * d)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            scale * z
        })
        .collect();
    let mut phi = DesignMatrix::from_row_major(n, d, &entries)?;
    if cfg.normalize_columns {
        phi.normalize_columns();
    }

    let s_star = draw_support(&mut stream(cfg.seed, STREAM_SUPPORT), d, m);

    let mut rng = stream(cfg.seed, STREAM_SIGNAL);
    let mut x_star = alloc::vec![0.0; d];
    for &i in s_star.iter() {
        let mut v: f64 = StandardNormal.sample(&mut rng);
        while v == 0.0 {
            v = StandardNormal.sample(&mut rng);
        }
        x_star[i] = v;
    }

    let mut y = phi.matvec(&x_star)?;
    if cfg.sigma2 > 0.0 {
        let sd = math::sqrt(cfg.sigma2);
        let mut rng = stream(cfg.seed, STREAM_NOISE);
        for yi in &mut y {
            let z: f64 = StandardNormal.sample(&mut rng);
            *yi += sd * z;
        }
    }

    Ok(SparseInstance {
        phi,
        x_star,
        s_star,
        y,
        sigma2: cfg.sigma2,
        seed: cfg.seed,
    })
}

/// Uniform size-`m` subset of `0..d`, ascending.
pub fn random_support(d: usize, m: usize, seed: u64) -> Result<SupportVector> {
    if m > d {
        return Err(config_err(alloc::format!("support size {m} exceeds d={d}")));
    }
    Ok(draw_support(&mut stream(seed, STREAM_SUPPORT), d, m))
}

fn draw_support(rng: &mut ChaCha20Rng, d: usize, m: usize) -> SupportVector {
    let mut idx = index::sample(rng, d, m).into_vec();
    idx.sort_unstable();
    SupportVector::from_sorted_unchecked(idx)
}

/// Derives a per-trial seed from a base seed and cell coordinates (SplitMix64 chain).
pub fn mix_seed(base: u64, parts: &[u64]) -> u64 {
    let mut h = splitmix64(base);
    for &p in parts {
        h = splitmix64(h ^ splitmix64(p.wrapping_add(0x9E37_79B9_7F4A_7C15)));
    }
    h
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
