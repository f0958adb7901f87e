//! Sparse support recovery with list-regression error correction.
//!
//! The crate is `no_std` and only needs `alloc`. It provides:
//!
//! - [`linalg`]: column-restricted least squares, residuals and correlation lists;
//! - [`model`]: seeded Gaussian problem instances;
//! - [`lire`]: the leave-one-out list-regression corrector and its multi-pass driver;
//! - [`baselines`]: OMP, CoSaMP, basis pursuit (ADMM) and LASSO (coordinate descent);
//! - [`theory`]: brute-force RIP constants and the sufficient-condition evaluators.
//!
//! Feature indices are 0-based inside the library. File formats and the CLI
//! in the companion crate use 1-based indices.
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod baselines;
pub mod error;
pub mod lire;
pub mod linalg;
pub mod model;
pub mod theory;

mod math;

pub use error::{Error, Result};
pub use linalg::{DesignMatrix, LeastSquaresFit, SupportVector};
