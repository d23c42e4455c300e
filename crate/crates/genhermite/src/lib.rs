//! Generalized Hermite kernels and the long-range-dependent discrete chaos
//! processes they generate.
//!
//! The crate builds homogeneous kernels g on the positive orthant, integrates
//! them into the L² kernels h_t of self-similar processes, simulates the
//! associated discrete chaos sequences X(n) = Σ' a(i) ε_{n−i₁}…ε_{n−i_k},
//! applies fractional filters, and verifies the resulting scaling laws and
//! limit behavior with exact summation, quadrature, and seeded Monte Carlo.
//!
//! Entry points:
//! - [`kernels::KernelSpec`] — kernel construction, validation, C_g, h_t;
//! - [`chaos`] — coefficient grids, path simulation, exact autocovariances;
//! - [`fracfilter`] — fractional filters C_n and the filtered kernels h_t^β;
//! - [`limits`] — discretized-kernel convergence, scaling fits, CLT and
//!   multivariate independence diagnostics;
//! - [`spectral`] — pseudo-Fourier transforms and Plancherel checks;
//! - [`presets`] — the named configurations the CLI and examples drive.
//!
//! Every randomized computation takes an explicit seed and a stream id, and
//! reruns are bitwise reproducible.

pub mod chaos;
pub mod fracfilter;
pub mod kernels;
pub mod limits;
pub mod presets;
pub mod quad;
pub mod report;
pub mod spectral;

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid kernel: {0}")]
    InvalidKernel(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("not short-range dependent: {0}")]
    NotSrd(String),
    #[error("quadrature failure: {0}")]
    Quadrature(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("mode mismatch: {0}")]
    ModeMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
