//! Discrete chaos processes X(n) = Σ' a(i) ε_{n−i₁}…ε_{n−i_k}: coefficient
//! grids built from kernels or explicit tables, seeded path simulation, and
//! exact second-order structure.

pub mod acf;
pub mod grid;
pub mod noise;
pub mod simulate;

pub use acf::{
    acf_asymptote, acf_exact, acf_exact_grid, acf_exact_product, exact_partial_sum_variance,
    long_run_variance, AcfExact,
};
pub use grid::{build_coefficients, ChaosConfig, CoeffSource, CoefficientGrid, Perturbation};
pub use noise::{NoiseLaw, NoiseSpec};
pub use simulate::{partial_sum_process, simulate, simulate_joint, SimMode};
