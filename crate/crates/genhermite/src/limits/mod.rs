//! Desk-scale verification of the limit theorems: lattice-kernel L²
//! convergence, variance-scaling exponents, CLT normality for short-range
//! configurations, hypercontractivity ratios, and the independence structure
//! of mixed multivariate limits.

pub mod discretize;
pub mod ensemble;
pub mod multivariate;
pub mod scaling;
pub mod stats;

pub use discretize::{
    discretize_limit_kernel, discretized_value_direct, l2_discretization_error,
    l2_discretization_error_opts, DiscretizedKernel, L2Error, LatticeWindow,
};
pub use ensemble::{clt_ensemble, simulate_limit_process, CltReport, EnsembleResult};
pub use multivariate::{
    contraction_integral, cross_covariance_limit, cross_gamma, default_probes,
    multivariate_mixed_check, BlockTag, MixedComponent, MixedReport,
};
pub use scaling::{
    fit_variance_scaling, variance_scaling_exact, variance_scaling_filtered, ScalingFit,
};
pub use stats::{ks_distance_normal, moment_ratio, moment_summary, normality_z_scores};
