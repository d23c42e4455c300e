//! Variance-scaling fits: exact partial-sum variances over a dyadic N grid
//! and the log-log OLS slope whose expected value is 2H.

use crate::chaos::{acf_exact, exact_partial_sum_variance, ChaosConfig};
use crate::fracfilter::{filtered_acf, FilterSpec};
use crate::{Error, Result};

use super::stats::ols;

#[derive(Debug, Clone)]
pub struct ScalingFit {
    pub n_grid: Vec<usize>,
    pub variances: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    pub residuals: Vec<f64>,
    /// The smallest N is excluded from the fit (pre-asymptotic bias); it is
    /// still listed in `n_grid`/`variances`.
    pub dropped_smallest: bool,
}

/// Log-log OLS over (N, Var), discarding the smallest N when three or more
/// points are available.
pub fn fit_variance_scaling(n_grid: &[usize], variances: &[f64]) -> Result<ScalingFit> {
    if n_grid.len() != variances.len() || n_grid.len() < 2 {
        return Err(Error::InvalidConfig(
            "scaling fit needs two or more (N, variance) pairs".into(),
        ));
    }
    if variances.iter().any(|&v| !(v > 0.0)) {
        return Err(Error::InvalidConfig(
            "variances must be positive for a log-log fit".into(),
        ));
    }
    let drop = n_grid.len() >= 3;
    let skip = usize::from(drop);
    let lx: Vec<f64> = n_grid[skip..].iter().map(|&n| (n as f64).ln()).collect();
    let ly: Vec<f64> = variances[skip..].iter().map(|&v| v.ln()).collect();
    let (slope, intercept) = ols(&lx, &ly)?;
    let residuals = lx
        .iter()
        .zip(&ly)
        .map(|(&x, &y)| y - slope * x - intercept)
        .collect();
    Ok(ScalingFit {
        n_grid: n_grid.to_vec(),
        variances: variances.to_vec(),
        slope,
        intercept,
        residuals,
        dropped_smallest: drop,
    })
}

/// Exact-variance scaling fit of the unfiltered process via the truncated
/// autocovariances.
pub fn variance_scaling_exact(config: &ChaosConfig, n_grid: &[usize]) -> Result<ScalingFit> {
    let n_max = *n_grid
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidConfig("empty N grid".into()))?;
    let acf = acf_exact(config, None, n_max)?;
    let variances: Vec<f64> = n_grid
        .iter()
        .map(|&n| exact_partial_sum_variance(&acf.gamma, n))
        .collect::<Result<_>>()?;
    fit_variance_scaling(n_grid, &variances)
}

/// Exact-variance scaling fit of the filtered process U = C ⋆ X via the
/// bilinear form γ_U(n) = Σ w(d) γ_X(n+d).
pub fn variance_scaling_filtered(
    config: &ChaosConfig,
    filter: &FilterSpec,
    n_grid: &[usize],
) -> Result<ScalingFit> {
    let n_max = *n_grid
        .iter()
        .max()
        .ok_or_else(|| Error::InvalidConfig("empty N grid".into()))?;
    let acf = acf_exact(config, None, n_max + filter.length)?;
    let gamma_u = filtered_acf(&acf.gamma, filter, n_max)?;
    let variances: Vec<f64> = n_grid
        .iter()
        .map(|&n| exact_partial_sum_variance(&gamma_u, n))
        .collect::<Result<_>>()?;
    fit_variance_scaling(n_grid, &variances)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{NoiseLaw, NoiseSpec};
    use crate::fracfilter::build_filter_for;
    use crate::kernels::KernelSpec;

    fn noise() -> NoiseSpec {
        NoiseSpec::new(NoiseLaw::Gaussian, 1)
    }

    #[test]
    fn srd_slope_is_one() {
        let cfg = ChaosConfig::explicit(
            2,
            4,
            vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            noise(),
        );
        let grid: Vec<usize> = (6..=12).map(|e| 1usize << e).collect();
        let fit = variance_scaling_exact(&cfg, &grid).unwrap();
        assert!(
            (fit.slope - 1.0).abs() <= 0.03,
            "SRD slope {}",
            fit.slope
        );
    }

    #[test]
    fn lrd_k1_slope_near_2h() {
        let cfg = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 100_000, noise());
        let grid: Vec<usize> = (8..=14).map(|e| 1usize << e).collect();
        let fit = variance_scaling_exact(&cfg, &grid).unwrap();
        assert!(fit.dropped_smallest);
        assert!(
            (fit.slope - 1.6).abs() <= 0.03,
            "LRD slope {} (expected 1.6)",
            fit.slope
        );
    }

    #[test]
    fn filtered_antipersistent_slope() {
        // α = −0.7, β = −0.45: H = 0.35, expected slope 0.7 within [0.6, 0.8]
        let cfg = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 200_000, noise());
        let filter = build_filter_for(-0.45, 1 << 16).unwrap();
        let grid: Vec<usize> = (7..=12).map(|e| 1usize << e).collect();
        let fit = variance_scaling_filtered(&cfg, &filter, &grid).unwrap();
        assert!(
            fit.slope > 0.6 && fit.slope < 0.85,
            "filtered slope {}",
            fit.slope
        );
    }

    #[test]
    fn fit_rejects_degenerate_input() {
        assert!(fit_variance_scaling(&[16], &[1.0]).is_err());
        assert!(fit_variance_scaling(&[16, 32], &[1.0, -1.0]).is_err());
    }
}
