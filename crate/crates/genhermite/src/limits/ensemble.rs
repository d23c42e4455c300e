//! Seeded Monte Carlo ensembles of normalized partial sums: the discrete
//! surrogate of the limit process, the CLT diagnostic for short-range
//! configurations, and the hypercontractivity moment ratio.

use rayon::prelude::*;

use crate::chaos::{
    build_coefficients, long_run_variance, partial_sum_process, simulate::simulate_with_noise,
    ChaosConfig, NoiseLaw, SimMode,
};
use crate::{Error, Result};

use super::stats::{ks_distance_normal, moment_summary, normality_z_scores, MomentSummary};

#[derive(Debug, Clone)]
pub struct EnsembleResult {
    pub t_grid: Vec<f64>,
    /// samples[r][ti] = Y_N(t_grid[ti]) in replication r.
    pub samples: Vec<Vec<f64>>,
    pub replications: usize,
    pub seed: u64,
    pub base_stream: u64,
}

impl EnsembleResult {
    pub fn samples_at(&self, ti: usize) -> Vec<f64> {
        self.samples.iter().map(|row| row[ti]).collect()
    }

    pub fn summary_at(&self, ti: usize) -> MomentSummary {
        moment_summary(&self.samples_at(ti))
    }
}

/// R replications of Y_N(t) = N^{−H} Σ_{n≤[Nt]} X(n) under Gaussian noise,
/// the discrete-chaos surrogate of the limit process Z(t). Replication r
/// runs on noise stream `base + r`.
pub fn simulate_limit_process(
    config: &ChaosConfig,
    t_grid: &[f64],
    n: usize,
    replications: usize,
) -> Result<EnsembleResult> {
    if config.noise.law != NoiseLaw::Gaussian {
        return Err(Error::InvalidConfig(
            "the Wiener-limit surrogate requires Gaussian noise".into(),
        ));
    }
    if replications < 2 {
        return Err(Error::InvalidConfig("need at least 2 replications".into()));
    }
    let spec = config
        .source
        .kernel()
        .ok_or_else(|| Error::InvalidConfig("limit-process ensembles need a kernel source".into()))?;
    let h = spec.hurst();
    let grid = build_coefficients(config)?;
    let samples: Result<Vec<Vec<f64>>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let noise = config.noise.with_stream(config.noise.stream + r as u64);
            let eps = noise.draw(n + grid.m - 1);
            let x = simulate_with_noise(config, &grid, n, SimMode::Auto, &eps)?;
            partial_sum_process(&x, h, t_grid)
        })
        .collect();
    Ok(EnsembleResult {
        t_grid: t_grid.to_vec(),
        samples: samples?,
        replications,
        seed: config.noise.seed,
        base_stream: config.noise.stream,
    })
}

#[derive(Debug, Clone)]
pub struct CltReport {
    /// Long-run variance from the exact oracle.
    pub sigma2: f64,
    pub samples: Vec<f64>,
    pub sample_variance: f64,
    /// KS distance of the ensemble to Normal(0, σ²).
    pub ks: f64,
    pub skew_z: f64,
    pub kurt_z: f64,
}

/// R samples of N^{−1/2} Σ_{n≤N} X(n) for a short-range configuration,
/// checked against Normal(0, σ²) with σ² from `long_run_variance`.
pub fn clt_ensemble(config: &ChaosConfig, n: usize, replications: usize) -> Result<CltReport> {
    if replications < 8 {
        return Err(Error::InvalidConfig("need at least 8 replications".into()));
    }
    let grid = build_coefficients(config)?;
    let sigma2 = long_run_variance(config, &grid)?; // rejects LRD input
    let scale = (n as f64).sqrt().recip();
    let samples: Result<Vec<f64>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let noise = config.noise.with_stream(config.noise.stream + r as u64);
            let eps = noise.draw(n + grid.m - 1);
            let x = simulate_with_noise(config, &grid, n, SimMode::Auto, &eps)?;
            Ok(scale * x.iter().sum::<f64>())
        })
        .collect();
    let samples = samples?;
    let ks = ks_distance_normal(&samples, 0.0, sigma2.sqrt())?;
    let (skew_z, kurt_z) = normality_z_scores(&samples);
    let sample_variance = moment_summary(&samples).variance;
    Ok(CltReport {
        sigma2,
        samples,
        sample_variance,
        ks,
        skew_z,
        kurt_z,
    })
}

pub use super::stats::moment_ratio;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{exact_partial_sum_variance, acf_exact, NoiseSpec};
    use crate::kernels::KernelSpec;

    #[test]
    fn ensemble_variance_matches_exact_partial_sum_variance() {
        let config = ChaosConfig::kernel(
            KernelSpec::product(vec![-0.7]),
            2048,
            NoiseSpec::new(NoiseLaw::Gaussian, 404),
        );
        let n = 1024;
        let r = 800;
        let ens = simulate_limit_process(&config, &[0.5, 1.0], n, r).unwrap();
        let acf = acf_exact(&config, None, n).unwrap();
        let h = 0.8;

        // Var(Y_N(1)) vs N^{-2H} Var[Σ X] within 5 MC standard errors
        let y1 = ens.samples_at(1);
        let exact1 = (n as f64).powf(-2.0 * h) * exact_partial_sum_variance(&acf.gamma, n).unwrap();
        let v1 = moment_summary(&y1).variance;
        // SE of a chaos-sample variance is wider than Gaussian; use the
        // fourth-moment estimate
        let m = moment_summary(&y1);
        let se = ((m.kurtosis - 1.0).max(0.5) / r as f64).sqrt() * v1;
        assert!(
            (v1 - exact1).abs() < 5.0 * se,
            "var {v1} vs exact {exact1} (se {se})"
        );

        // self-similarity of variances: Var(Y(1/2))/Var(Y(1)) ≈ 2^{-2H}
        let y05 = ens.samples_at(0);
        let exact05 =
            (n as f64).powf(-2.0 * h) * exact_partial_sum_variance(&acf.gamma, n / 2).unwrap();
        let ratio_exact = exact05 / exact1;
        assert!(
            (ratio_exact - 0.5f64.powf(2.0 * h)).abs() < 0.05,
            "exact ratio {ratio_exact}"
        );
        let v05 = moment_summary(&y05).variance;
        assert!((v05 / v1 - ratio_exact).abs() < 0.1, "{}", v05 / v1);
    }

    #[test]
    fn order1_limit_is_gaussian() {
        let config = ChaosConfig::kernel(
            KernelSpec::product(vec![-0.7]),
            1024,
            NoiseSpec::new(NoiseLaw::Gaussian, 11),
        );
        let ens = simulate_limit_process(&config, &[1.0], 512, 2000).unwrap();
        let y = ens.samples_at(0);
        let m = moment_summary(&y);
        let ks = ks_distance_normal(&y, 0.0, m.variance.sqrt()).unwrap();
        assert!(ks < 0.03, "order-1 KS {ks}");
    }

    #[test]
    fn clt_on_iid_case() {
        // a = 1_{i=1}: partial sums are i.i.d. sums of ε, σ² = 1
        let config = ChaosConfig::explicit(
            1,
            2,
            vec![(vec![1], 1.0)],
            NoiseSpec::new(NoiseLaw::Gaussian, 7),
        );
        let rep = clt_ensemble(&config, 256, 4000).unwrap();
        assert!((rep.sigma2 - 1.0).abs() < 1e-12);
        assert!(rep.ks < 0.03, "KS {}", rep.ks);
        assert!(rep.skew_z.abs() < 4.0 && rep.kurt_z.abs() < 4.0);
        assert!((rep.sample_variance - 1.0).abs() < 0.1);
    }

    #[test]
    fn clt_rejects_lrd() {
        let config = ChaosConfig::kernel(
            KernelSpec::product(vec![-0.7]),
            128,
            NoiseSpec::new(NoiseLaw::Gaussian, 7),
        );
        assert!(matches!(
            clt_ensemble(&config, 128, 64),
            Err(Error::NotSrd(_))
        ));
    }

    #[test]
    fn limit_ensemble_requires_gaussian_noise() {
        let config = ChaosConfig::kernel(
            KernelSpec::product(vec![-0.7]),
            64,
            NoiseSpec::new(NoiseLaw::Rademacher, 7),
        );
        assert!(simulate_limit_process(&config, &[1.0], 64, 16).is_err());
    }
}
