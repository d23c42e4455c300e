//! Path simulation of the off-diagonal discrete chaos process
//! X(n) = Σ' a(i) ε_{n−i₁} … ε_{n−i_k}.

use crate::kernels::KernelForm;
use crate::{Error, Result};

use super::grid::{ChaosConfig, CoeffSource, CoefficientGrid, Perturbation};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimMode {
    /// Full off-diagonal enumeration.
    Naive,
    /// Separable-coefficient path: linear sums with the diagonal subtracted
    /// analytically. Product kernels with identity perturbation, k ≤ 2.
    FastProduct,
    /// FastProduct when the configuration supports it, Naive otherwise.
    Auto,
}

fn fast_product_gammas(config: &ChaosConfig) -> Option<Vec<f64>> {
    if !matches!(config.perturbation, Perturbation::Identity) {
        return None;
    }
    match &config.source {
        CoeffSource::Kernel(spec) if !spec.symmetric => match &spec.form {
            KernelForm::Product { gamma } if gamma.len() <= 2 => Some(gamma.clone()),
            _ => None,
        },
        _ => None,
    }
}

/// Noise buffer covering ε_j for j = 1−M ... N−1, drawn in index order.
pub(crate) fn noise_buffer(config: &ChaosConfig, m: usize, n: usize) -> Vec<f64> {
    config.noise.draw(n + m - 1)
}

/// Simulate X(1..=n).
pub fn simulate(
    config: &ChaosConfig,
    grid: &CoefficientGrid,
    n: usize,
    mode: SimMode,
) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidConfig("path length must be >= 1".into()));
    }
    let eps = noise_buffer(config, grid.m, n);
    simulate_with_noise(config, grid, n, mode, &eps)
}

/// As `simulate` but on a caller-provided noise buffer (ε_{1−M}..ε_{N−1});
/// the joint simulator uses this to share one realization across components.
pub(crate) fn simulate_with_noise(
    config: &ChaosConfig,
    grid: &CoefficientGrid,
    n: usize,
    mode: SimMode,
    eps: &[f64],
) -> Result<Vec<f64>> {
    let m = grid.m;
    if eps.len() < n + m - 1 {
        return Err(Error::InvalidConfig("noise buffer too short".into()));
    }
    // ε_j lives at eps[j + m - 1]
    let resolved = match mode {
        SimMode::Naive => SimMode::Naive,
        SimMode::FastProduct => {
            if fast_product_gammas(config).is_none() {
                return Err(Error::ModeMismatch(
                    "fast_product requires a non-symmetrized product kernel (k <= 2) with \
                     identity perturbation"
                        .into(),
                ));
            }
            SimMode::FastProduct
        }
        SimMode::Auto => {
            if fast_product_gammas(config).is_some() {
                SimMode::FastProduct
            } else {
                SimMode::Naive
            }
        }
    };

    match resolved {
        SimMode::FastProduct => {
            let gamma = fast_product_gammas(config).unwrap();
            Ok(simulate_fast_product(&gamma, m, n, eps))
        }
        SimMode::Naive => Ok(simulate_naive(grid, n, eps)),
        SimMode::Auto => unreachable!(),
    }
}

fn simulate_naive(grid: &CoefficientGrid, n: usize, eps: &[f64]) -> Vec<f64> {
    let m = grid.m;
    let support = grid.nonzero_off_diagonal();
    let mut x = vec![0.0; n];
    // offsets: ε_{n0 - i} at eps[n0 - i + m - 1]
    for (idx, coeff) in &support {
        for n0 in 1..=n {
            let mut prod = *coeff;
            for &i in idx {
                prod *= eps[n0 + m - 1 - i];
            }
            x[n0 - 1] += prod;
        }
    }
    x
}

fn simulate_fast_product(gamma: &[f64], m: usize, n: usize, eps: &[f64]) -> Vec<f64> {
    let coeffs: Vec<Vec<f64>> = gamma
        .iter()
        .map(|&g| (1..=m).map(|i| (i as f64).powf(g)).collect())
        .collect();
    let mut x = vec![0.0; n];
    match coeffs.len() {
        1 => {
            let c = &coeffs[0];
            for n0 in 1..=n {
                let mut s = 0.0;
                for (i, &ci) in c.iter().enumerate() {
                    s += ci * eps[n0 + m - 2 - i];
                }
                x[n0 - 1] = s;
            }
        }
        2 => {
            let (c1, c2) = (&coeffs[0], &coeffs[1]);
            let c12: Vec<f64> = c1.iter().zip(c2).map(|(&a, &b)| a * b).collect();
            for n0 in 1..=n {
                let base = n0 + m - 2;
                let mut s1 = 0.0;
                let mut s2 = 0.0;
                let mut diag = 0.0;
                for i in 0..m {
                    let e = eps[base - i];
                    s1 += c1[i] * e;
                    s2 += c2[i] * e;
                    diag += c12[i] * e * e;
                }
                x[n0 - 1] = s1 * s2 - diag;
            }
        }
        _ => unreachable!("fast product is limited to k <= 2"),
    }
    x
}

/// Simulate several processes on one shared noise realization.
pub fn simulate_joint(
    items: &[(&ChaosConfig, &CoefficientGrid)],
    n: usize,
    mode: SimMode,
) -> Result<Vec<Vec<f64>>> {
    if items.is_empty() {
        return Ok(Vec::new());
    }
    let noise = items[0].0.noise;
    for (cfg, _) in items {
        if cfg.noise != noise {
            return Err(Error::InvalidConfig(
                "joint simulation requires all components to share one noise spec".into(),
            ));
        }
    }
    let m_max = items.iter().map(|(_, g)| g.m).max().unwrap();
    let eps_full = items[0].0.noise.draw(n + m_max - 1);
    items
        .iter()
        .map(|(cfg, grid)| {
            // ε_j at eps_full[j + m_max - 1]; each component reads the slice
            // starting at its own 1 - m.
            let offset = m_max - grid.m;
            simulate_with_noise(cfg, grid, n, mode, &eps_full[offset..])
        })
        .collect()
}

/// Y_N(t) = N^{−H} Σ_{n ≤ [Nt]} X(n) on a grid of t ∈ [0, 1].
pub fn partial_sum_process(x: &[f64], h: f64, t_grid: &[f64]) -> Result<Vec<f64>> {
    if !(h > 0.0 && h <= 1.0) {
        return Err(Error::InvalidConfig(format!(
            "Hurst exponent {h} outside (0, 1]"
        )));
    }
    if t_grid.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
        return Err(Error::InvalidConfig("t grid must lie in [0, 1]".into()));
    }
    let n = x.len();
    let scale = (n as f64).powf(-h);
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &v in x {
        acc += v;
        prefix.push(acc);
    }
    Ok(t_grid
        .iter()
        .map(|&t| {
            let upto = ((n as f64) * t).floor() as usize;
            scale * prefix[upto.min(n)]
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::grid::build_coefficients;
    use crate::chaos::noise::{NoiseLaw, NoiseSpec};
    use crate::kernels::KernelSpec;

    fn noise(seed: u64) -> NoiseSpec {
        NoiseSpec::new(NoiseLaw::Gaussian, seed)
    }

    #[test]
    fn single_point_support_formula() {
        // a supported on (1,2): X(n) = a(1,2) ε_{n-1} ε_{n-2}; the symmetrized
        // table with ±(1,2),(2,1) at 1/2 must generate the same path.
        let n = 32;
        let raw = ChaosConfig::explicit(2, 4, vec![(vec![1, 2], 1.0)], noise(3));
        let sym = ChaosConfig::explicit(
            2,
            4,
            vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            noise(3),
        );
        let graw = build_coefficients(&raw).unwrap();
        let gsym = build_coefficients(&sym).unwrap();
        let xr = simulate(&raw, &graw, n, SimMode::Naive).unwrap();
        let xs = simulate(&sym, &gsym, n, SimMode::Naive).unwrap();
        let eps = noise_buffer(&raw, 4, n);
        for n0 in 1..=n {
            let expect = eps[n0 + 2] * eps[n0 + 1]; // ε_{n-1} ε_{n-2}
            assert!((xr[n0 - 1] - expect).abs() < 1e-12);
            assert!((xr[n0 - 1] - xs[n0 - 1]).abs() < 1e-12);
        }
    }

    #[test]
    fn fast_product_matches_naive() {
        let spec = KernelSpec::product(vec![-0.75, -0.625]);
        let cfg = ChaosConfig::kernel(spec, 30, noise(11));
        let grid = build_coefficients(&cfg).unwrap();
        let xf = simulate(&cfg, &grid, 100, SimMode::FastProduct).unwrap();
        let xn = simulate(&cfg, &grid, 100, SimMode::Naive).unwrap();
        let maxdiff = xf
            .iter()
            .zip(&xn)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(maxdiff <= 1e-10, "max diff {maxdiff}");
    }

    #[test]
    fn symmetrized_coefficients_give_identical_paths() {
        let spec = KernelSpec::product(vec![-0.75, -0.625]);
        let cfg = ChaosConfig::kernel(spec.clone(), 20, noise(5));
        let cfg_sym = ChaosConfig::kernel(spec.symmetrize().unwrap(), 20, noise(5));
        let g = build_coefficients(&cfg).unwrap();
        let gs = build_coefficients(&cfg_sym).unwrap();
        let x = simulate(&cfg, &g, 200, SimMode::Naive).unwrap();
        let xs = simulate(&cfg_sym, &gs, 200, SimMode::Naive).unwrap();
        for (a, b) in x.iter().zip(&xs) {
            assert!((a - b).abs() < 1e-12 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn fast_product_mode_mismatch() {
        let cfg = ChaosConfig::kernel(KernelSpec::norm_power(2, -1.2), 10, noise(1));
        let grid = build_coefficients(&cfg).unwrap();
        assert!(matches!(
            simulate(&cfg, &grid, 10, SimMode::FastProduct),
            Err(Error::ModeMismatch(_))
        ));
        let cfg2 = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 10, noise(1))
            .with_perturbation(Perturbation::RationalDecay { c: 1.0 });
        let grid2 = build_coefficients(&cfg2).unwrap();
        assert!(simulate(&cfg2, &grid2, 10, SimMode::FastProduct).is_err());
        assert!(simulate(&cfg2, &grid2, 10, SimMode::Auto).is_ok());
    }

    #[test]
    fn joint_single_config_matches_simulate() {
        let cfg = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 16, noise(9));
        let grid = build_coefficients(&cfg).unwrap();
        let solo = simulate(&cfg, &grid, 64, SimMode::Naive).unwrap();
        let joint = simulate_joint(&[(&cfg, &grid)], 64, SimMode::Naive).unwrap();
        assert_eq!(joint.len(), 1);
        for (a, b) in solo.iter().zip(&joint[0]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn joint_identical_configs_identical_rows() {
        let cfg = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 16, noise(2));
        let grid = build_coefficients(&cfg).unwrap();
        let rows = simulate_joint(&[(&cfg, &grid), (&cfg, &grid)], 128, SimMode::Auto).unwrap();
        assert_eq!(rows[0], rows[1]);
    }

    #[test]
    fn joint_rejects_mismatched_noise() {
        let a = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 8, noise(1));
        let b = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 8, noise(2));
        let ga = build_coefficients(&a).unwrap();
        let gb = build_coefficients(&b).unwrap();
        assert!(simulate_joint(&[(&a, &ga), (&b, &gb)], 16, SimMode::Auto).is_err());
    }

    #[test]
    fn joint_distinct_orders_uncorrelated() {
        // order-1 and order-2 on shared noise: sample covariance within
        // 4 standard errors of the exact value 0
        let n = 100_000;
        let c1 = ChaosConfig::explicit(1, 4, vec![(vec![1], 1.0), (vec![3], -0.5)], noise(77));
        let c2 = ChaosConfig::explicit(
            2,
            4,
            vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            noise(77),
        );
        let g1 = build_coefficients(&c1).unwrap();
        let g2 = build_coefficients(&c2).unwrap();
        let rows = simulate_joint(&[(&c1, &g1), (&c2, &g2)], n, SimMode::Naive).unwrap();
        let prod: Vec<f64> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a * b).collect();
        let cov: f64 = prod.iter().sum::<f64>() / n as f64;
        // batch-means standard error (the product series is M-dependent)
        let batches = 20;
        let bl = n / batches;
        let means: Vec<f64> = (0..batches)
            .map(|b| prod[b * bl..(b + 1) * bl].iter().sum::<f64>() / bl as f64)
            .collect();
        let grand = means.iter().sum::<f64>() / batches as f64;
        let se = (means.iter().map(|m| (m - grand) * (m - grand)).sum::<f64>()
            / (batches as f64 - 1.0)
            / batches as f64)
            .sqrt();
        assert!(cov.abs() < 4.0 * se, "cov {cov}, se {se}");
    }

    #[test]
    fn partial_sum_basics() {
        let x = vec![1.0; 100];
        let y = partial_sum_process(&x, 1.0, &[0.0, 0.25, 0.5, 1.0]).unwrap();
        assert_eq!(y[0], 0.0);
        assert!((y[1] - 0.25).abs() < 1e-15);
        assert!((y[2] - 0.5).abs() < 1e-15);
        assert!((y[3] - 1.0).abs() < 1e-15);

        let x2: Vec<f64> = x.iter().map(|v| 2.0 * v).collect();
        let y2 = partial_sum_process(&x2, 1.0, &[0.5]).unwrap();
        assert!((y2[0] - 2.0 * y[2]).abs() < 1e-15);

        assert!(partial_sum_process(&x, 1.5, &[0.5]).is_err());
        assert!(partial_sum_process(&x, 0.8, &[1.5]).is_err());
    }
}
