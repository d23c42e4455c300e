//! Multivariate structure: cross-covariances of the limiting vector, the
//! contraction-integral independence criterion, and the mixed-block
//! correlation diagnostic for joint central / non-central convergence.

use rayon::prelude::*;

use crate::chaos::grid::{factorial, for_each_tuple, has_repeat};
use crate::chaos::{
    build_coefficients, simulate::simulate_with_noise, ChaosConfig, CoefficientGrid, SimMode,
};
use crate::fracfilter::{apply_filter, beta_window, hurst_filtered, FilterSpec};
use crate::kernels::KernelSpec;
use crate::quad::{self, QuadOpts};
use crate::{Error, Result};

/// γ_{p,q}(n) = k! Σ'_{i>0} ã_p(i) ã_q(i + n·1) for n ≥ 0 on the truncated
/// grids; exactly zero when the orders differ.
pub fn cross_gamma(gp: &CoefficientGrid, gq: &CoefficientGrid, n: usize) -> f64 {
    if gp.k != gq.k {
        return 0.0;
    }
    let k = gp.k;
    let m = gp.m.min(gq.m);
    if n >= m {
        return 0.0;
    }
    let mut acc = 0.0;
    let mut shifted = vec![0usize; k];
    for_each_tuple(k, m - n, |idx| {
        if has_repeat(idx) {
            return;
        }
        for (s, &i) in shifted.iter_mut().zip(idx) {
            *s = i + n;
        }
        acc += gp.a_sym(idx) * gq.a_sym(&shifted);
    });
    factorial(k) * acc
}

/// Limiting covariance (t₁∧t₂) Σ_n γ_{p,q}(n) of the normalized partial
/// sums of a short-range pair.
pub fn cross_covariance_limit(
    cfg_p: &ChaosConfig,
    cfg_q: &ChaosConfig,
    t1: f64,
    t2: f64,
) -> Result<f64> {
    if cfg_p.k() != cfg_q.k() {
        // chaoses of distinct orders are orthogonal at every lag
        return Ok(0.0);
    }
    let gp = build_coefficients(cfg_p)?;
    let gq = build_coefficients(cfg_q)?;
    if !gp.finite_support || !gq.finite_support {
        return Err(Error::NotSrd(
            "cross-covariance limits need a short-range (finite-support) pair".into(),
        ));
    }
    let m = gp.m.max(gq.m);
    let mut total = cross_gamma(&gp, &gq, 0);
    for n in 1..m {
        total += cross_gamma(&gp, &gq, n) + cross_gamma(&gq, &gp, n);
    }
    Ok(t1.min(t2) * total)
}

/// Slowest decay exponent of the kernel envelope along axis j.
fn axis_gamma(spec: &KernelSpec, j: usize) -> f64 {
    spec.envelope
        .terms
        .iter()
        .map(|t| t.gamma[j])
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Deterministic probe set: 16 points of a Kronecker (golden-ratio) sequence
/// scaled to (−2, 2)^dim. A zero-dimensional probe space degenerates to the
/// single empty point.
pub fn default_probes(dim: usize) -> Vec<Vec<f64>> {
    if dim == 0 {
        return vec![Vec::new()];
    }
    // generalized golden ratios: x_{i+1} = fract(x_i + φ_d) per coordinate
    let mut alphas = Vec::with_capacity(dim);
    let mut phi = 1.0f64;
    for _ in 0..dim {
        phi = (1.0 + phi).powf(1.0 / (dim as f64 + 1.0));
        alphas.push(1.0 / phi);
    }
    (1..=16)
        .map(|i| {
            (0..dim)
                .map(|d| {
                    let v = (i as f64 * alphas[d]).fract();
                    4.0 * v - 2.0
                })
                .collect()
        })
        .collect()
}

/// Contraction pairing of two symmetric kernels at probe points:
/// value(x) = ∫ dy [∫_0^t g₁(s−x₁,…,s−y) ds][∫_0^t g₂(…,s−y) ds].
/// Vanishing a.e. characterizes independence of the two chaoses.
pub fn contraction_integral(
    k1: &KernelSpec,
    k2: &KernelSpec,
    t: f64,
    probes: &[Vec<f64>],
) -> Result<Vec<f64>> {
    if k1.k > 2 || k2.k > 2 {
        return Err(Error::ModeMismatch(
            "contraction check supports orders p, q <= 2".into(),
        ));
    }
    if !k1.symmetric || !k2.symmetric {
        return Err(Error::InvalidConfig(
            "contraction criterion applies to symmetric kernels".into(),
        ));
    }
    let dim = k1.k + k2.k - 2;
    probes
        .par_iter()
        .map(|probe| {
            if probe.len() != dim {
                return Err(Error::Domain(format!(
                    "probe dimension {} != {}",
                    probe.len(),
                    dim
                )));
            }
            let head = &probe[..k1.k - 1];
            let tail = &probe[k1.k - 1..];
            let f1 = |y: f64| -> f64 {
                let mut pt = head.to_vec();
                pt.push(y);
                k1.ht_evaluate_tol(t, &pt, 1e-11).map(|r| r.value).unwrap_or(0.0)
            };
            let f2 = |y: f64| -> f64 {
                let mut pt = tail.to_vec();
                pt.push(y);
                k2.ht_evaluate_tol(t, &pt, 1e-11).map(|r| r.value).unwrap_or(0.0)
            };
            let integrand = |y: f64| f1(y) * f2(y);
            // both factors vanish for y >= t; the product decays like
            // |y|^{γ₁+γ₂} with the slowest envelope exponents
            let b = -(axis_gamma(k1, k1.k - 1) + axis_gamma(k2, k2.k - 1)) - 1.0;
            let opts = QuadOpts {
                abs_tol: 1e-9,
                rel_tol: 1e-8,
                max_intervals: 1200,
            };
            let mid = quad::integrate_with_splits(integrand, 0.0, t, &[], opts);
            let tail_part = quad::integrate_neg_axis_pow(integrand, 1.0, b, opts);
            Ok(mid.value + tail_part.value)
        })
        .collect()
}

/// Tag of a component in the mixed multivariate limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockTag {
    /// Short-range, order 1 (linear).
    S1,
    /// Short-range, order ≥ 2.
    S2,
    /// Long-range kernel-driven.
    L,
    /// Fractionally filtered long-range.
    F,
}

pub struct MixedComponent {
    pub tag: BlockTag,
    pub config: ChaosConfig,
    /// Required for `F` components, rejected otherwise.
    pub filter: Option<FilterSpec>,
}

#[derive(Debug, Clone)]
pub struct MixedReport {
    pub tags: Vec<BlockTag>,
    /// Normalization exponent used for each component.
    pub exponents: Vec<f64>,
    /// Pairwise sample correlations of the normalized sums.
    pub correlations: Vec<Vec<f64>>,
    /// Largest |corr| between an S2 component and any other block.
    pub s2_max_abs_corr: f64,
    pub replications: usize,
}

fn validate_component(c: &MixedComponent) -> Result<f64> {
    let k = c.config.k();
    match c.tag {
        BlockTag::S1 => {
            if k != 1 {
                return Err(Error::InvalidConfig("S1 components have order 1".into()));
            }
            if c.config.source.kernel().is_some() {
                return Err(Error::InvalidConfig(
                    "S1 components must be short-range (finite support)".into(),
                ));
            }
            Ok(0.5)
        }
        BlockTag::S2 => {
            if k < 2 {
                return Err(Error::InvalidConfig("S2 components have order >= 2".into()));
            }
            if c.config.source.kernel().is_some() {
                return Err(Error::InvalidConfig(
                    "S2 components must be short-range (finite support)".into(),
                ));
            }
            Ok(0.5)
        }
        BlockTag::L => {
            let spec = c
                .config
                .source
                .kernel()
                .ok_or_else(|| Error::InvalidConfig("L components are kernel-driven".into()))?;
            Ok(spec.hurst())
        }
        BlockTag::F => {
            let spec = c
                .config
                .source
                .kernel()
                .ok_or_else(|| Error::InvalidConfig("F components are kernel-driven".into()))?;
            let filter = c
                .filter
                .as_ref()
                .ok_or_else(|| Error::InvalidConfig("F components need a filter".into()))?;
            let (lo, hi) = beta_window(spec);
            if filter.beta <= lo || filter.beta >= hi || filter.beta == 0.0 {
                return Err(Error::InvalidConfig(format!(
                    "filter beta {} outside the kernel window ({lo}, {hi})",
                    filter.beta
                )));
            }
            Ok(hurst_filtered(spec, filter.beta))
        }
    }
}

/// Joint ensemble of normalized sums on shared noise; reports the pairwise
/// correlation matrix and the S2-block independence statistic.
pub fn multivariate_mixed_check(
    components: &[MixedComponent],
    n: usize,
    replications: usize,
) -> Result<MixedReport> {
    if components.is_empty() {
        return Err(Error::InvalidConfig("no components".into()));
    }
    let noise = components[0].config.noise;
    for c in components {
        if c.config.noise != noise {
            return Err(Error::InvalidConfig(
                "components must share one noise spec".into(),
            ));
        }
        if c.tag != BlockTag::F && c.filter.is_some() {
            return Err(Error::InvalidConfig(
                "only F components take a filter".into(),
            ));
        }
    }
    let exponents: Vec<f64> = components
        .iter()
        .map(validate_component)
        .collect::<Result<_>>()?;
    let grids: Vec<CoefficientGrid> = components
        .iter()
        .map(|c| build_coefficients(&c.config))
        .collect::<Result<_>>()?;
    let m_max = grids.iter().map(|g| g.m).max().unwrap();
    // F components need warmup room for the filter window
    let sim_len: Vec<usize> = components
        .iter()
        .map(|c| match &c.filter {
            Some(f) => n + f.length,
            None => n,
        })
        .collect();
    let max_len = *sim_len.iter().max().unwrap();

    let rows: Result<Vec<Vec<f64>>> = (0..replications)
        .into_par_iter()
        .map(|r| {
            let spec = noise.with_stream(noise.stream + r as u64);
            let eps = spec.draw(max_len + m_max - 1);
            components
                .iter()
                .zip(&grids)
                .zip(&exponents)
                .zip(&sim_len)
                .map(|(((c, grid), &h), &len)| {
                    let offset = m_max - grid.m;
                    let x = simulate_with_noise(&c.config, grid, len, SimMode::Auto, &eps[offset..])?;
                    let summed: f64 = match &c.filter {
                        Some(f) => {
                            let u = apply_filter(&x, f)?;
                            u.values[..n].iter().sum()
                        }
                        None => x[..n].iter().sum(),
                    };
                    Ok((n as f64).powf(-h) * summed)
                })
                .collect()
        })
        .collect();
    let rows = rows?;

    let j = components.len();
    let mut correlations = vec![vec![0.0; j]; j];
    let cols: Vec<Vec<f64>> = (0..j).map(|c| rows.iter().map(|row| row[c]).collect()).collect();
    for a in 0..j {
        for b in 0..j {
            correlations[a][b] = correlation(&cols[a], &cols[b]);
        }
    }
    let mut s2_max = 0.0f64;
    for (a, ca) in components.iter().enumerate() {
        if ca.tag != BlockTag::S2 {
            continue;
        }
        for b in 0..j {
            if components[b].tag != BlockTag::S2 {
                s2_max = s2_max.max(correlations[a][b].abs());
            }
        }
    }
    Ok(MixedReport {
        tags: components.iter().map(|c| c.tag).collect(),
        exponents,
        correlations,
        s2_max_abs_corr: s2_max,
        replications,
    })
}

fn correlation(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    let ma = a.iter().sum::<f64>() / n;
    let mb = b.iter().sum::<f64>() / n;
    let mut saa = 0.0;
    let mut sbb = 0.0;
    let mut sab = 0.0;
    for (&x, &y) in a.iter().zip(b) {
        saa += (x - ma) * (x - ma);
        sbb += (y - mb) * (y - mb);
        sab += (x - ma) * (y - mb);
    }
    sab / (saa * sbb).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chaos::{NoiseLaw, NoiseSpec};
    use crate::fracfilter::build_filter_for;
    use crate::quad::pow_plus;
    use statrs::function::beta::beta as beta_fn;

    fn noise(seed: u64) -> NoiseSpec {
        NoiseSpec::new(NoiseLaw::Gaussian, seed)
    }

    #[test]
    fn distinct_orders_give_exact_zero() {
        let p = ChaosConfig::explicit(1, 4, vec![(vec![1], 1.0)], noise(1));
        let q = ChaosConfig::explicit(
            2,
            4,
            vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            noise(1),
        );
        assert_eq!(cross_covariance_limit(&p, &q, 1.0, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn same_config_reduces_to_long_run_variance() {
        let p = ChaosConfig::explicit(
            2,
            4,
            vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            noise(1),
        );
        let v = cross_covariance_limit(&p, &p, 0.5, 2.0).unwrap();
        // σ² = 1 for this table, t₁∧t₂ = 0.5
        assert!((v - 0.5).abs() < 1e-14);
    }

    #[test]
    fn shifted_copies_hand_enumerable() {
        // a_p on {1}, a_q on {3}: γ_pq(n) = a_p(1) a_q(1+n)·1!; only n = 2
        // contributes forward, nothing backward
        let p = ChaosConfig::explicit(1, 6, vec![(vec![1], 1.0)], noise(1));
        let q = ChaosConfig::explicit(1, 6, vec![(vec![3], 2.0)], noise(1));
        let v = cross_covariance_limit(&p, &q, 1.0, 1.0).unwrap();
        assert!((v - 2.0).abs() < 1e-14, "{v}");
    }

    #[test]
    fn positive_kernels_contract_positively() {
        let k1 = KernelSpec::product(vec![-0.7]);
        let k2s = KernelSpec::product(vec![-0.75, -0.625]).symmetrize().unwrap();
        let k1s = k1.symmetrize().unwrap();
        let probes = default_probes(k1s.k + k2s.k - 2);
        assert_eq!(probes.len(), 16);
        let vals = contraction_integral(&k1s, &k2s, 1.0, &probes).unwrap();
        assert!(vals.iter().all(|&v| v > 0.0), "{vals:?}");
    }

    #[test]
    fn self_contraction_positive() {
        let k = KernelSpec::product(vec![-0.7]).symmetrize().unwrap();
        let vals = contraction_integral(&k, &k, 1.0, &default_probes(0)).unwrap();
        assert_eq!(vals.len(), 1);
        assert!(vals[0] > 0.0);
    }

    #[test]
    fn contraction_vs_beta_reduced_tensor_quadrature() {
        // independent route for order-2 × order-2 symmetric product kernels:
        // the y-integral collapses through the Beta identity, leaving a 2-D
        // tensor quadrature over (s, s')
        let g1 = -0.7;
        let g2 = -0.66;
        let k1 = KernelSpec::product(vec![g1, g1]).symmetrize().unwrap();
        let k2 = KernelSpec::product(vec![g2, g2]).symmetrize().unwrap();
        let t = 1.0;
        let probes: Vec<Vec<f64>> = vec![vec![-0.5, 0.2], vec![0.1, 0.4], vec![-1.0, -0.3]];
        let vals = contraction_integral(&k1, &k2, t, &probes).unwrap();
        let b_fwd = beta_fn(g1 + 1.0, -g1 - g2 - 1.0); // s <= s'
        let b_bwd = beta_fn(g2 + 1.0, -g1 - g2 - 1.0); // s' < s
        for (probe, &fast) in probes.iter().zip(&vals) {
            let (x1, x2) = (probe[0], probe[1]);
            let inner = |s: f64| {
                let f = |sp: f64| {
                    let b = if s <= sp { b_fwd } else { b_bwd };
                    pow_plus(sp - x2, g2) * pow_plus((s - sp).abs(), g1 + g2 + 1.0) * b
                };
                quad::integrate_with_splits(
                    f,
                    x2.max(0.0),
                    t,
                    &[s],
                    QuadOpts::with_tol(1e-10),
                )
                .value
            };
            let outer = quad::integrate(
                |s: f64| pow_plus(s - x1, g1) * inner(s),
                x1.max(0.0),
                t,
                QuadOpts::with_tol(1e-8),
            );
            assert!(
                (fast - outer.value).abs() < 1e-4 * (1.0 + outer.value.abs()),
                "probe {probe:?}: {} vs {}",
                fast,
                outer.value
            );
        }
    }

    #[test]
    fn mixed_check_s2_independent_block() {
        let s1 = MixedComponent {
            tag: BlockTag::S1,
            config: ChaosConfig::explicit(1, 4, vec![(vec![1], 1.0)], noise(99)),
            filter: None,
        };
        let s2 = MixedComponent {
            tag: BlockTag::S2,
            config: ChaosConfig::explicit(
                2,
                4,
                vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
                noise(99),
            ),
            filter: None,
        };
        let report = multivariate_mixed_check(&[s1, s2], 512, 4000).unwrap();
        assert!(
            report.s2_max_abs_corr < 0.05,
            "S2 correlation {}",
            report.s2_max_abs_corr
        );
        assert_eq!(report.exponents, vec![0.5, 0.5]);
    }

    #[test]
    fn mixed_check_positive_l_pair_correlates() {
        let mk = || MixedComponent {
            tag: BlockTag::L,
            config: ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 256, noise(5)),
            filter: None,
        };
        let report = multivariate_mixed_check(&[mk(), mk()], 256, 400).unwrap();
        // identical positive kernels on shared noise: correlation 1
        assert!(report.correlations[0][1] > 0.9);
    }

    #[test]
    fn mixed_check_single_component_degenerate() {
        let l = MixedComponent {
            tag: BlockTag::L,
            config: ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 64, noise(5)),
            filter: None,
        };
        let report = multivariate_mixed_check(&[l], 64, 64).unwrap();
        assert_eq!(report.correlations.len(), 1);
        assert_eq!(report.s2_max_abs_corr, 0.0);
    }

    #[test]
    fn mixed_check_tag_validation() {
        let bad = MixedComponent {
            tag: BlockTag::S1,
            config: ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 64, noise(5)),
            filter: None,
        };
        assert!(multivariate_mixed_check(&[bad], 64, 64).is_err());

        let f_no_filter = MixedComponent {
            tag: BlockTag::F,
            config: ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 64, noise(5)),
            filter: None,
        };
        assert!(multivariate_mixed_check(&[f_no_filter], 64, 64).is_err());

        let f_ok = MixedComponent {
            tag: BlockTag::F,
            config: ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 64, noise(5)),
            filter: Some(build_filter_for(-0.45, 32).unwrap()),
        };
        assert!(multivariate_mixed_check(&[f_ok], 128, 32).is_ok());
    }
}
