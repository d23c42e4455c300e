//! Mixed multivariate limits: an order-2 short-range block decorrelates from
//! everything on shared noise, while positive kernels always register
//! dependence through the contraction integral.
//!
//!     cargo run --release --example multivariate_mixing

use genhermite::chaos::{ChaosConfig, NoiseLaw, NoiseSpec};
use genhermite::kernels::KernelSpec;
use genhermite::limits::{
    contraction_integral, cross_covariance_limit, default_probes, multivariate_mixed_check,
    BlockTag, MixedComponent,
};

fn main() {
    let noise = NoiseSpec::new(NoiseLaw::Gaussian, 321);
    let s1 = MixedComponent {
        tag: BlockTag::S1,
        config: ChaosConfig::explicit(1, 2, vec![(vec![1], 1.0)], noise),
        filter: None,
    };
    let s2 = MixedComponent {
        tag: BlockTag::S2,
        config: ChaosConfig::explicit(
            2,
            4,
            vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
            noise,
        ),
        filter: None,
    };
    let l = MixedComponent {
        tag: BlockTag::L,
        config: ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 1024, noise),
        filter: None,
    };
    let report = multivariate_mixed_check(&[s1, s2, l], 1024, 4000).unwrap();
    println!("tags: {:?}, normalization exponents: {:?}", report.tags, report.exponents);
    for row in &report.correlations {
        println!(
            "  {}",
            row.iter().map(|c| format!("{c:+.4}")).collect::<Vec<_>>().join("  ")
        );
    }
    println!("max |corr(S2, other)| = {:.4}", report.s2_max_abs_corr);

    // exact cross-covariance limit: distinct orders vanish identically
    let p = ChaosConfig::explicit(1, 2, vec![(vec![1], 1.0)], noise);
    let q = ChaosConfig::explicit(2, 4, vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)], noise);
    println!(
        "cross-covariance limit order-1 vs order-2: {}",
        cross_covariance_limit(&p, &q, 1.0, 1.0).unwrap()
    );

    // positive kernels: the contraction never vanishes
    let k1 = KernelSpec::product(vec![-0.7]).symmetrize().unwrap();
    let k2 = KernelSpec::product(vec![-0.75, -0.625]).symmetrize().unwrap();
    let probes = default_probes(k1.k + k2.k - 2);
    let vals = contraction_integral(&k1, &k2, 1.0, &probes).unwrap();
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    println!("contraction over {} probes: min = {min:.5} (> 0: dependent)", vals.len());
}
