//! Central limit behavior of a short-range order-2 chaos: the normalized
//! partial sums pass a KS test against Normal(0, sigma^2) with sigma^2 from
//! the exact long-run variance.
//!
//!     cargo run --release --example clt_normality

use genhermite::chaos::{ChaosConfig, NoiseLaw, NoiseSpec};
use genhermite::limits::clt_ensemble;

fn main() {
    let cfg = ChaosConfig::explicit(
        2,
        4,
        vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
        NoiseSpec::new(NoiseLaw::Gaussian, 2024),
    );
    let report = clt_ensemble(&cfg, 1 << 12, 10_000).unwrap();
    println!("sigma^2 (exact)      = {:.6}", report.sigma2);
    println!("ensemble variance    = {:.6}", report.sample_variance);
    println!("KS distance          = {:.5}", report.ks);
    println!("skewness z-score     = {:+.3}", report.skew_z);
    println!("kurtosis z-score     = {:+.3}", report.kurt_z);
}
