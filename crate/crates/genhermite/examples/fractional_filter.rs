//! Fractional filters: exact telescoping partial sums for beta < 0, regular
//! variation of both families, and the filtered variance-scaling slope
//! 2(alpha + beta + k/2 + 1).
//!
//!     cargo run --release --example fractional_filter

use genhermite::chaos::{ChaosConfig, NoiseLaw, NoiseSpec};
use genhermite::fracfilter::{
    apply_filter, beta_window, build_filter_for, h_beta_norm_sq, hurst_filtered,
};
use genhermite::kernels::KernelSpec;
use genhermite::limits::variance_scaling_filtered;

fn main() {
    let kernel = KernelSpec::product(vec![-0.7]);
    let (lo, hi) = beta_window(&kernel);
    println!("beta window for gamma=-0.7: ({lo}, {hi}) \\ {{0}}");

    let beta = -0.45;
    let filter = build_filter_for(beta, 1 << 14).unwrap();
    for m in [10usize, 100, 10_000] {
        println!(
            "partial sum at m={m:<6}: {:+.8}  (telescoping exact: {:+.8})",
            filter.partial_sum(m),
            (m as f64).powf(beta) / beta
        );
    }
    let l = filter.length;
    println!(
        "C_L / L^(beta-1) = {:.5}",
        filter.coefficients()[l - 1] / (l as f64).powf(beta - 1.0)
    );

    // filtering a short path: U(n) = sum C_m X(n-m) on the valid range
    let noise = NoiseSpec::new(NoiseLaw::Gaussian, 9);
    let cfg = ChaosConfig::kernel(kernel.clone(), 2048, noise);
    let grid = genhermite::chaos::build_coefficients(&cfg).unwrap();
    let x = genhermite::chaos::simulate(&cfg, &grid, 20_000, genhermite::chaos::SimMode::Auto)
        .unwrap();
    let short = build_filter_for(beta, 4096).unwrap();
    let u = apply_filter(&x, &short).unwrap();
    println!("filtered path: {} values after warmup {}", u.values.len(), u.warmup);

    // scaling slope of the filtered process via the exact bilinear form
    let cfg = ChaosConfig::kernel(kernel.clone(), 100_000, noise);
    let grid_n: Vec<usize> = (7..=11).map(|e| 1usize << e).collect();
    let filt = build_filter_for(beta, 1 << 15).unwrap();
    let fit = variance_scaling_filtered(&cfg, &filt, &grid_n).unwrap();
    println!(
        "filtered slope {:.4} (expected {:.2}, antipersistent H = {})",
        fit.slope,
        2.0 * hurst_filtered(&kernel, beta),
        hurst_filtered(&kernel, beta)
    );

    // the filtered kernel norm scales as t^{2H}
    let n1 = h_beta_norm_sq(&kernel, beta, 1.0).unwrap();
    let n2 = h_beta_norm_sq(&kernel, beta, 2.0).unwrap();
    println!(
        "||h_t^beta||^2 ratio t=2 vs t=1: {:.6} (2^{{2H}} = {:.6})",
        n2 / n1,
        2f64.powf(2.0 * hurst_filtered(&kernel, beta))
    );
}
