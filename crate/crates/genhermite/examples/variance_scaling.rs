//! Exact partial-sum variance scaling: log Var[sum X(n)] against log N has
//! slope 2H for the long-range kernels and slope 1 for short-range tables.
//!
//!     cargo run --release --example variance_scaling

use genhermite::chaos::{ChaosConfig, NoiseLaw, NoiseSpec};
use genhermite::kernels::KernelSpec;
use genhermite::limits::variance_scaling_exact;

fn main() {
    let noise = NoiseSpec::new(NoiseLaw::Gaussian, 1);
    let grid: Vec<usize> = (8..=14).map(|e| 1usize << e).collect();

    let k1 = ChaosConfig::kernel(KernelSpec::product(vec![-0.7]), 100_000, noise);
    let fit = variance_scaling_exact(&k1, &grid).unwrap();
    println!("order-1 gamma=-0.7, M=1e5:   slope {:.4} (expected 1.6)", fit.slope);

    let k2 = ChaosConfig::kernel(KernelSpec::product(vec![-0.75, -0.625]), 8192, noise);
    let fit = variance_scaling_exact(&k2, &grid).unwrap();
    println!("order-2 nonsym, M=8192:      slope {:.4} (expected 1.25)", fit.slope);

    let srd = ChaosConfig::explicit(
        2,
        4,
        vec![(vec![1, 2], 0.5), (vec![2, 1], 0.5)],
        noise,
    );
    let fit = variance_scaling_exact(&srd, &grid).unwrap();
    println!("short-range finite support:  slope {:.4} (expected 1.0)", fit.slope);
}
