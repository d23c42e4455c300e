//! Exact autocovariances of the truncated chaos process against the
//! power-law asymptote k! C_g~ n^{2H-2}: the ratio climbs toward 1 as the
//! lag grows (slowly: the lattice correction decays like n^{-(1+gamma)}).
//!
//!     cargo run --release --example acf_power_law

use genhermite::chaos::{acf_asymptote, acf_exact, ChaosConfig, NoiseLaw, NoiseSpec};
use genhermite::kernels::KernelSpec;

fn main() {
    let noise = NoiseSpec::new(NoiseLaw::Gaussian, 1);
    let kernel = KernelSpec::product(vec![-0.7]);
    let cfg = ChaosConfig::kernel(kernel.clone(), 1_000_000, noise);
    let acf = acf_exact(&cfg, None, 20_000).unwrap();
    println!("order-1, gamma = -0.7, M = 1e6  (H = {})", kernel.hurst());
    println!("{:>8} {:>14} {:>14} {:>8}", "lag", "gamma_exact", "asymptote", "ratio");
    for lag in [50usize, 100, 200, 500, 1000, 5000, 20_000] {
        let asym = acf_asymptote(&kernel, lag as f64).unwrap();
        println!(
            "{lag:>8} {:>14.6} {:>14.6} {:>8.4}",
            acf.gamma[lag],
            asym,
            acf.gamma[lag] / asym
        );
    }
    println!("truncation bias bound: {:.3e}", acf.trunc_bound);
}
