//! Spectral identities: the pseudo-Fourier transform of a product kernel,
//! its homogeneity exponent -alpha-k, and the Plancherel cross-check of
//! ||h_t||^2 computed in the two domains.
//!
//!     cargo run --release --example spectral_identities

use genhermite::kernels::KernelSpec;
use genhermite::spectral::{
    ghat_homogeneity_check, plancherel_check, spectral_ht, SpectralKernel,
};

fn main() {
    let k1 = KernelSpec::product(vec![-0.7]);
    let sk = SpectralKernel::new(k1.clone()).unwrap();
    let (g_trunc, err) = sk.ghat_truncated(&[1.0], 1e4).unwrap();
    let g_limit = sk.ghat(&[1.0]).unwrap();
    println!("ghat_n(1) at n=1e4: {g_trunc:.6} (quadrature err {err:.1e})");
    println!("ghat(1) closed form: {g_limit:.6}");

    let dev = ghat_homogeneity_check(&sk, &[vec![0.7], vec![-1.3], vec![2.9]]).unwrap();
    println!("closed-form homogeneity deviation: {dev:.2e}");

    let numeric = SpectralKernel::numeric(KernelSpec::norm_power(1, -0.7), 1e4).unwrap();
    let dev = ghat_homogeneity_check(&numeric, &[vec![1.0], vec![-2.5]]).unwrap();
    println!("numeric-route homogeneity deviation: {dev:.2e}");

    println!(
        "spectral h_t at u=0.5, t=1: {:.6}",
        spectral_ht(&sk, 1.0, &[0.5]).unwrap()
    );

    for kernel in [k1, KernelSpec::product(vec![-0.75, -0.625])] {
        let p = plancherel_check(&kernel, 1.0).unwrap();
        println!("plancherel relative error (k={}): {:.2e}", kernel.k, p);
    }
}
