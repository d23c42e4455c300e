//! Construct each built-in kernel family, run the validation checks, and
//! print the constants that drive everything else: α, H, and C_g.
//!
//!     cargo run --release --example validate_kernels

use genhermite::kernels::{CMethod, KernelSpec};

fn main() {
    let kernels = vec![
        ("product x^-0.7", KernelSpec::product(vec![-0.7])),
        (
            "non-symmetric x1^-3/4 x2^-5/8",
            KernelSpec::product(vec![-0.75, -0.625]),
        ),
        ("norm power |x|^-1.2", KernelSpec::norm_power(2, -1.2)),
        ("max combo k=2", KernelSpec::max_combo(2, -1.2)),
        (
            "ratio product",
            KernelSpec::ratio_product(vec![0.4, 0.4], 2.0),
        ),
    ];
    for (name, spec) in kernels {
        let report = spec.validate().expect("structural validity");
        let c = spec.c_auto().expect("C_g");
        println!(
            "{name:<32} k={} alpha={:+.4} H={:.4} C_g={:.6} checks={}",
            spec.k,
            spec.alpha,
            spec.hurst(),
            c.value,
            if report.passed() { "pass" } else { "FAIL" }
        );
        for check in report.checks.iter().filter(|c| !c.passed) {
            println!("    failed: {} ({})", check.name, check.detail);
        }
    }

    // boundary exponents are rejected outright
    let bad = KernelSpec::product(vec![-0.5]);
    println!("\nboundary exponent -> {:?}", bad.validate().err().unwrap());

    // symmetrization averages over argument permutations
    let spec = KernelSpec::product(vec![-0.75, -0.625]);
    let sym = spec.symmetrize().unwrap();
    println!(
        "g(1,2) = {:.6}, symmetrized = {:.6}",
        spec.evaluate(&[1.0, 2.0]).unwrap(),
        sym.evaluate(&[1.0, 2.0]).unwrap()
    );

    // C_g by three routes for the symmetrized order-2 kernel
    let closed = sym.c_constant(CMethod::ClosedForm).unwrap();
    let quad = sym.c_constant(CMethod::Quadrature).unwrap();
    let mc = sym
        .c_constant(CMethod::MonteCarlo {
            samples: 200_000,
            seed: 7,
        })
        .unwrap();
    println!(
        "C_g~ closed={:.8} quadrature={:.8} monte-carlo={:.6}±{:.1e}",
        closed.value, quad.value, mc.value, mc.error_estimate
    );
}
