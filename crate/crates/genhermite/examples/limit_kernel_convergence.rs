//! L2 convergence of the lattice kernel: the relative distance between the
//! discretized kernel and h_t shrinks as the lattice refines.
//!
//!     cargo run --release --example limit_kernel_convergence

use genhermite::kernels::KernelSpec;
use genhermite::limits::l2_discretization_error;

fn main() {
    let kernel = KernelSpec::product(vec![-0.7]);
    println!("order-1 gamma=-0.7, t=1");
    println!("{:>6} {:>12} {:>10}", "N", "rel L2 err", "window");
    for n in [64usize, 128, 256, 512] {
        let e = l2_discretization_error(&kernel, 1.0, n).unwrap();
        println!("{n:>6} {:>12.6} {:>10.1}", e.value, e.window_t);
    }
    println!("(the error decays like N^(-0.3): the integrable singularity of");
    println!(" the kernel sets the rate, so desk-scale values stay near 0.1)");
}
