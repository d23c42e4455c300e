//! Fractional filters C_n ~ n^{β−1}, their application to chaos paths, and
//! the fractionally filtered kernels h_t^β that describe the limits.
//!
//! Two coefficient families: a pure power C_n = n^{β−1} for β > 0, and the
//! telescoping zero-sum family C₁ = β^{−1}, C_n = β^{−1}(n^β − (n−1)^β) for
//! β < 0, whose partial sums are β^{−1} m^β exactly and whose total sum
//! vanishes — the damping the β < 0 limit requires.

use rayon::prelude::*;

use crate::chaos::acf::autocorr;
use crate::kernels::{IntegratedKernelValue, KernelSpec};
use crate::quad::{self, pow_plus, QuadOpts};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FilterFamily {
    /// C_n = n^{β−1}; requires β > 0.
    PurePower,
    /// C₁ = β^{−1}, C_n = β^{−1}(n^β − (n−1)^β); requires β < 0. Partial
    /// sums equal β^{−1} m^β, so Σ C_n = 0.
    TelescopingZeroSum,
}

#[derive(Debug, Clone)]
pub struct FilterSpec {
    pub beta: f64,
    pub family: FilterFamily,
    pub length: usize,
    coeffs: Vec<f64>,
}

/// Open β window (−α−k/2−1, −α−k/2) for pairing a filter with `kernel`;
/// β = 0 is additionally excluded by `build_filter`.
pub fn beta_window(kernel: &KernelSpec) -> (f64, f64) {
    let mid = -kernel.alpha - kernel.k as f64 / 2.0;
    (mid - 1.0, mid)
}

/// Hurst index of the filtered process: α + β + k/2 + 1 ∈ (0, 1).
pub fn hurst_filtered(kernel: &KernelSpec, beta: f64) -> f64 {
    kernel.hurst() + beta
}

pub fn build_filter(beta: f64, family: FilterFamily, length: usize) -> Result<FilterSpec> {
    if beta == 0.0 {
        return Err(Error::InvalidConfig("beta must be nonzero".into()));
    }
    if length == 0 {
        return Err(Error::InvalidConfig("filter length must be positive".into()));
    }
    match family {
        FilterFamily::PurePower if beta < 0.0 => {
            return Err(Error::InvalidConfig(
                "pure-power coefficients with beta < 0 violate the zero-sum requirement".into(),
            ));
        }
        FilterFamily::TelescopingZeroSum if beta > 0.0 => {
            return Err(Error::InvalidConfig(
                "the telescoping zero-sum family is the beta < 0 construction".into(),
            ));
        }
        _ => {}
    }
    let coeffs = match family {
        FilterFamily::PurePower => (1..=length).map(|n| (n as f64).powf(beta - 1.0)).collect(),
        FilterFamily::TelescopingZeroSum => {
            let inv = 1.0 / beta;
            (1..=length)
                .map(|n| {
                    if n == 1 {
                        inv
                    } else {
                        inv * ((n as f64).powf(beta) - ((n - 1) as f64).powf(beta))
                    }
                })
                .collect()
        }
    };
    Ok(FilterSpec {
        beta,
        family,
        length,
        coeffs,
    })
}

/// Family chosen by the sign of β.
pub fn build_filter_for(beta: f64, length: usize) -> Result<FilterSpec> {
    let family = if beta > 0.0 {
        FilterFamily::PurePower
    } else {
        FilterFamily::TelescopingZeroSum
    };
    build_filter(beta, family, length)
}

impl FilterSpec {
    pub fn coefficients(&self) -> &[f64] {
        &self.coeffs
    }

    /// Σ_{n≤m} C_n by compensated summation.
    pub fn partial_sum(&self, m: usize) -> f64 {
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &c in &self.coeffs[..m.min(self.length)] {
            let y = c - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Residual mass the truncation leaves behind: Σ_{m>L} C_m² and, for the
    /// zero-sum family, the uncancelled partial sum β^{−1} L^β.
    pub fn tail_report(&self) -> (f64, f64) {
        let l = self.length as f64;
        let e = 2.0 * self.beta - 2.0;
        let sq_tail = l.powf(e + 1.0) / (-e - 1.0);
        let residual = match self.family {
            FilterFamily::TelescopingZeroSum => l.powf(self.beta) / self.beta,
            FilterFamily::PurePower => 0.0,
        };
        (sq_tail, residual)
    }
}

/// Filtered path U(n) = Σ_{m=1}^{L} C_m X(n−m), emitted only where the full
/// filter window is available (no zero padding).
#[derive(Debug, Clone)]
pub struct FilteredPath {
    /// U(warmup+1), …, U(N) when the input was X(1), …, X(N).
    pub values: Vec<f64>,
    /// Number of leading indices discarded (= filter length).
    pub warmup: usize,
}

pub fn apply_filter(x: &[f64], filter: &FilterSpec) -> Result<FilteredPath> {
    let l = filter.length;
    if x.len() <= l {
        return Err(Error::InvalidConfig(format!(
            "path length {} does not cover filter length {l}",
            x.len()
        )));
    }
    let c = &filter.coeffs;
    let values: Vec<f64> = (l..x.len())
        .into_par_iter()
        .map(|j| {
            // output index n = j+1; U(n) = Σ C_m x[n-m-1] = Σ C_m x[j-m]
            let mut acc = 0.0;
            for (m, &cm) in c.iter().enumerate() {
                acc += cm * x[j - m - 1];
            }
            acc
        })
        .collect();
    Ok(FilteredPath { values, warmup: l })
}

/// l_t^β(s) = β^{−1}[(t−s)₊^β − (−s)₊^β], with (x)₊^β ≡ 0 for x ≤ 0 so the
/// values at s = 0 and s = t are the one-sided finite parts.
pub fn l_beta(beta: f64, t: f64, s: f64) -> f64 {
    (pow_plus(t - s, beta) - pow_plus(-s, beta)) / beta
}

/// h_t^β(x) = ∫ l_t^β(s) g(s·1−x) 1{s·1>x} ds by adaptive quadrature over
/// (max_j x_j, t) with splits at the power singularities.
pub fn h_beta_evaluate(
    kernel: &KernelSpec,
    beta: f64,
    t: f64,
    x: &[f64],
) -> Result<IntegratedKernelValue> {
    h_beta_evaluate_tol(kernel, beta, t, x, 1e-10)
}

pub fn h_beta_evaluate_tol(
    kernel: &KernelSpec,
    beta: f64,
    t: f64,
    x: &[f64],
    tol: f64,
) -> Result<IntegratedKernelValue> {
    check_window(kernel, beta)?;
    if !(t > 0.0) {
        return Err(Error::Domain(format!("t must be positive, got {t}")));
    }
    if x.len() != kernel.k {
        return Err(Error::Domain("point dimension mismatch".into()));
    }
    let m = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m >= t {
        return Ok(IntegratedKernelValue {
            t,
            x: x.to_vec(),
            value: 0.0,
            abs_error_estimate: 0.0,
        });
    }
    let argbuf = std::cell::RefCell::new(vec![0.0; kernel.k]);
    let f = |s: f64| {
        let mut a = argbuf.borrow_mut();
        for (slot, &xi) in a.iter_mut().zip(x) {
            *slot = s - xi;
        }
        if a.iter().any(|&v| v <= 0.0) {
            return 0.0;
        }
        l_beta(beta, t, s) * kernel.evaluate_unchecked(&a)
    };
    let r = quad::integrate_with_splits(f, m, t, &[0.0], QuadOpts::with_tol(tol));
    if !r.converged {
        return Err(Error::Quadrature(format!(
            "h_t^beta quadrature did not converge (error {:.3e})",
            r.abs_error
        )));
    }
    Ok(IntegratedKernelValue {
        t,
        x: x.to_vec(),
        value: r.value,
        abs_error_estimate: r.abs_error,
    })
}

fn check_window(kernel: &KernelSpec, beta: f64) -> Result<()> {
    let (lo, hi) = beta_window(kernel);
    if beta == 0.0 || beta <= lo || beta >= hi {
        return Err(Error::InvalidConfig(format!(
            "beta = {beta} outside the open window ({lo}, {hi}) \\ {{0}}"
        )));
    }
    Ok(())
}

/// ‖h_t^β‖² = 2 C_g · B(β+1, δ)/β · ∫ l_t^β(s) [(t−s)₊^{β+δ} − (−s)₊^{β+δ}] ds
/// with δ = 2α + k + 1; the remaining 1-D integral is done by quadrature.
pub fn h_beta_norm_sq(kernel: &KernelSpec, beta: f64, t: f64) -> Result<f64> {
    check_window(kernel, beta)?;
    let delta = 2.0 * kernel.alpha + kernel.k as f64 + 1.0;
    let c = kernel.c_auto()?;
    let b = statrs::function::beta::beta(beta + 1.0, delta);
    let integrand = |s: f64| {
        l_beta(beta, t, s) * (pow_plus(t - s, beta + delta) - pow_plus(-s, beta + delta))
    };
    let opts = QuadOpts::with_tol(1e-12);
    let mid = quad::integrate_with_splits(integrand, 0.0, t, &[], opts);
    // tail ends: ~ |s|^beta at 0⁻ (beta < 0) and |s|^{2H−3} far out
    let h_filtered = hurst_filtered(kernel, beta);
    let tail = quad::integrate_neg_axis_pow(
        integrand,
        beta.min(0.0) + 1.0,
        2.0 - 2.0 * h_filtered,
        opts,
    );
    if !mid.converged || !tail.converged {
        return Err(Error::Quadrature(
            "filtered norm integrand did not converge".into(),
        ));
    }
    Ok(2.0 * c.value * b / beta * (mid.value + tail.value))
}

/// Independent double-quadrature route to ‖h_t^β‖² for k = 1.
pub fn h_beta_norm_sq_quadrature(kernel: &KernelSpec, beta: f64, t: f64, tol: f64) -> Result<f64> {
    if kernel.k != 1 {
        return Err(Error::ModeMismatch(
            "direct filtered-norm quadrature supports k = 1".into(),
        ));
    }
    check_window(kernel, beta)?;
    let inner_tol = tol * 1e-3;
    let h2 = |x: f64| {
        h_beta_evaluate_tol(kernel, beta, t, &[x], inner_tol)
            .map(|r| r.value * r.value)
            .unwrap_or(0.0)
    };
    let opts = QuadOpts {
        abs_tol: tol * 0.25,
        rel_tol: tol * 0.25,
        max_intervals: 2000,
    };
    let mid = quad::integrate_with_splits(&h2, 0.0, t, &[], opts);
    // h² is continuous at 0⁻ and decays like |x|^{2H−3} far out
    let tail =
        quad::integrate_neg_axis_pow(&h2, 1.0, 2.0 - 2.0 * hurst_filtered(kernel, beta), opts);
    Ok(mid.value + tail.value)
}

/// Exact autocovariance of the filtered process via the bilinear form
/// γ_U(n) = Σ_{m,m'} C_m C_{m'} γ_X(n − m + m'), reorganized through the
/// filter autocorrelation w(d) = Σ_m C_m C_{m+d}.
///
/// `gamma_x` must cover lags 0..=(n_max + L − 1).
pub fn filtered_acf(gamma_x: &[f64], filter: &FilterSpec, n_max: usize) -> Result<Vec<f64>> {
    let l = filter.length;
    if gamma_x.len() < n_max + l {
        return Err(Error::InvalidConfig(format!(
            "need γ_X out to lag {}, got {}",
            n_max + l - 1,
            gamma_x.len() - 1
        )));
    }
    let w = autocorr(&filter.coeffs, l - 1);
    Ok((0..=n_max)
        .into_par_iter()
        .map(|n| {
            let mut acc = w[0] * gamma_x[n];
            for d in 1..l {
                let wd = w[d];
                acc += wd * (gamma_x[n + d] + gamma_x[(n as i64 - d as i64).unsigned_abs() as usize]);
            }
            acc
        })
        .collect())
}
