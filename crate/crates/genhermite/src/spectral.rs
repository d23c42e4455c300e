//! Spectral-domain identities: the pseudo-Fourier transform ĝ of a kernel,
//! the integrated spectral kernels ĥ_t and ĥ_t^β, homogeneity of ĝ with
//! exponent −α−k, and Plancherel cross-checks against the time domain.
//!
//! Product kernels carry the closed form ĝ(u) = ∏ Γ(γ_j+1)(−i u_j)^{−γ_j−1};
//! other order-1 kernels are handled by truncated oscillatory quadrature ĝ_n
//! with an integration-by-parts tail stabilizer.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::kernels::{KernelForm, KernelSpec};
use crate::quad::{self, pow_plus, QuadOpts};
use crate::{Error, Result};

const FRAC_PI_2: f64 = std::f64::consts::FRAC_PI_2;

/// (i w)^{−μ} on the principal branch: e^{−i·sign(w)·μπ/2} |w|^{−μ}.
fn i_pow_neg(w: f64, mu: f64) -> Complex64 {
    let phase = -w.signum() * mu * FRAC_PI_2;
    Complex64::from_polar(w.abs().powf(-mu), phase)
}

#[derive(Debug, Clone)]
enum GhatRoute {
    /// ∏_j Γ(γ_j+1) (−i u_j)^{−γ_j−1}.
    ProductClosedForm { gamma: Vec<f64> },
    /// Truncated oscillatory quadrature, order 1 only.
    Numeric { truncation: f64 },
}

/// A kernel together with an evaluation rule for its pseudo-Fourier
/// transform.
#[derive(Debug, Clone)]
pub struct SpectralKernel {
    pub kernel: KernelSpec,
    route: GhatRoute,
}

impl SpectralKernel {
    pub fn new(kernel: KernelSpec) -> Result<Self> {
        let route = match &kernel.form {
            KernelForm::Product { gamma } if !kernel.symmetric => GhatRoute::ProductClosedForm {
                gamma: gamma.clone(),
            },
            // order-1 norm power is x^α, the same closed form
            KernelForm::NormPower if kernel.k == 1 => GhatRoute::ProductClosedForm {
                gamma: vec![kernel.alpha],
            },
            _ if kernel.k == 1 => GhatRoute::Numeric { truncation: 1e4 },
            _ => {
                return Err(Error::ModeMismatch(
                    "pointwise ghat beyond product kernels is only available at order 1".into(),
                ))
            }
        };
        Ok(SpectralKernel { kernel, route })
    }

    /// Force the numeric route (order 1), e.g. to exercise the oscillatory
    /// quadrature against the closed form.
    pub fn numeric(kernel: KernelSpec, truncation: f64) -> Result<Self> {
        if kernel.k != 1 {
            return Err(Error::ModeMismatch(
                "numeric ghat is implemented for order 1".into(),
            ));
        }
        Ok(SpectralKernel {
            kernel,
            route: GhatRoute::Numeric { truncation },
        })
    }

    /// ĝ_n(u) = ∫_{(0,n]^k} g(x) e^{i⟨u,x⟩} dx with an error estimate.
    pub fn ghat_truncated(&self, u: &[f64], n: f64) -> Result<(Complex64, f64)> {
        if u.len() != self.kernel.k {
            return Err(Error::Domain("frequency dimension mismatch".into()));
        }
        match &self.kernel.form {
            KernelForm::Product { gamma } if !self.kernel.symmetric => {
                // coordinates separate
                let mut acc = Complex64::new(1.0, 0.0);
                let mut err = 0.0;
                for (&g, &uj) in gamma.iter().zip(u) {
                    let f = move |x: f64| pow_plus(x, g);
                    let (v, e) = quad::fourier_integral(&f, n, uj, 1e-10);
                    err = err * v.norm() + e * acc.norm();
                    acc *= v;
                }
                Ok((acc, err))
            }
            _ if self.kernel.k == 1 => {
                let spec = &self.kernel;
                let f = move |x: f64| spec.evaluate_unchecked(&[x]);
                let (v, e) = quad::fourier_integral(&f, n, u[0], 1e-10);
                Ok((v, e))
            }
            _ => Err(Error::ModeMismatch(
                "truncated ghat beyond product kernels is only available at order 1".into(),
            )),
        }
    }

    /// Stabilized large-n value of ĝ(u): closed form where available, else
    /// ĝ_n plus the integration-by-parts tail correction
    /// −g(n)e^{iun}/(iu) + g'(n)e^{iun}/(iu)², with g' = αg/x from
    /// homogeneity.
    pub fn ghat(&self, u: &[f64]) -> Result<Complex64> {
        if u.len() != self.kernel.k {
            return Err(Error::Domain("frequency dimension mismatch".into()));
        }
        if u.iter().any(|&v| v == 0.0) {
            return Err(Error::Domain(
                "ghat is evaluated off the frequency axes".into(),
            ));
        }
        match &self.route {
            GhatRoute::ProductClosedForm { gamma } => {
                let mut acc = Complex64::new(1.0, 0.0);
                for (&g, &uj) in gamma.iter().zip(u) {
                    // lim ∫_0^∞ x^γ e^{iux} dx = Γ(γ+1) (−iu)^{−γ−1}
                    acc *= gamma_fn(g + 1.0) * i_pow_neg(-uj, g + 1.0);
                }
                Ok(acc)
            }
            GhatRoute::Numeric { truncation } => {
                let n = *truncation;
                let (v, _) = self.ghat_truncated(u, n)?;
                let w = u[0];
                let gn = self.kernel.evaluate_unchecked(&[n]);
                let gpn = self.kernel.alpha * gn / n;
                let phase = Complex64::from_polar(1.0, w * n);
                let iu = Complex64::new(0.0, w);
                let correction = -gn * phase / iu + gpn * phase / (iu * iu);
                Ok(v + correction)
            }
        }
    }
}

fn gamma_fn(x: f64) -> f64 {
    gamma(x)
}

/// Max over sampled frequencies and λ ∈ {2, 4} of the relative deviation
/// |ĝ(λu) − λ^{−α−k} ĝ(u)| / |ĝ(u)|.
pub fn ghat_homogeneity_check(spectral: &SpectralKernel, samples: &[Vec<f64>]) -> Result<f64> {
    let expo = -spectral.kernel.alpha - spectral.kernel.k as f64;
    let mut worst = 0.0f64;
    for u in samples {
        let base = spectral.ghat(u)?;
        for lambda in [2.0f64, 4.0] {
            let us: Vec<f64> = u.iter().map(|&v| lambda * v).collect();
            let lhs = spectral.ghat(&us)?;
            let rhs = lambda.powf(expo) * base;
            let dev = (lhs - rhs).norm() / base.norm();
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}

/// (e^{itw} − 1)/(iw) with the removable singularity at w = 0 filled by t.
pub fn ht_factor(t: f64, w: f64) -> Complex64 {
    if (t * w).abs() < 1e-6 {
        // t (1 + itw/2 + (itw)²/6 + …)
        let itw = Complex64::new(0.0, t * w);
        return t * (Complex64::new(1.0, 0.0) + itw / 2.0 + itw * itw / 6.0);
    }
    let num = Complex64::from_polar(1.0, t * w) - 1.0;
    num / Complex64::new(0.0, w)
}

/// ĥ_t(u) = (e^{it⟨u,1⟩} − 1)/(i⟨u,1⟩) · ĝ(−u).
pub fn spectral_ht(spectral: &SpectralKernel, t: f64, u: &[f64]) -> Result<Complex64> {
    if t == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let w: f64 = u.iter().sum();
    let neg: Vec<f64> = u.iter().map(|&v| -v).collect();
    Ok(ht_factor(t, w) * spectral.ghat(&neg)?)
}

/// ĥ_t^β(u) = (e^{it⟨u,1⟩} − 1)(i⟨u,1⟩)^{−β−1} ĝ(−u) Γ(β), β ≠ 0 in the
/// kernel's filter window.
pub fn spectral_ht_beta(
    spectral: &SpectralKernel,
    beta: f64,
    t: f64,
    u: &[f64],
) -> Result<Complex64> {
    if beta == 0.0 {
        return Err(Error::InvalidConfig(
            "beta = 0 reduces to spectral_ht".into(),
        ));
    }
    let w: f64 = u.iter().sum();
    if w == 0.0 {
        return Err(Error::Domain(
            "spectral filtered kernel needs <u,1> != 0".into(),
        ));
    }
    let neg: Vec<f64> = u.iter().map(|&v| -v).collect();
    let osc = Complex64::from_polar(1.0, t * w) - 1.0;
    Ok(osc * i_pow_neg(w, beta + 1.0) * spectral.ghat(&neg)? * gamma_fn(beta))
}

/// ∫_0^∞ (2 − 2cos(t u)) u^{−p} du for p ∈ (1, 3): adaptive head, half-period
/// panels, analytic power tail (the oscillatory part of the tail is folded
/// into the error estimate).
fn osc_power_integral(t: f64, p: f64, tol: f64) -> Result<(f64, f64)> {
    if !(1.0 < p && p < 3.0) {
        return Err(Error::Domain(format!(
            "tail exponent p = {p} outside (1,3)"
        )));
    }
    let f = |u: f64| (2.0 - 2.0 * (t * u).cos()) * u.powf(-p);
    let w = std::f64::consts::PI / t;
    let head = quad::integrate(f, 0.0, w, QuadOpts::with_tol(tol * 0.1));
    // push the box out until the analytic tail is far below tol
    let scale = head.value.abs().max(1.0);
    let mut big = 64.0 / t;
    while 2.0 * big.powf(1.0 - p) / (p - 1.0) > tol * scale * 0.1 && big < 1e9 {
        big *= 2.0;
    }
    let mut x = w;
    let mut body = 0.0;
    let mut body_err = 0.0;
    let panel_opts = QuadOpts {
        abs_tol: tol * scale * 1e-4,
        rel_tol: 1e-12,
        max_intervals: 16,
    };
    while x < big {
        let x2 = (x + w).min(big);
        let r = quad::integrate(&f, x, x2, panel_opts);
        body += r.value;
        body_err += r.abs_error;
        x = x2;
    }
    let tail2 = 2.0 * big.powf(1.0 - p) / (p - 1.0);
    let cos_tail_bound = 2.0 * big.powf(-p) / t + 2.0 * p * big.powf(-p - 1.0) / (t * t);
    Ok((
        head.value + body + tail2,
        head.abs_error + body_err + cos_tail_bound,
    ))
}

/// Relative Plancherel error |(2π)^{−k} ∫ |ĥ_t|² du − ‖h_t‖²| / ‖h_t‖² for
/// product kernels of order 1 or 2.
///
/// The k = 2 frequency integral is reduced along u₁+u₂ = const: the
/// oscillation depends on v = u₁+u₂ only and the cross-section scales
/// homogeneously, so the 2-D integral splits into two 1-D factors. A literal
/// truncated box is useless here — along the anti-diagonal the integrand
/// decays like |u₁−u₂|^{−2(α+2)+1}, far too slowly to truncate.
pub fn plancherel_check(kernel: &KernelSpec, t: f64) -> Result<f64> {
    let gamma_exps: Vec<f64> = match (&kernel.form, kernel.k) {
        (KernelForm::Product { gamma }, _) if !kernel.symmetric => gamma.clone(),
        (KernelForm::NormPower, 1) => vec![kernel.alpha],
        _ => {
            return Err(Error::ModeMismatch(
                "plancherel check supports non-symmetrized product kernels, k <= 2".into(),
            ))
        }
    };
    let norm = kernel.ht_norm_sq(t)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let lhs = match kernel.k {
        1 => {
            let g = gamma_exps[0];
            let c = gamma_fn(g + 1.0).powi(2);
            // (2π)^{-1} ∫_R (2−2cos tu)/u² · c |u|^{−2γ−2} du
            let (v, _) = osc_power_integral(t, 2.0 * g + 4.0, 1e-9)?;
            2.0 * c * v / two_pi
        }
        2 => {
            let (g1, g2) = (gamma_exps[0], gamma_exps[1]);
            let c = gamma_fn(g1 + 1.0).powi(2) * gamma_fn(g2 + 1.0).powi(2);
            let (p1, p2) = (2.0 * g1 + 2.0, 2.0 * g2 + 2.0);
            // cross-section constant: ∫ |(1+s)/2|^{−p1} |(1−s)/2|^{−p2} ds
            let cross = |s: f64| {
                pow_plus((1.0 + s).abs() / 2.0, -p1) * pow_plus((1.0 - s).abs() / 2.0, -p2)
            };
            let j_mid =
                quad::integrate_with_splits(cross, -1.0, 1.0, &[0.0], QuadOpts::with_tol(1e-10));
            let j_up = quad::integrate_to_inf(cross, 1.0, QuadOpts::with_tol(1e-10));
            let j_dn = quad::integrate_from_neg_inf(cross, -1.0, QuadOpts::with_tol(1e-10));
            let j0 = j_mid.value + j_up.value + j_dn.value;
            // ∫_R (2−2cos tv) |v|^{−(p1+p2+1)} dv, then the ½ Jacobian
            let (v, _) = osc_power_integral(t, p1 + p2 + 1.0, 1e-9)?;
            0.5 * c * j0 * 2.0 * v / (two_pi * two_pi)
        }
        k => {
            return Err(Error::ModeMismatch(format!(
                "plancherel check supports k <= 2, got {k}"
            )))
        }
    };
    Ok((lhs - norm).abs() / norm)
}

/// k = 1 Plancherel for the fractionally filtered kernel:
/// (2π)^{−1} ∫ |ĥ_t^β|² du against the semi-closed `h_beta_norm_sq`.
pub fn plancherel_check_beta(kernel: &KernelSpec, beta: f64, t: f64) -> Result<f64> {
    let g = match (&kernel.form, kernel.k) {
        (KernelForm::Product { gamma }, 1) => gamma[0],
        (KernelForm::NormPower, 1) => kernel.alpha,
        _ => {
            return Err(Error::ModeMismatch(
                "filtered plancherel check supports product kernels with k = 1".into(),
            ))
        }
    };
    let norm = crate::fracfilter::h_beta_norm_sq(kernel, beta, t)?;
    let c = gamma_fn(g + 1.0).powi(2) * gamma_fn(beta).powi(2);
    // |ĥ^β|² = (2−2cos tu) |u|^{−2β−2} Γ(β)² |ĝ(u)|²
    let (v, _) = osc_power_integral(t, 2.0 * beta + 2.0 * g + 4.0, 1e-9)?;
    let lhs = 2.0 * c * v / (2.0 * std::f64::consts::PI);
    Ok((lhs - norm).abs() / norm)
}
