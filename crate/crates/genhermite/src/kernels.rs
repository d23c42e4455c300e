//! Generalized Hermite kernels: homogeneous functions g on the open positive
//! orthant with exponent α ∈ (−(k+1)/2, −k/2), their domination envelopes,
//! and the integrated kernels h_t they generate.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use statrs::function::beta::beta;

use crate::quad::{self, QuadOpts, QuadResult};
use crate::{Error, Result};

/// One product-power envelope term: coeff · ∏ x_j^{gamma_j}.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTerm {
    pub coeff: f64,
    pub gamma: Vec<f64>,
}

/// Domination certificate: |g(x)| ≤ Σ terms, every exponent in (−1, −1/2)
/// and every term's exponents summing to α.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Envelope {
    pub terms: Vec<EnvelopeTerm>,
}

impl Envelope {
    pub fn single(coeff: f64, gamma: Vec<f64>) -> Self {
        Envelope {
            terms: vec![EnvelopeTerm { coeff, gamma }],
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|t| t.coeff * t.gamma.iter().zip(x).map(|(&g, &xi)| xi.powf(g)).product::<f64>())
            .sum()
    }

    /// Σ_{m,m'} c_m c_{m'} ∏_j B(γ_mj + 1, −γ_mj − γ_m'j − 1); finite for
    /// every admissible envelope and an upper bound for ∫ g*(x) g*(1+x) dx.
    pub fn c_constant(&self) -> f64 {
        let mut total = 0.0;
        for t1 in &self.terms {
            for t2 in &self.terms {
                let mut prod = t1.coeff * t2.coeff;
                for (&g1, &g2) in t1.gamma.iter().zip(&t2.gamma) {
                    prod *= beta(g1 + 1.0, -g1 - g2 - 1.0);
                }
                total += prod;
            }
        }
        total
    }

    fn symmetrized(&self, k: usize) -> Envelope {
        let perms = permutations(k);
        let scale = 1.0 / perms.len() as f64;
        let mut terms = Vec::with_capacity(self.terms.len() * perms.len());
        for t in &self.terms {
            for p in &perms {
                terms.push(EnvelopeTerm {
                    coeff: t.coeff * scale,
                    gamma: p.iter().map(|&j| t.gamma[j]).collect(),
                });
            }
        }
        Envelope { terms }
    }
}

/// The evaluation rule of a kernel.
#[derive(Clone)]
pub enum KernelForm {
    /// ∏ x_j^{γ_j}, the non-symmetric Hermite kernel.
    Product { gamma: Vec<f64> },
    /// ‖x‖^α.
    NormPower,
    /// ∏ x_j^{a_j} / Σ x_j^b.
    RatioProduct { a: Vec<f64>, b: f64 },
    /// max( x_1…x_k / Σ x_j^{k−α}, ∏ x_j^{α/k} ).
    MaxCombo,
    /// Caller-supplied evaluator; must come with a declared α and envelope.
    Custom {
        eval: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
        /// User attestation that the evaluator is a.e. continuous on the
        /// open orthant; not checked mechanically.
        continuous: bool,
    },
}

impl fmt::Debug for KernelForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelForm::Product { gamma } => write!(f, "Product {{ gamma: {gamma:?} }}"),
            KernelForm::NormPower => write!(f, "NormPower"),
            KernelForm::RatioProduct { a, b } => write!(f, "RatioProduct {{ a: {a:?}, b: {b} }}"),
            KernelForm::MaxCombo => write!(f, "MaxCombo"),
            KernelForm::Custom { continuous, .. } => {
                write!(f, "Custom {{ continuous: {continuous} }}")
            }
        }
    }
}

impl KernelForm {
    fn is_permutation_invariant(&self) -> bool {
        match self {
            KernelForm::Product { gamma } => gamma.windows(2).all(|w| w[0] == w[1]),
            KernelForm::NormPower | KernelForm::MaxCombo => true,
            KernelForm::RatioProduct { a, .. } => a.windows(2).all(|w| w[0] == w[1]),
            KernelForm::Custom { .. } => false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct KernelSpec {
    pub k: usize,
    pub alpha: f64,
    pub form: KernelForm,
    pub envelope: Envelope,
    pub symmetric: bool,
}

/// Value of h_t at a point, with the quadrature error estimate.
#[derive(Debug, Clone)]
pub struct IntegratedKernelValue {
    pub t: f64,
    pub x: Vec<f64>,
    pub value: f64,
    pub abs_error_estimate: f64,
}

#[derive(Debug, Clone)]
pub struct ValidationCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub checks: Vec<ValidationCheck>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &'static str, passed: bool, detail: String) {
        self.checks.push(ValidationCheck {
            name,
            passed,
            detail,
        });
    }
}

/// How to obtain C_g = ∫ g(x) g(1+x) dx.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CMethod {
    ClosedForm,
    Quadrature,
    MonteCarlo { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct CConstant {
    pub value: f64,
    pub error_estimate: f64,
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    heap_permute(&mut idx, k, &mut out);
    out
}

fn heap_permute(idx: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
    if n <= 1 {
        out.push(idx.clone());
        return;
    }
    for i in 0..n {
        heap_permute(idx, n - 1, out);
        if n % 2 == 0 {
            idx.swap(i, n - 1);
        } else {
            idx.swap(0, n - 1);
        }
    }
}

const GAMMA_LO: f64 = -1.0;
const GAMMA_HI: f64 = -0.5;
const MAX_SYMMETRIZE_ORDER: usize = 8;

impl KernelSpec {
    pub fn product(gamma: Vec<f64>) -> Self {
        let k = gamma.len();
        let alpha = gamma.iter().sum();
        KernelSpec {
            k,
            alpha,
            envelope: Envelope::single(1.0, gamma.clone()),
            form: KernelForm::Product { gamma },
            symmetric: false,
        }
    }

    pub fn norm_power(k: usize, alpha: f64) -> Self {
        // ‖x‖^α ≤ k^{α/2} ∏ x_j^{α/k} by the arithmetic-geometric mean
        // inequality applied to the squares.
        let env = Envelope::single((k as f64).powf(alpha / 2.0), vec![alpha / k as f64; k]);
        KernelSpec {
            k,
            alpha,
            form: KernelForm::NormPower,
            envelope: env,
            symmetric: true,
        }
    }

    pub fn ratio_product(a: Vec<f64>, b: f64) -> Self {
        let k = a.len();
        let sum_a: f64 = a.iter().sum();
        let alpha = sum_a - b;
        let env = Envelope::single((k as f64).powf(sum_a / 2.0), vec![alpha / k as f64; k]);
        KernelSpec {
            k,
            alpha,
            symmetric: a.windows(2).all(|w| w[0] == w[1]),
            form: KernelForm::RatioProduct { a, b },
            envelope: env,
        }
    }

    pub fn max_combo(k: usize, alpha: f64) -> Self {
        let env = Envelope::single((k as f64).powf(k as f64 / 2.0), vec![alpha / k as f64; k]);
        KernelSpec {
            k,
            alpha,
            form: KernelForm::MaxCombo,
            envelope: env,
            symmetric: true,
        }
    }

    pub fn custom<F>(k: usize, alpha: f64, envelope: Envelope, continuous: bool, eval: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        KernelSpec {
            k,
            alpha,
            form: KernelForm::Custom {
                eval: Arc::new(eval),
                continuous,
            },
            envelope,
            symmetric: false,
        }
    }

    /// Hurst index of the generated process: H = α + k/2 + 1 ∈ (1/2, 1).
    pub fn hurst(&self) -> f64 {
        self.alpha + self.k as f64 / 2.0 + 1.0
    }

    /// Admissible α interval (open) for order k.
    pub fn alpha_window(k: usize) -> (f64, f64) {
        (-(k as f64 + 1.0) / 2.0, -(k as f64) / 2.0)
    }

    fn base_evaluate(&self, x: &[f64]) -> f64 {
        match &self.form {
            KernelForm::Product { gamma } => {
                gamma.iter().zip(x).map(|(&g, &xi)| xi.powf(g)).product()
            }
            KernelForm::NormPower => {
                let n2: f64 = x.iter().map(|&v| v * v).sum();
                n2.powf(self.alpha / 2.0)
            }
            KernelForm::RatioProduct { a, b } => {
                let num: f64 = a.iter().zip(x).map(|(&aj, &xi)| xi.powf(aj)).product();
                let den: f64 = x.iter().map(|&xi| xi.powf(*b)).sum();
                num / den
            }
            KernelForm::MaxCombo => {
                let num: f64 = x.iter().product();
                let p = self.k as f64 - self.alpha;
                let den: f64 = x.iter().map(|&xi| xi.powf(p)).sum();
                let power: f64 = x.iter().map(|&xi| xi.powf(self.alpha / self.k as f64)).product();
                (num / den).max(power)
            }
            KernelForm::Custom { eval, .. } => eval(x),
        }
    }

    /// g(x) for x strictly inside the positive orthant.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.k {
            return Err(Error::Domain(format!(
                "kernel has order {}, point has dimension {}",
                self.k,
                x.len()
            )));
        }
        if x.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
            return Err(Error::Domain(format!(
                "kernel arguments must be strictly positive, got {x:?}"
            )));
        }
        Ok(self.evaluate_unchecked(x))
    }

    /// As `evaluate` but skips domain checks; callers guarantee x > 0.
    pub fn evaluate_unchecked(&self, x: &[f64]) -> f64 {
        if self.symmetric && !self.form.is_permutation_invariant() {
            let perms = permutations(self.k);
            let mut buf = vec![0.0; self.k];
            let mut acc = 0.0;
            for p in &perms {
                for (slot, &j) in buf.iter_mut().zip(p) {
                    *slot = x[j];
                }
                acc += self.base_evaluate(&buf);
            }
            acc / perms.len() as f64
        } else {
            self.base_evaluate(x)
        }
    }

    /// Average of g over all argument permutations. Idempotent.
    pub fn symmetrize(&self) -> Result<KernelSpec> {
        if self.symmetric {
            return Ok(self.clone());
        }
        if self.k > MAX_SYMMETRIZE_ORDER {
            return Err(Error::InvalidKernel(format!(
                "refusing to symmetrize order {} (> {MAX_SYMMETRIZE_ORDER})",
                self.k
            )));
        }
        let mut out = self.clone();
        out.symmetric = true;
        out.envelope = self.envelope.symmetrized(self.k);
        Ok(out)
    }

    /// Tensor kernel g₁ ⊗ g₂ of order k₁ + k₂ with exponent α₁ + α₂.
    pub fn tensor_product(&self, other: &KernelSpec) -> Result<KernelSpec> {
        let k = self.k + other.k;
        let alpha = self.alpha + other.alpha;
        if alpha <= -(k as f64 + 1.0) / 2.0 {
            return Err(Error::InvalidKernel(format!(
                "tensor exponent {alpha} outside (-{}, -{}); factors too singular",
                (k as f64 + 1.0) / 2.0,
                k as f64 / 2.0
            )));
        }
        let mut env_terms = Vec::new();
        for t1 in &self.envelope.terms {
            for t2 in &other.envelope.terms {
                let mut gamma = t1.gamma.clone();
                gamma.extend_from_slice(&t2.gamma);
                env_terms.push(EnvelopeTerm {
                    coeff: t1.coeff * t2.coeff,
                    gamma,
                });
            }
        }
        let form = match (&self.form, &other.form) {
            (KernelForm::Product { gamma: g1 }, KernelForm::Product { gamma: g2 })
                if !self.symmetric && !other.symmetric =>
            {
                let mut gamma = g1.clone();
                gamma.extend_from_slice(g2);
                KernelForm::Product { gamma }
            }
            _ => {
                let left = self.clone();
                let right = other.clone();
                let k1 = self.k;
                KernelForm::Custom {
                    eval: Arc::new(move |x: &[f64]| {
                        left.evaluate_unchecked(&x[..k1]) * right.evaluate_unchecked(&x[k1..])
                    }),
                    continuous: true,
                }
            }
        };
        Ok(KernelSpec {
            k,
            alpha,
            form,
            envelope: Envelope { terms: env_terms },
            symmetric: false,
        })
    }

    /// Structural and sampled validation of the kernel conditions.
    ///
    /// Hard violations (α on or outside its open interval, an envelope
    /// exponent on a boundary, a Custom form without an envelope) are
    /// errors; sampled certifications are reported pass/fail.
    pub fn validate(&self) -> Result<ValidationReport> {
        let mut report = ValidationReport::default();
        let (lo, hi) = Self::alpha_window(self.k);

        if !(self.alpha > lo && self.alpha < hi) {
            return Err(Error::InvalidKernel(format!(
                "alpha = {} outside the open interval ({lo}, {hi})",
                self.alpha
            )));
        }
        report.push(
            "alpha-range",
            true,
            format!("alpha = {} in ({lo}, {hi})", self.alpha),
        );

        if let KernelForm::Product { gamma } = &self.form {
            for &g in gamma {
                if g <= GAMMA_LO || g >= GAMMA_HI {
                    return Err(Error::InvalidKernel(format!(
                        "product exponent {g} outside the open interval (-1, -1/2)"
                    )));
                }
            }
            let sum: f64 = gamma.iter().sum();
            report.push(
                "product-exponent-sum",
                (sum - self.alpha).abs() < 1e-12,
                format!("sum of gamma = {sum}, alpha = {}", self.alpha),
            );
        }
        if let KernelForm::RatioProduct { a, b } = &self.form {
            let ok = a.iter().all(|&v| v > 0.0) && *b > 0.0;
            if !ok {
                return Err(Error::InvalidKernel(
                    "ratio-product requires a_j > 0 and b > 0".into(),
                ));
            }
            let sum: f64 = a.iter().sum::<f64>() - b;
            report.push(
                "ratio-exponent",
                (sum - self.alpha).abs() < 1e-12,
                format!("sum a - b = {sum}"),
            );
        }
        if matches!(self.form, KernelForm::Custom { .. }) && self.envelope.terms.is_empty() {
            return Err(Error::InvalidKernel(
                "custom kernel requires a declared envelope".into(),
            ));
        }

        for term in &self.envelope.terms {
            if term.coeff <= 0.0 {
                return Err(Error::InvalidKernel(format!(
                    "envelope coefficient {} must be positive",
                    term.coeff
                )));
            }
            for &g in &term.gamma {
                if g <= GAMMA_LO || g >= GAMMA_HI {
                    return Err(Error::InvalidKernel(format!(
                        "envelope exponent {g} outside the open interval (-1, -1/2)"
                    )));
                }
            }
            let s: f64 = term.gamma.iter().sum();
            report.push(
                "envelope-sum-equals-alpha",
                (s - self.alpha).abs() < 1e-9,
                format!("term exponent sum {s} vs alpha {}", self.alpha),
            );
        }

        // Condition B via the envelope's Beta closed form.
        let c_env = self.envelope.c_constant();
        report.push(
            "integrability",
            c_env.is_finite() && c_env > 0.0,
            format!("envelope bound on int |g(x) g(1+x)| dx = {c_env}"),
        );

        // Sampled homogeneity: g(λx) = λ^α g(x).
        let mut rng = ChaCha8Rng::seed_from_u64(0x6b65726e);
        let mut homo_ok = true;
        let mut worst = 0.0f64;
        for _ in 0..200 {
            let x: Vec<f64> = (0..self.k).map(|_| rng.gen_range(0.05..10.0)).collect();
            let gx = self.evaluate_unchecked(&x);
            for lambda in [0.5, 2.0, 10.0] {
                let xs: Vec<f64> = x.iter().map(|&v| lambda * v).collect();
                let lhs = self.evaluate_unchecked(&xs);
                let rhs = (lambda as f64).powf(self.alpha) * gx;
                let dev = (lhs - rhs).abs() / (1.0 + rhs.abs());
                worst = worst.max(dev);
                if dev > 1e-10 {
                    homo_ok = false;
                }
            }
        }
        report.push(
            "homogeneity-sampled",
            homo_ok,
            format!("max relative deviation {worst:.3e}"),
        );

        // Sampled envelope domination.
        let mut dom_ok = true;
        let mut worst_ratio = 0.0f64;
        for _ in 0..10_000 {
            let x: Vec<f64> = (0..self.k).map(|_| rng.gen_range(1e-6..10.0)).collect();
            let g = self.evaluate_unchecked(&x).abs();
            let e = self.envelope.eval(&x);
            worst_ratio = worst_ratio.max(g / e);
            if g > e * (1.0 + 1e-12) {
                dom_ok = false;
            }
        }
        report.push(
            "envelope-domination-sampled",
            dom_ok,
            format!("max |g|/envelope = {worst_ratio:.6}"),
        );

        if let KernelForm::Custom { continuous, .. } = &self.form {
            report.push(
                "continuity-attested",
                *continuous,
                "a.e. continuity is a user attestation for custom kernels".into(),
            );
        }

        Ok(report)
    }

    /// C_g = ∫_{R₊^k} g(x) g(1+x) dx.
    pub fn c_constant(&self, method: CMethod) -> Result<CConstant> {
        match method {
            CMethod::ClosedForm => self.c_closed_form(),
            CMethod::Quadrature => self.c_quadrature(),
            CMethod::MonteCarlo { samples, seed } => self.c_monte_carlo(samples, seed),
        }
    }

    fn c_closed_form(&self) -> Result<CConstant> {
        let gamma = match &self.form {
            KernelForm::Product { gamma } => gamma.clone(),
            _ => {
                return Err(Error::ModeMismatch(
                    "closed-form C_g is only available for product kernels".into(),
                ))
            }
        };
        let value = if !self.symmetric {
            gamma
                .iter()
                .map(|&g| beta(g + 1.0, -2.0 * g - 1.0))
                .product()
        } else {
            let perms = permutations(self.k);
            let mut acc = 0.0;
            for p1 in &perms {
                for p2 in &perms {
                    let mut prod = 1.0;
                    for j in 0..self.k {
                        let g1 = gamma[p1[j]];
                        let g2 = gamma[p2[j]];
                        prod *= beta(g1 + 1.0, -g1 - g2 - 1.0);
                    }
                    acc += prod;
                }
            }
            acc / (perms.len() * perms.len()) as f64
        };
        Ok(CConstant {
            value,
            error_estimate: 1e-13 * value.abs(),
        })
    }

    fn c_quadrature(&self) -> Result<CConstant> {
        let opts = QuadOpts {
            abs_tol: 1e-12,
            rel_tol: 1e-11,
            max_intervals: 4000,
        };
        match self.k {
            1 => {
                let f = |x: f64| self.evaluate_unchecked(&[x]) * self.evaluate_unchecked(&[1.0 + x]);
                let head = quad::integrate(f, 0.0, 1.0, opts);
                let tail = quad::integrate_to_inf(f, 1.0, opts);
                Ok(CConstant {
                    value: head.value + tail.value,
                    error_estimate: head.abs_error + tail.abs_error,
                })
            }
            2 => {
                let inner_opts = QuadOpts {
                    abs_tol: 1e-13,
                    rel_tol: 1e-12,
                    max_intervals: 2000,
                };
                let inner = |x1: f64| -> QuadResult {
                    let f = |x2: f64| {
                        self.evaluate_unchecked(&[x1, x2])
                            * self.evaluate_unchecked(&[1.0 + x1, 1.0 + x2])
                    };
                    let h = quad::integrate(f, 0.0, 1.0, inner_opts);
                    let t = quad::integrate_to_inf(f, 1.0, inner_opts);
                    QuadResult {
                        value: h.value + t.value,
                        abs_error: h.abs_error + t.abs_error,
                        evals: h.evals + t.evals,
                        converged: h.converged && t.converged,
                    }
                };
                let head = quad::integrate(|x1| inner(x1).value, 0.0, 1.0, opts);
                let tail = quad::integrate_to_inf(|x1| inner(x1).value, 1.0, opts);
                Ok(CConstant {
                    value: head.value + tail.value,
                    error_estimate: (head.abs_error + tail.abs_error).max(1e-10),
                })
            }
            _ => Err(Error::ModeMismatch(format!(
                "quadrature C_g supports k <= 2, got k = {}; use Monte Carlo",
                self.k
            ))),
        }
    }

    fn c_monte_carlo(&self, samples: usize, seed: u64) -> Result<CConstant> {
        if samples < 2 {
            return Err(Error::InvalidConfig("need at least 2 samples".into()));
        }
        let term = self
            .envelope
            .terms
            .first()
            .ok_or_else(|| Error::InvalidKernel("Monte Carlo C_g needs an envelope".into()))?;
        // Importance density per coordinate: p(x) ∝ x^γ (1+x)^γ, sampled as
        // Y/(1-Y) with Y ~ Beta(γ+1, −2γ−1).
        let dists: Vec<rand_distr::Beta<f64>> = term
            .gamma
            .iter()
            .map(|&g| rand_distr::Beta::new(g + 1.0, -2.0 * g - 1.0).unwrap())
            .collect();
        let norms: Vec<f64> = term
            .gamma
            .iter()
            .map(|&g| beta(g + 1.0, -2.0 * g - 1.0))
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        let mut x = vec![0.0; self.k];
        let mut x1 = vec![0.0; self.k];
        for _ in 0..samples {
            let mut weight = 1.0;
            for j in 0..self.k {
                let y: f64 = rng.sample(dists[j]);
                let xi = (y / (1.0 - y)).clamp(1e-300, 1e300);
                x[j] = xi;
                x1[j] = 1.0 + xi;
                let dens = xi.powf(term.gamma[j]) * (1.0 + xi).powf(term.gamma[j]) / norms[j];
                weight /= dens;
            }
            let v = self.evaluate_unchecked(&x) * self.evaluate_unchecked(&x1) * weight;
            sum += v;
            sum2 += v * v;
        }
        let n = samples as f64;
        let mean = sum / n;
        let var = (sum2 / n - mean * mean).max(0.0);
        Ok(CConstant {
            value: mean,
            error_estimate: (var / n).sqrt() * 3.0,
        })
    }

    /// h_t(x) = ∫_0^t g(s·1 − x) 1{s·1 > x} ds by adaptive quadrature with
    /// the singular endpoint at s = max_j x_j.
    pub fn ht_evaluate(&self, t: f64, x: &[f64]) -> Result<IntegratedKernelValue> {
        self.ht_evaluate_tol(t, x, 1e-10)
    }

    pub fn ht_evaluate_tol(&self, t: f64, x: &[f64], tol: f64) -> Result<IntegratedKernelValue> {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("t must be positive, got {t}")));
        }
        if x.len() != self.k {
            return Err(Error::Domain(format!(
                "point dimension {} does not match order {}",
                x.len(),
                self.k
            )));
        }
        let xmax = x.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let lo = xmax.max(0.0);
        if lo >= t {
            return Ok(IntegratedKernelValue {
                t,
                x: x.to_vec(),
                value: 0.0,
                abs_error_estimate: 0.0,
            });
        }
        let argbuf = std::cell::RefCell::new(vec![0.0; self.k]);
        let f = |s: f64| {
            let mut a = argbuf.borrow_mut();
            for (slot, &xi) in a.iter_mut().zip(x) {
                *slot = s - xi;
            }
            if a.iter().any(|&v| v <= 0.0) {
                return 0.0;
            }
            self.evaluate_unchecked(&a)
        };
        let r = quad::integrate(&f, lo, t, QuadOpts::with_tol(tol));
        Ok(IntegratedKernelValue {
            t,
            x: x.to_vec(),
            value: r.value,
            abs_error_estimate: r.abs_error,
        })
    }

    /// ‖h_t‖²_{L²} = t^{2H} C_g / (H (2H − 1)).
    pub fn ht_norm_sq(&self, t: f64) -> Result<f64> {
        let c = self.c_auto()?;
        let h = self.hurst();
        Ok(t.powf(2.0 * h) * c.value / (h * (2.0 * h - 1.0)))
    }

    /// Best available route to C_g: closed form for products, quadrature for
    /// k ≤ 2, Monte Carlo beyond.
    pub fn c_auto(&self) -> Result<CConstant> {
        match &self.form {
            KernelForm::Product { .. } => self.c_closed_form(),
            _ if self.k <= 2 => self.c_quadrature(),
            _ => self.c_monte_carlo(200_000, 0x6368616f),
        }
    }

    /// Slowest per-axis decay exponent the envelope certifies (the γ_j
    /// closest to −1/2); h_t(x) decays like |x_j|^{γ_j} along axis j.
    fn envelope_axis_gamma(&self, j: usize) -> f64 {
        self.envelope
            .terms
            .iter()
            .map(|t| t.gamma[j])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Direct quadrature of ∫_{R^k} h_t(x)² dx, the independent cross-check
    /// for `ht_norm_sq`. Supported for k ≤ 2.
    pub fn ht_norm_sq_quadrature(&self, t: f64, tol: f64) -> Result<f64> {
        let inner_tol = tol * 1e-3;
        match self.k {
            1 => {
                let h2 = |x: f64| {
                    let v = self.ht_evaluate_tol(t, &[x], inner_tol).map(|r| r.value);
                    let v = v.unwrap_or(0.0);
                    v * v
                };
                let opts = QuadOpts::with_tol(tol * 0.25);
                let mid = quad::integrate_with_splits(h2, 0.0, t, &[], opts);
                let b = -2.0 * self.envelope_axis_gamma(0) - 1.0;
                let tail = quad::integrate_neg_axis_pow(h2, 1.0, b, opts);
                Ok(mid.value + tail.value)
            }
            2 => {
                let h2 = |x1: f64, x2: f64| {
                    let v = self
                        .ht_evaluate_tol(t, &[x1, x2], inner_tol)
                        .map(|r| r.value)
                        .unwrap_or(0.0);
                    v * v
                };
                let opts_in = QuadOpts {
                    abs_tol: tol * 1e-2,
                    rel_tol: tol * 1e-2,
                    max_intervals: 600,
                };
                let opts_out = QuadOpts {
                    abs_tol: tol * 0.2,
                    rel_tol: tol * 0.2,
                    max_intervals: 800,
                };
                let b2 = -2.0 * self.envelope_axis_gamma(1) - 1.0;
                let b1 = -2.0 * self.envelope_axis_gamma(0) - 1.0;
                let inner = |x1: f64| {
                    let mid = quad::integrate(|x2| h2(x1, x2), 0.0, t, opts_in);
                    let tail =
                        quad::integrate_neg_axis_pow(|x2| h2(x1, x2), 1.0, b2, opts_in);
                    mid.value + tail.value
                };
                let mid = quad::integrate(inner, 0.0, t, opts_out);
                let tail = quad::integrate_neg_axis_pow(inner, 1.0, b1, opts_out);
                Ok(mid.value + tail.value)
            }
            _ => Err(Error::ModeMismatch(
                "direct norm quadrature supports k <= 2".into(),
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!(
            (a - b).abs() <= tol * (1.0 + b.abs()),
            "{a} vs {b} (tol {tol})"
        );
    }

    #[test]
    fn validate_nonsym_product_passes() {
        let k = KernelSpec::product(vec![-0.75, -0.625]);
        assert!((k.alpha - (-1.375)).abs() < 1e-15);
        let report = k.validate().unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn validate_rejects_boundary_exponent() {
        let k = KernelSpec::product(vec![-0.5]);
        assert!(k.validate().is_err());
        let k = KernelSpec::product(vec![-1.0]);
        assert!(k.validate().is_err());
    }

    #[test]
    fn validate_rejects_alpha_out_of_range() {
        // alpha = -1.6 <= -3/2 for k = 2
        let k = KernelSpec::product(vec![-0.8, -0.8]);
        assert!(k.validate().is_err());
    }

    #[test]
    fn validate_norm_power_with_derived_envelope() {
        let k = KernelSpec::norm_power(2, -1.2);
        let report = k.validate().unwrap();
        assert!(report.passed(), "{report:?}");
        assert_eq!(k.envelope.terms.len(), 1);
        close(k.envelope.terms[0].coeff, 2f64.powf(-0.6), 1e-15);
        assert_eq!(k.envelope.terms[0].gamma, vec![-0.6, -0.6]);
    }

    #[test]
    fn custom_without_envelope_rejected() {
        let k = KernelSpec::custom(1, -0.7, Envelope::default(), true, |x| x[0].powf(-0.7));
        assert!(k.validate().is_err());
    }

    #[test]
    fn evaluate_examples() {
        let k = KernelSpec::product(vec![-0.75, -0.625]);
        close(k.evaluate(&[1.0, 1.0]).unwrap(), 1.0, 1e-15);

        let np = KernelSpec::norm_power(2, -1.2);
        close(np.evaluate(&[3.0, 4.0]).unwrap(), 5f64.powf(-1.2), 1e-14);

        let mc = KernelSpec::max_combo(2, -1.2);
        close(mc.evaluate(&[1.0, 1.0]).unwrap(), 1.0, 1e-15);

        assert!(k.evaluate(&[1.0, 0.0]).is_err());
        assert!(k.evaluate(&[-1.0, 2.0]).is_err());
    }

    #[test]
    fn symmetrize_average_and_idempotence() {
        let k = KernelSpec::product(vec![-0.75, -0.625]);
        let s = k.symmetrize().unwrap();
        let expected = 0.5 * (2f64.powf(-0.625) + 2f64.powf(-0.75));
        close(s.evaluate(&[1.0, 2.0]).unwrap(), expected, 1e-15);

        let ss = s.symmetrize().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let x = [rng.gen_range(0.01..5.0), rng.gen_range(0.01..5.0)];
            let a = s.evaluate(&x).unwrap();
            let b = ss.evaluate(&x).unwrap();
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn symmetrize_keeps_invariant_forms_unchanged() {
        let np = KernelSpec::norm_power(2, -1.2);
        let s = np.symmetrize().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..50 {
            let x = [rng.gen_range(0.01..5.0), rng.gen_range(0.01..5.0)];
            close(s.evaluate(&x).unwrap(), np.evaluate(&x).unwrap(), 1e-15);
        }
    }

    #[test]
    fn tensor_product_range_checks() {
        let a = KernelSpec::product(vec![-0.7]);
        let t = a.tensor_product(&a).unwrap();
        assert_eq!(t.k, 2);
        close(t.alpha, -1.4, 1e-15);
        assert!(t.validate().unwrap().passed());
        match &t.form {
            KernelForm::Product { gamma } => assert_eq!(gamma, &vec![-0.7, -0.7]),
            other => panic!("expected product form, got {other:?}"),
        }

        let b = KernelSpec::product(vec![-0.8]);
        assert!(b.tensor_product(&b).is_err());
    }

    #[test]
    fn c_constant_k1_closed_form_vs_quadrature() {
        let k = KernelSpec::product(vec![-0.7]);
        let closed = k.c_constant(CMethod::ClosedForm).unwrap();
        close(closed.value, beta(0.3, 0.4), 1e-13);
        let quad = k.c_constant(CMethod::Quadrature).unwrap();
        close(quad.value, closed.value, 1e-9);
    }

    #[test]
    fn c_constant_symmetrized_k2_expansion() {
        let k = KernelSpec::product(vec![-0.75, -0.625]).symmetrize().unwrap();
        let closed = k.c_constant(CMethod::ClosedForm).unwrap();
        let expected = 0.5
            * (beta(0.25, 0.5) * beta(0.375, 0.25) + beta(0.25, 0.375) * beta(0.375, 0.375));
        close(closed.value, expected, 1e-13);
        // independent 2-D tensor quadrature
        let q = k.c_constant(CMethod::Quadrature).unwrap();
        close(q.value, expected, 1e-7);
    }

    #[test]
    fn c_constant_norm_power_quadrature_vs_monte_carlo() {
        let k = KernelSpec::norm_power(2, -1.2);
        let q = k.c_constant(CMethod::Quadrature).unwrap();
        let mc = k
            .c_constant(CMethod::MonteCarlo {
                samples: 400_000,
                seed: 42,
            })
            .unwrap();
        assert!(
            (q.value - mc.value).abs() <= q.error_estimate + mc.error_estimate,
            "quad {} ± {} vs mc {} ± {}",
            q.value,
            q.error_estimate,
            mc.value,
            mc.error_estimate
        );
    }

    #[test]
    fn hurst_values() {
        close(KernelSpec::product(vec![-0.7]).hurst(), 0.8, 1e-15);
        close(
            KernelSpec::product(vec![-0.75, -0.625]).hurst(),
            0.625,
            1e-15,
        );
        close(KernelSpec::norm_power(3, -1.6).hurst(), 0.9, 1e-15);
    }

    #[test]
    fn ht_evaluate_cases() {
        let k = KernelSpec::product(vec![-0.7]);
        // indicator empty
        let v = k.ht_evaluate(1.0, &[1.5]).unwrap();
        assert_eq!(v.value, 0.0);
        // closed-form antiderivative at x = 0
        let v = k.ht_evaluate(1.0, &[0.0]).unwrap();
        close(v.value, 1.0 / 0.3, 1e-9);
        assert!(v.abs_error_estimate < 1e-8);
    }

    #[test]
    fn ht_scaling_relation() {
        // h_{λt}(λx) = λ^{α+1} h_t(x)
        let k = KernelSpec::product(vec![-0.75, -0.625]);
        let lam = 2.0;
        for x in [[-0.3, 0.2], [0.1, 0.4], [-1.0, -2.0]] {
            let base = k.ht_evaluate(1.0, &x).unwrap().value;
            let scaled = k
                .ht_evaluate(lam, &[lam * x[0], lam * x[1]])
                .unwrap()
                .value;
            close(scaled, lam.powf(k.alpha + 1.0) * base, 1e-7);
        }
    }

    #[test]
    fn ht_norm_sq_closed_form_and_scaling() {
        let k = KernelSpec::product(vec![-0.7]);
        let n1 = k.ht_norm_sq(1.0).unwrap();
        close(n1, beta(0.3, 0.4) / (0.8 * 0.6), 1e-12);
        let n2 = k.ht_norm_sq(2.0).unwrap();
        close(n2 / n1, 2f64.powf(1.6), 1e-12);
    }

    #[test]
    fn ht_norm_sq_quadrature_cross_check_k1() {
        let k = KernelSpec::product(vec![-0.7]);
        let closed = k.ht_norm_sq(1.0).unwrap();
        let direct = k.ht_norm_sq_quadrature(1.0, 1e-9).unwrap();
        assert!(
            (direct - closed).abs() / closed < 1e-8,
            "direct {direct} vs closed {closed}"
        );
    }

    #[test]
    fn beta_identity_cases() {
        for (g, d) in [(-0.7, -0.7), (-0.75, -0.625), (-0.6, -0.9)] {
            let f = |x: f64| quad::pow_plus(x, g) * (1.0 + x).powf(d);
            let head = quad::integrate(f, 0.0, 1.0, QuadOpts::default());
            let tail = quad::integrate_to_inf(f, 1.0, QuadOpts::default());
            let numeric = head.value + tail.value;
            let closed = beta(g + 1.0, -g - d - 1.0);
            assert!(
                (numeric - closed).abs() < 1e-10,
                "({g},{d}): {numeric} vs {closed}"
            );
        }
    }

    #[test]
    fn envelope_domination_on_box() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for spec in [
            KernelSpec::product(vec![-0.75, -0.625]),
            KernelSpec::norm_power(2, -1.2),
            KernelSpec::max_combo(2, -1.2),
            KernelSpec::ratio_product(vec![0.4, 0.4], 2.0),
        ] {
            for _ in 0..10_000 {
                let x = [rng.gen_range(1e-6..10.0), rng.gen_range(1e-6..10.0)];
                let g = spec.evaluate(&x).unwrap().abs();
                let e = spec.envelope.eval(&x);
                assert!(g <= e * (1.0 + 1e-12), "{spec:?} at {x:?}: {g} > {e}");
            }
        }
    }

    #[test]
    fn monotone_decreasing_along_rays() {
        let mut rng = ChaCha8Rng::seed_from_u64(123);
        for spec in [
            KernelSpec::product(vec![-0.75, -0.625]),
            KernelSpec::norm_power(2, -1.2),
            KernelSpec::max_combo(2, -1.2),
        ] {
            for _ in 0..200 {
                let x = [rng.gen_range(0.05..5.0), rng.gen_range(0.05..5.0)];
                let mut prev = f64::INFINITY;
                for c in [0.5, 1.0, 2.0, 4.0] {
                    let v = spec.evaluate(&[c * x[0], c * x[1]]).unwrap().abs();
                    assert!(v <= prev * (1.0 + 1e-12));
                    prev = v;
                }
            }
        }
    }

    #[test]
    fn ratio_product_alpha_window_example() {
        // Example form: a = (0.4, 0.4), b = 2 → alpha = -1.2 in (-3/2, -1)
        let k = KernelSpec::ratio_product(vec![0.4, 0.4], 2.0);
        close(k.alpha, -1.2, 1e-15);
        assert!(k.validate().unwrap().passed());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // g(λx) = λ^α g(x) for every built-in form
            #[test]
            fn homogeneity(
                x1 in 0.01f64..10.0,
                x2 in 0.01f64..10.0,
                lambda in 0.05f64..20.0,
                g1 in -0.95f64..-0.55,
                g2 in -0.95f64..-0.55,
            ) {
                for spec in [
                    KernelSpec::product(vec![g1, g2]),
                    KernelSpec::norm_power(2, g1 + g2),
                    KernelSpec::max_combo(2, g1 + g2),
                    KernelSpec::ratio_product(vec![0.3, 0.3], 0.6 - g1 - g2),
                ] {
                    let base = spec.evaluate(&[x1, x2]).unwrap();
                    let scaled = spec.evaluate(&[lambda * x1, lambda * x2]).unwrap();
                    let expect = lambda.powf(spec.alpha) * base;
                    prop_assert!(
                        (scaled - expect).abs() <= 1e-10 * (1.0 + expect.abs()),
                        "{spec:?}: {scaled} vs {expect}"
                    );
                }
            }

            // the symmetrized kernel is permutation invariant and dominated
            // by its symmetrized envelope
            #[test]
            fn symmetrization_invariance(
                x1 in 0.01f64..10.0,
                x2 in 0.01f64..10.0,
                g1 in -0.95f64..-0.55,
                g2 in -0.95f64..-0.55,
            ) {
                let sym = KernelSpec::product(vec![g1, g2]).symmetrize().unwrap();
                let a = sym.evaluate(&[x1, x2]).unwrap();
                let b = sym.evaluate(&[x2, x1]).unwrap();
                prop_assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()));
                prop_assert!(a.abs() <= sym.envelope.eval(&[x1, x2]) * (1.0 + 1e-12));
            }
        }
    }
}
