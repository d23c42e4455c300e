//! Truncated coefficient grids a(i) = g(i) L(i) on (0, M]^k, their
//! symmetrizations, and the envelope-based tail bounds that quantify what the
//! truncation discards.

use std::fmt;
use std::sync::Arc;

use crate::kernels::KernelSpec;
use crate::{Error, Result};

use super::noise::NoiseSpec;

/// Bounded perturbation L(i) with L([nx] + B(n)) → 1 along lattice rays.
#[derive(Clone)]
pub enum Perturbation {
    Identity,
    /// L(i) = 1 + c / (i₁ + … + i_k).
    RationalDecay { c: f64 },
    /// Caller-supplied bounded perturbation; `bound` must dominate |L|.
    Custom {
        eval: Arc<dyn Fn(&[usize]) -> f64 + Send + Sync>,
        bound: f64,
    },
}

impl fmt::Debug for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Perturbation::Identity => write!(f, "Identity"),
            Perturbation::RationalDecay { c } => write!(f, "RationalDecay {{ c: {c} }}"),
            Perturbation::Custom { bound, .. } => write!(f, "Custom {{ bound: {bound} }}"),
        }
    }
}

impl Perturbation {
    pub fn eval(&self, i: &[usize]) -> f64 {
        match self {
            Perturbation::Identity => 1.0,
            Perturbation::RationalDecay { c } => {
                1.0 + c / i.iter().map(|&v| v as f64).sum::<f64>()
            }
            Perturbation::Custom { eval, .. } => eval(i),
        }
    }

    pub fn bound(&self) -> f64 {
        match self {
            Perturbation::Identity => 1.0,
            Perturbation::RationalDecay { c } => 1.0 + c.abs(),
            Perturbation::Custom { bound, .. } => *bound,
        }
    }
}

/// Where the coefficients come from: a validated kernel sampled on the
/// lattice (the LRD case), or an explicit finite table (the SRD case).
#[derive(Debug, Clone)]
pub enum CoeffSource {
    Kernel(KernelSpec),
    Explicit {
        k: usize,
        entries: Vec<(Vec<usize>, f64)>,
    },
}

impl CoeffSource {
    pub fn order(&self) -> usize {
        match self {
            CoeffSource::Kernel(spec) => spec.k,
            CoeffSource::Explicit { k, .. } => *k,
        }
    }

    pub fn kernel(&self) -> Option<&KernelSpec> {
        match self {
            CoeffSource::Kernel(spec) => Some(spec),
            CoeffSource::Explicit { .. } => None,
        }
    }
}

pub const DEFAULT_GRID_ELEMENT_CAP: usize = 1 << 25;

/// A truncated discrete chaos process: coefficients, truncation radius,
/// perturbation, and driving noise.
#[derive(Debug, Clone)]
pub struct ChaosConfig {
    pub source: CoeffSource,
    pub m: usize,
    pub perturbation: Perturbation,
    pub noise: NoiseSpec,
    pub max_grid_elements: usize,
}

impl ChaosConfig {
    pub fn kernel(spec: KernelSpec, m: usize, noise: NoiseSpec) -> Self {
        ChaosConfig {
            source: CoeffSource::Kernel(spec),
            m,
            perturbation: Perturbation::Identity,
            noise,
            max_grid_elements: DEFAULT_GRID_ELEMENT_CAP,
        }
    }

    pub fn explicit(k: usize, m: usize, entries: Vec<(Vec<usize>, f64)>, noise: NoiseSpec) -> Self {
        ChaosConfig {
            source: CoeffSource::Explicit { k, entries },
            m,
            perturbation: Perturbation::Identity,
            noise,
            max_grid_elements: DEFAULT_GRID_ELEMENT_CAP,
        }
    }

    pub fn with_perturbation(mut self, p: Perturbation) -> Self {
        self.perturbation = p;
        self
    }

    pub fn with_noise(mut self, noise: NoiseSpec) -> Self {
        self.noise = noise;
        self
    }

    pub fn with_grid_cap(mut self, cap: usize) -> Self {
        self.max_grid_elements = cap;
        self
    }

    pub fn k(&self) -> usize {
        self.source.order()
    }

    fn check_invariants(&self) -> Result<()> {
        let k = self.k();
        if self.m < k {
            return Err(Error::InvalidConfig(format!(
                "truncation M = {} leaves no off-diagonal tuple for order {k}",
                self.m
            )));
        }
        Ok(())
    }
}

/// Dense coefficient grid with its symmetrization and truncation tail bound.
#[derive(Debug, Clone)]
pub struct CoefficientGrid {
    pub k: usize,
    pub m: usize,
    a: Vec<f64>,
    a_sym: Vec<f64>,
    /// Upper bound on Σ_{i outside (0,M]^k} envelope(i)²; zero for explicit
    /// finite-support sources.
    pub tail_bound: f64,
    pub finite_support: bool,
}

/// Visit every tuple i ∈ [1, m]^k in row-major order.
pub(crate) fn for_each_tuple(k: usize, m: usize, mut f: impl FnMut(&[usize])) {
    let mut idx = vec![1usize; k];
    loop {
        f(&idx);
        let mut j = k;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if idx[j] < m {
                idx[j] += 1;
                for slot in idx.iter_mut().skip(j + 1) {
                    *slot = 1;
                }
                break;
            }
        }
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn go(idx: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if n <= 1 {
            out.push(idx.clone());
            return;
        }
        for i in 0..n {
            go(idx, n - 1, out);
            if n % 2 == 0 {
                idx.swap(i, n - 1);
            } else {
                idx.swap(0, n - 1);
            }
        }
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    go(&mut idx, k, &mut out);
    out
}

impl CoefficientGrid {
    #[inline]
    pub fn flat(&self, idx: &[usize]) -> usize {
        let mut f = 0usize;
        for &i in idx {
            debug_assert!((1..=self.m).contains(&i));
            f = f * self.m + (i - 1);
        }
        f
    }

    #[inline]
    pub fn a(&self, idx: &[usize]) -> f64 {
        self.a[self.flat(idx)]
    }

    #[inline]
    pub fn a_sym(&self, idx: &[usize]) -> f64 {
        self.a_sym[self.flat(idx)]
    }

    pub fn values(&self) -> &[f64] {
        &self.a
    }

    pub fn sym_values(&self) -> &[f64] {
        &self.a_sym
    }

    /// Nonzero off-diagonal entries of the raw coefficients.
    pub fn nonzero_off_diagonal(&self) -> Vec<(Vec<usize>, f64)> {
        let mut out = Vec::new();
        for_each_tuple(self.k, self.m, |idx| {
            if has_repeat(idx) {
                return;
            }
            let v = self.a[self.flat(idx)];
            if v != 0.0 {
                out.push((idx.to_vec(), v));
            }
        });
        out
    }

    /// k! Σ' ã(i)², the process variance γ(0) of the truncated process.
    pub fn gamma0(&self) -> f64 {
        let mut acc = 0.0;
        for_each_tuple(self.k, self.m, |idx| {
            if !has_repeat(idx) {
                let v = self.a_sym[self.flat(idx)];
                acc += v * v;
            }
        });
        acc * factorial(self.k)
    }
}

#[inline]
pub(crate) fn has_repeat(idx: &[usize]) -> bool {
    for p in 0..idx.len() {
        for q in (p + 1)..idx.len() {
            if idx[p] == idx[q] {
                return true;
            }
        }
    }
    false
}

pub(crate) fn factorial(k: usize) -> f64 {
    (1..=k).map(|v| v as f64).product::<f64>().max(1.0)
}

/// Build the dense grid a(i) = g(i) L(i) (or the explicit table), its
/// symmetrization, and the envelope tail bound.
pub fn build_coefficients(config: &ChaosConfig) -> Result<CoefficientGrid> {
    config.check_invariants()?;
    let k = config.k();
    let m = config.m;
    let elements = (m as u128).pow(k as u32);
    if elements > config.max_grid_elements as u128 {
        return Err(Error::ResourceCap(format!(
            "grid would hold {elements} elements, cap is {}",
            config.max_grid_elements
        )));
    }
    let len = elements as usize;
    let mut a = vec![0.0; len];

    match &config.source {
        CoeffSource::Kernel(spec) => {
            if spec.k != k {
                return Err(Error::InvalidConfig("kernel order mismatch".into()));
            }
            let mut x = vec![0.0; k];
            let mut pos = 0usize;
            for_each_tuple(k, m, |idx| {
                for (slot, &i) in x.iter_mut().zip(idx) {
                    *slot = i as f64;
                }
                a[pos] = spec.evaluate_unchecked(&x) * config.perturbation.eval(idx);
                pos += 1;
            });
        }
        CoeffSource::Explicit { entries, .. } => {
            for (idx, v) in entries {
                if idx.len() != k || idx.iter().any(|&i| i == 0 || i > m) {
                    return Err(Error::InvalidConfig(format!(
                        "explicit entry {idx:?} outside (0, {m}]^{k}"
                    )));
                }
                let mut f = 0usize;
                for &i in idx {
                    f = f * m + (i - 1);
                }
                a[f] += v;
            }
        }
    }

    // symmetrized copy
    let a_sym = if k == 1 {
        a.clone()
    } else {
        let perms = permutations(k);
        let scale = 1.0 / perms.len() as f64;
        let mut s = vec![0.0; len];
        let mut src = vec![0usize; k];
        let mut pos = 0usize;
        for_each_tuple(k, m, |idx| {
            let mut acc = 0.0;
            for p in &perms {
                for (slot, &j) in src.iter_mut().zip(p) {
                    *slot = idx[j];
                }
                let mut f = 0usize;
                for &i in &src {
                    f = f * m + (i - 1);
                }
                acc += a[f];
            }
            s[pos] = acc * scale;
            pos += 1;
        });
        s
    };

    let (tail_bound, finite_support) = match &config.source {
        CoeffSource::Explicit { .. } => (0.0, true),
        CoeffSource::Kernel(spec) => {
            let lbound = config.perturbation.bound();
            (envelope_sq_tail(spec, m) * lbound * lbound, false)
        }
    };

    Ok(CoefficientGrid {
        k,
        m,
        a,
        a_sym,
        tail_bound,
        finite_support,
    })
}

/// Σ over lattice points with some coordinate > M of envelope(i)², majorized
/// term by term through ∫ x^e dx tails.
fn envelope_sq_tail(spec: &KernelSpec, m: usize) -> f64 {
    let mf = m as f64;
    let mut total = 0.0;
    for t1 in &spec.envelope.terms {
        for t2 in &spec.envelope.terms {
            let coeff = t1.coeff * t2.coeff;
            let exps: Vec<f64> = t1
                .gamma
                .iter()
                .zip(&t2.gamma)
                .map(|(&g1, &g2)| g1 + g2)
                .collect();
            // union bound over which coordinate escapes the box
            for j in 0..spec.k {
                let mut piece = coeff;
                for (l, &e) in exps.iter().enumerate() {
                    // e in (-2, -1): Σ_{i>M} i^e <= M^{e+1}/(-e-1),
                    // Σ_{i>=1} i^e <= 1 + 1/(-e-1)
                    if l == j {
                        piece *= mf.powf(e + 1.0) / (-e - 1.0);
                    } else {
                        piece *= 1.0 + 1.0 / (-e - 1.0);
                    }
                }
                total += piece;
            }
        }
    }
    total
}
