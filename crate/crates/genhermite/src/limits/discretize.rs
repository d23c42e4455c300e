//! Lattice discretization h̃_{t,N} of the integrated kernel h_t and its L²
//! distance from the continuum kernel — the quantity whose decay drives the
//! non-central limit theorem.
//!
//! h̃_{t,N}(x) = N^{−α−1} Σ_{n=1}^{[Nt]} g(n·1 − [Nx] − 1) 1{n·1 > [Nx] + 1},
//! evaluated at lattice points x = i/N.

use rayon::prelude::*;

use crate::kernels::KernelSpec;
use crate::{Error, Result};

/// Per-axis lattice window [lo, hi) in units of 1/N.
#[derive(Debug, Clone, Copy)]
pub struct LatticeWindow {
    pub lo: i64,
    pub hi: i64,
}

#[derive(Debug, Clone)]
pub struct DiscretizedKernel {
    pub n: usize,
    pub t: f64,
    pub k: usize,
    pub window: LatticeWindow,
    values: Vec<f64>,
}

impl DiscretizedKernel {
    fn extent(&self) -> usize {
        (self.window.hi - self.window.lo) as usize
    }

    fn flat(&self, idx: &[i64]) -> usize {
        let w = self.extent();
        let mut f = 0usize;
        for &i in idx {
            debug_assert!(i >= self.window.lo && i < self.window.hi);
            f = f * w + (i - self.window.lo) as usize;
        }
        f
    }

    /// h̃_{t,N} at the lattice point x = idx/N.
    pub fn value(&self, idx: &[i64]) -> f64 {
        self.values[self.flat(idx)]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

#[inline]
fn eval_if_positive(spec: &KernelSpec, arg: &mut [f64], base: &[i64], shift: i64) -> f64 {
    for (slot, &b) in arg.iter_mut().zip(base) {
        let v = (shift - b) as f64;
        if v <= 0.0 {
            return 0.0;
        }
        *slot = v;
    }
    spec.evaluate_unchecked(arg)
}

/// Evaluate h̃_{t,N} on the lattice window.
///
/// Values are accumulated along diagonal lines i ↦ i − j·1: stepping the
/// whole index vector down by one adds a single new summand and removes at
/// most one, so the lattice fill costs O(2) kernel evaluations per point
/// instead of O([Nt]).
pub fn discretize_limit_kernel(
    spec: &KernelSpec,
    t: f64,
    n: usize,
    window: LatticeWindow,
) -> Result<DiscretizedKernel> {
    if !(t > 0.0) || n == 0 {
        return Err(Error::InvalidConfig("need t > 0 and N >= 1".into()));
    }
    if window.lo >= window.hi {
        return Err(Error::InvalidConfig("empty lattice window".into()));
    }
    let k = spec.k;
    let big_t = ((n as f64) * t).floor() as i64; // [Nt]
    let w = (window.hi - window.lo) as usize;
    let len = w
        .checked_pow(k as u32)
        .ok_or_else(|| Error::ResourceCap("lattice window overflow".into()))?;
    if len > (1usize << 28) {
        return Err(Error::ResourceCap(format!(
            "lattice would hold {len} points"
        )));
    }
    let scale = (n as f64).powf(-spec.alpha - 1.0);

    // Diagonal classes: representatives r in [0, w)^k with min_j r_j = 0.
    // The class covers i = r + (lo + j)·1 for j = 0..w - max(r).
    let mut reps: Vec<Vec<i64>> = Vec::new();
    collect_reps(k, w as i64, &mut vec![0; k], 0, &mut reps);

    let chunks: Vec<(Vec<i64>, Vec<f64>)> = reps
        .par_iter()
        .map(|r| {
            let mut arg = vec![0.0; k];
            let rmax = *r.iter().max().unwrap();
            let steps = (w as i64 - rmax) as usize;
            let mut vals = vec![0.0; steps];
            // start above the window so that w(i) with max(i) >= T−1 is 0:
            // walk i = r + (lo + j)·1 from j = j_hi down to 0, where j_hi
            // puts max(i) at least T−1.
            let j_top = (big_t - 1 - window.lo - rmax).max(steps as i64 - 1);
            // F(i+1) for the starting index: zero whenever max(i) >= T−1
            let mut acc = 0.0;
            let mut j = j_top;
            loop {
                // stepping from i_prev = r + (lo+j+1)·1 to i = r + (lo+j)·1:
                // w(i) = w(i_prev) − G(−i_prev) + G(T·1 − i_prev)
                // (derived from F(i−1) = F(i) − G(1−i) + G((T+1)·1 − i))
                let shift_hi = big_t - (window.lo + j + 1);
                let shift_lo = -(window.lo + j + 1);
                let add = if shift_hi > 0 {
                    eval_if_positive(spec, &mut arg, r, shift_hi)
                } else {
                    0.0
                };
                let sub = if shift_lo > 0 {
                    eval_if_positive(spec, &mut arg, r, shift_lo)
                } else {
                    0.0
                };
                acc += add - sub;
                if j < steps as i64 {
                    vals[j as usize] = scale * acc;
                }
                if j == 0 {
                    break;
                }
                j -= 1;
            }
            (r.clone(), vals)
        })
        .collect();

    let mut values = vec![0.0; len];
    let mut idx = vec![0i64; k];
    for (r, vals) in chunks {
        for (j, &v) in vals.iter().enumerate() {
            for (slot, &rr) in idx.iter_mut().zip(&r) {
                *slot = rr + window.lo + j as i64;
            }
            let mut f = 0usize;
            for &i in &idx {
                f = f * w + (i - window.lo) as usize;
            }
            values[f] = v;
        }
    }

    Ok(DiscretizedKernel {
        n,
        t,
        k,
        window,
        values,
    })
}

fn collect_reps(k: usize, w: i64, cur: &mut Vec<i64>, depth: usize, out: &mut Vec<Vec<i64>>) {
    if depth == k {
        if cur.iter().any(|&v| v == 0) {
            out.push(cur.clone());
        }
        return;
    }
    for v in 0..w {
        cur[depth] = v;
        collect_reps(k, w, cur, depth + 1, out);
    }
}

/// Reference direct evaluation of h̃_{t,N} at one lattice point.
pub fn discretized_value_direct(spec: &KernelSpec, t: f64, n: usize, idx: &[i64]) -> f64 {
    let big_t = ((n as f64) * t).floor() as i64;
    let mut arg = vec![0.0; spec.k];
    let mut acc = 0.0;
    'outer: for nn in 1..=big_t {
        for (slot, &i) in arg.iter_mut().zip(idx) {
            let v = (nn - i - 1) as f64;
            if v <= 0.0 {
                continue 'outer;
            }
            *slot = v;
        }
        acc += spec.evaluate_unchecked(&arg);
    }
    (n as f64).powf(-spec.alpha - 1.0) * acc
}

#[derive(Debug, Clone)]
pub struct L2Error {
    /// ‖h̃ − h_t‖ / ‖h_t‖ over the converged window.
    pub value: f64,
    /// Half-width (in t units) of the window the error stabilized on.
    pub window_t: f64,
    /// Relative change of the squared error on the last window doubling.
    pub tail_estimate: f64,
}

/// Relative L² distance ‖h̃_{t,N} − h_t‖ / ‖h_t‖ by lattice quadrature
/// against `ht_evaluate`, with ‖h_t‖ from the `ht_norm_sq` closed form.
///
/// The window grows by doubling until the squared distance stops moving;
/// the final relative increment is reported as the tail estimate.
pub fn l2_discretization_error(spec: &KernelSpec, t: f64, n: usize) -> Result<L2Error> {
    l2_discretization_error_opts(spec, t, n, 2.0, 0.005)
}

pub fn l2_discretization_error_opts(
    spec: &KernelSpec,
    t: f64,
    n: usize,
    window_t0: f64,
    rel_window_tol: f64,
) -> Result<L2Error> {
    let norm_sq = spec.ht_norm_sq(t)?;
    let mut window_t = window_t0;
    let mut prev: Option<f64> = None;
    let quad_tol = 1e-9;
    loop {
        let window = LatticeWindow {
            lo: -((window_t * n as f64).ceil() as i64),
            hi: ((n as f64) * t).floor() as i64,
        };
        let disc = discretize_limit_kernel(spec, t, n, window)?;
        let w = (window.hi - window.lo) as usize;
        let cell = (n as f64).powi(-(spec.k as i32));
        // Σ over lattice points of (h̃ − h)², one h_t quadrature per point
        let d2: f64 = (0..disc.values().len())
            .into_par_iter()
            .map(|flat| {
                let mut rem = flat;
                let mut x = vec![0.0; spec.k];
                let mut idx = vec![0i64; spec.k];
                for j in (0..spec.k).rev() {
                    idx[j] = window.lo + (rem % w) as i64;
                    rem /= w;
                }
                for (slot, &i) in x.iter_mut().zip(&idx) {
                    *slot = i as f64 / n as f64;
                }
                let ht = spec
                    .ht_evaluate_tol(t, &x, quad_tol)
                    .map(|r| r.value)
                    .unwrap_or(0.0);
                let d = disc.values()[flat] - ht;
                d * d
            })
            .sum::<f64>()
            * cell;
        if let Some(p) = prev {
            let change = (d2 - p).abs() / p.max(1e-300);
            if change < rel_window_tol {
                return Ok(L2Error {
                    value: (d2 / norm_sq).sqrt(),
                    window_t,
                    tail_estimate: change,
                });
            }
        }
        if window_t > 64.0 * t.max(1.0) {
            return Err(Error::Quadrature(format!(
                "discretization-error window did not stabilize by half-width {window_t}"
            )));
        }
        prev = Some(d2);
        window_t *= 2.0;
    }
}
