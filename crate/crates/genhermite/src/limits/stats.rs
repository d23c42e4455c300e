//! Sample statistics for the ensemble diagnostics: Kolmogorov–Smirnov
//! distance against a fitted normal, moment z-scores, and log-log fits.

use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

/// Sup-distance between the empirical CDF of `samples` and N(mean, sigma²).
pub fn ks_distance_normal(samples: &[f64], mean: f64, sigma: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidConfig("need at least 2 samples".into()));
    }
    if !(sigma > 0.0) {
        return Err(Error::InvalidConfig("sigma must be positive".into()));
    }
    let normal = Normal::new(mean, sigma).map_err(|e| Error::InvalidConfig(e.to_string()))?;
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal.cdf(x);
        sup = sup.max((f - i as f64 / n).abs());
        sup = sup.max((f - (i + 1) as f64 / n).abs());
    }
    Ok(sup)
}

#[derive(Debug, Clone, Copy)]
pub struct MomentSummary {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    /// Raw kurtosis (3 for a normal law).
    pub kurtosis: f64,
}

pub fn moment_summary(samples: &[f64]) -> MomentSummary {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    MomentSummary {
        mean,
        variance: m2 * n / (n - 1.0),
        skewness: m3 / m2.powf(1.5),
        kurtosis: m4 / (m2 * m2),
    }
}

/// z-scores of sample skewness and excess kurtosis under the null of
/// normality (SE ≈ √(6/R) and √(24/R)).
pub fn normality_z_scores(samples: &[f64]) -> (f64, f64) {
    let s = moment_summary(samples);
    let r = samples.len() as f64;
    (
        s.skewness / (6.0 / r).sqrt(),
        (s.kurtosis - 3.0) / (24.0 / r).sqrt(),
    )
}

/// Ordinary least squares of y against x; returns (slope, intercept).
pub fn ols(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::InvalidConfig(
            "OLS needs two or more paired points".into(),
        ));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        sxx += (xi - mx) * (xi - mx);
        sxy += (xi - mx) * (yi - my);
    }
    if sxx == 0.0 {
        return Err(Error::InvalidConfig("degenerate abscissa grid".into()));
    }
    let slope = sxy / sxx;
    Ok((slope, my - slope * mx))
}

/// Empirical (E|Y|^p)^{1/p} / (E Y²)^{1/2}, the hypercontractivity
/// diagnostic ratio.
pub fn moment_ratio(samples: &[f64], p: f64) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidConfig("need at least 2 samples".into()));
    }
    if p <= 2.0 {
        return Err(Error::InvalidConfig(format!(
            "moment order p = {p} must exceed 2"
        )));
    }
    let n = samples.len() as f64;
    let mp = samples.iter().map(|&x| x.abs().powf(p)).sum::<f64>() / n;
    let m2 = samples.iter().map(|&x| x * x).sum::<f64>() / n;
    Ok(mp.powf(1.0 / p) / m2.sqrt())
}
