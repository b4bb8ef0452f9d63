//! Sample summaries and Kolmogorov–Smirnov distances.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::normal_cdf;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    pub skewness: f64,
    pub excess_kurtosis: f64,
}

impl Summary {
    /// Standard error of the mean.
    pub fn std_error(&self) -> f64 {
        (self.variance / self.count as f64).sqrt()
    }
}

pub fn summarize(samples: &[f64]) -> Result<Summary> {
    if samples.len() < 2 {
        return Err(Error::EmptyInput(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in samples {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let (pm2, pm3, pm4) = (m2 / n, m3 / n, m4 / n);
    let (skewness, excess_kurtosis) = if pm2 > 0.0 {
        (pm3 / pm2.powf(1.5), pm4 / (pm2 * pm2) - 3.0)
    } else {
        (0.0, 0.0)
    };
    Ok(Summary {
        count: samples.len(),
        mean,
        variance: m2 / (n - 1.0),
        skewness,
        excess_kurtosis,
    })
}

/// sup_x |F_N(x) − Φ(x)| for the empirical CDF F_N, attained at a sample point.
pub fn ks_statistic(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::EmptyInput(format!(
            "KS distance needs at least 2 samples, got {}",
            samples.len()
        )));
    }
    if samples.iter().any(|x| x.is_nan()) {
        return Err(domain("KS distance of a sample containing NaN"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = normal_cdf(x);
        d = d.max((i + 1) as f64 / n - f).max(f - i as f64 / n);
    }
    Ok(d)
}

/// Two-sample KS distance sup_x |F(x) − G(x)|; ties are handled exactly.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyInput("two-sample KS needs non-empty samples".into()));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (nx, ny) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0f64;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / nx - j as f64 / ny).abs());
    }
    Ok(d)
}

/// Asymptotic two-sample KS critical value at level 1%.
pub fn ks_two_sample_critical_1pct(n: usize, m: usize) -> f64 {
    const C_ALPHA: f64 = 1.627_624_4;
    let (n, m) = (n as f64, m as f64);
    C_ALPHA * ((n + m) / (n * m)).sqrt()
}

/// Ordinary least-squares slope of y on x.
pub fn least_squares_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (a, b) in x.iter().zip(y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
    }
    sxy / sxx
}
