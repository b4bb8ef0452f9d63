//! Exact law and moments of the collision count X_n by dynamic programming
//! over X_1 = 0, X_n = X_{n−I_n} + 1.

use serde::Serialize;

use crate::asymptotics::ExpansionCoeffs;
use crate::error::{domain, ensure_cap, Result};
use crate::limits::Limits;
use crate::rates::{check_b, first_jump_weight, jump_ratio};

pub const MAX_MOMENT_ORDER: usize = 4;

/// E X_n^k for n = 1..=n_max and k = 1..=k_max.
#[derive(Debug, Clone, Serialize)]
pub struct MomentTable {
    pub b: f64,
    pub n_max: usize,
    pub k_max: usize,
    moments: Vec<[f64; MAX_MOMENT_ORDER]>,
}

impl MomentTable {
    /// E X_n^k; `k = 0` gives 1.
    pub fn moment(&self, n: usize, k: usize) -> f64 {
        assert!(n >= 1 && n <= self.n_max, "n = {n} outside 1..={}", self.n_max);
        assert!(k <= self.k_max, "k = {k} above k_max = {}", self.k_max);
        if k == 0 {
            1.0
        } else {
            self.moments[n - 1][k - 1]
        }
    }

    pub fn mean(&self, n: usize) -> f64 {
        self.moment(n, 1)
    }

    /// D X_n, available when the table holds second moments.
    pub fn variance(&self, n: usize) -> Option<f64> {
        (self.k_max >= 2).then(|| {
            let m = self.moment(n, 1);
            self.moment(n, 2) - m * m
        })
    }
}

fn validate_b_and_n(n: usize, b: f64) -> Result<()> {
    check_b(b)?;
    if n < 1 {
        return Err(domain("n must be at least 1"));
    }
    Ok(())
}

/// Normalised jump-law row for n blocks, written into `row[0..n-1]`.
fn fill_jump_row(n: usize, b: f64, row: &mut Vec<f64>) {
    row.clear();
    let nf = n as f64;
    let mut w = first_jump_weight(nf, b);
    let mut total = 0.0;
    for k in 1..n {
        row.push(w);
        total += w;
        w *= jump_ratio(nf, k as f64, b);
    }
    for p in row.iter_mut() {
        *p /= total;
    }
}

/// Exact moment table. Uses E X_n^k = Σ_i P{I_n = i} E(1 + X_{n−i})^k, so
/// each state stores the moments of 1 + X_m once and every row is a dot
/// product against the jump law. Cost O(n_max² · k_max), memory O(n_max).
pub fn exact_moments(n_max: usize, k_max: usize, b: f64, limits: &Limits) -> Result<MomentTable> {
    validate_b_and_n(n_max, b)?;
    if !(1..=MAX_MOMENT_ORDER).contains(&k_max) {
        return Err(domain(format!("k_max must be in 1..={MAX_MOMENT_ORDER}, got {k_max}")));
    }
    ensure_cap("moments n_max", n_max as f64, limits.moments_n_max as f64)?;

    let mut moments = vec![[0.0; MAX_MOMENT_ORDER]; n_max];
    // shifted[m-1][k-1] = E(1 + X_m)^k
    let mut shifted = vec![[0.0; MAX_MOMENT_ORDER]; n_max];
    shifted[0] = [1.0; MAX_MOMENT_ORDER];

    for n in 2..=n_max {
        let nf = n as f64;
        let mut w = first_jump_weight(nf, b);
        let mut total = 0.0;
        let mut acc = [0.0; MAX_MOMENT_ORDER];
        for i in 1..n {
            let s = &shifted[n - i - 1];
            for k in 0..k_max {
                acc[k] += w * s[k];
            }
            total += w;
            w *= jump_ratio(nf, i as f64, b);
        }
        let mut row = [0.0; MAX_MOMENT_ORDER];
        for k in 0..k_max {
            row[k] = acc[k] / total;
        }
        moments[n - 1] = row;
        shifted[n - 1] = shift_moments(&row, k_max);
    }
    Ok(MomentTable {
        b,
        n_max,
        k_max,
        moments,
    })
}

/// Raw moments of 1 + X from those of X, by the binomial theorem.
fn shift_moments(raw: &[f64; MAX_MOMENT_ORDER], k_max: usize) -> [f64; MAX_MOMENT_ORDER] {
    let mut with_zero = [1.0; MAX_MOMENT_ORDER + 1];
    with_zero[1..].copy_from_slice(raw);
    let mut out = [0.0; MAX_MOMENT_ORDER];
    for k in 1..=k_max {
        let mut binom = 1.0;
        let mut s = 0.0;
        for (j, &m) in with_zero.iter().enumerate().take(k + 1) {
            s += binom * m;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
        out[k - 1] = s;
    }
    out
}

/// Full law of X_n: `probs[j] = P{X_n = j}` for j = 0..n−1.
#[derive(Debug, Clone, Serialize)]
pub struct ExactPmf {
    pub n: usize,
    pub b: f64,
    pub probs: Vec<f64>,
}

impl ExactPmf {
    pub fn moment(&self, k: i32) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(j, p)| (j as f64).powi(k) * p)
            .sum()
    }
}

/// Exact law of X_n. Keeps the law of every state m ≤ n (O(n²) memory) and
/// convolves each against the jump law, O(n³) time.
pub fn exact_distribution(n: usize, b: f64, limits: &Limits) -> Result<ExactPmf> {
    validate_b_and_n(n, b)?;
    ensure_cap("dist n", n as f64, limits.dist_n_max as f64)?;

    // laws[m-1][j] = P{X_m = j}, j < m
    let mut laws: Vec<Vec<f64>> = Vec::with_capacity(n);
    laws.push(vec![1.0]);
    let mut row = Vec::with_capacity(n);
    for m in 2..=n {
        fill_jump_row(m, b, &mut row);
        let mut law = vec![0.0; m];
        for (i, &p) in row.iter().enumerate() {
            let prev = &laws[m - (i + 1) - 1];
            for (j, &q) in prev.iter().enumerate() {
                law[j + 1] += p * q;
            }
        }
        laws.push(law);
    }
    Ok(ExactPmf {
        n,
        b,
        probs: laws.pop().unwrap_or_default(),
    })
}

/// d_n = E X_n − α log² n − r_1 log n over a grid of n.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualDiagnostic {
    pub b: f64,
    pub n: Vec<usize>,
    pub d: Vec<f64>,
}

pub fn residual_diagnostic(
    table: &MomentTable,
    coeffs: &ExpansionCoeffs,
    n_grid: &[usize],
) -> Result<ResidualDiagnostic> {
    if (table.b - coeffs.b).abs() > 0.0 {
        return Err(domain("moment table and coefficients use different b"));
    }
    let mut d = Vec::with_capacity(n_grid.len());
    for &n in n_grid {
        if n < 1 || n > table.n_max {
            return Err(domain(format!("grid point {n} outside the table 1..={}", table.n_max)));
        }
        let l = (n as f64).ln();
        d.push(table.mean(n) - coeffs.alpha * l * l - coeffs.r[0] * l);
    }
    Ok(ResidualDiagnostic {
        b: table.b,
        n: n_grid.to_vec(),
        d,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asymptotics::expansion_coeffs;
    use crate::error::Error;

    #[test]
    fn base_cases() {
        let t = exact_moments(5, 4, 0.7, &Limits::default()).unwrap();
        for k in 1..=4 {
            assert_eq!(t.moment(1, k), 0.0);
            assert!((t.moment(2, k) - 1.0).abs() < 1e-15);
        }
        assert_eq!(t.moment(3, 0), 1.0);
    }

    #[test]
    fn three_blocks_by_hand() {
        let t = exact_moments(3, 2, 1.0, &Limits::default()).unwrap();
        assert!((t.moment(3, 1) - 1.6).abs() < 1e-12);
        assert!((t.moment(3, 2) - 2.8).abs() < 1e-12);
        assert!((t.variance(3).unwrap() - 6.0 / 25.0).abs() < 1e-12);

        let d = exact_distribution(3, 1.0, &Limits::default()).unwrap();
        assert_eq!(d.probs.len(), 3);
        assert_eq!(d.probs[0], 0.0);
        assert!((d.probs[1] - 0.4).abs() < 1e-12);
        assert!((d.probs[2] - 0.6).abs() < 1e-12);
    }

    #[test]
    fn trivial_laws() {
        let d = exact_distribution(1, 1.0, &Limits::default()).unwrap();
        assert_eq!(d.probs, vec![1.0]);
        let d = exact_distribution(2, 3.0, &Limits::default()).unwrap();
        assert_eq!(d.probs, vec![0.0, 1.0]);
    }

    #[test]
    fn caps_and_domain() {
        let limits = Limits {
            moments_n_max: 100,
            dist_n_max: 50,
            ..Limits::default()
        };
        assert!(matches!(
            exact_moments(101, 1, 1.0, &limits),
            Err(Error::Resource { .. })
        ));
        assert!(matches!(
            exact_distribution(51, 1.0, &limits),
            Err(Error::Resource { .. })
        ));
        assert!(exact_moments(10, 5, 1.0, &limits).is_err());
        assert!(exact_moments(10, 0, 1.0, &limits).is_err());
        assert!(exact_moments(10, 1, -1.0, &limits).is_err());
    }

    #[test]
    fn distribution_agrees_with_moment_table() {
        for b in [0.5, 1.0, 2.0] {
            let n_max = 500;
            let t = exact_moments(n_max, 3, b, &Limits::default()).unwrap();
            for n in [2usize, 3, 10, 77, 250, 500] {
                let d = exact_distribution(n, b, &Limits::default()).unwrap();
                let total: f64 = d.probs.iter().sum();
                assert!((total - 1.0).abs() <= 1e-12);
                assert_eq!(d.probs[0], if n == 1 { 1.0 } else { 0.0 });
                for k in 1..=3 {
                    let (a, e) = (d.moment(k as i32), t.moment(n, k));
                    assert!((a - e).abs() <= 1e-10 * e.max(1.0), "b={b}, n={n}, k={k}");
                }
            }
        }
    }

    #[test]
    fn means_increase_and_variance_positive() {
        for b in [0.5, 1.0, 2.0] {
            let t = exact_moments(3000, 2, b, &Limits::default()).unwrap();
            for n in 2..3000 {
                assert!(t.mean(n + 1) > t.mean(n), "b={b}, n={n}");
            }
            for n in 3..=3000 {
                assert!(t.variance(n).unwrap() > 0.0);
            }
        }
    }

    #[test]
    fn residual_starts_at_zero() {
        let t = exact_moments(50, 1, 1.0, &Limits::default()).unwrap();
        let c = expansion_coeffs(1, 1.0).unwrap();
        let r = residual_diagnostic(&t, &c, &[1, 2, 50]).unwrap();
        assert_eq!(r.d[0], 0.0);
        assert!(r.d.iter().all(|x| x.is_finite()));
        assert!(residual_diagnostic(&t, &c, &[51]).is_err());
        let c2 = expansion_coeffs(1, 2.0).unwrap();
        assert!(residual_diagnostic(&t, &c2, &[5]).is_err());
    }
}
