//! Collision rates of the restricted beta(a, b)-coalescent and the law of
//! the first block-count decrement I_n for a = 2.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::{h_unchecked, ln_beta, ln_gamma, ln_gamma_ratio};

/// Parameters of the beta(a, b) measure Λ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaParams {
    pub a: f64,
    pub b: f64,
}

impl BetaParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return Err(domain(format!("beta parameter a must be positive, got {a}")));
        }
        check_b(b)?;
        Ok(BetaParams { a, b })
    }

    /// The beta(2, b) case.
    pub fn two(b: f64) -> Result<Self> {
        Self::new(2.0, b)
    }
}

pub(crate) fn check_b(b: f64) -> Result<()> {
    if b > 0.0 && b.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("beta parameter b must be positive, got {b}")))
    }
}

fn ln_binomial(n: u64, k: u64) -> f64 {
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// g_{nk}: rate at which n blocks merge down to k blocks,
/// C(n, k−1) · B(n−k−1+a, k−1+b) / B(a, b).
pub fn collision_rate(params: BetaParams, n: u64, k: u64) -> Result<f64> {
    if k < 1 || k >= n {
        return Err(domain(format!("collision_rate needs 1 <= k < n, got n={n}, k={k}")));
    }
    let first = (n - k - 1) as f64 + params.a;
    if first <= 0.0 {
        return Err(Error::Divergence(format!(
            "n-k-1+a = {first} <= 0 for n={n}, k={k}, a={}",
            params.a
        )));
    }
    let ln = ln_binomial(n, k - 1) + ln_beta(first, (k - 1) as f64 + params.b)
        - ln_beta(params.a, params.b);
    Ok(ln.exp())
}

/// g_n = Σ_{k=1}^{n−1} g_{nk}, by explicit summation.
pub fn total_rate(params: BetaParams, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("total_rate needs n >= 2, got {n}")));
    }
    (1..n).map(|k| collision_rate(params, n, k)).sum()
}

/// g_n for a = 2 through the closed form H(n, b) / B(2, b).
pub fn total_rate_closed_form(n: u64, b: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("total_rate needs n >= 2, got {n}")));
    }
    check_b(b)?;
    Ok(h_unchecked(n, b) * b * (b + 1.0))
}

/// Law of I_n, the decrement of the block count at the first jump from n
/// blocks: `probs[k-1] = P{I_n = k}` for k = 1..n−1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JumpPmf {
    pub n: u64,
    pub b: f64,
    pub probs: Vec<f64>,
    /// Total mass of the recurrence before renormalisation; equals 1 up to
    /// rounding drift when H(n, b) is the correct normaliser.
    #[serde(skip)]
    raw_mass: f64,
}

impl JumpPmf {
    /// P{I_n = k}, zero outside 1..n−1.
    pub fn prob(&self, k: u64) -> f64 {
        if k >= 1 && k < self.n {
            self.probs[(k - 1) as usize]
        } else {
            0.0
        }
    }

    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    /// E I_n.
    pub fn mean(&self) -> f64 {
        self.probs
            .iter()
            .enumerate()
            .map(|(i, p)| (i + 1) as f64 * p)
            .sum()
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }
}

fn check_jump_args(n: u64, b: f64) -> Result<()> {
    if n < 2 {
        return Err(domain(format!("jump law needs n >= 2, got {n}")));
    }
    check_b(b)
}

/// Ratio P{I_n = k+1} / P{I_n = k}.
#[inline]
pub(crate) fn jump_ratio(n: f64, k: f64, b: f64) -> f64 {
    ((k + 1.0) * (n - k - 1.0)) / ((k + 2.0) * (n - k + b - 2.0))
}

/// H(n, b) · P{I_n = 1}.
#[inline]
pub(crate) fn first_jump_weight(n: f64, b: f64) -> f64 {
    n * (n - 1.0) / (2.0 * (n + b - 2.0) * (n + b - 1.0))
}

/// H(n, b)·P{I_n = k} for k = 1..n−1, by the term recurrence anchored at
/// k = 1. These are Γ(n−k+b−1)Γ(n+1) / ((k+1)Γ(n−k)Γ(n+b)) up to rounding.
pub fn scaled_jump_weights(n: u64, b: f64) -> Result<Vec<f64>> {
    check_jump_args(n, b)?;
    let nf = n as f64;
    let mut out = Vec::with_capacity((n - 1) as usize);
    let mut w = first_jump_weight(nf, b);
    for k in 1..n {
        out.push(w);
        w *= jump_ratio(nf, k as f64, b);
    }
    Ok(out)
}

/// Law of I_n via the O(n) term recurrence, normalised to unit mass.
pub fn jump_pmf(n: u64, b: f64) -> Result<JumpPmf> {
    let mut probs = scaled_jump_weights(n, b)?;
    let h = h_unchecked(n, b);
    for p in probs.iter_mut() {
        *p /= h;
    }
    let raw_mass: f64 = probs.iter().sum();
    for p in probs.iter_mut() {
        *p /= raw_mass;
    }
    Ok(JumpPmf {
        n,
        b,
        probs,
        raw_mass,
    })
}

/// Law of I_n evaluated term by term from the gamma-function formula.
pub fn jump_pmf_direct(n: u64, b: f64) -> Result<JumpPmf> {
    check_jump_args(n, b)?;
    let h = h_unchecked(n, b);
    let nf = n as f64;
    let common = ln_gamma(nf + 1.0) - ln_gamma(nf + b) - h.ln();
    let probs: Vec<f64> = (1..n)
        .map(|k| {
            let m = (n - k) as f64;
            (ln_gamma(m + b - 1.0) - ln_gamma(m) - ((k + 1) as f64).ln() + common).exp()
        })
        .collect();
    let raw_mass = probs.iter().sum();
    Ok(JumpPmf {
        n,
        b,
        probs,
        raw_mass,
    })
}

/// Scaled deviation n·(j/n)^{2−b}·|Γ(j+b−1)Γ(n+1)/(Γ(j)Γ(n+b)) − (j/n)^{b−1}|
/// of the gamma ratio from its power-law approximation.
pub fn gamma_ratio_error(n: u64, j: u64, b: f64) -> Result<f64> {
    if j < 1 || j >= n {
        return Err(domain(format!("gamma_ratio_error needs 1 <= j <= n-1, got n={n}, j={j}")));
    }
    check_b(b)?;
    let (nf, jf) = (n as f64, j as f64);
    let ln_ratio = ln_gamma_ratio(jf, b - 1.0) - ln_gamma_ratio(nf + 1.0, b - 1.0);
    let x = jf / nf;
    let power = (b - 1.0) * x.ln();
    let diff = if b == 1.0 {
        0.0
    } else {
        // difference of two exponentials, formed from their log gap
        let gap = ln_ratio - power;
        power.exp() * gap.exp_m1()
    };
    Ok(nf * x.powf(2.0 - b) * diff.abs())
}

/// sup_j gamma_ratio_error(n, j, b) over j = 1..n−1.
pub fn gamma_ratio_sup(n: u64, b: f64) -> Result<f64> {
    (1..n).try_fold(0.0f64, |acc, j| Ok(acc.max(gamma_ratio_error(n, j, b)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta_fn;
    use proptest::prelude::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn hand_computed_rates() {
        let p = BetaParams::two(1.0).unwrap();
        assert!(close(collision_rate(p, 2, 1).unwrap(), 1.0, 1e-12));
        assert!(close(collision_rate(p, 3, 2).unwrap(), 1.0, 1e-12));
        assert!(close(collision_rate(p, 3, 1).unwrap(), 2.0 / 3.0, 1e-12));
        assert!(close(total_rate(p, 2).unwrap(), 1.0, 1e-12));
        assert!(close(total_rate_closed_form(2, 1.0).unwrap(), 1.0, 1e-12));
        assert!(close(total_rate(p, 3).unwrap(), 5.0 / 3.0, 1e-12));
        assert!(close(total_rate_closed_form(3, 1.0).unwrap(), 5.0 / 3.0, 1e-12));
    }

    #[test]
    fn rate_domain_errors() {
        let p = BetaParams::two(1.0).unwrap();
        assert!(matches!(collision_rate(p, 3, 3), Err(Error::Domain(_))));
        assert!(matches!(collision_rate(p, 3, 0), Err(Error::Domain(_))));
        let q = BetaParams::new(0.5, 1.0).unwrap();
        // n-k-1+a >= a > 0 for valid parameters, so the k = n-1 integral converges
        assert!(collision_rate(q, 5, 4).unwrap().is_finite());
        assert!(collision_rate(q, 5, 3).is_ok());
        assert!(total_rate(p, 1).is_err());
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(2.0, -1.0).is_err());
    }

    #[test]
    fn closed_form_total_rate_matches_summation() {
        for b in [0.25, 0.5, 1.0, 2.0, 5.0] {
            let p = BetaParams::two(b).unwrap();
            for n in [2u64, 3, 7, 50, 333, 1000] {
                let sum = total_rate(p, n).unwrap();
                let closed = total_rate_closed_form(n, b).unwrap();
                assert!((sum - closed).abs() / sum <= 1e-10, "b={b}, n={n}: {sum} vs {closed}");
            }
        }
    }

    #[test]
    fn total_rate_grows_like_log() {
        let b = 1.0;
        let scale = beta_fn(2.0, b).unwrap();
        let n = 1u64 << 22;
        let g = total_rate_closed_form(n, b).unwrap();
        let ratio = g * scale / (n as f64).ln();
        // (log n - Ψ(1) - 1)/log n
        assert!(close(ratio, 1.0 - 0.4227843351 / (n as f64).ln(), 1e-6));
    }

    #[test]
    fn small_jump_laws() {
        for b in [0.1, 1.0, 7.0] {
            let p = jump_pmf(2, b).unwrap();
            assert_eq!(p.probs.len(), 1);
            assert!(close(p.probs[0], 1.0, 1e-15));
        }
        let p = jump_pmf(3, 1.0).unwrap();
        assert!(close(p.probs[0], 0.6, 1e-12));
        assert!(close(p.probs[1], 0.4, 1e-12));
        assert_eq!(p.prob(0), 0.0);
        assert_eq!(p.prob(3), 0.0);
        assert!(jump_pmf(1, 1.0).is_err());
        assert!(jump_pmf(5, 0.0).is_err());
    }

    #[test]
    fn recurrence_matches_gamma_formula_and_rates() {
        for b in [0.3, 0.5, 1.0, 2.0, 4.5] {
            let params = BetaParams::two(b).unwrap();
            for n in [2u64, 3, 4, 10, 57, 400] {
                let rec = jump_pmf(n, b).unwrap();
                let direct = jump_pmf_direct(n, b).unwrap();
                let g = total_rate(params, n).unwrap();
                assert!((rec.raw_mass() - 1.0).abs() <= 1e-9);
                assert!((direct.total() - 1.0).abs() <= 1e-12, "b={b}, n={n}");
                for k in 1..n {
                    let (p, q) = (rec.prob(k), direct.prob(k));
                    assert!((p - q).abs() <= 1e-12, "b={b}, n={n}, k={k}: {p} vs {q}");
                    let via_rate = collision_rate(params, n, n - k).unwrap() / g;
                    assert!((p - via_rate).abs() <= 1e-10 * via_rate.max(1e-300) + 1e-16);
                }
            }
        }
    }

    #[test]
    fn normalisation_for_large_n() {
        for b in [0.5, 1.0, 2.0] {
            let p = jump_pmf(100_000, b).unwrap();
            assert!((p.total() - 1.0).abs() <= 1e-12);
            assert!((p.raw_mass() - 1.0).abs() <= 1e-9, "b={b}: {}", p.raw_mass());
        }
    }

    #[test]
    fn gamma_ratio_error_values() {
        for n in [10u64, 100, 1000] {
            for j in [1, n / 2, n - 1] {
                assert_eq!(gamma_ratio_error(n, j, 1.0).unwrap(), 0.0);
            }
        }
        // b = 2: Γ(j+1)Γ(n+1)/(Γ(j)Γ(n+2)) = j/(n+1), so the error is n·|j/(n+1) − j/n| = j/(n+1)
        for (n, j) in [(10u64, 3u64), (100, 99), (1000, 1)] {
            let want = j as f64 / (n as f64 + 1.0);
            assert!(close(gamma_ratio_error(n, j, 2.0).unwrap(), want, 1e-9));
        }
        assert!(gamma_ratio_error(10, 0, 0.5).is_err());
        assert!(gamma_ratio_error(10, 10, 0.5).is_err());
    }

    #[test]
    fn gamma_ratio_sup_is_stable_in_n() {
        let sups: Vec<f64> = [100u64, 1000, 10000]
            .iter()
            .map(|&n| gamma_ratio_sup(n, 0.5).unwrap())
            .collect();
        assert!(sups.iter().all(|s| s.is_finite() && *s > 0.0));
        assert!(sups[2] / sups[0] < 1.1);
    }

    proptest! {
        #[test]
        fn pmf_is_a_probability_vector(n in 2u64..3000, b in 0.05f64..20.0) {
            let p = jump_pmf(n, b).unwrap();
            prop_assert!(p.probs.iter().all(|&x| x >= 0.0));
            prop_assert!((p.total() - 1.0).abs() <= 1e-12);
            prop_assert!((p.raw_mass() - 1.0).abs() <= 1e-9);
        }
    }
}
