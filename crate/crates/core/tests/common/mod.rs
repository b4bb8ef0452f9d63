//! Independent reference implementations shared by the integration tests.
//! Everything here is computed from libm's lgamma and plain summation, not
//! from the recurrences under test.

#![allow(dead_code)]

/// P{I_n = k} straight from the gamma-function formula, normalised by
/// summation instead of through H(n, b).
pub fn reference_jump_law(n: usize, b: f64) -> Vec<f64> {
    let lg = libm::lgamma;
    let raw: Vec<f64> = (1..n)
        .map(|k| {
            let (nf, kf) = (n as f64, k as f64);
            (lg(nf - kf + b - 1.0) + lg(nf + 1.0) - (kf + 1.0).ln() - lg(nf - kf) - lg(nf + b)).exp()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|p| p / total).collect()
}

/// H(n, b) as the unnormalised mass of the gamma-function formula.
pub fn reference_h(n: usize, b: f64) -> f64 {
    let lg = libm::lgamma;
    (1..n)
        .map(|k| {
            let (nf, kf) = (n as f64, k as f64);
            (lg(nf - kf + b - 1.0) + lg(nf + 1.0) - (kf + 1.0).ln() - lg(nf - kf) - lg(nf + b)).exp()
        })
        .sum()
}

/// Law of X_n by enumerating every jump chain n → … → 1.
pub fn brute_force_law(n: usize, b: f64) -> Vec<f64> {
    let laws: Vec<Vec<f64>> = (0..=n).map(|m| if m >= 2 { reference_jump_law(m, b) } else { vec![] }).collect();
    let mut out = vec![0.0; n.max(1)];
    fn walk(m: usize, steps: usize, weight: f64, laws: &[Vec<f64>], out: &mut [f64]) {
        if m == 1 {
            out[steps] += weight;
            return;
        }
        for (i, p) in laws[m].iter().enumerate() {
            walk(m - (i + 1), steps + 1, weight * p, laws, out);
        }
    }
    walk(n, 0, 1.0, &laws, &mut out);
    out
}

/// E X_n^k by the plain recursion over the reference jump law.
pub fn reference_moments(n_max: usize, k: u32, b: f64) -> Vec<f64> {
    // laws of X_m kept in full, fine for small n
    let mut laws: Vec<Vec<f64>> = vec![vec![], vec![1.0]];
    for m in 2..=n_max {
        let jump = reference_jump_law(m, b);
        let mut law = vec![0.0; m];
        for (i, p) in jump.iter().enumerate() {
            for (j, q) in laws[m - i - 1].iter().enumerate() {
                law[j + 1] += p * q;
            }
        }
        laws.push(law);
    }
    laws[1..]
        .iter()
        .map(|law| law.iter().enumerate().map(|(j, p)| (j as f64).powi(k as i32) * p).sum())
        .collect()
}
