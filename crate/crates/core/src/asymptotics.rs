//! Closed-form constants of the moment expansions
//! E X_n^k = α^k log^{2k} n + r_k log^{2k−1} n + O(log^{2k−2} n)
//! and the standardisation used by the central limit theorem.

use serde::Serialize;

use crate::error::{domain, Result};
use crate::rates::check_b;
use crate::special::{psi, psi1, zeta_unchecked};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExpansionCoeffs {
    pub b: f64,
    /// m_1 = ζ(2, b)
    pub m1: f64,
    /// m_2 = 2 ζ(3, b)
    pub m2: f64,
    /// c = −Ψ(b) − 1
    pub c: f64,
    /// α = 1/(2 m_1)
    pub alpha: f64,
    /// r_1..r_K, `r[k-1] = r_k`
    pub r: Vec<f64>,
}

/// r_k = (2/3) k α^{k+1} ((2k+1) m_2 + 6 c m_1).
pub fn r_closed_form(k: u32, m1: f64, m2: f64, c: f64) -> f64 {
    let kf = f64::from(k);
    let alpha = 0.5 / m1;
    2.0 / 3.0 * kf * alpha.powi(k as i32 + 1) * ((2.0 * kf + 1.0) * m2 + 6.0 * c * m1)
}

/// r_1..r_K from r_1 = (m_2/(2m_1) + c)/m_1 and
/// r_{k+1} = (k+1)/((2k+1) m_1) · (r_k + (2k+1) α^{k+1} m_2 + c α^k).
pub fn r_recursive(k_max: u32, m1: f64, m2: f64, c: f64) -> Vec<f64> {
    let alpha = 0.5 / m1;
    let mut r = Vec::with_capacity(k_max as usize);
    if k_max == 0 {
        return r;
    }
    let mut cur = (m2 / (2.0 * m1) + c) / m1;
    r.push(cur);
    for k in 1..k_max {
        let kf = f64::from(k);
        let odd = 2.0 * kf + 1.0;
        cur = (kf + 1.0) / (odd * m1)
            * (cur + odd * alpha.powi(k as i32 + 1) * m2 + c * alpha.powi(k as i32));
        r.push(cur);
    }
    r
}

pub fn expansion_coeffs(k_max: u32, b: f64) -> Result<ExpansionCoeffs> {
    check_b(b)?;
    if k_max == 0 {
        return Err(domain("k_max must be at least 1"));
    }
    let m1 = zeta_unchecked(2.0, b);
    let m2 = 2.0 * zeta_unchecked(3.0, b);
    let c = -psi(b) - 1.0;
    let r: Vec<f64> = (1..=k_max).map(|k| r_closed_form(k, m1, m2, c)).collect();
    debug_assert!(r
        .iter()
        .zip(r_recursive(k_max, m1, m2, c))
        .all(|(a, b)| (a - b).abs() <= 1e-10 * a.abs().max(1e-3)));
    Ok(ExpansionCoeffs {
        b,
        m1,
        m2,
        c,
        alpha: 0.5 / m1,
        r,
    })
}

impl ExpansionCoeffs {
    /// m_2/(3 m_1³), the leading variance coefficient.
    pub fn variance_coefficient(&self) -> f64 {
        self.m2 / (3.0 * self.m1.powi(3))
    }
}

/// Two-term expansion α^k log^{2k} n + r_k log^{2k−1} n.
pub fn moment_expansion(n: u64, k: u32, coeffs: &ExpansionCoeffs) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("moment_expansion needs n >= 2, got {n}")));
    }
    if k == 0 || k as usize > coeffs.r.len() {
        return Err(domain(format!(
            "moment order {k} outside 1..={} held by the coefficients",
            coeffs.r.len()
        )));
    }
    let l = (n as f64).ln();
    let lead = (coeffs.alpha * l * l).powi(k as i32);
    Ok(lead + coeffs.r[k as usize - 1] * l.powi(2 * k as i32 - 1))
}

/// (m_2/(3 m_1³)) log³ n.
pub fn variance_expansion(n: u64, coeffs: &ExpansionCoeffs) -> Result<f64> {
    if n < 2 {
        return Err(domain(format!("variance_expansion needs n >= 2, got {n}")));
    }
    Ok(coeffs.variance_coefficient() * (n as f64).ln().powi(3))
}

/// (x − α log² n) / √((m_2/(3 m_1³)) log³ n).
pub fn clt_normalize(x: f64, n: u64, coeffs: &ExpansionCoeffs) -> Result<f64> {
    let scale = variance_expansion(n, coeffs)?.sqrt();
    let l = (n as f64).ln();
    Ok((x - coeffs.alpha * l * l) / scale)
}

/// (μ_1, μ_2) = (Ψ(a−2+b) − Ψ(b), Ψ'(b) − Ψ'(a−2+b)) for a > 2.
pub fn gt2_constants(a: f64, b: f64) -> Result<(f64, f64)> {
    if !(a > 2.0 && a.is_finite()) {
        return Err(domain(format!("gt2_constants requires a > 2, got {a}")));
    }
    check_b(b)?;
    let shifted = a - 2.0 + b;
    Ok((psi(shifted) - psi(b), psi1(b) - psi1(shifted)))
}
