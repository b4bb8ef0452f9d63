//! Scalar special functions on the positive real axis.
//!
//! Log-gamma, digamma and trigamma shift their argument above
//! [`ASYMPTOTIC_FLOOR`] with the functional recurrence and then apply the
//! Stirling / Bernoulli asymptotic series. The Hurwitz zeta function uses an
//! Euler–Maclaurin tail whose first omitted correction term bounds the error.

use crate::error::{domain, Result};

const ASYMPTOTIC_FLOOR: f64 = 10.0;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_{2k} for k = 1..=10.
const BERNOULLI_EVEN: [f64; 10] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
];

/// (2k)! for k = 1..=10.
const FACTORIAL_EVEN: [f64; 10] = [
    2.0,
    24.0,
    720.0,
    40320.0,
    3628800.0,
    479001600.0,
    87178291200.0,
    20922789888000.0,
    6402373705728000.0,
    2432902008176640000.0,
];

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("{name} requires a finite positive argument, got {x}")))
    }
}

/// Natural log of Γ(x) for x > 0.
pub fn log_gamma(x: f64) -> Result<f64> {
    check_positive("log_gamma", x)?;
    Ok(ln_gamma(x))
}

pub(crate) fn ln_gamma(x: f64) -> f64 {
    if x >= ASYMPTOTIC_FLOOR {
        return stirling(x);
    }
    let mut z = x;
    let mut prod = 1.0;
    while z < ASYMPTOTIC_FLOOR {
        prod *= z;
        z += 1.0;
    }
    stirling(z) - prod.ln()
}

fn stirling(x: f64) -> f64 {
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv;
    for (k, &bern) in BERNOULLI_EVEN.iter().enumerate().take(8) {
        let two_k = 2.0 * (k as f64 + 1.0);
        series += bern / (two_k * (two_k - 1.0)) * pow;
        pow *= inv2;
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + series
}

/// lnΓ(x + d) − lnΓ(x). Returns exactly zero when `d == 0`.
pub(crate) fn ln_gamma_ratio(x: f64, d: f64) -> f64 {
    if d == 0.0 {
        0.0
    } else {
        ln_gamma(x + d) - ln_gamma(x)
    }
}

/// Ψ(x) = d/dx log Γ(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    check_positive("digamma", x)?;
    Ok(psi(x))
}

pub(crate) fn psi(x: f64) -> f64 {
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_FLOOR {
        shift += 1.0 / z;
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv2;
    for (k, b) in BERNOULLI_EVEN.iter().take(7).enumerate() {
        series += b / (2.0 * (k as f64 + 1.0)) * pow;
        pow *= inv2;
    }
    z.ln() - 0.5 * inv - series - shift
}

/// Ψ(x + m) − Ψ(x) for a non-negative integer `m`, summed exactly for small
/// `m` and through the asymptotic digamma otherwise.
pub(crate) fn psi_shift(x: f64, m: u64) -> f64 {
    if m <= 64 {
        (0..m).map(|i| 1.0 / (x + i as f64)).sum()
    } else {
        psi(x + m as f64) - psi(x)
    }
}

/// Ψ'(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    check_positive("trigamma", x)?;
    Ok(psi1(x))
}

pub(crate) fn psi1(x: f64) -> f64 {
    let mut z = x;
    let mut shift = 0.0;
    while z < ASYMPTOTIC_FLOOR {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut pow = inv2 * inv;
    for b in BERNOULLI_EVEN.iter().take(8) {
        series += b * pow;
        pow *= inv2;
    }
    shift + inv + 0.5 * inv2 + series
}

/// Hurwitz zeta ζ(s, b) = Σ_{i≥0} (i + b)^{-s} for s > 1, b > 0.
pub fn hurwitz_zeta(s: f64, b: f64) -> Result<f64> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(domain(format!("hurwitz_zeta requires s > 1, got {s}")));
    }
    check_positive("hurwitz_zeta", b)?;
    Ok(zeta_em(s, b))
}

pub(crate) fn zeta_unchecked(s: f64, b: f64) -> f64 {
    zeta_em(s, b)
}

const ZETA_TAIL_BOUND: f64 = 1e-13;
const ZETA_CORRECTIONS: usize = 9;

fn zeta_em(s: f64, b: f64) -> f64 {
    // Direct terms until the shifted argument w = N + b is large enough that
    // the first omitted Euler-Maclaurin term is below the bound.
    let mut direct = 0.0;
    let mut w = b;
    let floor = ASYMPTOTIC_FLOOR.max(s);
    while w < floor {
        direct += w.powf(-s);
        w += 1.0;
    }
    loop {
        let (tail, omitted) = zeta_tail(s, w);
        if omitted.abs() <= ZETA_TAIL_BOUND * (direct + tail).abs().max(1.0) {
            return direct + tail;
        }
        for _ in 0..8 {
            direct += w.powf(-s);
            w += 1.0;
        }
    }
}

/// Euler-Maclaurin tail Σ_{i≥0} (w+i)^{-s} and the first omitted correction.
fn zeta_tail(s: f64, w: f64) -> (f64, f64) {
    let w_s = w.powf(-s);
    let mut tail = w * w_s / (s - 1.0) + 0.5 * w_s;
    // rising factorial s(s+1)...(s+2k-2) times w^{-s-2k+1}
    let mut rising = s;
    let mut pow = w_s / w;
    let inv2 = 1.0 / (w * w);
    for k in 0..ZETA_CORRECTIONS {
        tail += BERNOULLI_EVEN[k] / FACTORIAL_EVEN[k] * rising * pow;
        let next = 2.0 * k as f64 + s;
        rising *= (next + 1.0) * (next + 2.0);
        pow *= inv2;
    }
    let k = ZETA_CORRECTIONS;
    let omitted = BERNOULLI_EVEN[k] / FACTORIAL_EVEN[k] * rising * pow;
    (tail, omitted)
}

/// ln B(x, y).
pub(crate) fn ln_beta(x: f64, y: f64) -> f64 {
    ln_gamma(x) + ln_gamma(y) - ln_gamma(x + y)
}

/// Beta function B(x, y) = ∫₀¹ u^{x−1}(1−u)^{y−1} du.
pub fn beta_fn(x: f64, y: f64) -> Result<f64> {
    check_positive("beta_fn", x)?;
    check_positive("beta_fn", y)?;
    Ok(ln_beta(x, y).exp())
}

/// Moment m_r = ∫ t^r μ_b(dt) = r! ζ(r+1, b) of the Lévy measure
/// μ_b(dt) = e^{-bt}/(1 − e^{-t}) dt.
pub fn levy_moment(r: u32, b: f64) -> Result<f64> {
    if r == 0 {
        return Err(domain("levy_moment requires r >= 1"));
    }
    check_positive("levy_moment", b)?;
    let factorial: f64 = (1..=r).map(f64::from).product();
    Ok(factorial * zeta_em(f64::from(r) + 1.0, b))
}

/// H(n, b) = b/(b+n−1) + Ψ(b+n−1) − Ψ(b) − 1, the normaliser of the jump law.
pub fn h_fn(n: u64, b: f64) -> Result<f64> {
    if n == 0 {
        return Err(domain("h_fn requires n >= 1"));
    }
    check_positive("h_fn", b)?;
    Ok(h_unchecked(n, b))
}

pub(crate) fn h_unchecked(n: u64, b: f64) -> f64 {
    b / (b + (n - 1) as f64) + psi_shift(b, n - 1) - 1.0
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}
