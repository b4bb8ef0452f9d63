//! Regenerative composition of n uniform points induced by the closed range
//! of the multiplicative subordinator 1 − e^{−S_t}.
//!
//! Two interchangeable backends:
//! * [`CompositionBackend::Exact`] samples the first part from the decrement
//!   law q(m, j) = C(m, j) B(j, m − j + b) / (Ψ(m + b) − Ψ(b)), j = 1..m,
//!   and recurses on the remaining m − j points.
//! * [`CompositionBackend::Path`] throws the points on an explicit
//!   eps-truncated path. In the coordinate s = −log(1 − u) the points are
//!   standard exponentials and the gaps are (S_{t−}, S_t].

use std::str::FromStr;

use serde::Serialize;

use super::subordinator::{sample_path_until, LevyTail};
use super::{run_replicates, SimConfig};
use crate::error::{domain, ensure_cap, Error, Result};
use crate::limits::Limits;
use crate::rates::check_b;
use crate::rng::{replicate_rng, standard_exponential, StreamRng};
use crate::special::psi_shift;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompositionBackend {
    Exact,
    Path,
}

impl FromStr for CompositionBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CompositionBackend::Exact),
            "path" => Ok(CompositionBackend::Path),
            other => Err(domain(format!("unknown composition backend {other:?}"))),
        }
    }
}

/// Ordered part sizes, Y_n (number of parts) and Z_n (parts of size ≥ 2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompositionSample {
    pub parts: Vec<u64>,
    pub y: u64,
    pub z: u64,
}

impl CompositionSample {
    pub fn from_parts(parts: Vec<u64>) -> Self {
        let y = parts.len() as u64;
        let z = parts.iter().filter(|&&p| p >= 2).count() as u64;
        CompositionSample { parts, y, z }
    }

    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }
}

/// Ratio q(m, j+1) / q(m, j).
#[inline]
fn decrement_ratio(m: f64, j: f64, b: f64) -> f64 {
    (j * (m - j)) / ((j + 1.0) * (m - j - 1.0 + b))
}

/// q(m, 1) = m / ((m − 1 + b)(Ψ(m + b) − Ψ(b))).
#[inline]
fn first_decrement(m: u64, b: f64) -> f64 {
    let mf = m as f64;
    mf / ((mf - 1.0 + b) * psi_shift(b, m))
}

/// The decrement law q(m, ·): `out[j-1]` is the probability that the first
/// part of a composition of m points has j points.
pub fn decrement_law(m: u64, b: f64) -> Result<Vec<f64>> {
    check_b(b)?;
    if m < 1 {
        return Err(domain("decrement law needs m >= 1"));
    }
    let mf = m as f64;
    let mut q = first_decrement(m, b);
    let mut out = Vec::with_capacity(m as usize);
    for j in 1..=m {
        out.push(q);
        q *= decrement_ratio(mf, j as f64, b);
    }
    Ok(out)
}

fn sample_first_part(m: u64, b: f64, u: f64) -> u64 {
    let mf = m as f64;
    let mut q = first_decrement(m, b);
    let mut cum = q;
    let mut j = 1;
    while u > cum && j < m {
        q *= decrement_ratio(mf, j as f64, b);
        j += 1;
        cum += q;
    }
    j
}

fn exact_composition(n: u64, b: f64, rng: &mut StreamRng) -> CompositionSample {
    let mut parts = Vec::new();
    let mut left = n;
    while left > 0 {
        let j = sample_first_part(left, b, rng.random());
        parts.push(j);
        left -= j;
    }
    CompositionSample::from_parts(parts)
}

fn path_composition(
    n: u64,
    tail: &LevyTail,
    horizon: f64,
    rng: &mut StreamRng,
) -> Result<CompositionSample> {
    let mut points: Vec<f64> = (0..n).map(|_| standard_exponential(rng)).collect();
    points.sort_by(f64::total_cmp);
    let furthest = *points.last().unwrap_or(&0.0);
    let levels = sample_path_until(tail, furthest, horizon, rng)?;
    let mut parts = Vec::new();
    let mut next = 0;
    for level in levels {
        let start = next;
        while next < points.len() && points[next] <= level {
            next += 1;
        }
        if next > start {
            parts.push((next - start) as u64);
        }
    }
    Ok(CompositionSample::from_parts(parts))
}

/// One composition of `cfg.n` points from stream `replicate`.
pub fn sample_composition(
    cfg: &SimConfig,
    backend: CompositionBackend,
    replicate: u64,
    limits: &Limits,
) -> Result<CompositionSample> {
    cfg.validate()?;
    let mut rng = replicate_rng(cfg.seed, replicate);
    match backend {
        CompositionBackend::Exact => Ok(exact_composition(cfg.n, cfg.b, &mut rng)),
        CompositionBackend::Path => {
            let tail = LevyTail::new(cfg.b, cfg.eps)?;
            path_composition(cfg.n, &tail, limits.horizon, &mut rng)
        }
    }
}

/// `cfg.replicates` compositions in replicate order.
pub fn sample_compositions(
    cfg: &SimConfig,
    backend: CompositionBackend,
    limits: &Limits,
) -> Result<Vec<CompositionSample>> {
    cfg.validate()?;
    ensure_cap(
        "replicates * n",
        cfg.replicates as f64 * cfg.n as f64,
        limits.sim_work,
    )?;
    match backend {
        CompositionBackend::Exact => run_replicates(cfg.workers, cfg.replicates, |i| {
            let mut rng = replicate_rng(cfg.seed, i);
            Ok(exact_composition(cfg.n, cfg.b, &mut rng))
        }),
        CompositionBackend::Path => {
            let tail = LevyTail::new(cfg.b, cfg.eps)?;
            run_replicates(cfg.workers, cfg.replicates, |i| {
                let mut rng = replicate_rng(cfg.seed, i);
                path_composition(cfg.n, &tail, limits.horizon, &mut rng)
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate_to_infinity;
    use crate::special::beta_fn;

    #[test]
    fn single_point() {
        for backend in [CompositionBackend::Exact, CompositionBackend::Path] {
            let cfg = SimConfig::new(1, 1.0, 1, 0);
            let c = sample_composition(&cfg, backend, 0, &Limits::default()).unwrap();
            assert_eq!(c.parts, vec![1]);
            assert_eq!((c.y, c.z), (1, 0));
        }
    }

    #[test]
    fn decrement_law_is_normalised_and_matches_closed_form() {
        for b in [0.3, 1.0, 2.5] {
            for m in [1u64, 2, 5, 40, 1000] {
                let q = decrement_law(m, b).unwrap();
                let total: f64 = q.iter().sum();
                assert!((total - 1.0).abs() <= 1e-12, "b={b}, m={m}: {total}");
            }
            let m = 7u64;
            let q = decrement_law(m, b).unwrap();
            let phi = psi_shift(b, m);
            for j in 1..=m {
                let binom: f64 = (1..=j).map(|i| (m - j + i) as f64 / i as f64).product();
                let want = binom * beta_fn(j as f64, (m - j) as f64 + b).unwrap() / phi;
                assert!((q[j as usize - 1] - want).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn decrement_integral_against_quadrature() {
        // C(m,j) ∫ (1−e^{−s})^j e^{−(m−j)s} μ_b(ds), normalised, equals q(m, j)
        let (m, b) = (6u64, 0.7);
        let raw: Vec<f64> = (1..=m)
            .map(|j| {
                let binom: f64 = (1..=j).map(|i| (m - j + i) as f64 / i as f64).product();
                let f = |s: f64| {
                    let x = -(-s).exp_m1();
                    x.powi(j as i32) * (-((m - j) as f64 + b) * s).exp() / x
                };
                binom * integrate_to_infinity(f, 0.0, 1e-13).value
            })
            .collect();
        let total: f64 = raw.iter().sum();
        let q = decrement_law(m, b).unwrap();
        for (a, want) in q.iter().zip(raw.iter()) {
            assert!((a - want / total).abs() < 1e-11);
        }
    }

    #[test]
    fn parts_partition_n() {
        for backend in [CompositionBackend::Exact, CompositionBackend::Path] {
            let cfg = SimConfig::new(137, 0.8, 200, 4);
            let all = sample_compositions(&cfg, backend, &Limits::default()).unwrap();
            for c in all {
                assert_eq!(c.size(), 137);
                assert!(c.y >= 1 && c.y <= 137 && c.z <= c.y);
                assert!(c.parts.iter().all(|&p| p >= 1));
            }
        }
    }

    #[test]
    fn horizon_cap_is_enforced() {
        let limits = Limits {
            horizon: 1e-3,
            ..Limits::default()
        };
        let cfg = SimConfig::new(50, 1.0, 1, 0);
        let r = sample_composition(&cfg, CompositionBackend::Path, 0, &limits);
        assert!(matches!(r, Err(Error::Resource { .. })));
    }

    #[test]
    fn backend_parsing() {
        assert_eq!("exact".parse::<CompositionBackend>().unwrap(), CompositionBackend::Exact);
        assert_eq!("path".parse::<CompositionBackend>().unwrap(), CompositionBackend::Path);
        assert!("paintbox".parse::<CompositionBackend>().is_err());
    }

    #[test]
    fn deterministic_across_workers() {
        let cfg = SimConfig::new(80, 1.0, 64, 21);
        for backend in [CompositionBackend::Exact, CompositionBackend::Path] {
            let a = sample_compositions(&cfg, backend, &Limits::default()).unwrap();
            let b = sample_compositions(&cfg.with_workers(3), backend, &Limits::default()).unwrap();
            assert_eq!(a, b);
        }
    }
}
