//! Truncated pure-jump subordinator with Lévy measure
//! μ_b(dt) = e^{−bt}/(1 − e^{−t}) dt, keeping only jumps of size ≥ eps.

use serde::Serialize;

use super::SimConfig;
use crate::error::{domain, ensure_cap, Result};
use crate::quadrature::gauss_legendre;
use crate::rates::check_b;
use crate::rng::{open_uniform, replicate_rng, standard_exponential, StreamRng};

const PANELS_PER_DECADE: f64 = 40.0;

/// Tail function T(x) = μ_b([x, ∞)) tabulated on [eps, 1], with the exact
/// series Σ_{i≥0} e^{−(b+i)x}/(b+i) above 1.
///
/// Below 1 the density is split as 1/t + g(t) with g smooth, so each panel
/// integral is a logarithm plus a Gauss–Legendre sum.
#[derive(Debug, Clone)]
pub struct LevyTail {
    b: f64,
    eps: f64,
    /// ascending, grid[0] = eps, last = 1
    grid: Vec<f64>,
    /// tail[i] = T(grid[i])
    tail: Vec<f64>,
}

impl LevyTail {
    pub fn new(b: f64, eps: f64) -> Result<Self> {
        check_b(b)?;
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(domain(format!("truncation eps must be positive, got {eps}")));
        }
        let mut grid = Vec::new();
        if eps < 1.0 {
            let decades = -eps.log10();
            let panels = (decades * PANELS_PER_DECADE).ceil().max(1.0) as usize;
            for i in 0..panels {
                grid.push(eps * 10f64.powf(decades * i as f64 / panels as f64));
            }
        }
        grid.push(eps.max(1.0));
        let mut tail = vec![0.0; grid.len()];
        let last = grid.len() - 1;
        tail[last] = series_tail(b, grid[last]);
        for i in (0..last).rev() {
            tail[i] = tail[i + 1] + panel_mass(b, grid[i], grid[i + 1]);
        }
        Ok(LevyTail { b, eps, grid, tail })
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// λ_eps = μ_b([eps, ∞)), the rate of retained jumps.
    pub fn rate(&self) -> f64 {
        self.tail[0]
    }

    pub fn density(&self, t: f64) -> f64 {
        density(self.b, t)
    }

    /// T(x) = μ_b([x, ∞)) for x ≥ eps.
    pub fn tail(&self, x: f64) -> f64 {
        let top = *self.grid.last().unwrap_or(&1.0);
        if x >= top {
            return series_tail(self.b, x);
        }
        let i = self.panel_of(x);
        self.tail[i + 1] + panel_mass(self.b, x, self.grid[i + 1])
    }

    fn panel_of(&self, x: f64) -> usize {
        // last i with grid[i] <= x, capped to a valid panel index
        let i = self.grid.partition_point(|&g| g <= x);
        i.saturating_sub(1).min(self.grid.len() - 2)
    }

    /// The jump size x with T(x) = `target`, for target in (0, λ_eps].
    pub fn quantile(&self, target: f64) -> f64 {
        let lambda = self.rate();
        if target >= lambda {
            return self.eps;
        }
        let top = *self.grid.last().unwrap_or(&1.0);
        let (mut lo, mut hi) = if target <= self.tail[self.tail.len() - 1] {
            let mut hi = top + 1.0;
            while series_tail(self.b, hi) > target {
                hi *= 2.0;
            }
            (top, hi)
        } else {
            // tail is decreasing: first index with tail < target bounds the panel
            let j = self.tail.partition_point(|&t| t >= target);
            (self.grid[j - 1], self.grid[j])
        };
        // safeguarded Newton on log T(x) − log target
        let goal = target.ln();
        let mut x = 0.5 * (lo + hi);
        for _ in 0..100 {
            let t = self.tail(x);
            let f = t.ln() - goal;
            if f > 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let slope = -self.density(x) / t;
            let mut next = x - f / slope;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() <= 1e-15 * x || hi - lo <= 1e-15 * hi {
                return next;
            }
            x = next;
        }
        x
    }

    /// Draws a retained jump size.
    pub(crate) fn sample_size(&self, rng: &mut StreamRng) -> f64 {
        self.quantile(open_uniform(rng) * self.rate())
    }
}

fn density(b: f64, t: f64) -> f64 {
    (-b * t).exp() / -(-t).exp_m1()
}

/// density − 1/t, bounded near 0 where it tends to 1/2 − b.
fn regular_part(b: f64, t: f64) -> f64 {
    if t < 1e-4 {
        // e^{-bt}/(1-e^{-t}) - 1/t = (1/2 - b) + (1/12 - b/2 + b²/2) t + O(t²)
        (0.5 - b) + (1.0 / 12.0 - 0.5 * b + 0.5 * b * b) * t
    } else {
        density(b, t) - 1.0 / t
    }
}

/// μ_b([x, y]) for 0 < x < y ≤ 1.
fn panel_mass(b: f64, x: f64, y: f64) -> f64 {
    (y / x).ln() + gauss_legendre(|t| regular_part(b, t), x, y)
}

/// T(x) = Σ_{i≥0} e^{−(b+i)x}/(b+i); geometric for x ≥ 1.
fn series_tail(b: f64, x: f64) -> f64 {
    let mut sum = 0.0;
    let mut i = 0.0;
    loop {
        let term = (-(b + i) * x).exp() / (b + i);
        sum += term;
        if term <= 1e-18 * sum || term == 0.0 {
            return sum;
        }
        i += 1.0;
    }
}

/// Jump times and sizes of the truncated subordinator on [0, horizon].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubordinatorPath {
    pub horizon: f64,
    pub eps: f64,
    pub times: Vec<f64>,
    pub sizes: Vec<f64>,
}

impl SubordinatorPath {
    /// S_horizon.
    pub fn total(&self) -> f64 {
        self.sizes.iter().sum()
    }
}

/// Samples the truncated path on [0, horizon] from stream `replicate`.
pub fn sample_subordinator(cfg: &SimConfig, horizon: f64, replicate: u64) -> Result<SubordinatorPath> {
    cfg.validate()?;
    let tail = LevyTail::new(cfg.b, cfg.eps)?;
    sample_path(&tail, horizon, &mut replicate_rng(cfg.seed, replicate))
}

pub(crate) fn sample_path(tail: &LevyTail, horizon: f64, rng: &mut StreamRng) -> Result<SubordinatorPath> {
    if !(horizon >= 0.0 && horizon.is_finite()) {
        return Err(domain(format!("horizon must be finite and non-negative, got {horizon}")));
    }
    let rate = tail.rate();
    let mut times = Vec::new();
    let mut sizes = Vec::new();
    let mut t = 0.0;
    loop {
        t += standard_exponential(rng) / rate;
        if t > horizon {
            break;
        }
        times.push(t);
        sizes.push(tail.sample_size(rng));
    }
    Ok(SubordinatorPath {
        horizon,
        eps: tail.eps(),
        times,
        sizes,
    })
}

/// Levels S_t after each retained jump, stopping at the first level that
/// reaches `level`. Fails once the path time would pass `horizon`.
pub(crate) fn sample_path_until(
    tail: &LevyTail,
    level: f64,
    horizon: f64,
    rng: &mut StreamRng,
) -> Result<Vec<f64>> {
    let rate = tail.rate();
    let mut levels = Vec::new();
    let (mut t, mut s) = (0.0, 0.0);
    while s < level {
        t += standard_exponential(rng) / rate;
        ensure_cap("subordinator path time", t, horizon)?;
        s += tail.sample_size(rng);
        levels.push(s);
    }
    Ok(levels)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, integrate_to_infinity};
    use crate::special::hurwitz_zeta;

    fn quad_tail(b: f64, x: f64) -> f64 {
        integrate_to_infinity(|t| density(b, t), x, 1e-13).value
    }

    #[test]
    fn tail_matches_quadrature() {
        for b in [0.3, 1.0, 2.0, 6.0] {
            for eps in [1e-2, 1e-4, 1e-6] {
                let table = LevyTail::new(b, eps).unwrap();
                let want = quad_tail(b, eps);
                assert!((table.rate() - want).abs() <= 1e-9 * want, "b={b}, eps={eps}");
                for x in [eps * 3.0, 0.05, 0.7, 1.0, 2.5] {
                    if x >= eps {
                        let want = quad_tail(b, x);
                        assert!((table.tail(x) - want).abs() <= 1e-10 * want.max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn tail_matches_series_at_moderate_eps() {
        // T(eps) = Σ e^{-(b+i)eps}/(b+i), summed directly at eps = 1e-2
        let (b, eps) = (1.5, 1e-2);
        let direct: f64 = (0..20_000)
            .rev()
            .map(|i| (-(b + i as f64) * eps).exp() / (b + i as f64))
            .sum();
        let table = LevyTail::new(b, eps).unwrap();
        assert!((table.rate() - direct).abs() < 1e-10);
    }

    #[test]
    fn quantile_inverts_tail() {
        let table = LevyTail::new(0.8, 1e-6).unwrap();
        let lambda = table.rate();
        for u in [1e-12, 1e-6, 0.01, 0.2, 0.5, 0.9, 0.999, 1.0] {
            let x = table.quantile(u * lambda);
            assert!(x >= table.eps());
            let back = table.tail(x) / lambda;
            assert!((back - u).abs() <= 1e-10, "u={u}: x={x}, back={back}");
        }
    }

    #[test]
    fn rate_decreases_in_b() {
        let rates: Vec<f64> = [0.5, 1.0, 2.0, 4.0]
            .iter()
            .map(|&b| LevyTail::new(b, 1e-6).unwrap().rate())
            .collect();
        assert!(rates.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn retained_mean_is_m1_minus_deficit() {
        // ∫_eps^∞ t μ_b(dt) = ζ(2, b) − ∫_0^eps t μ_b(dt)
        let (b, eps) = (1.0, 1e-6);
        let deficit = integrate(|t| t * density(b, t), 0.0, eps, 1e-13).value;
        assert!((deficit - eps).abs() < 1e-9);
        let retained = integrate_to_infinity(|t| t * density(b, t), eps, 1e-13).value;
        let m1 = hurwitz_zeta(2.0, b).unwrap();
        assert!((retained + deficit - m1).abs() < 1e-10);
    }

    #[test]
    fn path_is_ordered_and_truncated() {
        let cfg = SimConfig::new(1, 1.0, 1, 5);
        let path = sample_subordinator(&cfg, 10.0, 0).unwrap();
        assert!(path.sizes.iter().all(|&s| s >= cfg.eps));
        assert!(path.times.windows(2).all(|w| w[0] < w[1]));
        assert!(path.times.iter().all(|&t| t <= 10.0));
        assert!(sample_subordinator(&cfg.with_eps(0.0), 1.0, 0).is_err());
        assert!(sample_subordinator(&cfg, -1.0, 0).is_err());
    }

    #[test]
    fn jump_counts_and_mean_increment() {
        let cfg = SimConfig::new(1, 1.0, 1, 17);
        let tail = LevyTail::new(cfg.b, cfg.eps).unwrap();
        let horizon = 2.0;
        let paths = 4000;
        let mut counts = 0.0;
        let mut totals = Vec::with_capacity(paths);
        for i in 0..paths {
            let p = sample_subordinator(&cfg, horizon, i as u64).unwrap();
            counts += p.times.len() as f64;
            totals.push(p.total());
        }
        let expected = horizon * tail.rate() * paths as f64;
        assert!((counts - expected).abs() <= 4.0 * expected.sqrt());

        // E S_T = T·(m1 − deficit), Var S_T = T·m2 (up to the truncation)
        let m1 = hurwitz_zeta(2.0, 1.0).unwrap() - cfg.eps;
        let m2 = 2.0 * hurwitz_zeta(3.0, 1.0).unwrap();
        let mean = totals.iter().sum::<f64>() / paths as f64;
        let se = (horizon * m2 / paths as f64).sqrt();
        assert!((mean - horizon * m1).abs() <= 4.0 * se, "{mean} vs {}", horizon * m1);
    }
}
