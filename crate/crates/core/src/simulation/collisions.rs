use super::{run_replicates, SimConfig};
use crate::error::{ensure_cap, Result};
use crate::limits::Limits;
use crate::rates::{first_jump_weight, jump_ratio};
use crate::rng::{replicate_rng, StreamRng};
use crate::special::h_unchecked;
use rand::Rng;

/// Inverse-CDF draw of I_n for a uniform `u`: the smallest k with
/// P{I_n ≤ k} ≥ u. The law is generated term by term, so the cost is O(k).
/// Returns n − 1 if rounding leaves the accumulated mass short of `u`.
///
/// Panics if `n < 2`.
pub fn sample_jump(n: u64, b: f64, u: f64) -> u64 {
    assert!(n >= 2, "sample_jump needs n >= 2");
    let nf = n as f64;
    let mut p = first_jump_weight(nf, b) / h_unchecked(n, b);
    let mut cum = p;
    let mut k = 1;
    while u > cum && k < n - 1 {
        p *= jump_ratio(nf, k as f64, b);
        k += 1;
        cum += p;
    }
    k
}

/// One realisation of X_n from the given stream.
pub fn sample_xn(n: u64, b: f64, rng: &mut StreamRng) -> u64 {
    let mut blocks = n;
    let mut collisions = 0;
    while blocks >= 2 {
        let u: f64 = rng.random();
        blocks -= sample_jump(blocks, b, u);
        collisions += 1;
    }
    collisions
}

/// `cfg.replicates` independent draws of X_n, in replicate order.
pub fn sample_collisions(cfg: &SimConfig, limits: &Limits) -> Result<Vec<u64>> {
    cfg.validate()?;
    ensure_cap(
        "replicates * n",
        cfg.replicates as f64 * cfg.n as f64,
        limits.sim_work,
    )?;
    run_replicates(cfg.workers, cfg.replicates, |i| {
        let mut rng = replicate_rng(cfg.seed, i);
        Ok(sample_xn(cfg.n, cfg.b, &mut rng))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::rates::jump_pmf;

    #[test]
    fn hand_computed_jumps() {
        for u in [1e-9, 0.3, 0.999999] {
            assert_eq!(sample_jump(2, 0.7, u), 1);
        }
        assert_eq!(sample_jump(3, 1.0, 0.5), 1);
        assert_eq!(sample_jump(3, 1.0, 0.7), 2);
        assert_eq!(sample_jump(3, 1.0, 1.0), 2);
    }

    #[test]
    fn jump_matches_cumulative_law() {
        for b in [0.5, 1.0, 2.0] {
            let pmf = jump_pmf(40, b).unwrap();
            let mut cum = 0.0;
            for k in 1..40u64 {
                cum += pmf.prob(k);
                if k < 39 {
                    assert_eq!(sample_jump(40, b, cum - 1e-9), k);
                    assert_eq!(sample_jump(40, b, cum + 1e-9), k + 1);
                }
            }
        }
    }

    #[test]
    fn trivial_sizes() {
        let one = sample_collisions(&SimConfig::new(1, 1.0, 50, 3), &Limits::default()).unwrap();
        assert!(one.iter().all(|&x| x == 0));
        let two = sample_collisions(&SimConfig::new(2, 1.0, 50, 3), &Limits::default()).unwrap();
        assert!(two.iter().all(|&x| x == 1));
    }

    #[test]
    fn support_bounds() {
        let s = sample_collisions(&SimConfig::new(60, 0.5, 2000, 11), &Limits::default()).unwrap();
        assert!(s.iter().all(|&x| (1..60).contains(&x)));
    }

    #[test]
    fn budget_refusal() {
        let limits = Limits {
            sim_work: 1e3,
            ..Limits::default()
        };
        let r = sample_collisions(&SimConfig::new(100, 1.0, 11, 0), &limits);
        assert!(matches!(r, Err(Error::Resource { .. })));
        assert!(sample_collisions(&SimConfig::new(10, 1.0, 0, 0), &Limits::default()).is_err());
    }

    #[test]
    fn worker_count_does_not_change_samples() {
        let cfg = SimConfig::new(500, 1.0, 300, 99);
        let one = sample_collisions(&cfg, &Limits::default()).unwrap();
        let four = sample_collisions(&cfg.with_workers(4), &Limits::default()).unwrap();
        assert_eq!(one, four);
        let again = sample_collisions(&cfg, &Limits::default()).unwrap();
        assert_eq!(one, again);
    }
}
