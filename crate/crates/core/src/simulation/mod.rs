//! Monte Carlo sampling of the collision count and of the regenerative
//! composition driven by the subordinator with Lévy measure μ_b.
//!
//! Replicate `i` always draws from stream `i` of the seeded generator (see
//! [`crate::rng`]), so the realised samples depend only on the seed and the
//! parameters, never on the worker count.

mod collisions;
mod composition;
mod subordinator;

pub use collisions::{sample_collisions, sample_jump, sample_xn};
pub use composition::{
    decrement_law, sample_composition, sample_compositions, CompositionBackend, CompositionSample,
};
pub use subordinator::{sample_subordinator, LevyTail, SubordinatorPath};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::rates::check_b;

pub const DEFAULT_EPS: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimConfig {
    pub n: u64,
    pub b: f64,
    pub replicates: u64,
    pub seed: u64,
    /// Jump-size truncation threshold of the subordinator path backend.
    pub eps: f64,
    pub workers: usize,
}

impl SimConfig {
    pub fn new(n: u64, b: f64, replicates: u64, seed: u64) -> Self {
        SimConfig {
            n,
            b,
            replicates,
            seed,
            eps: DEFAULT_EPS,
            workers: 1,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_b(self.b)?;
        if self.n < 1 {
            return Err(domain("n must be at least 1"));
        }
        if self.replicates < 1 {
            return Err(domain("replicates must be at least 1"));
        }
        if !(self.eps > 0.0 && self.eps <= 1e-2) {
            return Err(domain(format!("eps must lie in (0, 1e-2], got {}", self.eps)));
        }
        if self.workers < 1 {
            return Err(domain("workers must be at least 1"));
        }
        Ok(())
    }
}

/// Runs `job(i)` for every replicate index on a pool of `workers` threads and
/// returns the results in replicate order.
pub(crate) fn run_replicates<T, F>(workers: usize, replicates: u64, job: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    if workers <= 1 {
        return (0..replicates).map(&job).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::ThreadPool(e.to_string()))?;
    pool.install(|| (0..replicates).into_par_iter().map(&job).collect())
}
