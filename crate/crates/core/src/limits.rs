/// Resource caps. Requests above a cap are refused with
/// [`Error::Resource`](crate::Error::Resource) rather than truncated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Limits {
    /// Largest `n` for which `rates` tabulates g_{nk} and the jump law.
    pub rates_n_max: u64,
    /// Largest `n_max` accepted by the exact moment table.
    pub moments_n_max: usize,
    /// Largest `n` accepted by the exact distribution DP.
    pub dist_n_max: usize,
    /// Largest `n` in the Lemma A.1 summation scan.
    pub lemma_a1_n_max: usize,
    /// Largest `n_max` in the Lemma A.2 iteration.
    pub lemma_a2_n_max: usize,
    /// Largest `replicates * n` accepted by the Monte Carlo samplers.
    pub sim_work: f64,
    /// Largest subordinator time a composition path may run to.
    pub horizon: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            rates_n_max: 1_000_000,
            moments_n_max: 20_000,
            dist_n_max: 2_000,
            lemma_a1_n_max: 1 << 24,
            lemma_a2_n_max: 10_000,
            sim_work: 1e10,
            horizon: 1e5,
        }
    }
}
