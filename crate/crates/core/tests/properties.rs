use betacoal::asymptotics::{expansion_coeffs, r_closed_form, r_recursive};
use betacoal::cli::format_real;
use betacoal::exact::exact_moments;
use betacoal::rates::jump_pmf;
use betacoal::simulation::{
    decrement_law, sample_composition, sample_jump, CompositionBackend, SimConfig,
};
use betacoal::special::{digamma, h_fn, hurwitz_zeta, log_gamma};
use betacoal::stats::ks_statistic;
use betacoal::Limits;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jump_law_is_a_distribution(n in 2u64..2000, b in 0.01f64..20.0) {
        let pmf = jump_pmf(n, b).unwrap();
        prop_assert!(pmf.probs.iter().all(|&p| p >= 0.0));
        prop_assert!((pmf.total() - 1.0).abs() <= 1e-12);
        prop_assert!((pmf.raw_mass() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn sampled_jump_is_in_range_and_monotone(n in 2u64..500, b in 0.05f64..10.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let (lo, hi) = if u <= v { (u, v) } else { (v, u) };
        let (a, c) = (sample_jump(n, b, lo), sample_jump(n, b, hi));
        prop_assert!(a >= 1 && c < n && a <= c);
    }

    #[test]
    fn h_matches_digamma_definition(n in 2u64..100_000, b in 0.05f64..50.0) {
        let bf = b + n as f64 - 1.0;
        let want = b / bf + digamma(bf).unwrap() - digamma(b).unwrap() - 1.0;
        let got = h_fn(n, b).unwrap();
        prop_assert!((got - want).abs() <= 1e-11 * want.abs().max(1.0));
    }

    #[test]
    fn log_gamma_recurrence(x in 0.01f64..200.0) {
        let lhs = log_gamma(x + 1.0).unwrap();
        let rhs = log_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn hurwitz_shift(s in 1.5f64..8.0, b in 0.05f64..30.0) {
        let lhs = hurwitz_zeta(s, b).unwrap();
        let rhs = hurwitz_zeta(s, b + 1.0).unwrap() + b.powf(-s);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs);
    }

    #[test]
    fn expansion_coefficient_routes_agree(b in 0.05f64..20.0) {
        let c = expansion_coeffs(6, b).unwrap();
        let rec = r_recursive(6, c.m1, c.m2, c.c);
        for (k, r) in rec.iter().enumerate() {
            let closed = r_closed_form(k as u32 + 1, c.m1, c.m2, c.c);
            prop_assert!((closed - r).abs() <= 1e-12 * closed.abs().max(1.0));
        }
    }

    #[test]
    fn decrement_law_is_a_distribution(m in 1u64..3000, b in 0.02f64..20.0) {
        let q = decrement_law(m, b).unwrap();
        prop_assert_eq!(q.len() as u64, m);
        prop_assert!(q.iter().all(|&p| p >= 0.0));
        prop_assert!((q.iter().sum::<f64>() - 1.0).abs() <= 1e-11);
    }

    #[test]
    fn compositions_partition_n(n in 1u64..400, b in 0.1f64..5.0, seed: u64, path: bool) {
        let backend = if path { CompositionBackend::Path } else { CompositionBackend::Exact };
        let c = sample_composition(&SimConfig::new(n, b, 1, seed), backend, 0, &Limits::default()).unwrap();
        prop_assert_eq!(c.parts.iter().sum::<u64>(), n);
        prop_assert_eq!(c.y, c.parts.len() as u64);
        prop_assert!(c.y >= 1 && c.z <= c.y);
    }

    #[test]
    fn ks_distance_is_a_probability(xs in prop::collection::vec(-50.0f64..50.0, 2..200)) {
        let d = ks_statistic(&xs).unwrap();
        prop_assert!((0.0..=1.0).contains(&d));
    }

    #[test]
    fn csv_reals_round_trip(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        prop_assert_eq!(format_real(x).parse::<f64>().unwrap(), x);
    }
}

#[test]
fn moments_respect_support_and_jensen() {
    for b in [0.3, 1.0, 3.0] {
        let t = exact_moments(400, 4, b, &Limits::default()).unwrap();
        for n in 2..=400 {
            let (m1, m2, m4) = (t.moment(n, 1), t.moment(n, 2), t.moment(n, 4));
            assert!(m1 >= 1.0 && m1 <= (n - 1) as f64);
            assert!(m2 >= m1 * m1 * (1.0 - 1e-12));
            assert!(m4 >= m2 * m2 * (1.0 - 1e-12));
        }
    }
}
