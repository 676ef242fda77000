//! Property tests for the distribution constructors and entropy
//! functional: normalization, nonnegativity, permutation invariance,
//! concavity, and the agreement of independent evaluation routes under
//! randomized parameters.

use proptest::prelude::*;

use bosonstat::dynamics::{steady_state, LadderModel};
use bosonstat::entropy::von_neumann_entropy;
use bosonstat::fock::{
    bec_ground_distribution, laser_exact_distribution, laser_gaussian, laser_log_partition,
    laser_shifted_poisson, thermal_distribution, BecParams, FockDistribution, LaserParams,
};
use bosonstat::numerics::hypergeometric_1f1_1;

fn assert_normalized(d: &FockDistribution) {
    let total: f64 = d.probs().iter().sum();
    assert!((total - 1.0).abs() < 1e-9, "mass {total}");
    assert!(d.probs().iter().all(|&p| p >= 0.0));
    assert!(d.tail_mass_bound() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn laser_constructors_normalized(
        pump_ratio in 0.3f64..3.0,
        a_scale in 50.0f64..2000.0,
    ) {
        let gamma = 1.0;
        let alpha = pump_ratio * gamma;
        let beta = alpha * alpha / (a_scale * gamma);
        let p = LaserParams::new(alpha, beta, gamma).unwrap();
        let exact = laser_exact_distribution(&p, 1e-12).unwrap();
        assert_normalized(&exact);
        if pump_ratio > 1.05 {
            let sp = laser_shifted_poisson(&p, 1e-12).unwrap();
            let g = laser_gaussian(&p, 1e-12).unwrap();
            assert_normalized(&sp);
            assert_normalized(&g);
        }
    }

    #[test]
    fn thermal_normalized_with_exact_mean(n_bar in 0.0f64..500.0) {
        let d = thermal_distribution(n_bar, 1e-12).unwrap();
        assert_normalized(&d);
        let mean = bosonstat::fock::moments(&d).mean;
        assert!((mean - n_bar).abs() <= 1e-6 * n_bar.max(1.0));
    }

    #[test]
    fn bec_normalized(n_total in 50u64..2000, t in 0.0f64..0.95) {
        let p = BecParams::new(n_total, t, 1.0).unwrap();
        let d = bec_ground_distribution(&p).unwrap();
        assert_normalized(&d);
        assert_eq!(d.len(), n_total as usize + 1);
    }

    #[test]
    fn entropy_invariant_under_permutation_and_padding(
        raw in prop::collection::vec(1e-6f64..1.0, 2..40),
        seed in any::<u64>(),
    ) {
        let d = FockDistribution::from_weights(raw.clone(), 0.0);
        let s = von_neumann_entropy(&d).value();

        // deterministic shuffle driven by the seed
        let mut shuffled = d.probs().to_vec();
        let mut state = seed | 1;
        for i in (1..shuffled.len()).rev() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            shuffled.swap(i, (state % (i as u64 + 1)) as usize);
        }
        let mut padded = vec![0.0; 5];
        padded.extend_from_slice(&shuffled);
        padded.extend_from_slice(&[0.0; 7]);
        let d2 = FockDistribution::from_weights(padded, 0.0);
        let s2 = von_neumann_entropy(&d2).value();
        prop_assert!((s - s2).abs() < 1e-10, "{s} vs {s2}");
    }

    #[test]
    fn entropy_is_concave_under_mixing(
        w1 in prop::collection::vec(1e-6f64..1.0, 12),
        w2 in prop::collection::vec(1e-6f64..1.0, 12),
    ) {
        let d1 = FockDistribution::from_weights(w1, 0.0);
        let d2 = FockDistribution::from_weights(w2, 0.0);
        let mixed: Vec<f64> = d1
            .probs()
            .iter()
            .zip(d2.probs())
            .map(|(a, b)| 0.5 * a + 0.5 * b)
            .collect();
        let dm = FockDistribution::from_weights(mixed, 0.0);
        let s_mix = von_neumann_entropy(&dm).value();
        let s_avg =
            0.5 * von_neumann_entropy(&d1).value() + 0.5 * von_neumann_entropy(&d2).value();
        prop_assert!(s_mix >= s_avg - 1e-10, "{s_mix} < {s_avg}");
    }

    #[test]
    fn partition_routes_agree(
        pump_ratio in 0.3f64..3.0,
        a_scale in 20.0f64..2000.0,
    ) {
        let gamma = 1.0;
        let alpha = pump_ratio * gamma;
        let beta = alpha * alpha / (a_scale * gamma);
        let p = LaserParams::new(alpha, beta, gamma).unwrap();
        let log_z = laser_log_partition(&p, 1e-13).unwrap();
        let series =
            hypergeometric_1f1_1(p.saturation_number() + 1.0, p.photon_number_scale()).unwrap();
        prop_assert!(series.converged);
        let rel = (log_z - series.log_value).exp_m1().abs();
        prop_assert!(rel < 1e-8, "relative gap {rel}");
    }

    #[test]
    fn detailed_balance_matches_recursion_for_random_ladders(
        pump_ratio in 1.1f64..3.0,
        a_scale in 100.0f64..1500.0,
    ) {
        let gamma = 1.0;
        let alpha = pump_ratio * gamma;
        let beta = alpha * alpha / (a_scale * gamma);
        let p = LaserParams::new(alpha, beta, gamma).unwrap();
        let m = LadderModel::laser_auto(&p, 1e-12).unwrap();
        let ss = steady_state(&m).unwrap();
        let exact = laser_exact_distribution(&p, 1e-12).unwrap();
        prop_assert!(ss.total_variation(&exact) < 1e-10);
    }
}

#[test]
fn exponential_series_identity_over_range() {
    // 1F1(1; 1; a) = e^a to relative 1e-10 across a in [0, 50]
    for i in 0..=100 {
        let a = 0.5 * i as f64;
        let r = hypergeometric_1f1_1(1.0, a).unwrap();
        assert!(r.converged);
        let rel = if a == 0.0 {
            (r.value() - 1.0).abs()
        } else {
            (r.log_value - a).abs() / a
        };
        assert!(rel < 1e-10, "a = {a}: {rel}");
    }
}

#[test]
fn thermal_closed_form_vs_direct_sum_grid() {
    for &n_bar in &[0.1, 1.0, 10.0, 1e3] {
        let d = thermal_distribution(n_bar, 1e-12).unwrap();
        let direct = von_neumann_entropy(&d).value();
        let closed = bosonstat::entropy::thermal_entropy_closed_form(n_bar).value();
        assert!(
            (direct - closed).abs() < 1e-6,
            "nbar = {n_bar}: {direct} vs {closed}"
        );
    }
}
