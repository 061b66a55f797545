mod common;

use common::oracles::{naive_mean, naive_median, naive_stddev, ppmc};
use corrgraph_core::{lagged_pearson, mean, median, pearson, sample_stddev, LagMode};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn series(len: impl Into<proptest::collection::SizeRange>) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(-100.0f64..100.0, len)
}

fn non_constant(xs: &[f64]) -> bool {
    xs.windows(2).any(|w| w[0] != w[1])
}

proptest! {
    #[test]
    fn pearson_is_symmetric_and_bounded((x, y) in (2usize..60).prop_flat_map(|n| (series(n), series(n)))) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let xy = pearson(&x, &y).unwrap();
        let yx = pearson(&y, &x).unwrap();
        prop_assert!((xy - yx).abs() <= 1e-12);
        prop_assert!(xy.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn pearson_affine_invariance(
        (x, y) in (3usize..60).prop_flat_map(|n| (series(n), series(n))),
        a in prop_oneof![-5.0f64..-0.1, 0.1f64..5.0],
        b in -50.0f64..50.0,
    ) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let base = pearson(&x, &y).unwrap();
        prop_assume!(base.abs() > 1e-6);
        let moved: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        prop_assume!(non_constant(&moved));
        let r = pearson(&moved, &y).unwrap();
        prop_assert!((r - a.signum() * base).abs() <= 1e-9, "{} vs {}", r, base);
    }

    #[test]
    fn windowed_lag_zero_is_pearson((x, y) in (2usize..60).prop_flat_map(|n| (series(n), series(n)))) {
        prop_assume!(non_constant(&x) && non_constant(&y));
        let lagged = lagged_pearson(&x, &y, 0, LagMode::Windowed).unwrap();
        prop_assert!((lagged - pearson(&x, &y).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn delayed_copy_correlates_perfectly(indicator in series(12..80), lag in 1usize..8) {
        let mut target = vec![0.0; lag];
        target.extend_from_slice(&indicator[..indicator.len() - lag]);
        prop_assume!(non_constant(&indicator[..indicator.len() - lag]));
        let r = lagged_pearson(&target, &indicator, lag, LagMode::Windowed).unwrap();
        prop_assert!((r - 1.0).abs() <= 1e-9);
    }
}

#[test]
fn pearson_matches_moment_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(3..=200);
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let y: Vec<f64> = x.iter().map(|v| 0.5 * v + rng.gen_range(-1.0..1.0)).collect();
        let got = pearson(&x, &y).unwrap();
        let want = ppmc(&x, &y);
        assert!((got - want).abs() <= 1e-12, "n={n}: {got} vs {want}");
    }
}

#[test]
fn descriptive_stats_match_naive() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let n = rng.gen_range(2..=60);
        let xs: Vec<f64> = (0..n).map(|_| rng.gen_range(-10.0..10.0)).collect();
        assert!((mean(&xs).unwrap() - naive_mean(&xs)).abs() <= 1e-12);
        assert!((median(&xs).unwrap() - naive_median(&xs)).abs() <= 1e-12);
        assert!((sample_stddev(&xs).unwrap() - naive_stddev(&xs)).abs() <= 1e-12);
    }
}
