use std::collections::BTreeMap;

use circulant::closed_form;
use circulant::graph::CirculantSpec;
use circulant::numeric::relative_deviation;
use circulant::oracles::{self, WalkConfig};
use circulant::spectral;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use rayon::prelude::*;

fn all_deletion_sets(n: usize) -> impl Iterator<Item = CirculantSpec> {
    let half = n / 2;
    (0u32..(1 << half)).map(move |mask| {
        CirculantSpec::deletion(n, (1..=half).filter(|k| mask & (1 << (k - 1)) != 0)).unwrap()
    })
}

fn f(r: &BigRational) -> f64 {
    r.to_f64().unwrap()
}

#[test]
fn tree_counts_agree_for_every_small_spec() {
    for n in 3..=12 {
        for spec in all_deletion_sets(n).filter(|s| s.is_connected()) {
            let oracle = oracles::tree_count_oracle(&spec);
            assert!(oracle.is_integer());
            let tau = spectral::tree_count_spectral(&spec);
            let rounded = BigRational::from_integer(BigInt::from(tau.value.round() as u64));
            assert_eq!(rounded, oracle, "N={n} {}", spec.label());
            match tau.nearest_integer {
                Some(k) => assert_eq!(BigRational::from_integer(k.into()), oracle),
                None => assert!(tau.value > 1e6, "claim declined for small count"),
            }
            if let Some(r) = spec.single_deleted_class() {
                if n % 2 == 1 && n >= 5 && r.gcd(&n) == 1 {
                    let closed = closed_form::tree_count_closed_exact(n).unwrap();
                    assert_eq!(BigRational::from_integer(closed), oracle);
                }
            }
        }
    }
}

#[test]
fn closed_hitting_time_matches_both_directions() {
    for n in (5..=15).step_by(2) {
        for r in (1..=n / 2).filter(|r| r.gcd(&n) == 1) {
            let spec = CirculantSpec::single_class(n, r).unwrap();
            for (u, v) in [(0, 1), (2, n - 1), (n / 2, 0)] {
                let q = (v + n - u) % n;
                let closed = closed_form::hitting_time_closed_coprime(n, r, q).unwrap();
                let forward = f(&oracles::hitting_time_oracle_exact(&spec, u, v).unwrap());
                let backward = f(&oracles::hitting_time_oracle_exact(&spec, v, u).unwrap());
                assert!(relative_deviation(closed, forward) < 1e-9);
                assert!(relative_deviation(closed, backward) < 1e-9);
            }
        }
    }
}

#[test]
fn float_oracles_track_spectral_beyond_the_exact_range() {
    for (n, s) in [(41usize, vec![1usize]), (40, vec![2, 5]), (37, vec![3, 4, 9])] {
        let spec = CirculantSpec::deletion(n, s).unwrap();
        for v in [1, n / 3, n / 2] {
            let oracle = oracles::resistance_oracle(&spec, 0, v).unwrap();
            assert!(oracle.exact().is_none());
            let spectral = spectral::resistance_spectral(&spec, 0, v).unwrap();
            assert!(relative_deviation(oracle.to_f64(), spectral) < 1e-9);
            let h = oracles::hitting_time_oracle(&spec, 0, v).unwrap().to_f64();
            assert!(relative_deviation(h, spectral::hitting_time_spectral(&spec, 0, v).unwrap()) < 1e-9);
        }
        let kf = oracles::kirchhoff_oracle(&spec).unwrap().to_f64();
        assert!(relative_deviation(kf, spectral::kirchhoff_spectral(&spec).unwrap()) < 1e-9);
    }
}

#[test]
fn eigen_oracle_matches_fourier_spectrum() {
    for n in 3..=11 {
        for spec in all_deletion_sets(n) {
            let mut fourier = spectral::eigenvalues(&spec).eigenvalues;
            fourier.sort_by(f64::total_cmp);
            for (a, b) in fourier.iter().zip(oracles::eigenvalues_oracle(&spec)) {
                assert!((a - b).abs() < 1e-10 * n as f64, "N={n} {}", spec.label());
            }
        }
    }
}

/// RMS error of the Monte Carlo mean over many seeds should fall like `walks^{-1/2}`.
#[test]
fn monte_carlo_converges_at_inverse_square_root_rate() {
    let spec = CirculantSpec::single_class(7, 1).unwrap();
    let exact = f(&oracles::hitting_time_oracle_exact(&spec, 0, 3).unwrap());
    let levels: Vec<usize> = (0..8).map(|k| 500 << k).collect();
    let points: Vec<(f64, f64)> = levels
        .iter()
        .map(|&walks| {
            let sq: f64 = (0..64u64)
                .into_par_iter()
                .map(|seed| {
                    let cfg = WalkConfig::new(1000 + seed, walks, 7);
                    let est = oracles::hitting_time_monte_carlo(&spec, 0, 3, &cfg).unwrap();
                    (est.mean - exact).powi(2)
                })
                .sum();
            ((walks as f64).ln(), (sq / 64.0).sqrt().ln())
        })
        .collect();
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let slope = sxy / sxx;
    assert!((-0.6..=-0.4).contains(&slope), "slope {slope}");
}

#[test]
fn monte_carlo_is_reproducible_across_runs() {
    let spec = CirculantSpec::deletion(8, [2, 4]).unwrap();
    let cfg = WalkConfig::new(99, 5000, 8);
    let a = oracles::hitting_time_monte_carlo(&spec, 0, 3, &cfg).unwrap();
    let b = oracles::hitting_time_monte_carlo(&spec, 0, 3, &cfg).unwrap();
    assert_eq!(a, b);
}

fn weighted_spec() -> impl Strategy<Value = CirculantSpec> {
    (4usize..11)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(0i64..5, n / 2)))
        .prop_filter_map("disconnected", |(n, ws)| {
            let weights: BTreeMap<usize, BigRational> = ws
                .iter()
                .enumerate()
                .map(|(i, &w)| (i + 1, BigRational::new(w.into(), 2.into())))
                .collect();
            let spec = CirculantSpec::weighted(n, weights).ok()?;
            spec.connected_by_gcd().then_some(spec)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weighted_specs_agree_across_methods(spec in weighted_spec(), v in 1usize..10) {
        let n = spec.n();
        let v = v % n;
        prop_assume!(v != 0);
        let r_exact = oracles::resistance_oracle_exact(&spec, 0, v).unwrap();
        let r_spec = spectral::resistance_spectral(&spec, 0, v).unwrap();
        prop_assert!(relative_deviation(f(&r_exact), r_spec) < 1e-9);

        let tau = oracles::tree_count_oracle(&spec);
        prop_assert!(relative_deviation(f(&tau), spectral::tree_count_spectral(&spec).value) < 1e-9);
        prop_assert_eq!(oracles::forest_count_oracle(&spec, 0, v).unwrap(), &tau * &r_exact);

        let h_uv = oracles::hitting_time_oracle_exact(&spec, 0, v).unwrap();
        let h_vu = oracles::hitting_time_oracle_exact(&spec, v, 0).unwrap();
        prop_assert_eq!(&h_uv + &h_vu, spec.volume() * &r_exact);
        prop_assert_eq!(h_uv, h_vu);

        if n <= 8 {
            prop_assert_eq!(oracles::spanning_tree_enumerate(&spec).unwrap(), tau);
        }
    }
}
