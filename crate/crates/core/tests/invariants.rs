use proptest::prelude::*;

use freeprice_core::model::EquilibriumProfile;
use freeprice_core::spectral::{crossing_direction, crossing_r_cos, crossing_r_sin, find_crossings, spectrum_report};
use freeprice_core::waves::{build_wave, default_samples, required_r, solve_rho, wave_residual};
use freeprice_core::Nonlinearity;

fn phi_strategy() -> impl Strategy<Value = Nonlinearity> {
    prop_oneof![Just(Nonlinearity::Sign), Just(Nonlinearity::Linear), Just(Nonlinearity::Tanh)]
}

proptest! {
    #[test]
    fn waves_satisfy_their_equations(
        c in prop_oneof![-3.0f64..-0.05, 0.05f64..3.0],
        rho in 0.05f64..5.0,
        phi in phi_strategy(),
    ) {
        let w = build_wave(c, rho, phi).unwrap();
        let res = wave_residual(&w, &default_samples(6.0, 120)).unwrap();
        prop_assert!(res.max() < 1e-9 * (1.0 + rho), "{:?}", res);
    }

    #[test]
    fn reflection_identity(c in 0.05f64..3.0, rho in 0.05f64..5.0, phi in phi_strategy(), x in -8.0f64..8.0) {
        let fwd = build_wave(c, rho, phi).unwrap();
        let back = build_wave(-c, rho, phi).unwrap();
        prop_assert!((back.eval(x) + fwd.eval(-x)).abs() <= 1e-12 * (1.0 + rho));
        prop_assert_eq!(back.limits().1, -rho);
        prop_assert_eq!(fwd.limits().0, rho);
    }

    #[test]
    fn tanh_amplitudes_reproduce_their_coupling(r in -200.0f64..-0.77) {
        let map = solve_rho(r, Nonlinearity::Tanh);
        prop_assert_eq!(map.roots().len(), 1);
        let back = required_r(map.roots()[0], Nonlinearity::Tanh).unwrap();
        prop_assert!((back - r).abs() <= 1e-10 * r.abs());
    }

    #[test]
    fn no_waves_for_nonnegative_coupling(r in 0.0f64..100.0, phi in phi_strategy()) {
        prop_assert!(solve_rho(r, phi).is_empty());
    }

    #[test]
    fn slow_waves_approach_the_equilibrium(rho in 0.2f64..3.0, x in -5.0f64..5.0) {
        let eq = EquilibriumProfile::new(rho, 0.0).unwrap();
        let w = build_wave(1e-6, rho, Nonlinearity::Sign).unwrap();
        prop_assert!((w.eval(x) - eq.eval(1.0, x)).abs() < 1e-4 * rho);
    }
}

#[test]
fn crossing_records_are_consistent() {
    let records = find_crossings(25.0).unwrap();
    assert_eq!(records.len(), 7);
    for (k, rec) in records.iter().enumerate() {
        assert_eq!(rec.index, k);
        let (rc, rs) = (crossing_r_cos(rec.a_value), crossing_r_sin(rec.a_value));
        assert!((rc - rs).abs() <= 1e-9 * rc.abs().max(1.0));
        assert_eq!(rec.direction, crossing_direction(rec.a_value, rec.r_value).unwrap());
        if k > 0 {
            assert!(rec.a_value > records[k - 1].a_value);
        }
    }
    // positive and negative crossings alternate in a
    let signs: Vec<i8> = records.iter().map(|r| r.direction).collect();
    assert_eq!(signs, vec![1, -1, 1, -1, 1, -1, 1]);
}

#[test]
fn report_counts_pairs_past_onset() {
    assert_eq!(spectrum_report(5.0, 25.0).unwrap().unstable_pairs(), 0);
    assert_eq!(spectrum_report(12.0, 25.0).unwrap().unstable_pairs(), 1);
    let below = spectrum_report(-200.0, 25.0).unwrap();
    assert_eq!(below.unstable_pairs(), 1);
    assert!(below.real_unstable.is_some());
}
