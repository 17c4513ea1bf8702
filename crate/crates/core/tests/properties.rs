use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_6, PI};

use proptest::prelude::*;
use qwalk_core::{
    bidirectional_site, closed_form_state, evolve, make_coin, pmf, pmf_via_lambda, spectral_state,
    step, to_bidirectional, CoinParameters, Complex64, Evolution, TransformSize, WalkerState,
};

fn params() -> impl Strategy<Value = CoinParameters> {
    (0.0..=FRAC_PI_2, 0.0..=PI, 0.0..=FRAC_PI_2)
        .prop_map(|(theta, varphi, eta)| CoinParameters::new(theta, varphi, eta).unwrap())
}

fn run(p: &CoinParameters, start: WalkerState, t: usize) -> WalkerState {
    let coin = make_coin(p);
    (0..t).fold(start, |s, _| step(&s, &coin))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn all_methods_agree(p in params(), t in 0usize..48) {
        let oracle = evolve(&p, t);
        let closed = closed_form_state(&p, t, t + 1).unwrap();
        let padded = closed_form_state(&p, t, t + 7).unwrap();
        let minimal = spectral_state(&p, t, TransformSize::Minimal).unwrap();
        let pow2 = spectral_state(&p, t, TransformSize::PowerOfTwo).unwrap();
        for s in [&closed, &padded, &minimal, &pow2] {
            prop_assert!(s.max_abs_diff(&oracle) < 1e-10);
        }
        let table = qwalk_core::lambda_table_recursive(p.theta(), t + 1);
        prop_assert!(pmf_via_lambda(&p, t, &table).unwrap().max_abs_diff(&pmf(&oracle)) < 1e-10);
    }

    #[test]
    fn evolution_is_linear(p in params(), re in -1.0f64..1.0, im in -1.0f64..1.0, t in 1usize..40) {
        let z = Complex64::new(re, im);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::default();
        let a = run(&p, WalkerState::new(0, vec![one], vec![zero]).unwrap(), t);
        let b = run(&p, WalkerState::new(0, vec![zero], vec![one]).unwrap(), t);
        let mixed = run(&p, WalkerState::new(0, vec![one], vec![z]).unwrap(), t);
        for n in 0..=t {
            prop_assert!((mixed.amp0()[n] - (a.amp0()[n] + z * b.amp0()[n])).norm() < 1e-12);
            prop_assert!((mixed.amp1()[n] - (a.amp1()[n] + z * b.amp1()[n])).norm() < 1e-12);
        }
    }

    #[test]
    fn norm_preserved(p in params(), t in 0usize..300) {
        prop_assert!(evolve(&p, t).check_norm(1e-12).is_ok());
    }
}

#[test]
fn bidirectional_picture_keeps_the_pmf() {
    let p = CoinParameters::new(FRAC_PI_6, 0.0, FRAC_PI_6).unwrap();
    let s = evolve(&p, 30);
    let map = to_bidirectional(&s);
    assert_eq!(map.len(), 31);
    let rho = pmf(&s);
    for (n, v) in rho.values().iter().enumerate() {
        let (a, b) = map[&bidirectional_site(n, 30)];
        assert_eq!(a.norm_sqr() + b.norm_sqr(), *v);
    }
    assert_eq!(map.keys().next(), Some(&-30));
    assert_eq!(map.keys().last(), Some(&30));
    // only every other bidirectional site is reachable
    assert!(map.keys().all(|m| m.rem_euclid(2) == 0));
}

#[test]
fn long_run_norm() {
    let p = CoinParameters::new(0.9, 2.1, FRAC_PI_4).unwrap();
    let last = Evolution::new(&p).nth(10_000).unwrap();
    assert_eq!(last.t(), 10_000);
    assert!(last.check_norm(1e-10).is_ok(), "drift {}", (last.norm_sqr() - 1.0).abs());
}
