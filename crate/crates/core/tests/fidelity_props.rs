use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use mirror_fidelity::fidelity::{
    best_fidelity_for_pom, eigen_decompose, eta, left_right_retransmission, nu_plus_closed_form,
    o_operator, o_operator_closed_form, planar_fidelity, strategy_fidelity, RetransmitMap,
};
use mirror_fidelity::oracle::{random_planar_pairs, random_planar_pom};
use mirror_fidelity::qubit::{Ensemble, HermitianOp2, MirrorEnsemble, Pom, PomElement, QubitState};
use mirror_fidelity::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn ensemble() -> impl Strategy<Value = MirrorEnsemble> {
    (0.0f64..=0.5, 0.0f64..=FRAC_PI_2).prop_map(|(p, t)| MirrorEnsemble::new(p, t).unwrap())
}

fn random_state<R: Rng>(rng: &mut R) -> QubitState {
    loop {
        let mut c = || {
            Complex64::new(
                2.0 * rng.random::<f64>() - 1.0,
                2.0 * rng.random::<f64>() - 1.0,
            )
        };
        if let Ok(s) = QubitState::normalized(c(), c()) {
            return s;
        }
    }
}

proptest! {
    #[test]
    fn o_operator_matches_closed_form(
        e in ensemble(),
        w in 0.0f64..=1.0,
        t in -PI..=PI,
        phi in -FRAC_PI_2..=FRAC_PI_2,
    ) {
        let el = PomElement::new(w, t, phi).unwrap();
        let o = o_operator(&e, &el);
        prop_assert!(o.max_abs_diff(&o_operator_closed_form(&e, &el)) < 1e-12);
        prop_assert!(o.is_psd(1e-12));
    }

    #[test]
    fn nu_plus_matches_eigenvalue(e in ensemble(), w in 0.0f64..=1.0, t in -PI..=PI) {
        let el = PomElement::planar(w, t).unwrap();
        let ep = eigen_decompose(&o_operator(&e, &el));
        prop_assert!((nu_plus_closed_form(&e, &el) - ep.nu_plus).abs() < 1e-10);
    }

    #[test]
    fn eigenpairs_have_small_residuals(
        a in -1.0f64..1.0, d in -1.0f64..1.0, re in -1.0f64..1.0, im in -1.0f64..1.0,
    ) {
        let m = HermitianOp2::new(a, Complex64::new(re, im), d);
        let ep = eigen_decompose(&m);
        prop_assert!(ep.nu_plus >= ep.nu_minus);
        for (nu, v) in [(ep.nu_plus, ep.vec_plus), (ep.nu_minus, ep.vec_minus)] {
            let mv = m.apply(&v);
            let r = ((mv[0] - v.plus() * nu).norm_sqr() + (mv[1] - v.minus() * nu).norm_sqr()).sqrt();
            prop_assert!(r <= 1e-10 * m.norm().max(1e-300));
        }
    }

    #[test]
    fn o_operators_sum_to_average_state(e in ensemble(), n in 1usize..=4, seed in any::<u64>()) {
        let pom = random_planar_pom(n, seed).unwrap();
        let total: HermitianOp2 = pom.iter().map(|el| o_operator(&e, el)).sum();
        prop_assert!(total.max_abs_diff(&e.average_state()) < 1e-12);
    }

    #[test]
    fn optimal_retransmissions_beat_random_maps(e in ensemble(), n in 1usize..=4, seed in any::<u64>()) {
        let pom = random_planar_pom(n, seed).unwrap();
        let (best, map) = best_fidelity_for_pom(&e, &pom);
        prop_assert!((strategy_fidelity(&e, &pom, &map).unwrap() - best).abs() < 1e-12);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..100 {
            let other = RetransmitMap::new(pom.iter().map(|_| random_state(&mut rng)).collect());
            prop_assert!(strategy_fidelity(&e, &pom, &other).unwrap() <= best + 1e-12);
        }
    }

    #[test]
    fn planar_fidelity_at_least_half(e in ensemble(), n in 1usize..=4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pairs = random_planar_pairs(&mut rng, n).unwrap();
        let f = planar_fidelity(&e, &pairs).unwrap();
        prop_assert!(f >= 0.5);
        prop_assert!(f <= 1.0 + 1e-12);
    }

    #[test]
    fn in_plane_phase_is_best(e in ensemble(), w in 0.0f64..=1.0, t in -PI..=PI) {
        let flat = nu_plus_closed_form(&e, &PomElement::new(w, t, 0.0).unwrap());
        for i in 1..=20 {
            let phi = -FRAC_PI_2 + PI * i as f64 / 20.0;
            let el = PomElement::new(w, t, phi).unwrap();
            prop_assert!(flat >= eigen_decompose(&o_operator(&e, &el)).nu_plus - 1e-12);
        }
    }

    #[test]
    fn pair_splitting(e in ensemble(), w in 0.0f64..=1.0, t in -PI..=PI) {
        let nu = |el: PomElement| eigen_decompose(&o_operator(&e, &el)).nu_plus;
        let whole = nu(PomElement::planar(w, t).unwrap());
        let split = nu(PomElement::planar(w / 2.0, t).unwrap()) + nu(PomElement::planar(w / 2.0, -t).unwrap());
        prop_assert!((whole - split).abs() < 1e-12);
    }

    #[test]
    fn mirror_invariance(e in ensemble(), n in 1usize..=4, seed in any::<u64>()) {
        let pom = random_planar_pom(n, seed).unwrap();
        let mirrored = Pom::from_elements(pom.iter().map(|el| el.reflected()).collect());
        let a = best_fidelity_for_pom(&e, &pom).0;
        let b = best_fidelity_for_pom(&e, &mirrored).0;
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn shift_property(p in 1e-6f64..=0.5, t in 1e-3f64..FRAC_PI_2 - 1e-3) {
        let e = MirrorEnsemble::new(p, t).unwrap();
        let eta = eta(&e).unwrap();
        let (_, y, _) = left_right_retransmission(&e, 1.0).unwrap();
        if eta > 0.0 {
            prop_assert!(y.abs() < 1.0);
        } else if eta < 0.0 {
            prop_assert!(y.abs() > 1.0);
        } else {
            prop_assert_eq!(y.abs(), 1.0);
        }
        let (_, y_minus, _) = left_right_retransmission(&e, -1.0).unwrap();
        prop_assert_eq!(y_minus, -y);
    }
}

#[test]
fn general_state_lists_use_the_same_path() {
    use mirror_fidelity::qubit::{Signal, StateList};
    let e = MirrorEnsemble::new(0.3, FRAC_PI_4).unwrap();
    let list = StateList::new(e.signals().to_vec()).unwrap();
    let pom = Pom::left_right();
    assert_eq!(
        best_fidelity_for_pom(&e, &pom),
        best_fidelity_for_pom(&list, &pom)
    );

    // Four equiprobable states on the real great circle.
    let four = StateList::new(
        (0..4)
            .map(|k| Signal {
                prior: 0.25,
                state: QubitState::real_angle(PI * k as f64 / 4.0),
            })
            .collect(),
    )
    .unwrap();
    let f = best_fidelity_for_pom(&four, &Pom::up_down()).0;
    assert!((0.5..=1.0).contains(&f));
}
