mod support;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use support::identities::*;

const TOL: f64 = 1e-10;

#[test]
fn cz_layers_are_one_gzz() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=5 {
        for _ in 0..10 {
            assert!(cz_layer(n, &mut rng, TOL));
        }
    }
}

#[test]
fn cz_as_zz() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n in 2..=5 {
        assert!(cz_single(n, &mut rng, TOL));
    }
}

#[test]
fn fanout_is_one_gms() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in 2..=5 {
        for _ in 0..10 {
            assert!(fanout(n, &mut rng, TOL));
        }
    }
}

#[test]
fn cnot_rotation_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 2..=5 {
        for _ in 0..5 {
            assert!(cnot_forms(n, &mut rng, TOL));
        }
    }
}

#[test]
fn gzz_is_conjugated_gms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=5 {
        for _ in 0..10 {
            assert!(gzz(n, &mut rng, TOL));
        }
    }
}

#[test]
fn wrong_correction_is_caught() {
    use gms_core::circuit::{Circuit, Gate};
    use gms_core::phase::Phase;
    use gms_core::sim::{circuit_unitary, equivalent_up_to_phase};
    let a = Circuit::with_gates(2, vec![Gate::cz(0, 1)]).unwrap();
    let b = Circuit::with_gates(
        2,
        vec![Gate::H(0), Gate::H(1), Gate::Xx(0, 1, Phase::frac_pi(1, 2)), Gate::H(0), Gate::H(1)],
    )
    .unwrap();
    assert!(!equivalent_up_to_phase(&circuit_unitary(&a).unwrap(), &circuit_unitary(&b).unwrap(), TOL));
}
