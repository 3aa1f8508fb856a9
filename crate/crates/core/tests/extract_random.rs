use gms_core::circuit::Gate;
use gms_core::extract::{extract_circuit, ExtractOptions, Strategy};
use gms_core::generators::random_circuit;
use gms_core::sim::{circuit_unitary, equivalent_up_to_phase};
use gms_core::simplify::full_simplify;
use gms_core::zx::{circuit_to_diagram, to_graph_like};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_circuits_extract_faithfully() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for k in 0..60 {
        let n = rng.gen_range(2..=5);
        let depth = rng.gen_range(1..=30);
        let c = random_circuit(n, depth, &mut rng);
        let d = full_simplify(&to_graph_like(&circuit_to_diagram(&c)));
        let u = circuit_unitary(&c).unwrap();
        for s in Strategy::ALL {
            let out = extract_circuit(&d, &ExtractOptions::with_strategy(s))
                .unwrap_or_else(|e| panic!("case {k} {s}: {e}\n{:?}", c.gates()));
            assert!(out.gates().iter().all(|g| !g.is_entangling() || matches!(g, Gate::Gms(_))));
            let v = circuit_unitary(&out).unwrap();
            assert!(equivalent_up_to_phase(&u, &v, 1e-9), "case {k} {s}\n{:?}", c.gates());
        }
    }
}
