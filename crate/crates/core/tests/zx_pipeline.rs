use gms_core::generators::random_circuit;
use gms_core::gflow::{find_maximally_delayed_gflow, verify_gflow};
use gms_core::sim::{circuit_unitary, diagram_unitary, equivalent_up_to_phase};
use gms_core::simplify::full_simplify;
use gms_core::zx::{circuit_to_diagram, to_graph_like, validate_graph_like};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn diagrams_keep_semantics_and_gflow() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let c = random_circuit(n, rng.gen_range(0..=20), &mut rng);
        let u = circuit_unitary(&c).unwrap();
        let d = circuit_to_diagram(&c);
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&d).unwrap(), 1e-9));
        let g = to_graph_like(&d);
        assert!(validate_graph_like(&g).is_empty(), "{}", g.dump());
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&g).unwrap(), 1e-9));
        let s = full_simplify(&g);
        assert!(validate_graph_like(&s).is_empty());
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&s).unwrap(), 1e-9));
        for diagram in [&g, &s] {
            let og = diagram.open_graph();
            let cert = find_maximally_delayed_gflow(&og).expect("circuit diagrams have gflow");
            assert!(verify_gflow(&og, &cert));
        }
    }
}

#[test]
fn simplification_is_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let c = random_circuit(4, 25, &mut rng);
    let g = to_graph_like(&circuit_to_diagram(&c));
    assert_eq!(full_simplify(&g).dump(), full_simplify(&g).dump());
}

fn random_clifford(n: usize, depth: usize, rng: &mut impl Rng) -> gms_core::circuit::Circuit {
    use gms_core::circuit::{Circuit, Gate};
    let gates = (0..depth)
        .map(|_| {
            let q = rng.gen_range(0..n);
            let r = (q + rng.gen_range(1..n)) % n;
            match rng.gen_range(0..4) {
                0 => Gate::H(q),
                1 => Gate::S(q),
                2 => Gate::cnot(q, r),
                _ => Gate::cz(q, r),
            }
        })
        .collect();
    Circuit::with_gates(n, gates).unwrap()
}

#[test]
fn clifford_diagrams_lose_their_interior() {
    use gms_core::simplify::{full_simplify_traced, is_boundary_buffer};
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let c = random_clifford(4, rng.gen_range(5..40), &mut rng);
        let g = to_graph_like(&circuit_to_diagram(&c));
        let (s, trace) = full_simplify_traced(&g);
        assert!(trace.len() <= 10 * g.vertex_count());
        // what survives is Pauli and reachable only through a boundary pivot
        for v in s.vertex_ids().filter(|&v| !s.is_boundary(v) && s.is_interior(v) && !is_boundary_buffer(&s, v)) {
            assert!(s.phase(v).is_pauli(), "{}", s.dump());
            assert!(s.neighbors(v).iter().all(|&w| s.touches_boundary(w)), "{}", s.dump());
        }
        assert!(equivalent_up_to_phase(&circuit_unitary(&c).unwrap(), &diagram_unitary(&s).unwrap(), 1e-9));
    }
}
