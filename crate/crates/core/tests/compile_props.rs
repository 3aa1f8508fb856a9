use gms_core::circuit::{circuit_stats, Circuit, Gate};
use gms_core::phase::Phase;
use gms_core::pipeline::{compile, CompileOptions, Method};
use gms_core::sim::{circuit_unitary, equivalent_up_to_phase};
use gms_core::sqg_opt::{optimize_sqg, sqg_count};
use proptest::prelude::*;

fn gate(n: usize) -> impl Strategy<Value = Gate> {
    (0..n, 1..n, 0..7u8, 1..16i64).prop_map(move |(q, off, kind, k)| {
        let r = (q + off) % n;
        match kind {
            0 => Gate::H(q),
            1 => Gate::T(q),
            2 => Gate::Rz(q, Phase::frac_pi(k, 8)),
            3 => Gate::Rx(q, Phase::frac_pi(k, 8)),
            4 => Gate::cnot(q, r),
            5 => Gate::cz(q, r),
            _ => Gate::Xx(q, r, Phase::frac_pi(k, 8)),
        }
    })
}

fn circuit() -> impl Strategy<Value = Circuit> {
    (2..5usize).prop_flat_map(|n| prop::collection::vec(gate(n), 0..25).prop_map(move |g| Circuit::with_gates(n, g).unwrap()))
}

fn same(a: &Circuit, b: &Circuit) -> bool {
    equivalent_up_to_phase(&circuit_unitary(a).unwrap(), &circuit_unitary(b).unwrap(), 1e-9)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn sqg_opt_keeps_entanglers(c in circuit()) {
        let o = optimize_sqg(&c);
        prop_assert!(sqg_count(&o) <= sqg_count(&c));
        let ent = |x: &Circuit| x.gates().iter().filter(|g| g.qubits().len() > 1).cloned().collect::<Vec<_>>();
        prop_assert_eq!(ent(&o), ent(&c));
        prop_assert!(same(&c, &o));
    }

    #[test]
    fn every_method_is_sound(c in circuit()) {
        for m in Method::ALL {
            let out = compile(&c, &CompileOptions::with_method(m)).unwrap();
            prop_assert!(same(&c, &out.circuit), "{}", m);
        }
    }
}

#[test]
fn stats_record_json_shape() {
    let c = Circuit::with_gates(2, vec![Gate::H(0), Gate::cnot(0, 1)]).unwrap().named("bell");
    let out = compile(&c, &CompileOptions::default()).unwrap();
    let v = serde_json::to_value(&out.stats).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys.len(), 6);
    for k in ["name", "qubits", "sqg", "entangling", "time_ms", "strategy"] {
        assert!(keys.contains(&k), "{k}");
    }
    assert_eq!(v["name"], "bell");
    assert_eq!(v["strategy"], "lp");
    assert_eq!(serde_json::to_value(circuit_stats(&out.circuit)).unwrap()["entangling"], v["entangling"]);
}
