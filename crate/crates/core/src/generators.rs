//! Circuit families used by the test-suite and the benchmark fixtures.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::circuit::{Circuit, Gate};
use crate::phase::Phase;

/// Random circuit over `{H, S, T, RZ(kπ/8), CNOT, CZ}`.
pub fn random_circuit(n: usize, depth: usize, rng: &mut impl Rng) -> Circuit {
    let mut gates = Vec::with_capacity(depth);
    for _ in 0..depth {
        let q = rng.gen_range(0..n);
        let two = n > 1 && rng.gen_bool(0.35);
        let g = if two {
            let mut r = rng.gen_range(0..n - 1);
            if r >= q {
                r += 1;
            }
            if rng.gen_bool(0.6) {
                Gate::cnot(q, r)
            } else {
                Gate::cz(q, r)
            }
        } else {
            match rng.gen_range(0..4) {
                0 => Gate::H(q),
                1 => Gate::S(q),
                2 => Gate::T(q),
                _ => Gate::Rz(q, Phase::frac_pi(rng.gen_range(1..16), 8)),
            }
        };
        gates.push(g);
    }
    Circuit::with_gates(n, gates).expect("generated gates are in range").named(format!("random_n{n}_d{depth}"))
}

/// Bernstein–Vazirani on `n` qubits: `n − 1` data qubits and an ancilla
/// on the last wire.
pub fn bernstein_vazirani(n: usize, hidden: &[bool]) -> Circuit {
    assert!(n >= 2 && hidden.len() == n - 1);
    let anc = n - 1;
    let mut g = vec![Gate::X(anc)];
    g.extend((0..n).map(Gate::H));
    for (i, &bit) in hidden.iter().enumerate() {
        if bit {
            g.push(Gate::cnot(i, anc));
        }
    }
    g.extend((0..anc).map(Gate::H));
    Circuit::with_gates(n, g).expect("in range").named(format!("bv_n{n}"))
}

/// `H` then a CNOT ladder.
pub fn ghz_ladder(n: usize) -> Circuit {
    let mut g = vec![Gate::H(0)];
    g.extend((0..n - 1).map(|i| Gate::cnot(i, i + 1)));
    Circuit::with_gates(n, g).expect("in range").named(format!("ghz_n{n}"))
}

/// A CZ on every pair.
pub fn cz_complete(n: usize) -> Circuit {
    let g = (0..n).flat_map(|a| (a + 1..n).map(move |b| Gate::cz(a, b))).collect();
    Circuit::with_gates(n, g).expect("in range").named(format!("cz_complete_n{n}"))
}

/// Up to `max` CNOTs in which no qubit is both a control and a target.
pub fn commuting_cnot_layer(n: usize, max: usize, rng: &mut impl Rng) -> Circuit {
    assert!(n >= 2);
    let mut qs: Vec<usize> = (0..n).collect();
    qs.shuffle(rng);
    let split = rng.gen_range(1..n);
    let (controls, targets) = qs.split_at(split);
    let mut pairs: Vec<(usize, usize)> =
        controls.iter().flat_map(|&c| targets.iter().map(move |&t| (c, t))).collect();
    pairs.shuffle(rng);
    pairs.truncate(rng.gen_range(1..=max.min(pairs.len())));
    let g = pairs.into_iter().map(|(c, t)| Gate::cnot(c, t)).collect();
    Circuit::with_gates(n, g).expect("in range").named(format!("commuting_n{n}"))
}

/// A chain `CNOT(q0,q1) CNOT(q1,q2) …` over a random order of `len + 1`
/// distinct qubits.
pub fn cnot_ladder(n: usize, len: usize, rng: &mut impl Rng) -> Circuit {
    assert!(len >= 1 && len < n);
    let mut qs: Vec<usize> = (0..n).collect();
    qs.shuffle(rng);
    let g = qs[..=len].windows(2).map(|w| Gate::cnot(w[0], w[1])).collect();
    Circuit::with_gates(n, g).expect("in range").named(format!("ladder_n{n}"))
}

/// Fanouts from qubit 0 interleaved with T gates.
pub fn fanout_blocks(n: usize, blocks: usize) -> Circuit {
    let mut g = Vec::new();
    for b in 0..blocks {
        let c = b % n;
        g.push(Gate::H(c));
        g.extend((0..n).filter(|&t| t != c).map(|t| Gate::cnot(c, t)));
        g.push(Gate::T(c));
    }
    Circuit::with_gates(n, g).expect("in range").named(format!("fanout_n{n}_b{blocks}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn commuting_layers_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let c = commuting_cnot_layer(6, 12, &mut rng);
            let (mut cs, mut ts) = (vec![], vec![]);
            for g in c.gates() {
                if let Gate::Cnot { control, target } = g {
                    cs.push(*control);
                    ts.push(*target);
                }
            }
            assert!(!cs.is_empty() && cs.len() <= 12);
            assert!(cs.iter().all(|c| !ts.contains(c)));
        }
    }

    #[test]
    fn families_have_expected_shape() {
        assert_eq!(ghz_ladder(5).two_qubit_count(), 4);
        assert_eq!(cz_complete(4).two_qubit_count(), 6);
        assert_eq!(bernstein_vazirani(4, &[true, false, true]).two_qubit_count(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(cnot_ladder(5, 3, &mut rng).two_qubit_count(), 3);
        assert_eq!(random_circuit(3, 20, &mut rng).len(), 20);
    }
}
