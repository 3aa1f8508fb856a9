//! Single-qubit gate clean-up that leaves every entangling gate untouched.

use crate::circuit::{Circuit, Gate};
use crate::phase::Phase;

#[derive(Clone, Debug, PartialEq)]
enum Sq {
    H,
    Rz(Phase),
    Rx(Phase),
    Other(Gate),
}

impl Sq {
    fn from_gate(g: &Gate) -> Sq {
        match g {
            Gate::H(_) => Sq::H,
            Gate::Rz(_, p) => Sq::Rz(p.clone()),
            Gate::Rx(_, p) => Sq::Rx(p.clone()),
            Gate::Z(_) => Sq::Rz(Phase::pi()),
            Gate::S(_) => Sq::Rz(Phase::frac_pi(1, 2)),
            Gate::Sdg(_) => Sq::Rz(Phase::frac_pi(-1, 2)),
            Gate::T(_) => Sq::Rz(Phase::frac_pi(1, 4)),
            Gate::Tdg(_) => Sq::Rz(Phase::frac_pi(-1, 4)),
            Gate::X(_) => Sq::Rx(Phase::pi()),
            Gate::R { theta, phi, .. } if phi.is_zero() => Sq::Rx(theta.clone()),
            other => Sq::Other(other.clone()),
        }
    }

    fn into_gate(self, q: usize) -> Gate {
        match self {
            Sq::H => Gate::H(q),
            Sq::Rz(p) => Gate::Rz(q, p),
            Sq::Rx(p) => Gate::Rx(q, p),
            Sq::Other(g) => g,
        }
    }

    fn is_identity(&self) -> bool {
        match self {
            Sq::Rz(p) | Sq::Rx(p) => p.is_zero(),
            Sq::Other(Gate::R { theta, .. }) => theta.is_zero(),
            _ => false,
        }
    }
}

fn reduce_top(out: &mut Vec<Sq>) -> bool {
    let n = out.len();
    if n >= 1 && out[n - 1].is_identity() {
        out.pop();
        return true;
    }
    if n >= 2 {
        let merged = match (&out[n - 2], &out[n - 1]) {
            (Sq::H, Sq::H) => Some(None),
            (Sq::Rz(a), Sq::Rz(b)) => Some(Some(Sq::Rz(a + b))),
            (Sq::Rx(a), Sq::Rx(b)) => Some(Some(Sq::Rx(a + b))),
            _ => None,
        };
        if let Some(m) = merged {
            out.truncate(n - 2);
            out.extend(m);
            return true;
        }
    }
    if n >= 3 && out[n - 3] == Sq::H && out[n - 1] == Sq::H {
        let swapped = match &out[n - 2] {
            Sq::Rz(p) => Some(Sq::Rx(p.clone())),
            Sq::Rx(p) => Some(Sq::Rz(p.clone())),
            _ => None,
        };
        if let Some(s) = swapped {
            out.truncate(n - 3);
            out.push(s);
            return true;
        }
    }
    false
}

fn simplify_segment(seg: &mut Vec<Sq>) {
    let mut out = Vec::with_capacity(seg.len());
    for g in seg.drain(..) {
        out.push(g);
        while reduce_top(&mut out) {}
    }
    *seg = out;
}

fn commutes_with_rx(g: &Gate) -> bool {
    matches!(g, Gate::Gms(_) | Gate::Xx(..))
}

/// Merge and cancel single-qubit gates between entangling gates, pushing
/// `RX` rotations through GMS gates towards the outputs.
pub fn optimize_sqg(c: &Circuit) -> Circuit {
    let n = c.qubit_count();
    let anchors: Vec<&Gate> = c.gates().iter().filter(|g| g.qubits().len() > 1).collect();
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, a) in anchors.iter().enumerate() {
        for q in a.qubits() {
            slots[q].push(k);
        }
    }
    let mut segs: Vec<Vec<Vec<Sq>>> = slots.iter().map(|s| vec![Vec::new(); s.len() + 1]).collect();
    let mut pos = vec![0usize; n];
    for g in c.gates() {
        let qs = g.qubits();
        if qs.len() > 1 {
            for q in qs {
                pos[q] += 1;
            }
        } else {
            segs[qs[0]][pos[qs[0]]].push(Sq::from_gate(g));
        }
    }
    for (q, qsegs) in segs.iter_mut().enumerate() {
        loop {
            qsegs.iter_mut().for_each(simplify_segment);
            let mut moved = false;
            for k in 0..slots[q].len() {
                if !commutes_with_rx(anchors[slots[q][k]]) {
                    continue;
                }
                if let Some(Sq::Rx(_)) = qsegs[k].last() {
                    let rx = qsegs[k].pop().expect("checked");
                    qsegs[k + 1].insert(0, rx);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
    }
    let mut gates = Vec::with_capacity(c.len());
    let mut pos = vec![0usize; n];
    for a in &anchors {
        for q in a.qubits() {
            gates.extend(std::mem::take(&mut segs[q][pos[q]]).into_iter().map(|s| s.into_gate(q)));
            pos[q] += 1;
        }
        gates.push((*a).clone());
    }
    for q in 0..n {
        gates.extend(std::mem::take(&mut segs[q][pos[q]]).into_iter().map(|s| s.into_gate(q)));
    }
    Circuit::with_gates(n, gates).expect("qubits unchanged").named(c.name.clone())
}

pub fn sqg_count(c: &Circuit) -> usize {
    c.gates().iter().filter(|g| g.qubits().len() == 1).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GmsLayer;
    use crate::sim::{circuit_unitary, equivalent_up_to_phase};

    fn opt(n: usize, g: Vec<Gate>) -> Vec<Gate> {
        let c = Circuit::with_gates(n, g).unwrap();
        let o = optimize_sqg(&c);
        let (u, v) = (circuit_unitary(&c).unwrap(), circuit_unitary(&o).unwrap());
        assert!(equivalent_up_to_phase(&u, &v, 1e-9));
        assert!(sqg_count(&o) <= sqg_count(&c));
        assert_eq!(optimize_sqg(&o), o);
        o.into_gates()
    }

    fn gms01() -> Gate {
        Gate::Gms(GmsLayer::new(Phase::frac_pi(1, 2), [(0, 1)]).unwrap())
    }

    #[test]
    fn hadamard_pair_cancels() {
        assert!(opt(1, vec![Gate::H(0), Gate::H(0)]).is_empty());
    }

    #[test]
    fn conjugated_rotations_swap_axis() {
        let q = Phase::frac_pi(1, 4);
        assert_eq!(opt(1, vec![Gate::H(0), Gate::Rx(0, q.clone()), Gate::H(0)]), vec![Gate::Rz(0, q.clone())]);
        assert_eq!(opt(1, vec![Gate::H(0), Gate::Rz(0, q.clone()), Gate::H(0)]), vec![Gate::Rx(0, q)]);
    }

    #[test]
    fn rx_passes_through_gms() {
        let m = Phase::frac_pi(-1, 2);
        let out = opt(2, vec![Gate::Rx(0, m.clone()), gms01(), Gate::Rx(0, m)]);
        assert_eq!(out, vec![gms01(), Gate::Rx(0, Phase::pi())]);
    }

    #[test]
    fn rotations_merge_and_vanish() {
        let a = Phase::frac_pi(1, 4);
        assert!(opt(1, vec![Gate::Rz(0, a.clone()), Gate::Rz(0, -&a)]).is_empty());
        assert_eq!(opt(1, vec![Gate::T(0), Gate::T(0)]), vec![Gate::Rz(0, Phase::frac_pi(1, 2))]);
    }

    #[test]
    fn entangling_gates_are_kept_in_order() {
        let g2 = Gate::Gms(GmsLayer::new(Phase::frac_pi(1, 2), [(1, 2)]).unwrap());
        let out = opt(
            3,
            vec![Gate::H(1), gms01(), Gate::H(1), Gate::Rz(2, Phase::frac_pi(1, 8)), g2.clone(), Gate::H(1)],
        );
        let ent: Vec<&Gate> = out.iter().filter(|g| g.is_entangling()).collect();
        assert_eq!(ent, vec![&gms01(), &g2]);
    }

    #[test]
    fn rz_does_not_cross_gms() {
        let out = opt(2, vec![Gate::Rz(0, Phase::frac_pi(1, 4)), gms01(), Gate::Rz(0, Phase::frac_pi(1, 4))]);
        assert_eq!(out.len(), 3);
    }
}
