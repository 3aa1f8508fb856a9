//! Output-circuit assembly that groups `XX(π/2)` interactions into GMS
//! gates while gates arrive from the outputs towards the inputs.
//!
//! Everything is kept in peel order: `tail` sits to the right of the open
//! GMS, `front` to its left, and each new gate lands left of everything
//! placed so far unless it can slide past the front and the open GMS.

use std::collections::BTreeSet;

use crate::circuit::{Gate, GmsLayer};
use crate::phase::Phase;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Seg {
    Tail,
    Front,
}

#[derive(Clone, Debug)]
pub struct GmsBuilder {
    qubits: usize,
    tail: Vec<Gate>,
    open: BTreeSet<(usize, usize)>,
    front: Vec<Gate>,
    barrier: Vec<bool>,
    touched: Vec<bool>,
}

fn gms(pairs: impl IntoIterator<Item = (usize, usize)>) -> Gate {
    Gate::Gms(GmsLayer::new(Phase::frac_pi(1, 2), pairs).expect("builder pairs are distinct"))
}

impl GmsBuilder {
    pub fn new(qubits: usize) -> Self {
        GmsBuilder {
            qubits,
            tail: Vec::new(),
            open: BTreeSet::new(),
            front: Vec::new(),
            barrier: vec![false; qubits],
            touched: vec![false; qubits],
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    fn in_open(&self, q: usize) -> bool {
        self.open.iter().any(|&(a, b)| a == q || b == q)
    }

    /// Can a gate on `q` slide right of the open GMS?
    fn free(&self, q: usize) -> bool {
        !self.touched[q] && !self.in_open(q)
    }

    pub fn is_barred(&self, q: usize) -> bool {
        self.barrier[q]
    }

    pub fn open_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.open.iter().copied()
    }

    /// Leftmost gate placed on `q` so far.
    fn leftmost_on(&self, q: usize) -> Option<(Seg, usize)> {
        if let Some(i) = self.front.iter().rposition(|g| g.acts_on(q)) {
            return Some((Seg::Front, i));
        }
        if self.in_open(q) {
            return None;
        }
        self.tail.iter().rposition(|g| g.acts_on(q)).map(|i| (Seg::Tail, i))
    }

    fn refresh(&mut self, q: usize) {
        self.touched[q] = self.front.iter().any(|g| g.acts_on(q));
        self.barrier[q] = self.front.iter().any(|g| g.acts_on(q) && !matches!(g, Gate::Rx(..)));
    }

    /// Place a single-qubit gate. Hadamards cancel against an adjacent
    /// Hadamard on the same qubit.
    pub fn place_single(&mut self, g: Gate) {
        let q = g.qubits()[0];
        if let Gate::H(_) = g {
            match self.leftmost_on(q) {
                Some((Seg::Front, i)) if matches!(self.front[i], Gate::H(_)) => {
                    self.front.remove(i);
                    self.refresh(q);
                    return;
                }
                Some((Seg::Tail, i)) if matches!(self.tail[i], Gate::H(_)) => {
                    self.tail.remove(i);
                    return;
                }
                _ => {}
            }
        }
        if self.free(q) {
            self.tail.push(g);
        } else {
            self.barrier[q] |= !matches!(g, Gate::Rx(..));
            self.touched[q] = true;
            self.front.push(g);
        }
    }

    fn seal(&mut self) {
        if !self.open.is_empty() {
            self.tail.push(gms(std::mem::take(&mut self.open)));
        }
        self.tail.append(&mut self.front);
        self.barrier.fill(false);
        self.touched.fill(false);
    }

    /// `XX(π/2)` on `a, b`: merged into the open GMS when nothing blocks
    /// it, otherwise it opens a new one.
    pub fn place_xx(&mut self, a: usize, b: usize) {
        let p = (a.min(b), a.max(b));
        if self.barrier[a] || self.barrier[b] || self.open.contains(&p) {
            self.seal();
        }
        self.open.insert(p);
    }

    /// A GMS that is not merged into the open one.
    fn place_block(&mut self, pairs: &[(usize, usize)]) {
        let qs: BTreeSet<usize> = pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        let g = gms(pairs.iter().copied());
        if qs.iter().all(|&q| self.free(q)) {
            self.tail.push(g);
        } else {
            for &q in &qs {
                self.barrier[q] = true;
                self.touched[q] = true;
            }
            self.front.push(g);
        }
    }

    /// A layer of commuting CZs as `H·GMS·H` plus `RZ` corrections; pairs
    /// clear of the open GMS go right of it, the rest left.
    pub fn place_cz_layer(&mut self, pairs: &[(usize, usize)]) {
        let (right, left): (Vec<_>, Vec<_>) =
            pairs.iter().copied().partition(|&(a, b)| self.free(a) && self.free(b));
        for group in [right, left] {
            if group.is_empty() {
                continue;
            }
            let qs: BTreeSet<usize> = group.iter().flat_map(|&(a, b)| [a, b]).collect();
            for &q in &qs {
                self.place_single(Gate::H(q));
            }
            self.place_block(&group);
            for &q in &qs {
                self.place_single(Gate::H(q));
            }
            for &q in &qs {
                let deg = group.iter().filter(|&&(a, b)| a == q || b == q).count() as i64;
                let corr = Phase::frac_pi(-deg, 2);
                if !corr.is_zero() {
                    self.place_single(Gate::Rz(q, corr));
                }
            }
        }
    }

    /// `CNOT(c, t) = H_c · RX(−π/2)_c RX(−π/2)_t XX(π/2) · H_c`.
    pub fn place_cnot(&mut self, c: usize, t: usize) {
        self.place_single(Gate::H(c));
        self.place_xx(c, t);
        let quarter = Phase::frac_pi(-1, 2);
        self.place_single(Gate::Rx(c, quarter.clone()));
        self.place_single(Gate::Rx(t, quarter));
        self.place_single(Gate::H(c));
    }

    /// Gates in circuit order.
    pub fn finish(mut self) -> Vec<Gate> {
        self.seal();
        self.tail.reverse();
        self.tail
    }
}
