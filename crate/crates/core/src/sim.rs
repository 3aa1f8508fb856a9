//! Dense state-vector and unitary simulation.
//!
//! Qubit `q` is bit `q` of a basis-state index.

use std::collections::BTreeSet;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::zx::{VertexId, VertexKind, ZxDiagram};

pub type C64 = Complex64;

/// Largest register for which a full unitary of a circuit is built.
pub const MAX_UNITARY_QUBITS: usize = 10;
/// Largest register for a single gate unitary.
pub const MAX_GATE_QUBITS: usize = 14;
/// Largest register handled by state sampling.
pub const MAX_SAMPLED_QUBITS: usize = 12;
/// Registers up to this size are compared on every basis state.
pub const FULL_COMPARE_QUBITS: usize = 8;
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const SAMPLED_STATES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("{qubits} qubits exceeds the simulator limit of {max}")]
    TooManyQubits { qubits: usize, max: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("diagram is not proportional to a unitary")]
    NotUnitary,
}

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix { dim, data: vec![C64::new(0.0, 0.0); dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), dim, "matrix must be square");
            m.data[i * dim..(i + 1) * dim].copy_from_slice(r);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        self.data[r * self.dim + c] = v;
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim).map(|r| self.get(r, c)).collect()
    }

    fn set_column(&mut self, c: usize, col: &[C64]) {
        for (r, v) in col.iter().enumerate() {
            self.set(r, c, *v);
        }
    }

    pub fn mul(&self, o: &Matrix) -> Matrix {
        assert_eq!(self.dim, o.dim);
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * o.data[k * n + j];
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> Matrix {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix { dim: self.dim, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn max_abs_diff(&self, o: &Matrix) -> f64 {
        self.data.iter().zip(&o.data).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2×2 matrix `[[a, b], [c, d]]` of a single-qubit gate.
fn single_qubit_matrix(g: &Gate) -> Option<[C64; 4]> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match g {
        Gate::H(_) => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [h, h, h, -h]
        }
        Gate::Rz(_, p) => {
            let t = p.to_radians() / 2.0;
            [C64::from_polar(1.0, -t), z, z, C64::from_polar(1.0, t)]
        }
        Gate::Rx(_, p) => {
            let t = p.to_radians() / 2.0;
            [c(t.cos(), 0.0), c(0.0, -t.sin()), c(0.0, -t.sin()), c(t.cos(), 0.0)]
        }
        Gate::R { theta, phi, .. } => {
            let t = theta.to_radians() / 2.0;
            let f = phi.to_radians();
            let s = c(0.0, -t.sin());
            [c(t.cos(), 0.0), s * C64::from_polar(1.0, -f), s * C64::from_polar(1.0, f), c(t.cos(), 0.0)]
        }
        Gate::Z(_) => [one, z, z, -one],
        Gate::X(_) => [z, one, one, z],
        Gate::S(_) => [one, z, z, c(0.0, 1.0)],
        Gate::Sdg(_) => [one, z, z, c(0.0, -1.0)],
        Gate::T(_) => [one, z, z, C64::from_polar(1.0, std::f64::consts::FRAC_PI_4)],
        Gate::Tdg(_) => [one, z, z, C64::from_polar(1.0, -std::f64::consts::FRAC_PI_4)],
        _ => return None,
    })
}

fn apply_xx(state: &mut [C64], a: usize, b: usize, angle: f64) {
    let (co, si) = ((angle / 2.0).cos(), (angle / 2.0).sin());
    let mask = (1usize << a) | (1usize << b);
    let ma = 1usize << a;
    for i in 0..state.len() {
        let j = i ^ mask;
        // visit each pair once: the member with bit a clear
        if i & ma == 0 {
            let (x, y) = (state[i], state[j]);
            state[i] = x * co + y * c(0.0, -si);
            state[j] = y * co + x * c(0.0, -si);
        }
    }
}

/// Apply a gate in place to a state vector over `n` qubits.
pub fn apply_gate(state: &mut [C64], g: &Gate) {
    if let Some([m00, m01, m10, m11]) = single_qubit_matrix(g) {
        let q = g.qubits()[0];
        let bit = 1usize << q;
        for i in 0..state.len() {
            if i & bit == 0 {
                let (x, y) = (state[i], state[i | bit]);
                state[i] = m00 * x + m01 * y;
                state[i | bit] = m10 * x + m11 * y;
            }
        }
        return;
    }
    match g {
        Gate::Cnot { control, target } => {
            let (cb, tb) = (1usize << control, 1usize << target);
            for i in 0..state.len() {
                if i & cb != 0 && i & tb == 0 {
                    state.swap(i, i | tb);
                }
            }
        }
        Gate::Cz(a, b) => {
            let mask = (1usize << a) | (1usize << b);
            for (i, v) in state.iter_mut().enumerate() {
                if i & mask == mask {
                    *v = -*v;
                }
            }
        }
        Gate::Swap(a, b) => {
            let (ab, bb) = (1usize << a, 1usize << b);
            for i in 0..state.len() {
                if i & ab != 0 && i & bb == 0 {
                    state.swap(i, (i & !ab) | bb);
                }
            }
        }
        Gate::Xx(a, b, p) => apply_xx(state, *a, *b, p.to_radians()),
        Gate::Gms(layer) => {
            let angle = layer.angle().to_radians();
            for (a, b) in layer.pairs() {
                apply_xx(state, a, b, angle);
            }
        }
        _ => unreachable!("single-qubit gates handled above"),
    }
}

/// Run a circuit on a state vector.
pub fn apply_circuit(state: &mut [C64], c: &Circuit) {
    for g in c.gates() {
        apply_gate(state, g);
    }
}

pub fn basis_state(n: usize, index: usize) -> Vec<C64> {
    let mut s = vec![c(0.0, 0.0); 1 << n];
    s[index] = c(1.0, 0.0);
    s
}

/// Unitary of a single gate on `n` qubits.
pub fn gate_unitary(g: &Gate, n: usize) -> Result<Matrix, SimError> {
    if n > MAX_GATE_QUBITS {
        return Err(SimError::TooManyQubits { qubits: n, max: MAX_GATE_QUBITS });
    }
    let c = Circuit::with_gates(n, vec![g.clone()])
        .map_err(|e| SimError::Dimension(e.to_string()))?;
    Ok(unitary_unchecked(&c))
}

fn unitary_unchecked(c: &Circuit) -> Matrix {
    let n = c.qubit_count();
    let dim = 1usize << n;
    let mut u = Matrix::zeros(dim);
    for col in 0..dim {
        let mut s = basis_state(n, col);
        apply_circuit(&mut s, c);
        u.set_column(col, &s);
    }
    u
}

/// Full unitary of a circuit, for at most [`MAX_UNITARY_QUBITS`] qubits.
pub fn circuit_unitary(c: &Circuit) -> Result<Matrix, SimError> {
    if c.qubit_count() > MAX_UNITARY_QUBITS {
        return Err(SimError::TooManyQubits { qubits: c.qubit_count(), max: MAX_UNITARY_QUBITS });
    }
    Ok(unitary_unchecked(c))
}

/// The global phase `e^{iγ}` with `u2 ≈ e^{iγ}·u1`, read off the
/// largest-magnitude entry of `u1`.
fn phase_between(u1: &[C64], u2: &[C64]) -> Option<C64> {
    let (k, big) = u1
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.norm_sqr().total_cmp(&b.1.norm_sqr()))?;
    if big.norm() == 0.0 {
        return Some(c(1.0, 0.0));
    }
    let r = u2[k] / big;
    if r.norm() == 0.0 {
        return None;
    }
    Some(r / r.norm())
}

/// Whether `u2 = e^{iγ}·u1` within `tol` in the max norm.
pub fn equivalent_up_to_phase(u1: &Matrix, u2: &Matrix, tol: f64) -> bool {
    if u1.dim != u2.dim {
        return false;
    }
    match phase_between(&u1.data, &u2.data) {
        Some(ph) => u1.data.iter().zip(&u2.data).all(|(a, b)| (a * ph - b).norm() <= tol),
        None => false,
    }
}

/// Outcome of comparing two circuits.
#[derive(Clone, Debug, PartialEq)]
pub struct Comparison {
    pub equivalent: bool,
    /// Largest entry-wise deviation after phase alignment (full compare), or
    /// `1 - min fidelity` (sampling).
    pub deviation: f64,
    pub sampled: bool,
}

/// Compare two circuits up to global phase: every basis state for at most
/// [`FULL_COMPARE_QUBITS`] qubits, otherwise [`SAMPLED_STATES`] random
/// states whose fidelity must be at least `1 - tol`, and a consistent
/// global phase across the samples.
pub fn compare_circuits(a: &Circuit, b: &Circuit, tol: f64, seed: u64) -> Result<Comparison, SimError> {
    let n = a.qubit_count();
    if n != b.qubit_count() {
        return Err(SimError::Dimension(format!("{n} vs {} qubits", b.qubit_count())));
    }
    if n > MAX_SAMPLED_QUBITS {
        return Err(SimError::TooManyQubits { qubits: n, max: MAX_SAMPLED_QUBITS });
    }
    if n <= FULL_COMPARE_QUBITS {
        let (ua, ub) = (unitary_unchecked(a), unitary_unchecked(b));
        let deviation = match phase_between(&ua.data, &ub.data) {
            Some(ph) => ua.data.iter().zip(&ub.data).map(|(x, y)| (x * ph - y).norm()).fold(0.0, f64::max),
            None => f64::INFINITY,
        };
        return Ok(Comparison { equivalent: deviation <= tol, deviation, sampled: false });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = 0.0f64;
    let mut phase: Option<C64> = None;
    let mut phase_ok = true;
    for _ in 0..SAMPLED_STATES {
        let s0 = random_state(n, &mut rng);
        let (mut sa, mut sb) = (s0.clone(), s0);
        apply_circuit(&mut sa, a);
        apply_circuit(&mut sb, b);
        let overlap: C64 = sa.iter().zip(&sb).map(|(x, y)| x.conj() * y).sum();
        worst = worst.max(1.0 - overlap.norm_sqr());
        let ph = overlap / overlap.norm().max(f64::MIN_POSITIVE);
        match phase {
            None => phase = Some(ph),
            Some(p) => phase_ok &= (p - ph).norm() <= tol.sqrt().max(1e-6),
        }
    }
    Ok(Comparison { equivalent: phase_ok && worst <= tol, deviation: worst, sampled: true })
}

pub fn random_state(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    let mut s: Vec<C64> = (0..1usize << n).map(|_| c(gaussian(rng), gaussian(rng))).collect();
    let norm = s.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    for v in &mut s {
        *v /= norm;
    }
    s
}

fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

/// Largest contraction table built by [`diagram_unitary`].
const MAX_FACTOR_VARS: usize = 24;

#[derive(Clone, Debug)]
struct Factor {
    vars: Vec<usize>,
    table: Vec<C64>,
}

impl Factor {
    fn value(&self, assign: &dyn Fn(usize) -> usize) -> C64 {
        let mut idx = 0;
        for (k, &v) in self.vars.iter().enumerate() {
            idx |= assign(v) << k;
        }
        self.table[idx]
    }

    fn product(fs: &[Factor]) -> Result<Factor, SimError> {
        let mut vars: Vec<usize> = fs.iter().flat_map(|f| f.vars.iter().copied()).collect();
        vars.sort_unstable();
        vars.dedup();
        if vars.len() > MAX_FACTOR_VARS {
            return Err(SimError::Dimension("diagram contraction too wide".into()));
        }
        let mut table = vec![c(1.0, 0.0); 1 << vars.len()];
        for (idx, slot) in table.iter_mut().enumerate() {
            let assign = |v: usize| {
                let k = vars.binary_search(&v).unwrap();
                idx >> k & 1
            };
            for f in fs {
                *slot *= f.value(&assign);
            }
        }
        Ok(Factor { vars, table })
    }

    fn sum_out(&self, var: usize) -> Factor {
        let k = self.vars.iter().position(|&v| v == var).unwrap();
        let vars: Vec<usize> = self.vars.iter().copied().filter(|&v| v != var).collect();
        let mut table = vec![c(0.0, 0.0); 1 << vars.len()];
        for (idx, val) in self.table.iter().enumerate() {
            let low = idx & ((1 << k) - 1);
            let high = (idx >> (k + 1)) << k;
            table[low | high] += val;
        }
        Factor { vars, table }
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

/// Linear map of a diagram, scaled to the nearest unitary multiple.
///
/// Each spider carries one bit; plain edges identify bits, Hadamard edges
/// contribute `(-1)^{xy}`, a spider of phase `α` contributes `e^{iαx}`, and
/// X spiders are read as Z spiders with a Hadamard on every leg.
pub fn diagram_unitary(d: &ZxDiagram) -> Result<Matrix, SimError> {
    let n = d.inputs().len();
    if d.outputs().len() != n {
        return Err(SimError::Dimension(format!("{n} inputs, {} outputs", d.outputs().len())));
    }
    if n > MAX_UNITARY_QUBITS {
        return Err(SimError::TooManyQubits { qubits: n, max: MAX_UNITARY_QUBITS });
    }
    let ids: Vec<VertexId> = d.vertex_ids().collect();
    let index = |v: VertexId| ids.binary_search(&v).unwrap();
    let is_x = |v: VertexId| d.kind(v) == VertexKind::X;
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    let mut hadamards = Vec::new();
    for &a in &ids {
        for (b, e) in d.incident(a) {
            if b < a {
                continue;
            }
            let flip = a != b && (is_x(a) != is_x(b));
            let (plain, had) = if flip { (e.hadamard, e.plain) } else { (e.plain, e.hadamard) };
            if a != b && plain > 0 {
                let (ra, rb) = (find(&mut parent, index(a)), find(&mut parent, index(b)));
                parent[ra] = rb;
            }
            for _ in 0..had {
                hadamards.push((index(a), index(b)));
            }
        }
    }
    let mut factors = Vec::new();
    for (k, &v) in ids.iter().enumerate() {
        let p = d.phase(v);
        if !p.is_zero() {
            let r = find(&mut parent, k);
            factors.push(Factor { vars: vec![r], table: vec![c(1.0, 0.0), C64::from_polar(1.0, p.to_radians())] });
        }
    }
    for (a, b) in hadamards {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            factors.push(Factor { vars: vec![ra], table: vec![c(1.0, 0.0), c(-1.0, 0.0)] });
        } else {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            factors.push(Factor { vars: vec![lo, hi], table: vec![c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)] });
        }
    }
    let ins: Vec<usize> = d.inputs().iter().map(|&v| find(&mut parent, index(v))).collect();
    let outs: Vec<usize> = d.outputs().iter().map(|&v| find(&mut parent, index(v))).collect();
    let kept: BTreeSet<usize> = ins.iter().chain(&outs).copied().collect();
    let mut free: BTreeSet<usize> = (0..ids.len()).map(|k| find(&mut parent, k)).collect();
    free.retain(|v| !kept.contains(v));
    while !free.is_empty() {
        let mut best: Option<(usize, usize)> = None;
        for &v in &free {
            let width = factors
                .iter()
                .filter(|f| f.vars.contains(&v))
                .flat_map(|f| f.vars.iter())
                .collect::<BTreeSet<_>>()
                .len();
            if best.is_none_or(|(_, w)| width < w) {
                best = Some((v, width));
            }
        }
        let (v, _) = best.unwrap();
        free.remove(&v);
        let (with, without): (Vec<Factor>, Vec<Factor>) = factors.into_iter().partition(|f| f.vars.contains(&v));
        factors = without;
        if with.is_empty() {
            // an unconstrained bit doubles the scalar
            factors.push(Factor { vars: vec![], table: vec![c(2.0, 0.0)] });
        } else {
            factors.push(Factor::product(&with)?.sum_out(v));
        }
    }
    let total = Factor::product(&factors)?;
    let dim = 1usize << n;
    let mut m = Matrix::zeros(dim);
    for col in 0..dim {
        for row in 0..dim {
            let mut assign = std::collections::BTreeMap::new();
            let mut consistent = true;
            for (q, &r) in ins.iter().enumerate() {
                consistent &= *assign.entry(r).or_insert(col >> q & 1) == col >> q & 1;
            }
            for (q, &r) in outs.iter().enumerate() {
                consistent &= *assign.entry(r).or_insert(row >> q & 1) == row >> q & 1;
            }
            if consistent {
                m.set(row, col, total.value(&|v| assign[&v]));
            }
        }
    }
    let norm2: f64 = m.data.iter().map(|v| v.norm_sqr()).sum::<f64>() / dim as f64;
    if norm2 < 1e-300 {
        return Err(SimError::NotUnitary);
    }
    let m = m.scale(c(1.0 / norm2.sqrt(), 0.0));
    if m.adjoint().mul(&m).max_abs_diff(&Matrix::identity(dim)) > 1e-6 {
        return Err(SimError::NotUnitary);
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GmsLayer;
    use crate::phase::Phase;

    fn circ(n: usize, gates: Vec<Gate>) -> Circuit {
        Circuit::with_gates(n, gates).unwrap()
    }

    fn unitary(n: usize, gates: Vec<Gate>) -> Matrix {
        circuit_unitary(&circ(n, gates)).unwrap()
    }

    #[test]
    fn xx_half_pi_by_hand() {
        let u = gate_unitary(&Gate::Xx(0, 1, Phase::frac_pi(1, 2)), 2).unwrap();
        let s = FRAC_1_SQRT_2;
        let mut expect = Matrix::identity(4).scale(c(s, 0.0));
        for i in 0..4 {
            expect.set(i, 3 - i, c(0.0, -s));
        }
        assert!(u.max_abs_diff(&expect) < 1e-12);
    }

    #[test]
    fn gms_single_pair_is_xx() {
        let l = GmsLayer::new(Phase::frac_pi(1, 3), [(1, 2)]).unwrap();
        let a = gate_unitary(&Gate::Gms(l), 3).unwrap();
        let b = gate_unitary(&Gate::Xx(1, 2, Phase::frac_pi(1, 3)), 3).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn r_with_zero_phi_is_rx() {
        let t = Phase::radians(0.37);
        let a = gate_unitary(&Gate::R { qubit: 0, theta: t.clone(), phi: Phase::zero() }, 1).unwrap();
        let b = gate_unitary(&Gate::Rx(0, t), 1).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
    }

    #[test]
    fn empty_circuit_is_identity() {
        assert_eq!(unitary(3, vec![]), Matrix::identity(8));
    }

    #[test]
    fn bell_state() {
        let mut s = basis_state(2, 0);
        apply_circuit(&mut s, &circ(2, vec![Gate::H(0), Gate::cnot(0, 1)]));
        let h = FRAC_1_SQRT_2;
        assert!((s[0] - c(h, 0.0)).norm() < 1e-12);
        assert!((s[3] - c(h, 0.0)).norm() < 1e-12);
        assert!(s[1].norm() < 1e-12 && s[2].norm() < 1e-12);
    }

    #[test]
    fn phase_equivalence() {
        let u = unitary(2, vec![Gate::H(0), Gate::cnot(0, 1), Gate::T(1)]);
        assert!(equivalent_up_to_phase(&u, &u.scale(c(-1.0, 0.0)), DEFAULT_TOLERANCE));
        assert!(equivalent_up_to_phase(&u, &u.scale(C64::from_polar(1.0, 0.7)), DEFAULT_TOLERANCE));
        let x = unitary(1, vec![Gate::X(0)]);
        assert!(!equivalent_up_to_phase(&Matrix::identity(2), &x, DEFAULT_TOLERANCE));
    }

    #[test]
    fn sampled_comparison_detects_difference() {
        let n = 9;
        let mut gates = vec![];
        for q in 0..n - 1 {
            gates.push(Gate::H(q));
            gates.push(Gate::cnot(q, q + 1));
        }
        let a = circ(n, gates.clone());
        let r = compare_circuits(&a, &a, DEFAULT_TOLERANCE, 1).unwrap();
        assert!(r.equivalent && r.sampled);
        gates.push(Gate::T(4));
        let b = circ(n, gates);
        assert!(!compare_circuits(&a, &b, DEFAULT_TOLERANCE, 1).unwrap().equivalent);
    }

    #[test]
    fn size_limits() {
        let big = Circuit::new(MAX_UNITARY_QUBITS + 1);
        assert!(matches!(circuit_unitary(&big), Err(SimError::TooManyQubits { .. })));
    }

    #[test]
    fn diagram_of_wire_is_identity() {
        let d = crate::zx::circuit_to_diagram(&Circuit::new(2));
        assert!(diagram_unitary(&d).unwrap().max_abs_diff(&Matrix::identity(4)) < 1e-12);
    }

    #[test]
    fn diagram_of_z_spider() {
        let d = crate::zx::circuit_to_diagram(&circ(1, vec![Gate::Rz(0, Phase::radians(0.9))]));
        let expect = Matrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), C64::from_polar(1.0, 0.9)]]);
        assert!(equivalent_up_to_phase(&expect, &diagram_unitary(&d).unwrap(), 1e-12));
    }

    #[test]
    fn diagram_of_cnot_before_and_after_normalisation() {
        let c0 = circ(2, vec![Gate::cnot(0, 1)]);
        let u = circuit_unitary(&c0).unwrap();
        let d = crate::zx::circuit_to_diagram(&c0);
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&d).unwrap(), 1e-12));
        let g = crate::zx::to_graph_like(&d);
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&g).unwrap(), 1e-12));
    }
}
