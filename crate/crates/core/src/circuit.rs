//! Gate-list circuit IR shared by the front end and the compiler output.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::phase::Phase;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("qubit index {index} out of range for a {qubits}-qubit circuit")]
    QubitOutOfRange { index: usize, qubits: usize },
    #[error("two-qubit gate {gate} acts twice on qubit {qubit}")]
    RepeatedOperand { gate: &'static str, qubit: usize },
    #[error("invalid GMS layer: {0}")]
    InvalidGms(String),
}

/// One global Mølmer–Sørensen interaction: simultaneous `XX(angle)` on every
/// coupled pair.
#[derive(Clone, Debug, PartialEq)]
pub struct GmsLayer {
    angle: Phase,
    pairs: BTreeSet<(usize, usize)>,
}

impl GmsLayer {
    /// Pairs are normalised to `(low, high)`. Rejects empty couplings, self
    /// pairs and repeated pairs.
    pub fn new(
        angle: Phase,
        pairs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, CircuitError> {
        let mut set = BTreeSet::new();
        for (a, b) in pairs {
            if a == b {
                return Err(CircuitError::InvalidGms(format!("self coupling on qubit {a}")));
            }
            let p = (a.min(b), a.max(b));
            if !set.insert(p) {
                return Err(CircuitError::InvalidGms(format!("pair {}-{} repeated", p.0, p.1)));
            }
        }
        if set.is_empty() {
            return Err(CircuitError::InvalidGms("no coupled pairs".into()));
        }
        Ok(GmsLayer { angle, pairs: set })
    }

    /// Build from a symmetric 0/1 coupling matrix with zero diagonal.
    pub fn from_matrix(angle: Phase, a: &[Vec<u8>]) -> Result<Self, CircuitError> {
        let n = a.len();
        let mut pairs = Vec::new();
        for (i, row) in a.iter().enumerate() {
            if row.len() != n {
                return Err(CircuitError::InvalidGms("coupling matrix not square".into()));
            }
            if row[i] != 0 {
                return Err(CircuitError::InvalidGms(format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                if row[j] != a[j][i] {
                    return Err(CircuitError::InvalidGms("coupling matrix not symmetric".into()));
                }
                if j > i && row[j] != 0 {
                    pairs.push((i, j));
                }
            }
        }
        GmsLayer::new(angle, pairs)
    }

    pub fn angle(&self) -> &Phase {
        &self.angle
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn pair_count(&self) -> usize {
        self.pairs.len()
    }

    pub fn couples(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }

    /// Qubits touched by at least one coupling, ascending.
    pub fn participants(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect();
        set.into_iter().collect()
    }

    /// Dense `n × n` coupling matrix.
    pub fn matrix(&self, n: usize) -> Vec<Vec<u8>> {
        let mut m = vec![vec![0u8; n]; n];
        for &(a, b) in &self.pairs {
            if a < n && b < n {
                m[a][b] = 1;
                m[b][a] = 1;
            }
        }
        m
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    H(usize),
    Rz(usize, Phase),
    Rx(usize, Phase),
    /// `exp(-i θ/2 (cos φ X + sin φ Y))`.
    R { qubit: usize, theta: Phase, phi: Phase },
    Z(usize),
    X(usize),
    S(usize),
    Sdg(usize),
    T(usize),
    Tdg(usize),
    Cnot { control: usize, target: usize },
    /// Stored with `a < b`; use [`Gate::cz`].
    Cz(usize, usize),
    Xx(usize, usize, Phase),
    Swap(usize, usize),
    Gms(GmsLayer),
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn cz(a: usize, b: usize) -> Gate {
        Gate::Cz(a.min(b), a.max(b))
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "h",
            Gate::Rz(..) => "rz",
            Gate::Rx(..) => "rx",
            Gate::R { .. } => "r",
            Gate::Z(_) => "z",
            Gate::X(_) => "x",
            Gate::S(_) => "s",
            Gate::Sdg(_) => "sdg",
            Gate::T(_) => "t",
            Gate::Tdg(_) => "tdg",
            Gate::Cnot { .. } => "cx",
            Gate::Cz(..) => "cz",
            Gate::Xx(..) => "rxx",
            Gate::Swap(..) => "swap",
            Gate::Gms(_) => "gms",
        }
    }

    /// Qubits the gate acts on.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::H(q)
            | Gate::Rz(q, _)
            | Gate::Rx(q, _)
            | Gate::R { qubit: q, .. }
            | Gate::Z(q)
            | Gate::X(q)
            | Gate::S(q)
            | Gate::Sdg(q)
            | Gate::T(q)
            | Gate::Tdg(q) => vec![*q],
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Cz(a, b) | Gate::Xx(a, b, _) | Gate::Swap(a, b) => vec![*a, *b],
            Gate::Gms(layer) => layer.participants(),
        }
    }

    pub fn acts_on(&self, q: usize) -> bool {
        match self {
            Gate::Gms(layer) => layer.pairs().any(|(a, b)| a == q || b == q),
            _ => self.qubits().contains(&q),
        }
    }

    pub fn is_entangling(&self) -> bool {
        matches!(
            self,
            Gate::Cnot { .. } | Gate::Cz(..) | Gate::Xx(..) | Gate::Swap(..) | Gate::Gms(_)
        )
    }

    pub fn validate(&self, qubits: usize) -> Result<(), CircuitError> {
        for q in self.qubits() {
            if q >= qubits {
                return Err(CircuitError::QubitOutOfRange { index: q, qubits });
            }
        }
        match self {
            Gate::Cnot { control, target } if control == target => {
                Err(CircuitError::RepeatedOperand { gate: "cx", qubit: *control })
            }
            Gate::Cz(a, b) | Gate::Xx(a, b, _) | Gate::Swap(a, b) if a == b => {
                Err(CircuitError::RepeatedOperand { gate: self.name(), qubit: *a })
            }
            Gate::Cz(a, b) if a > b => Err(CircuitError::InvalidGms(
                "cz operands must be stored in ascending order".into(),
            )),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Rz(q, p) | Gate::Rx(q, p) => write!(f, "{}({}) q[{q}]", self.name(), p),
            Gate::R { qubit, theta, phi } => write!(f, "r({theta},{phi}) q[{qubit}]"),
            Gate::Cnot { control, target } => write!(f, "cx q[{control}],q[{target}]"),
            Gate::Cz(a, b) | Gate::Swap(a, b) => write!(f, "{} q[{a}],q[{b}]", self.name()),
            Gate::Xx(a, b, p) => write!(f, "rxx({p}) q[{a}],q[{b}]"),
            Gate::Gms(layer) => {
                let pairs: Vec<String> = layer.pairs().map(|(a, b)| format!("{a}-{b}")).collect();
                write!(f, "gms({}) [{}]", layer.angle(), pairs.join(", "))
            }
            _ => write!(f, "{} q[{}]", self.name(), self.qubits()[0]),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub name: String,
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(qubit_count: usize) -> Self {
        Circuit { name: String::new(), qubit_count, gates: Vec::new() }
    }

    pub fn with_gates(qubit_count: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        let mut c = Circuit::new(qubit_count);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn extend(&mut self, gates: impl IntoIterator<Item = Gate>) -> Result<(), CircuitError> {
        for g in gates {
            self.push(g)?;
        }
        Ok(())
    }

    pub fn gms_layers(&self) -> impl Iterator<Item = &GmsLayer> {
        self.gates.iter().filter_map(|g| match g {
            Gate::Gms(l) => Some(l),
            _ => None,
        })
    }

    pub fn entangling_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_entangling()).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.qubits().len() == 2 && !matches!(g, Gate::Gms(_))).count()
    }
}

/// Duration of a layer holding only single-qubit gates, in microseconds.
pub const SINGLE_QUBIT_LAYER_US: f64 = 110.0;
/// Duration of a layer holding at least one entangling gate, in microseconds.
pub const ENTANGLING_LAYER_US: f64 = 672.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatsRecord {
    pub name: String,
    pub qubits: usize,
    pub sqg: usize,
    pub entangling: usize,
    pub time_ms: f64,
    pub strategy: String,
}

/// Gate counts and an ASAP-layered execution-time estimate.
pub fn circuit_stats(c: &Circuit) -> StatsRecord {
    let entangling = c.entangling_count();
    let sqg = c.len() - entangling;
    // layer index is 1-based; 0 means "no gate yet on this qubit"
    let mut depth = vec![0usize; c.qubit_count()];
    let mut layer_entangles: Vec<bool> = Vec::new();
    for g in c.gates() {
        let qs = g.qubits();
        let layer = qs.iter().map(|&q| depth[q]).max().unwrap_or(0) + 1;
        for &q in &qs {
            depth[q] = layer;
        }
        if layer_entangles.len() < layer {
            layer_entangles.resize(layer, false);
        }
        layer_entangles[layer - 1] |= g.is_entangling();
    }
    let micros: f64 = layer_entangles
        .iter()
        .map(|&e| if e { ENTANGLING_LAYER_US } else { SINGLE_QUBIT_LAYER_US })
        .sum();
    StatsRecord {
        name: c.name.clone(),
        qubits: c.qubit_count(),
        sqg,
        entangling,
        time_ms: (micros / 1000.0 * 1e9).round() / 1e9,
        strategy: String::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gms_layer_invariants() {
        let l = GmsLayer::new(Phase::frac_pi(1, 2), [(1, 0), (2, 1)]).unwrap();
        assert_eq!(l.participants(), vec![0, 1, 2]);
        assert!(l.couples(0, 1) && l.couples(1, 0));
        let m = l.matrix(3);
        assert_eq!(m, vec![vec![0, 1, 0], vec![1, 0, 1], vec![0, 1, 0]]);
        assert_eq!(GmsLayer::from_matrix(Phase::frac_pi(1, 2), &m).unwrap(), l);
        assert!(GmsLayer::new(Phase::zero(), []).is_err());
        assert!(GmsLayer::new(Phase::zero(), [(0, 0)]).is_err());
        assert!(GmsLayer::new(Phase::zero(), [(0, 1), (1, 0)]).is_err());
        assert!(GmsLayer::from_matrix(Phase::zero(), &[vec![0, 1], vec![0, 0]]).is_err());
    }

    #[test]
    fn gate_validation() {
        let mut c = Circuit::new(2);
        assert!(c.push(Gate::cnot(0, 2)).is_err());
        assert!(c.push(Gate::cnot(1, 1)).is_err());
        assert!(c.push(Gate::Cz(1, 0)).is_err());
        c.push(Gate::cz(1, 0)).unwrap();
        assert_eq!(c.gates()[0], Gate::Cz(0, 1));
    }

    #[test]
    fn stats_single_layer() {
        let c = Circuit::with_gates(2, vec![Gate::H(0), Gate::H(1)]).unwrap();
        let s = circuit_stats(&c);
        assert_eq!((s.sqg, s.entangling), (2, 0));
        assert!((s.time_ms - 0.11).abs() < 1e-12);
    }

    #[test]
    fn stats_entangling_layer() {
        let c = Circuit::with_gates(2, vec![Gate::cnot(0, 1)]).unwrap();
        let s = circuit_stats(&c);
        assert_eq!((s.sqg, s.entangling), (0, 1));
        assert!((s.time_ms - 0.672).abs() < 1e-12);
    }

    #[test]
    fn stats_three_layers() {
        let c = Circuit::with_gates(2, vec![Gate::H(0), Gate::cnot(0, 1), Gate::H(0)]).unwrap();
        assert!((circuit_stats(&c).time_ms - 0.892).abs() < 1e-12);
    }

    #[test]
    fn gms_occupies_all_participants() {
        let l = GmsLayer::new(Phase::frac_pi(1, 2), [(0, 1), (2, 3)]).unwrap();
        let c = Circuit::with_gates(4, vec![Gate::H(3), Gate::Gms(l), Gate::H(0)]).unwrap();
        assert!((circuit_stats(&c).time_ms - 0.892).abs() < 1e-12);
    }
}
