//! End-to-end compilation: circuit → graph-like diagram → simplified
//! diagram → extracted GMS circuit → single-qubit clean-up.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{circuit_stats, Circuit, Gate, GmsLayer, StatsRecord};
use crate::extract::{extract_with_report, ExtractError, ExtractOptions, Strategy};
use crate::frontier_lp;
use crate::gf2::Gf2Matrix;
use crate::phase::Phase;
use crate::simplify::full_simplify;
use crate::sqg_opt::optimize_sqg;
use crate::zx::{circuit_to_diagram, to_graph_like};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    Zx(Strategy),
    Naive,
}

impl Method {
    pub const ALL: [Method; 4] =
        [Method::Zx(Strategy::Lp), Method::Zx(Strategy::Patel), Method::Zx(Strategy::Fanout), Method::Naive];

    pub fn name(self) -> &'static str {
        match self {
            Method::Zx(s) => s.name(),
            Method::Naive => "naive",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "naive" {
            return Ok(Method::Naive);
        }
        s.parse::<Strategy>().map(Method::Zx).map_err(|_| format!("unknown strategy `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct CompileOptions {
    pub method: Method,
    pub lp_max_size: usize,
    pub lp_node_budget: usize,
    pub sqg_opt: bool,
    pub native_h: bool,
    pub log_frontiers: bool,
}

impl Default for CompileOptions {
    fn default() -> Self {
        CompileOptions {
            method: Method::Zx(Strategy::Lp),
            lp_max_size: frontier_lp::DEFAULT_MAX_EXACT_ROWS,
            lp_node_budget: frontier_lp::DEFAULT_NODE_BUDGET,
            sqg_opt: true,
            native_h: false,
            log_frontiers: false,
        }
    }
}

impl CompileOptions {
    pub fn with_method(method: Method) -> Self {
        CompileOptions { method, ..Default::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error(transparent)]
    Extract(#[from] ExtractError),
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub circuit: Circuit,
    pub stats: StatsRecord,
    pub frontiers: Vec<Gf2Matrix>,
    pub lp_fallbacks: usize,
}

fn quarter() -> Phase {
    Phase::frac_pi(1, 2)
}

fn gms(pairs: impl IntoIterator<Item = (usize, usize)>, angle: Phase) -> Gate {
    Gate::Gms(GmsLayer::new(angle, pairs).expect("distinct pair"))
}

fn lower_cnot(out: &mut Vec<Gate>, c: usize, t: usize) {
    let m = Phase::frac_pi(-1, 2);
    out.extend([Gate::H(c), Gate::Rx(c, m.clone()), Gate::Rx(t, m), gms([(c, t)], quarter()), Gate::H(c)]);
}

/// Rewrite every gate on its own into `{H, RZ, RX, R, GMS}`.
pub fn lower_naive(c: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(c.len() * 2);
    for g in c.gates() {
        match g {
            Gate::Cnot { control, target } => lower_cnot(&mut out, *control, *target),
            Gate::Cz(a, b) => {
                let m = Phase::frac_pi(-1, 2);
                out.extend([
                    Gate::Rz(*a, m.clone()),
                    Gate::Rz(*b, m),
                    Gate::H(*a),
                    Gate::H(*b),
                    gms([(*a, *b)], quarter()),
                    Gate::H(*a),
                    Gate::H(*b),
                ]);
            }
            Gate::Xx(a, b, theta) => out.push(gms([(*a, *b)], theta.clone())),
            Gate::Swap(a, b) => {
                lower_cnot(&mut out, *a, *b);
                lower_cnot(&mut out, *b, *a);
                lower_cnot(&mut out, *a, *b);
            }
            Gate::Z(q) => out.push(Gate::Rz(*q, Phase::pi())),
            Gate::S(q) => out.push(Gate::Rz(*q, Phase::frac_pi(1, 2))),
            Gate::Sdg(q) => out.push(Gate::Rz(*q, Phase::frac_pi(-1, 2))),
            Gate::T(q) => out.push(Gate::Rz(*q, Phase::frac_pi(1, 4))),
            Gate::Tdg(q) => out.push(Gate::Rz(*q, Phase::frac_pi(-1, 4))),
            Gate::X(q) => out.push(Gate::Rx(*q, Phase::pi())),
            other => out.push(other.clone()),
        }
    }
    Circuit::with_gates(c.qubit_count(), out).expect("same qubits").named(c.name.clone())
}

/// `H = RZ(π/2)·RX(π/2)·RZ(π/2)` up to global phase.
pub fn lower_hadamards(c: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(c.len());
    for g in c.gates() {
        match g {
            Gate::H(q) => out.extend([Gate::Rz(*q, quarter()), Gate::Rx(*q, quarter()), Gate::Rz(*q, quarter())]),
            other => out.push(other.clone()),
        }
    }
    Circuit::with_gates(c.qubit_count(), out).expect("same qubits").named(c.name.clone())
}

pub fn compile(c: &Circuit, opts: &CompileOptions) -> Result<Compiled, CompileError> {
    let (mut out, frontiers, lp_fallbacks) = match opts.method {
        Method::Naive => (lower_naive(c), Vec::new(), 0),
        Method::Zx(strategy) => {
            let d = full_simplify(&to_graph_like(&circuit_to_diagram(c)));
            let eo = ExtractOptions {
                strategy,
                lp_max_size: opts.lp_max_size,
                lp_node_budget: opts.lp_node_budget,
                log_frontiers: opts.log_frontiers,
            };
            let r = extract_with_report(&d, &eo)?;
            let circ = Circuit::with_gates(c.qubit_count(), r.gates).expect("same qubits");
            (circ, r.frontiers, r.lp_fallbacks)
        }
    };
    out.name = c.name.clone();
    if opts.sqg_opt {
        out = optimize_sqg(&out);
    }
    if opts.native_h {
        out = lower_hadamards(&out);
    }
    let mut stats = circuit_stats(&out);
    stats.strategy = opts.method.name().to_string();
    Ok(Compiled { circuit: out, stats, frontiers, lp_fallbacks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{circuit_unitary, equivalent_up_to_phase};

    fn same(a: &Circuit, b: &Circuit) -> bool {
        equivalent_up_to_phase(&circuit_unitary(a).unwrap(), &circuit_unitary(b).unwrap(), 1e-9)
    }

    #[test]
    fn method_names_round_trip() {
        for m in Method::ALL {
            assert_eq!(m.name().parse::<Method>().unwrap(), m);
        }
        assert!("gurobi".parse::<Method>().is_err());
    }

    #[test]
    fn naive_counts_two_qubit_gates() {
        let c = Circuit::with_gates(
            3,
            vec![Gate::cnot(0, 1), Gate::T(1), Gate::cz(1, 2), Gate::Xx(0, 2, Phase::frac_pi(1, 3)), Gate::S(0)],
        )
        .unwrap();
        let out = compile(&c, &CompileOptions::with_method(Method::Naive)).unwrap();
        assert_eq!(out.stats.entangling, 3);
        assert!(same(&c, &out.circuit));
    }

    #[test]
    fn native_h_lowering() {
        let c = Circuit::with_gates(2, vec![Gate::H(0), Gate::cnot(0, 1), Gate::H(1)]).unwrap();
        for m in Method::ALL {
            let opts = CompileOptions { native_h: true, ..CompileOptions::with_method(m) };
            let out = compile(&c, &opts).unwrap();
            assert!(out.circuit.gates().iter().all(|g| !matches!(g, Gate::H(_))));
            assert!(same(&c, &out.circuit));
        }
    }

    #[test]
    fn bell_pair() {
        let c = Circuit::with_gates(2, vec![Gate::H(0), Gate::cnot(0, 1)]).unwrap();
        for m in Method::ALL {
            let out = compile(&c, &CompileOptions::with_method(m)).unwrap();
            assert_eq!(out.stats.entangling, 1);
            assert_eq!(out.stats.strategy, m.name());
            assert!(same(&c, &out.circuit));
        }
    }
}
