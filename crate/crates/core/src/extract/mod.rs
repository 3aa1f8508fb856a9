//! Circuit extraction from simplified graph-like diagrams, emitting GMS
//! gates as the only entangling operation.

mod builder;

pub use builder::GmsBuilder;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::circuit::{Circuit, Gate};
use crate::frontier_lp::{self, LpError};
use crate::gf2::{default_block_size, patel_markov_hayes, Gf2Matrix, RowOp};
use crate::phase::Phase;
use crate::simplify::pivot_at;
use crate::zx::{EdgeType, VertexId, VertexKind, ZxDiagram};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Lp,
    Patel,
    Fanout,
}

impl Strategy {
    pub const ALL: [Strategy; 3] = [Strategy::Lp, Strategy::Patel, Strategy::Fanout];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Lp => "lp",
            Strategy::Patel => "patel",
            Strategy::Fanout => "fanout",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown extraction strategy `{s}`"))
    }
}

#[derive(Clone, Debug)]
pub struct ExtractOptions {
    pub strategy: Strategy,
    pub lp_max_size: usize,
    pub lp_node_budget: usize,
    /// Keep every frontier matrix handed to the CNOT strategy.
    pub log_frontiers: bool,
}

impl Default for ExtractOptions {
    fn default() -> Self {
        ExtractOptions {
            strategy: Strategy::Lp,
            lp_max_size: frontier_lp::DEFAULT_MAX_EXACT_ROWS,
            lp_node_budget: frontier_lp::DEFAULT_NODE_BUDGET,
            log_frontiers: false,
        }
    }
}

impl ExtractOptions {
    pub fn with_strategy(strategy: Strategy) -> Self {
        ExtractOptions { strategy, ..Default::default() }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtractError {
    #[error("diagram has {inputs} inputs but {outputs} outputs")]
    Arity { inputs: usize, outputs: usize },
    #[error("boundary {0} is not attached to exactly one vertex")]
    Boundary(VertexId),
    #[error("frontier is stuck with no extractable progress; the diagram has likely lost gflow")]
    Stuck,
    #[error("extraction did not finish within {0} rounds")]
    Runaway(usize),
    #[error("frontier layer: {0}")]
    Layer(#[from] LpError),
}

#[derive(Clone, Debug, Default)]
pub struct ExtractReport {
    pub gates: Vec<Gate>,
    pub frontiers: Vec<Gf2Matrix>,
    pub rounds: usize,
    pub cnot_layers: usize,
    pub lp_fallbacks: usize,
}

struct Extractor<'a> {
    d: ZxDiagram,
    opts: &'a ExtractOptions,
    outputs: Vec<VertexId>,
    inputs: Vec<VertexId>,
    frontier: Vec<VertexId>,
    b: GmsBuilder,
    report: ExtractReport,
}

impl Extractor<'_> {
    fn input_index(&self, v: VertexId) -> Option<usize> {
        self.inputs.iter().position(|&i| i == v)
    }

    /// Input this frontier slot is wired to once nothing else remains.
    fn finished(&self, q: usize) -> Option<usize> {
        let v = self.frontier[q];
        if self.d.is_input(v) {
            return self.input_index(v);
        }
        let nb = self.d.neighbors(v);
        if nb.len() != 2 {
            return None;
        }
        nb.iter().find(|&&w| self.d.is_input(w)).and_then(|&w| self.input_index(w))
    }

    fn output_hadamards(&mut self) {
        for q in 0..self.outputs.len() {
            let (o, v) = (self.outputs[q], self.frontier[q]);
            if self.d.edge_type(o, v) == Some(EdgeType::Hadamard) {
                self.d.set_edge(o, v, EdgeType::Plain);
                self.b.place_single(Gate::H(q));
            }
        }
    }

    fn phases(&mut self) {
        for q in 0..self.frontier.len() {
            let v = self.frontier[q];
            if self.d.is_boundary(v) || self.d.phase(v).is_zero() {
                continue;
            }
            let p = self.d.phase(v).clone();
            self.d.set_phase(v, Phase::zero());
            self.b.place_single(Gate::Rz(q, p));
        }
    }

    fn czs(&mut self) {
        let mut pairs = Vec::new();
        for q in 0..self.frontier.len() {
            for r in q + 1..self.frontier.len() {
                let (v, w) = (self.frontier[q], self.frontier[r]);
                if !self.d.is_boundary(v) && self.d.edge_type(v, w) == Some(EdgeType::Hadamard) {
                    self.d.disconnect(v, w);
                    pairs.push((q, r));
                }
            }
        }
        if !pairs.is_empty() {
            self.b.place_cz_layer(&pairs);
        }
    }

    /// Detach frontier vertices from inputs unless they are plain wires.
    fn buffer_inputs(&mut self) {
        for q in 0..self.frontier.len() {
            let v = self.frontier[q];
            if self.d.is_boundary(v) || self.finished(q).is_some() {
                continue;
            }
            for w in self.d.neighbors(v) {
                if !self.d.is_input(w) {
                    continue;
                }
                self.d.disconnect(v, w);
                let x = self.d.add_vertex(VertexKind::Z, Phase::zero());
                let y = self.d.add_vertex(VertexKind::Z, Phase::zero());
                self.d.add_edge(v, x, EdgeType::Hadamard);
                self.d.add_edge(x, y, EdgeType::Hadamard);
                self.d.add_edge(y, w, EdgeType::Plain);
            }
        }
    }

    fn active_rows(&self) -> Vec<usize> {
        (0..self.frontier.len()).filter(|&q| self.finished(q).is_none()).collect()
    }

    fn left_neighbors(&self, q: usize) -> Vec<VertexId> {
        let o = self.outputs[q];
        self.d.neighbors(self.frontier[q]).into_iter().filter(|&w| w != o).collect()
    }

    fn advance(&mut self, rows: &[usize]) -> bool {
        let mut used = BTreeSet::new();
        let mut any = false;
        for &q in rows {
            let nb = self.left_neighbors(q);
            let [w] = nb[..] else { continue };
            if self.d.is_boundary(w) || self.d.is_axle(w) || !used.insert(w) {
                continue;
            }
            let (o, v) = (self.outputs[q], self.frontier[q]);
            self.d.remove_vertex(v);
            self.d.add_edge(w, o, EdgeType::Plain);
            self.frontier[q] = w;
            self.b.place_single(Gate::H(q));
            any = true;
        }
        any
    }

    fn gadget_pivot(&mut self, rows: &[usize]) -> Result<bool, ExtractError> {
        for &q in rows {
            let v = self.frontier[q];
            let Some(w) = self.left_neighbors(q).into_iter().find(|&w| self.d.is_axle(w)) else {
                continue;
            };
            let o = self.outputs[q];
            self.d.disconnect(v, o);
            let x = self.d.add_vertex(VertexKind::Z, Phase::zero());
            self.d.add_edge(v, x, EdgeType::Hadamard);
            self.d.add_edge(x, o, EdgeType::Hadamard);
            pivot_at(&mut self.d, v, w).map_err(|_| ExtractError::Stuck)?;
            self.frontier[q] = x;
            return Ok(true);
        }
        Ok(false)
    }

    fn frontier_matrix(&self, rows: &[usize]) -> (Gf2Matrix, Vec<VertexId>) {
        let cols: Vec<VertexId> =
            rows.iter().flat_map(|&q| self.left_neighbors(q)).collect::<BTreeSet<_>>().into_iter().collect();
        let mut m = Gf2Matrix::zeros(rows.len(), cols.len());
        for (i, &q) in rows.iter().enumerate() {
            for w in self.left_neighbors(q) {
                let j = cols.binary_search(&w).expect("column collected above");
                m.set(i, j, true);
            }
        }
        (m, cols)
    }

    fn layer_ops(&mut self, m: &Gf2Matrix) -> Result<Vec<RowOp>, ExtractError> {
        Ok(match self.opts.strategy {
            Strategy::Patel => m.clone().block_gauss(default_block_size(m.rows()), true).0,
            Strategy::Fanout => frontier_lp::reduction_to_cnots(&frontier_lp::fanout_fallback(m)?)?,
            Strategy::Lp => {
                let exact = m.rows() <= self.opts.lp_max_size.min(frontier_lp::EXACT_ROW_LIMIT);
                let r = match exact {
                    true => match frontier_lp::solve_exact(&frontier_lp::encode(m), self.opts.lp_node_budget) {
                        Err(LpError::BudgetExceeded(_)) => None,
                        other => Some(other?),
                    },
                    false => None,
                };
                let r = match r {
                    Some(r) => r,
                    None => {
                        self.report.lp_fallbacks += 1;
                        frontier_lp::fanout_fallback(m)?
                    }
                };
                frontier_lp::reduction_to_cnots(&r)?
            }
        })
    }

    /// `r_i ← r_i ⊕ r_j` on the diagram, extracted as `CNOT(q_i, q_j)`.
    fn apply_row_ops(&mut self, rows: &[usize], ops: &[RowOp]) {
        for &(i, j) in ops {
            let (vi, vj) = (self.frontier[rows[i]], self.frontier[rows[j]]);
            for w in self.left_neighbors(rows[j]) {
                self.d.toggle_hadamard(vi, w);
            }
            let _ = vj;
            self.b.place_cnot(rows[i], rows[j]);
        }
    }

    fn permutation(&mut self) -> Result<(), ExtractError> {
        let n = self.frontier.len();
        let mut p = Gf2Matrix::zeros(n, n);
        for q in 0..n {
            let i = self.finished(q).ok_or(ExtractError::Stuck)?;
            p.set(q, i, true);
        }
        if p.is_identity() {
            return Ok(());
        }
        let ops = patel_markov_hayes(&p, default_block_size(n)).map_err(|_| ExtractError::Stuck)?;
        for (i, j) in ops {
            self.b.place_cnot(j, i);
        }
        Ok(())
    }

    fn run(mut self) -> Result<ExtractReport, ExtractError> {
        let limit = 10 * self.d.vertex_count() + 10;
        loop {
            self.report.rounds += 1;
            if self.report.rounds > limit {
                return Err(ExtractError::Runaway(limit));
            }
            self.output_hadamards();
            self.phases();
            self.czs();
            self.buffer_inputs();
            let rows = self.active_rows();
            if rows.is_empty() {
                break;
            }
            if self.advance(&rows) {
                continue;
            }
            if self.gadget_pivot(&rows)? {
                continue;
            }
            let (m, _) = self.frontier_matrix(&rows);
            if self.opts.log_frontiers {
                self.report.frontiers.push(m.clone());
            }
            let ops = self.layer_ops(&m)?;
            let mut after = m.clone();
            after.apply_ops(&ops).map_err(|_| ExtractError::Stuck)?;
            if (0..after.rows()).all(|i| after.row_weight(i) != 1) {
                return Err(ExtractError::Stuck);
            }
            self.report.cnot_layers += 1;
            self.apply_row_ops(&rows, &ops);
        }
        self.permutation()?;
        self.report.gates = self.b.finish();
        Ok(self.report)
    }
}

/// Extract a circuit over `{H, RZ, RX, GMS}` from a graph-like diagram
/// with gflow.
pub fn extract_with_report(d: &ZxDiagram, opts: &ExtractOptions) -> Result<ExtractReport, ExtractError> {
    let (inputs, outputs) = (d.inputs().to_vec(), d.outputs().to_vec());
    if inputs.len() != outputs.len() {
        return Err(ExtractError::Arity { inputs: inputs.len(), outputs: outputs.len() });
    }
    let mut frontier = Vec::with_capacity(outputs.len());
    for &o in &outputs {
        match d.neighbors(o)[..] {
            [v] if d.edge(o, v).total() == 1 => frontier.push(v),
            _ => return Err(ExtractError::Boundary(o)),
        }
    }
    let ex = Extractor {
        d: d.clone(),
        opts,
        b: GmsBuilder::new(outputs.len()),
        outputs,
        inputs,
        frontier,
        report: ExtractReport::default(),
    };
    ex.run()
}

pub fn extract_circuit(d: &ZxDiagram, opts: &ExtractOptions) -> Result<Circuit, ExtractError> {
    let r = extract_with_report(d, opts)?;
    Ok(Circuit::with_gates(d.outputs().len(), r.gates).expect("extracted gates stay in range"))
}
