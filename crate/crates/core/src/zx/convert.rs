use std::collections::BTreeSet;
use std::fmt;

use crate::circuit::{Circuit, Gate};
use crate::phase::Phase;

use super::{EdgeType, VertexId, VertexKind, ZxDiagram};

/// Builds a diagram wire by wire, tracking a pending Hadamard per qubit so
/// that consecutive `H` gates cancel without creating spiders.
struct Builder {
    d: ZxDiagram,
    last: Vec<VertexId>,
    pending: Vec<EdgeType>,
}

impl Builder {
    fn spider(&mut self, q: usize, kind: VertexKind, phase: Phase) -> VertexId {
        let v = self.d.add_vertex(kind, phase);
        self.d.add_edge(self.last[q], v, self.pending[q]);
        self.last[q] = v;
        self.pending[q] = EdgeType::Plain;
        v
    }

    fn h(&mut self, q: usize) {
        self.pending[q] = self.pending[q].toggled();
    }

    fn cnot(&mut self, c: usize, t: usize) {
        let a = self.spider(c, VertexKind::Z, Phase::zero());
        let b = self.spider(t, VertexKind::X, Phase::zero());
        self.d.add_edge(a, b, EdgeType::Plain);
    }

    fn xx(&mut self, a: usize, b: usize, angle: &Phase) {
        self.h(a);
        self.h(b);
        self.cnot(a, b);
        self.spider(b, VertexKind::Z, angle.clone());
        self.cnot(a, b);
        self.h(a);
        self.h(b);
    }

    fn gate(&mut self, g: &Gate) {
        match g {
            Gate::H(q) => self.h(*q),
            Gate::Rz(q, p) => {
                self.spider(*q, VertexKind::Z, p.clone());
            }
            Gate::Rx(q, p) => {
                self.spider(*q, VertexKind::X, p.clone());
            }
            Gate::R { qubit, theta, phi } => {
                self.spider(*qubit, VertexKind::Z, -phi);
                self.spider(*qubit, VertexKind::X, theta.clone());
                self.spider(*qubit, VertexKind::Z, phi.clone());
            }
            Gate::Z(q) => {
                self.spider(*q, VertexKind::Z, Phase::pi());
            }
            Gate::X(q) => {
                self.spider(*q, VertexKind::X, Phase::pi());
            }
            Gate::S(q) => {
                self.spider(*q, VertexKind::Z, Phase::frac_pi(1, 2));
            }
            Gate::Sdg(q) => {
                self.spider(*q, VertexKind::Z, Phase::frac_pi(3, 2));
            }
            Gate::T(q) => {
                self.spider(*q, VertexKind::Z, Phase::frac_pi(1, 4));
            }
            Gate::Tdg(q) => {
                self.spider(*q, VertexKind::Z, Phase::frac_pi(7, 4));
            }
            Gate::Cnot { control, target } => self.cnot(*control, *target),
            Gate::Cz(a, b) => {
                let u = self.spider(*a, VertexKind::Z, Phase::zero());
                let v = self.spider(*b, VertexKind::Z, Phase::zero());
                self.d.add_edge(u, v, EdgeType::Hadamard);
            }
            Gate::Xx(a, b, p) => self.xx(*a, *b, p),
            Gate::Swap(a, b) => {
                self.cnot(*a, *b);
                self.cnot(*b, *a);
                self.cnot(*a, *b);
            }
            Gate::Gms(layer) => {
                for (a, b) in layer.pairs() {
                    self.xx(a, b, layer.angle());
                }
            }
        }
    }
}

/// Diagram of a circuit, gate by gate, with one input and one output per
/// qubit. Not graph-like: X spiders and plain edges remain.
pub fn circuit_to_diagram(c: &Circuit) -> ZxDiagram {
    let n = c.qubit_count();
    let mut d = ZxDiagram::new();
    let inputs: Vec<VertexId> = (0..n).map(|_| d.add_input()).collect();
    let mut b = Builder { d, last: inputs, pending: vec![EdgeType::Plain; n] };
    for g in c.gates() {
        b.gate(g);
    }
    for q in 0..n {
        let o = b.d.add_output();
        b.d.add_edge(b.last[q], o, b.pending[q]);
    }
    b.d
}

fn colour_change(d: &mut ZxDiagram) {
    let xs: Vec<VertexId> = d.vertex_ids().filter(|&v| d.kind(v) == VertexKind::X).collect();
    for v in xs {
        for w in d.neighbors(v) {
            let e = d.edge(v, w);
            d.disconnect(v, w);
            for _ in 0..e.plain {
                d.add_edge(v, w, EdgeType::Hadamard);
            }
            for _ in 0..e.hadamard {
                d.add_edge(v, w, EdgeType::Plain);
            }
        }
        d.set_kind(v, VertexKind::Z);
    }
}

/// Merge spider `v` into spider `u` along a plain edge.
fn fuse(d: &mut ZxDiagram, u: VertexId, v: VertexId) {
    let p = d.phase(v).clone();
    d.add_to_phase(u, &p);
    let between = d.edge(u, v);
    // remaining edges between u and v become loops on u
    let loops_h = between.hadamard + d.edge(v, v).hadamard;
    for (w, e) in d.incident(v).collect::<Vec<_>>() {
        if w == u || w == v {
            continue;
        }
        for _ in 0..e.plain {
            d.add_edge(u, w, EdgeType::Plain);
        }
        for _ in 0..e.hadamard {
            d.add_edge(u, w, EdgeType::Hadamard);
        }
    }
    d.remove_vertex(v);
    if loops_h % 2 == 1 {
        d.add_to_phase(u, &Phase::pi());
    }
}

fn spiders_joined_plain(d: &ZxDiagram) -> Option<(VertexId, VertexId)> {
    for u in d.vertex_ids() {
        if d.kind(u) != VertexKind::Z {
            continue;
        }
        for (w, e) in d.incident(u) {
            if w != u && e.plain > 0 && d.kind(w) == VertexKind::Z {
                return Some((u, w));
            }
        }
    }
    None
}

fn clean_loops_and_parallels(d: &mut ZxDiagram) {
    let spiders: Vec<VertexId> = d.vertex_ids().filter(|&v| !d.is_boundary(v)).collect();
    for &v in &spiders {
        let lp = d.edge(v, v);
        if lp.total() > 0 {
            d.disconnect(v, v);
            if lp.hadamard % 2 == 1 {
                d.add_to_phase(v, &Phase::pi());
            }
        }
    }
    for &v in &spiders {
        for w in d.neighbors(v) {
            if w <= v || d.is_boundary(w) {
                continue;
            }
            let e = d.edge(v, w);
            if e.plain == 0 && e.hadamard > 1 {
                d.disconnect(v, w);
                if e.hadamard % 2 == 1 {
                    d.add_edge(v, w, EdgeType::Hadamard);
                }
            }
        }
    }
}

fn fix_boundaries(d: &mut ZxDiagram) {
    let boundaries: Vec<VertexId> = d.inputs().iter().chain(d.outputs()).copied().collect();
    let mut done = BTreeSet::new();
    for &b in &boundaries {
        if done.contains(&b) {
            continue;
        }
        let nbrs = d.neighbors(b);
        let [w] = nbrs[..] else { continue };
        let t = match d.edge_type(b, w) {
            Some(t) => t,
            None => continue,
        };
        if d.is_boundary(w) {
            // bare wire between two boundaries
            done.insert(w);
            d.disconnect(b, w);
            let z1 = d.add_vertex(VertexKind::Z, Phase::zero());
            d.add_edge(b, z1, EdgeType::Plain);
            let z2 = d.add_vertex(VertexKind::Z, Phase::zero());
            d.add_edge(z1, z2, EdgeType::Hadamard);
            match t {
                EdgeType::Hadamard => d.add_edge(z2, w, EdgeType::Plain),
                EdgeType::Plain => {
                    let z3 = d.add_vertex(VertexKind::Z, Phase::zero());
                    d.add_edge(z2, z3, EdgeType::Hadamard);
                    d.add_edge(z3, w, EdgeType::Plain);
                }
            }
        } else if t == EdgeType::Hadamard {
            d.disconnect(b, w);
            let z = d.add_vertex(VertexKind::Z, Phase::zero());
            d.add_edge(b, z, EdgeType::Plain);
            d.add_edge(z, w, EdgeType::Hadamard);
        }
    }
    let spiders: Vec<VertexId> = d.vertex_ids().filter(|&v| !d.is_boundary(v)).collect();
    for v in spiders {
        let bs: Vec<VertexId> = d.neighbors(v).into_iter().filter(|&w| d.is_boundary(w)).collect();
        for &b in bs.iter().skip(1) {
            d.disconnect(v, b);
            let z1 = d.add_vertex(VertexKind::Z, Phase::zero());
            let z2 = d.add_vertex(VertexKind::Z, Phase::zero());
            d.add_edge(v, z1, EdgeType::Hadamard);
            d.add_edge(z1, z2, EdgeType::Hadamard);
            d.add_edge(z2, b, EdgeType::Plain);
        }
    }
}

/// Graph-like form of a diagram: colour change of X spiders, fusion along
/// plain edges, removal of self-loops and parallel Hadamard pairs, and
/// buffer spiders wherever a boundary would otherwise be attached by a
/// Hadamard edge, to another boundary, or share a spider with another
/// boundary.
pub fn to_graph_like(d: &ZxDiagram) -> ZxDiagram {
    let mut d = d.clone();
    colour_change(&mut d);
    while let Some((u, v)) = spiders_joined_plain(&d) {
        fuse(&mut d, u, v);
    }
    clean_loops_and_parallels(&mut d);
    fix_boundaries(&mut d);
    d
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotZSpider(VertexId),
    PlainEdge(VertexId, VertexId),
    SelfLoop(VertexId),
    ParallelEdges(VertexId, VertexId),
    BoundaryEdge(VertexId),
    BoundaryDegree(VertexId),
    BoundaryMultiplicity(VertexId),
    DuplicateBoundary(VertexId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotZSpider(v) => write!(f, "not a Z spider: {v}"),
            Violation::PlainEdge(a, b) => write!(f, "plain edge between spiders {a} and {b}"),
            Violation::SelfLoop(v) => write!(f, "self-loop at {v}"),
            Violation::ParallelEdges(a, b) => write!(f, "parallel edges between {a} and {b}"),
            Violation::BoundaryEdge(b) => write!(f, "boundary {b} not attached to a spider by a plain edge"),
            Violation::BoundaryDegree(b) => write!(f, "boundary {b} must have exactly one edge"),
            Violation::BoundaryMultiplicity(v) => write!(f, "boundary multiplicity: spider {v} touches several boundaries"),
            Violation::DuplicateBoundary(b) => write!(f, "duplicate boundary {b}"),
        }
    }
}

/// Every way `d` departs from graph-like form; empty iff graph-like.
pub fn validate_graph_like(d: &ZxDiagram) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    for &b in d.inputs().iter().chain(d.outputs()) {
        if !seen.insert(b) {
            out.push(Violation::DuplicateBoundary(b));
        }
    }
    for v in d.vertex_ids() {
        if d.is_boundary(v) {
            let total: u32 = d.incident(v).map(|(_, e)| e.total()).sum();
            if total != 1 {
                out.push(Violation::BoundaryDegree(v));
            } else {
                let (w, e) = d.incident(v).next().unwrap();
                if d.is_boundary(w) || e.plain != 1 {
                    out.push(Violation::BoundaryEdge(v));
                }
            }
            continue;
        }
        if d.kind(v) != VertexKind::Z {
            out.push(Violation::NotZSpider(v));
        }
        let mut boundaries = 0;
        for (w, e) in d.incident(v) {
            if w == v {
                out.push(Violation::SelfLoop(v));
                continue;
            }
            if d.is_boundary(w) {
                boundaries += 1;
                continue;
            }
            if w < v {
                continue;
            }
            if e.total() > 1 {
                out.push(Violation::ParallelEdges(v, w));
            }
            if e.plain > 0 {
                out.push(Violation::PlainEdge(v, w));
            }
        }
        if boundaries > 1 {
            out.push(Violation::BoundaryMultiplicity(v));
        }
    }
    out
}
