//! ZX-diagrams.
//!
//! The store is a multigraph so that intermediate diagrams (before graph-like
//! normalisation) can hold parallel edges and self-loops. Rewrites on
//! graph-like diagrams go through [`ZxDiagram::toggle_hadamard`], which keeps
//! at most one Hadamard edge between two spiders.

mod convert;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::phase::Phase;

pub use convert::{circuit_to_diagram, to_graph_like, validate_graph_like, Violation};

pub type VertexId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    Boundary,
    Z,
    X,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeType {
    Plain,
    Hadamard,
}

impl EdgeType {
    pub fn toggled(self) -> EdgeType {
        match self {
            EdgeType::Plain => EdgeType::Hadamard,
            EdgeType::Hadamard => EdgeType::Plain,
        }
    }
}

/// Measurement plane of a non-output vertex in the labelled open graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Plane {
    XY,
    YZ,
    XZ,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub kind: VertexKind,
    pub phase: Phase,
}

/// Edge multiplicities between two vertices.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    pub plain: u32,
    pub hadamard: u32,
}

impl EdgeSet {
    pub fn total(&self) -> u32 {
        self.plain + self.hadamard
    }

    pub fn count(&self, t: EdgeType) -> u32 {
        match t {
            EdgeType::Plain => self.plain,
            EdgeType::Hadamard => self.hadamard,
        }
    }

    /// The single edge type, if exactly one edge is present.
    pub fn single(&self) -> Option<EdgeType> {
        match (self.plain, self.hadamard) {
            (1, 0) => Some(EdgeType::Plain),
            (0, 1) => Some(EdgeType::Hadamard),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ZxDiagram {
    vertices: BTreeMap<VertexId, Vertex>,
    adj: BTreeMap<VertexId, BTreeMap<VertexId, EdgeSet>>,
    inputs: Vec<VertexId>,
    outputs: Vec<VertexId>,
    next_id: VertexId,
}

impl ZxDiagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, kind: VertexKind, phase: Phase) -> VertexId {
        let id = self.next_id;
        self.next_id += 1;
        self.vertices.insert(id, Vertex { kind, phase });
        self.adj.insert(id, BTreeMap::new());
        id
    }

    pub fn add_input(&mut self) -> VertexId {
        let v = self.add_vertex(VertexKind::Boundary, Phase::zero());
        self.inputs.push(v);
        v
    }

    pub fn add_output(&mut self) -> VertexId {
        let v = self.add_vertex(VertexKind::Boundary, Phase::zero());
        self.outputs.push(v);
        v
    }

    pub fn set_inputs(&mut self, inputs: Vec<VertexId>) {
        self.inputs = inputs;
    }

    pub fn set_outputs(&mut self, outputs: Vec<VertexId>) {
        self.outputs = outputs;
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if let Some(nbrs) = self.adj.remove(&v) {
            for w in nbrs.keys() {
                if *w != v {
                    if let Some(m) = self.adj.get_mut(w) {
                        m.remove(&v);
                    }
                }
            }
        }
        self.vertices.remove(&v);
        self.inputs.retain(|&x| x != v);
        self.outputs.retain(|&x| x != v);
    }

    pub fn add_edge(&mut self, a: VertexId, b: VertexId, t: EdgeType) {
        self.adjust_edge(a, b, t, 1);
    }

    /// Change the multiplicity of edges of type `t` between `a` and `b` by `delta`.
    fn adjust_edge(&mut self, a: VertexId, b: VertexId, t: EdgeType, delta: i64) {
        let apply = |e: &mut EdgeSet| {
            let slot = match t {
                EdgeType::Plain => &mut e.plain,
                EdgeType::Hadamard => &mut e.hadamard,
            };
            *slot = (*slot as i64 + delta).max(0) as u32;
        };
        {
            let e = self.adj.get_mut(&a).expect("vertex").entry(b).or_default();
            apply(e);
            if e.total() == 0 {
                self.adj.get_mut(&a).unwrap().remove(&b);
            }
        }
        if a != b {
            let e = self.adj.get_mut(&b).expect("vertex").entry(a).or_default();
            apply(e);
            if e.total() == 0 {
                self.adj.get_mut(&b).unwrap().remove(&a);
            }
        }
    }

    pub fn remove_edge(&mut self, a: VertexId, b: VertexId, t: EdgeType) {
        self.adjust_edge(a, b, t, -1);
    }

    /// Drop every edge between `a` and `b`.
    pub fn disconnect(&mut self, a: VertexId, b: VertexId) {
        self.adj.get_mut(&a).expect("vertex").remove(&b);
        self.adj.get_mut(&b).expect("vertex").remove(&a);
    }

    /// Set the edges between `a` and `b` to exactly one edge of type `t`.
    pub fn set_edge(&mut self, a: VertexId, b: VertexId, t: EdgeType) {
        self.disconnect(a, b);
        self.add_edge(a, b, t);
    }

    /// Add or remove the Hadamard edge between two spiders of a graph-like
    /// diagram.
    pub fn toggle_hadamard(&mut self, a: VertexId, b: VertexId) {
        debug_assert_ne!(a, b);
        if self.edge(a, b).hadamard > 0 {
            self.disconnect(a, b);
        } else {
            self.add_edge(a, b, EdgeType::Hadamard);
        }
    }

    pub fn edge(&self, a: VertexId, b: VertexId) -> EdgeSet {
        self.adj.get(&a).and_then(|m| m.get(&b)).copied().unwrap_or_default()
    }

    pub fn connected(&self, a: VertexId, b: VertexId) -> bool {
        self.edge(a, b).total() > 0
    }

    /// The single edge type between `a` and `b`, if exactly one edge joins them.
    pub fn edge_type(&self, a: VertexId, b: VertexId) -> Option<EdgeType> {
        self.edge(a, b).single()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[&v]
    }

    pub fn kind(&self, v: VertexId) -> VertexKind {
        self.vertices[&v].kind
    }

    pub fn set_kind(&mut self, v: VertexId, k: VertexKind) {
        self.vertices.get_mut(&v).expect("vertex").kind = k;
    }

    pub fn phase(&self, v: VertexId) -> &Phase {
        &self.vertices[&v].phase
    }

    pub fn set_phase(&mut self, v: VertexId, p: Phase) {
        self.vertices.get_mut(&v).expect("vertex").phase = p;
    }

    pub fn add_to_phase(&mut self, v: VertexId, p: &Phase) {
        let slot = &mut self.vertices.get_mut(&v).expect("vertex").phase;
        *slot = &*slot + p;
    }

    pub fn vertex_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn spider_count(&self) -> usize {
        self.vertices.values().filter(|v| v.kind != VertexKind::Boundary).count()
    }

    /// Number of edges, counting multiplicity, self-loops once.
    pub fn edge_count(&self) -> usize {
        let mut n = 0;
        for (a, m) in &self.adj {
            for (b, e) in m {
                if a <= b {
                    n += e.total() as usize;
                }
            }
        }
        n
    }

    /// Neighbours in ascending order, excluding `v` itself.
    pub fn neighbors(&self, v: VertexId) -> Vec<VertexId> {
        self.adj[&v].keys().copied().filter(|&w| w != v).collect()
    }

    pub fn neighbor_set(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.adj[&v].keys().copied().filter(|&w| w != v).collect()
    }

    /// Edges at `v` including self-loops, with multiplicities.
    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = (VertexId, EdgeSet)> + '_ {
        self.adj[&v].iter().map(|(w, e)| (*w, *e))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[&v].keys().filter(|&&w| w != v).count()
    }

    pub fn inputs(&self) -> &[VertexId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[VertexId] {
        &self.outputs
    }

    pub fn is_boundary(&self, v: VertexId) -> bool {
        self.kind(v) == VertexKind::Boundary
    }

    pub fn is_input(&self, v: VertexId) -> bool {
        self.inputs.contains(&v)
    }

    pub fn is_output(&self, v: VertexId) -> bool {
        self.outputs.contains(&v)
    }

    /// Spider with no boundary neighbour.
    pub fn is_interior(&self, v: VertexId) -> bool {
        !self.is_boundary(v) && self.adj[&v].keys().all(|&w| !self.is_boundary(w))
    }

    pub fn touches_boundary(&self, v: VertexId) -> bool {
        self.adj[&v].keys().any(|&w| w != v && self.is_boundary(w))
    }

    pub fn touches_input(&self, v: VertexId) -> bool {
        self.adj[&v].keys().any(|&w| self.is_input(w))
    }

    pub fn touches_output(&self, v: VertexId) -> bool {
        self.adj[&v].keys().any(|&w| self.is_output(w))
    }

    /// Leaf of a phase gadget whose axle is `w`: `w` is an interior spider
    /// with an exact 0 or π phase, at least one other neighbour, and a
    /// degree-one spider neighbour (the lowest-numbered one is the leaf).
    pub fn gadget_leaf(&self, w: VertexId) -> Option<VertexId> {
        if self.is_boundary(w) || !self.phase(w).is_pauli() || self.degree(w) < 2 || !self.is_interior(w) {
            return None;
        }
        self.neighbors(w).into_iter().find(|&l| {
            !self.is_boundary(l) && self.degree(l) == 1 && self.edge(w, l).hadamard > 0
        })
    }

    pub fn is_axle(&self, w: VertexId) -> bool {
        self.gadget_leaf(w).is_some()
    }

    /// Axle of the gadget whose leaf is `l`.
    pub fn gadget_axle(&self, l: VertexId) -> Option<VertexId> {
        if self.is_boundary(l) || self.degree(l) != 1 {
            return None;
        }
        let w = self.neighbors(l)[0];
        (self.gadget_leaf(w) == Some(l)).then_some(w)
    }

    /// Measurement plane of a spider: `YZ` for gadget axles, `XY` otherwise.
    /// Boundaries, output-adjacent spiders and gadget leaves have none.
    pub fn plane(&self, v: VertexId) -> Option<Plane> {
        if self.is_boundary(v) || self.touches_output(v) || self.gadget_axle(v).is_some() {
            None
        } else if self.is_axle(v) {
            Some(Plane::YZ)
        } else {
            Some(Plane::XY)
        }
    }

    /// Measurement angle of a labelled vertex: the spider phase for `XY`,
    /// the (sign-adjusted) leaf phase for `YZ`.
    pub fn gadget_phase(&self, axle: VertexId) -> Option<Phase> {
        let l = self.gadget_leaf(axle)?;
        let p = self.phase(l).clone();
        Some(if self.phase(axle).is_zero() { p } else { -p })
    }

    /// The labelled open graph underlying a graph-like diagram: boundary
    /// vertices and gadget leaves removed, inputs/outputs being the spiders
    /// adjacent to the diagram's inputs/outputs.
    pub fn open_graph(&self) -> LabelledOpenGraph {
        let mut g = LabelledOpenGraph::default();
        for v in self.vertex_ids() {
            if self.is_boundary(v) || self.gadget_axle(v).is_some() {
                continue;
            }
            g.vertices.insert(v);
            if self.touches_input(v) {
                g.inputs.insert(v);
            }
            if self.touches_output(v) {
                g.outputs.insert(v);
            } else {
                g.planes.insert(v, self.plane(v).unwrap_or(Plane::XY));
            }
        }
        for &v in &g.vertices.clone() {
            let nbrs: BTreeSet<VertexId> =
                self.neighbors(v).into_iter().filter(|w| g.vertices.contains(w)).collect();
            g.adj.insert(v, nbrs);
        }
        g
    }

    /// One line per vertex: `id kind phase plane neighbours`, where each
    /// neighbour is suffixed `h` (Hadamard) or `p` (plain), repeated per edge.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (v, vx) in &self.vertices {
            let kind = match vx.kind {
                VertexKind::Boundary if self.is_input(*v) => "in",
                VertexKind::Boundary if self.is_output(*v) => "out",
                VertexKind::Boundary => "b",
                VertexKind::Z => "Z",
                VertexKind::X => "X",
            };
            let plane = match self.plane(*v) {
                Some(Plane::XY) => "XY",
                Some(Plane::YZ) => "YZ",
                Some(Plane::XZ) => "XZ",
                None => "-",
            };
            let _ = write!(s, "{v} {kind} {} {plane}", vx.phase);
            for (w, e) in &self.adj[v] {
                for _ in 0..e.plain {
                    let _ = write!(s, " {w}p");
                }
                for _ in 0..e.hadamard {
                    let _ = write!(s, " {w}h");
                }
            }
            s.push('\n');
        }
        s
    }
}

/// `(G, I, O, λ)`: a simple graph with input and output subsets and a
/// measurement plane on every non-output vertex.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabelledOpenGraph {
    pub vertices: BTreeSet<VertexId>,
    pub adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    pub inputs: BTreeSet<VertexId>,
    pub outputs: BTreeSet<VertexId>,
    pub planes: BTreeMap<VertexId, Plane>,
}

impl LabelledOpenGraph {
    /// Build from an edge list; every vertex not in `outputs` gets plane
    /// `XY` unless listed in `planes`.
    pub fn from_edges(
        vertices: impl IntoIterator<Item = VertexId>,
        edges: &[(VertexId, VertexId)],
        inputs: impl IntoIterator<Item = VertexId>,
        outputs: impl IntoIterator<Item = VertexId>,
        planes: impl IntoIterator<Item = (VertexId, Plane)>,
    ) -> Self {
        let mut g = LabelledOpenGraph {
            vertices: vertices.into_iter().collect(),
            inputs: inputs.into_iter().collect(),
            outputs: outputs.into_iter().collect(),
            ..Default::default()
        };
        for &v in &g.vertices {
            g.adj.insert(v, BTreeSet::new());
        }
        for &(a, b) in edges {
            g.adj.get_mut(&a).expect("edge endpoint").insert(b);
            g.adj.get_mut(&b).expect("edge endpoint").insert(a);
        }
        let explicit: BTreeMap<VertexId, Plane> = planes.into_iter().collect();
        for &v in &g.vertices {
            if !g.outputs.contains(&v) {
                g.planes.insert(v, explicit.get(&v).copied().unwrap_or(Plane::XY));
            }
        }
        g
    }

    pub fn neighbors(&self, v: VertexId) -> &BTreeSet<VertexId> {
        &self.adj[&v]
    }

    pub fn non_outputs(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied().filter(|v| !self.outputs.contains(v))
    }
}
