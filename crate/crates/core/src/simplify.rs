//! Rewrites on graph-like diagrams: local complementation, pivoting,
//! pivoting onto a phase gadget, identity removal and gadget fusion.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::phase::Phase;
use crate::zx::{EdgeType, VertexId, VertexKind, ZxDiagram};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("vertex {0} is not an interior spider")]
    NotInterior(VertexId),
    #[error("vertices {0} and {1} are not adjacent")]
    NotAdjacent(VertexId, VertexId),
    #[error("vertex {0} needs an exact phase of ±π/2")]
    NotProperClifford(VertexId),
    #[error("vertex {0} needs an exact phase of 0 or π")]
    NotPauli(VertexId),
    #[error("vertex {0} is part of a phase gadget")]
    Gadget(VertexId),
    #[error("vertex {0} is not an identity spider")]
    NotIdentity(VertexId),
}

/// One rule application, for tracing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rewrite {
    pub rule: &'static str,
    pub vertices: Vec<VertexId>,
}

impl fmt::Display for Rewrite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.rule)?;
        for v in &self.vertices {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

fn require_interior(d: &ZxDiagram, v: VertexId) -> Result<(), RewriteError> {
    if d.contains(v) && d.kind(v) == VertexKind::Z && d.is_interior(v) {
        Ok(())
    } else {
        Err(RewriteError::NotInterior(v))
    }
}

/// Remove `v` (phase ±π/2), complement its neighbourhood and subtract its
/// phase from every neighbour.
pub fn local_complement_at(d: &mut ZxDiagram, v: VertexId) -> Result<(), RewriteError> {
    require_interior(d, v)?;
    if !d.phase(v).is_proper_clifford() {
        return Err(RewriteError::NotProperClifford(v));
    }
    let a = d.phase(v).clone();
    let nbrs = d.neighbors(v);
    for (k, &x) in nbrs.iter().enumerate() {
        for &y in &nbrs[k + 1..] {
            d.toggle_hadamard(x, y);
        }
        d.add_to_phase(x, &-&a);
    }
    d.remove_vertex(v);
    Ok(())
}

/// Pivot along the edge `u–v` (both phases 0 or π).
pub fn pivot_at(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<(), RewriteError> {
    require_interior(d, u)?;
    require_interior(d, v)?;
    if !d.connected(u, v) {
        return Err(RewriteError::NotAdjacent(u, v));
    }
    for w in [u, v] {
        if !d.phase(w).is_pauli() {
            return Err(RewriteError::NotPauli(w));
        }
    }
    pivot_unchecked(d, u, v);
    Ok(())
}

fn pivot_unchecked(d: &mut ZxDiagram, u: VertexId, v: VertexId) {
    let nu = d.neighbor_set(u);
    let nv = d.neighbor_set(v);
    let a: Vec<VertexId> = nu.iter().copied().filter(|x| *x != v && !nv.contains(x)).collect();
    let b: Vec<VertexId> = nv.iter().copied().filter(|x| *x != u && !nu.contains(x)).collect();
    let c: Vec<VertexId> = nu.intersection(&nv).copied().collect();
    for (s, t) in [(&a, &b), (&a, &c), (&b, &c)] {
        for &x in s {
            for &y in t {
                d.toggle_hadamard(x, y);
            }
        }
    }
    let (pu, pv) = (d.phase(u).clone(), d.phase(v).clone());
    let both = &(&pu + &pv) + &Phase::pi();
    for &x in &a {
        d.add_to_phase(x, &pv);
    }
    for &x in &b {
        d.add_to_phase(x, &pu);
    }
    for &x in &c {
        d.add_to_phase(x, &both);
    }
    d.remove_vertex(u);
    d.remove_vertex(v);
}

/// Move the phase of `v` onto a new gadget, then pivot along `u–v`.
/// Returns `false` (and leaves the diagram alone) when `v` is already a
/// gadget leaf.
pub fn pivot_gadget(d: &mut ZxDiagram, u: VertexId, v: VertexId) -> Result<bool, RewriteError> {
    if d.contains(v) && d.gadget_axle(v).is_some() {
        return Ok(false);
    }
    require_interior(d, u)?;
    require_interior(d, v)?;
    if !d.connected(u, v) {
        return Err(RewriteError::NotAdjacent(u, v));
    }
    if !d.phase(u).is_pauli() {
        return Err(RewriteError::NotPauli(u));
    }
    for w in [u, v] {
        if d.is_axle(w) {
            return Err(RewriteError::Gadget(w));
        }
    }
    unfuse_gadget(d, v);
    pivot_unchecked(d, u, v);
    Ok(true)
}

/// Split the phase of `v` off onto a new gadget attached to `v`:
/// `v(α)` becomes `v(0) – x(0) – leaf(α)`. Returns `(x, leaf)`.
pub fn unfuse_gadget(d: &mut ZxDiagram, v: VertexId) -> (VertexId, VertexId) {
    let alpha = d.phase(v).clone();
    d.set_phase(v, Phase::zero());
    let x = d.add_vertex(VertexKind::Z, Phase::zero());
    let leaf = d.add_vertex(VertexKind::Z, alpha);
    d.add_edge(v, x, EdgeType::Hadamard);
    d.add_edge(x, leaf, EdgeType::Hadamard);
    (x, leaf)
}

/// Merge spider `b` into spider `a` as if they were joined by a plain edge.
fn fuse_graph_like(d: &mut ZxDiagram, a: VertexId, b: VertexId) {
    let pb = d.phase(b).clone();
    d.add_to_phase(a, &pb);
    if d.connected(a, b) {
        d.add_to_phase(a, &Phase::pi());
    }
    for w in d.neighbors(b) {
        if w == a {
            continue;
        }
        if d.is_boundary(w) {
            d.add_edge(a, w, EdgeType::Plain);
        } else {
            d.toggle_hadamard(a, w);
        }
    }
    d.remove_vertex(b);
}

fn identity_fusion_pair(d: &ZxDiagram, v: VertexId) -> Option<(VertexId, VertexId)> {
    if d.is_boundary(v) || !d.phase(v).is_zero() || d.degree(v) != 2 || !d.is_interior(v) {
        return None;
    }
    let n = d.neighbors(v);
    let (a, b) = (n[0], n[1]);
    let leaf = d.gadget_leaf(v);
    for w in [a, b] {
        if Some(w) != leaf && d.is_axle(w) {
            return None;
        }
    }
    match (d.touches_boundary(a), d.touches_boundary(b)) {
        (true, true) => None,
        (false, true) => Some((b, a)),
        _ => Some((a, b)),
    }
}

/// Remove a phase-free interior spider of degree two and fuse its
/// neighbours.
pub fn remove_identity(d: &mut ZxDiagram, v: VertexId) -> Result<(), RewriteError> {
    let Some((keep, gone)) = identity_fusion_pair(d, v) else {
        return Err(RewriteError::NotIdentity(v));
    };
    d.remove_vertex(v);
    fuse_graph_like(d, keep, gone);
    Ok(())
}

fn gadget_targets(d: &ZxDiagram, axle: VertexId, leaf: VertexId) -> BTreeSet<VertexId> {
    d.neighbor_set(axle).into_iter().filter(|&w| w != leaf).collect()
}

/// One gadget rewrite: drop a gadget of phase 0, turn a gadget of phase π
/// into π on its targets, or merge two gadgets with the same targets.
/// Returns the rewrite applied.
pub fn fuse_gadgets_once(d: &mut ZxDiagram) -> Option<Rewrite> {
    let mut by_targets: BTreeMap<BTreeSet<VertexId>, (VertexId, VertexId)> = BTreeMap::new();
    let axles: Vec<VertexId> = d.vertex_ids().filter(|&w| d.is_axle(w)).collect();
    for w in axles {
        let l = d.gadget_leaf(w).unwrap();
        let targets = gadget_targets(d, w, l);
        if d.phase(l).is_pauli() {
            if !d.phase(l).is_zero() {
                for &t in &targets {
                    d.add_to_phase(t, &Phase::pi());
                }
            }
            d.remove_vertex(w);
            d.remove_vertex(l);
            return Some(Rewrite { rule: "gadget-pauli", vertices: vec![w, l] });
        }
        if let Some(&(w0, l0)) = by_targets.get(&targets) {
            let total = &d.gadget_phase(w0).unwrap() + &d.gadget_phase(w).unwrap();
            let stored = if d.phase(w0).is_zero() { total } else { -total };
            d.set_phase(l0, stored);
            d.remove_vertex(w);
            d.remove_vertex(l);
            return Some(Rewrite { rule: "gadget-fuse", vertices: vec![w0, w] });
        }
        by_targets.insert(targets, (w, l));
    }
    None
}

fn find_identity(d: &ZxDiagram) -> Option<Rewrite> {
    for v in d.vertex_ids() {
        if !d.is_boundary(v) && d.degree(v) == 0 {
            return Some(Rewrite { rule: "scalar", vertices: vec![v] });
        }
        if identity_fusion_pair(d, v).is_some() {
            return Some(Rewrite { rule: "identity", vertices: vec![v] });
        }
    }
    None
}

fn pivot_candidate(d: &ZxDiagram, u: VertexId) -> bool {
    !d.is_boundary(u) && d.phase(u).is_pauli() && d.is_interior(u) && !d.is_axle(u) && d.gadget_axle(u).is_none()
}

fn find_pivot(d: &ZxDiagram) -> Option<(VertexId, VertexId)> {
    for u in d.vertex_ids() {
        if !pivot_candidate(d, u) {
            continue;
        }
        for v in d.neighbors(u) {
            if v > u && pivot_candidate(d, v) {
                return Some((u, v));
            }
        }
    }
    None
}

fn find_local_complement(d: &ZxDiagram) -> Option<VertexId> {
    d.vertex_ids().find(|&v| !d.is_boundary(v) && d.phase(v).is_proper_clifford() && d.is_interior(v))
}

fn find_pivot_gadget(d: &ZxDiagram) -> Option<(VertexId, VertexId)> {
    for u in d.vertex_ids() {
        if !pivot_candidate(d, u) {
            continue;
        }
        for v in d.neighbors(u) {
            if !d.phase(v).is_pauli()
                && d.is_interior(v)
                && d.gadget_axle(v).is_none()
                && !d.is_axle(v)
            {
                return Some((u, v));
            }
        }
    }
    None
}

/// Apply the first applicable rule (identity removal, gadget fusion, pivot,
/// local complementation, gadget pivot) at the lowest vertex id.
pub fn simplify_step(d: &mut ZxDiagram) -> Option<Rewrite> {
    if let Some(r) = find_identity(d) {
        let v = r.vertices[0];
        if r.rule == "scalar" {
            d.remove_vertex(v);
        } else {
            remove_identity(d, v).expect("matched identity");
        }
        return Some(r);
    }
    if let Some(r) = fuse_gadgets_once(d) {
        return Some(r);
    }
    if let Some((u, v)) = find_pivot(d) {
        pivot_unchecked(d, u, v);
        return Some(Rewrite { rule: "pivot", vertices: vec![u, v] });
    }
    if let Some(v) = find_local_complement(d) {
        local_complement_at(d, v).expect("matched local complementation");
        return Some(Rewrite { rule: "lcomp", vertices: vec![v] });
    }
    if let Some((u, v)) = find_pivot_gadget(d) {
        pivot_gadget(d, u, v).expect("matched gadget pivot");
        return Some(Rewrite { rule: "pivot-gadget", vertices: vec![u, v] });
    }
    None
}

/// Rewrite to a fixpoint, returning the result and the applied rules.
pub fn full_simplify_traced(d: &ZxDiagram) -> (ZxDiagram, Vec<Rewrite>) {
    let mut d = d.clone();
    let mut trace = Vec::new();
    let limit = 10 * d.vertex_count() + 10;
    while let Some(r) = simplify_step(&mut d) {
        trace.push(r);
        assert!(trace.len() <= limit, "simplification did not terminate");
    }
    (d, trace)
}

pub fn full_simplify(d: &ZxDiagram) -> ZxDiagram {
    full_simplify_traced(d).0
}

/// Spiders with no boundary neighbour that are not gadget leaves.
pub fn interior_count(d: &ZxDiagram) -> usize {
    d.vertex_ids()
        .filter(|&v| !d.is_boundary(v) && d.is_interior(v) && d.gadget_axle(v).is_none())
        .count()
}

/// Phase-free spider of degree two between two boundary-adjacent spiders.
/// Such a spider cannot be removed without one spider touching two
/// boundaries.
pub fn is_boundary_buffer(d: &ZxDiagram, v: VertexId) -> bool {
    !d.is_boundary(v)
        && d.is_interior(v)
        && d.phase(v).is_zero()
        && d.degree(v) == 2
        && d.neighbors(v).iter().all(|&w| d.touches_boundary(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Circuit, Gate};
    use crate::sim::{circuit_unitary, diagram_unitary, equivalent_up_to_phase, Matrix};
    use crate::zx::{circuit_to_diagram, to_graph_like, validate_graph_like};

    /// Graph-like diagram with `n` qubits whose spiders are `phases`, edges
    /// as given, and boundary attachments `ins`/`outs` (spider indices).
    fn build(
        phases: &[Phase],
        edges: &[(usize, usize)],
        ins: &[usize],
        outs: &[usize],
    ) -> (ZxDiagram, Vec<VertexId>) {
        let mut d = ZxDiagram::new();
        let i: Vec<VertexId> = ins.iter().map(|_| d.add_input()).collect();
        let s: Vec<VertexId> = phases.iter().map(|p| d.add_vertex(VertexKind::Z, p.clone())).collect();
        let o: Vec<VertexId> = outs.iter().map(|_| d.add_output()).collect();
        for (k, &x) in ins.iter().enumerate() {
            d.add_edge(i[k], s[x], EdgeType::Plain);
        }
        for (k, &x) in outs.iter().enumerate() {
            d.add_edge(o[k], s[x], EdgeType::Plain);
        }
        for &(a, b) in edges {
            d.add_edge(s[a], s[b], EdgeType::Hadamard);
        }
        assert!(validate_graph_like(&d).is_empty());
        (d, s)
    }

    fn same(a: &ZxDiagram, b: &ZxDiagram) -> bool {
        let (ua, ub): (Matrix, Matrix) = (diagram_unitary(a).unwrap(), diagram_unitary(b).unwrap());
        equivalent_up_to_phase(&ua, &ub, 1e-9)
    }

    fn z() -> Phase {
        Phase::zero()
    }

    #[test]
    fn local_complement_triangle() {
        // a–v–b with v interior; a, b on separate wires
        let (d, s) = build(
            &[z(), z(), Phase::frac_pi(1, 2), z(), z()],
            &[(0, 1), (1, 2), (2, 3), (3, 4)],
            &[0, 4],
            &[1, 3],
        );
        let mut e = d.clone();
        local_complement_at(&mut e, s[2]).unwrap();
        assert!(!e.contains(s[2]));
        assert!(e.connected(s[1], s[3]));
        assert_eq!(e.phase(s[1]), &Phase::frac_pi(3, 2));
        assert_eq!(e.phase(s[3]), &Phase::frac_pi(3, 2));
        assert!(same(&d, &e));
    }

    #[test]
    fn local_complement_isolated_and_precondition() {
        let mut d = ZxDiagram::new();
        let v = d.add_vertex(VertexKind::Z, Phase::frac_pi(1, 2));
        local_complement_at(&mut d, v).unwrap();
        assert_eq!(d.vertex_count(), 0);
        let w = d.add_vertex(VertexKind::Z, Phase::frac_pi(1, 4));
        assert_eq!(local_complement_at(&mut d, w), Err(RewriteError::NotProperClifford(w)));
    }

    #[test]
    fn pivot_path() {
        // a–u–v–b, a and b on separate wires
        let (d, s) = build(
            &[z(), z(), z(), z(), z(), z()],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
            &[0, 5],
            &[1, 4],
        );
        let mut e = d.clone();
        pivot_at(&mut e, s[2], s[3]).unwrap();
        assert!(!e.contains(s[2]) && !e.contains(s[3]));
        assert!(e.connected(s[1], s[4]));
        assert!(same(&d, &e));
    }

    #[test]
    fn pivot_with_pi_phase_on_three_qubits() {
        // u has a private neighbour on each of two wires, v one private and
        // one shared neighbour.
        let (d, s) = build(
            &[z(), z(), z(), z(), z(), z(), Phase::pi(), z()],
            &[(0, 1), (2, 3), (4, 5), (6, 7), (6, 1), (6, 3), (7, 5), (7, 3)],
            &[0, 2, 4],
            &[1, 3, 5],
        );
        let mut e = d.clone();
        pivot_at(&mut e, s[6], s[7]).unwrap();
        // s[5] is only adjacent to v, so it receives u's π
        assert_eq!(e.phase(s[5]), &Phase::pi());
        assert!(same(&d, &e));
    }

    #[test]
    fn pivot_requires_adjacency() {
        let (mut d, s) = build(&[z(), z(), z(), z(), z()], &[(0, 1), (1, 2), (2, 3), (3, 4)], &[0], &[4]);
        assert_eq!(pivot_at(&mut d, s[1], s[3]), Err(RewriteError::NotAdjacent(s[1], s[3])));
        assert_eq!(pivot_at(&mut d, s[0], s[1]), Err(RewriteError::NotInterior(s[0])));
    }

    #[test]
    fn pivot_gadget_extracts_phase() {
        let (d, s) = build(
            &[z(), z(), z(), Phase::frac_pi(1, 4), z(), z()],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
            &[0, 5],
            &[1, 4],
        );
        let mut e = d.clone();
        assert!(pivot_gadget(&mut e, s[2], s[3]).unwrap());
        assert!(!e.contains(s[2]) && !e.contains(s[3]));
        let leaves: Vec<VertexId> = e.vertex_ids().filter(|&v| e.gadget_axle(v).is_some()).collect();
        assert_eq!(leaves.len(), 1);
        assert_eq!(e.phase(leaves[0]), &Phase::frac_pi(1, 4));
        assert!(same(&d, &e));
        // already a gadget leaf: no-op
        let before = e.clone();
        let axle = e.gadget_axle(leaves[0]).unwrap();
        assert!(!pivot_gadget(&mut e, axle, leaves[0]).unwrap());
        assert_eq!(e, before);
    }

    #[test]
    fn pivot_gadget_rejects_clifford_u() {
        let (mut d, s) = build(
            &[z(), z(), Phase::frac_pi(1, 2), Phase::frac_pi(1, 4), z(), z()],
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
            &[0, 5],
            &[1, 4],
        );
        assert_eq!(pivot_gadget(&mut d, s[2], s[3]), Err(RewriteError::NotPauli(s[2])));
    }

    fn circuit_diagram(n: usize, gates: Vec<Gate>) -> (Matrix, ZxDiagram) {
        let c = Circuit::with_gates(n, gates).unwrap();
        (circuit_unitary(&c).unwrap(), to_graph_like(&circuit_to_diagram(&c)))
    }

    #[test]
    fn cz_circuit_clears_interior() {
        let (u, d) = circuit_diagram(2, vec![Gate::cz(0, 1), Gate::cz(0, 1), Gate::cz(0, 1)]);
        let s = full_simplify(&d);
        let interior: Vec<VertexId> = s.vertex_ids().filter(|&v| !s.is_boundary(v) && s.is_interior(v)).collect();
        assert_eq!(interior.len(), 2);
        assert!(interior.iter().all(|&v| is_boundary_buffer(&s, v)));
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&s).unwrap(), 1e-9));
        assert!(validate_graph_like(&s).is_empty());
    }

    #[test]
    fn reduced_diagram_is_fixpoint() {
        let (_, d) = circuit_diagram(3, vec![Gate::H(0), Gate::cnot(0, 1), Gate::T(1), Gate::cnot(1, 2), Gate::H(2)]);
        let s = full_simplify(&d);
        assert_eq!(full_simplify(&s), s);
    }

    #[test]
    fn hadamard_conjugated_t_becomes_gadget_or_spider() {
        let (u, d) = circuit_diagram(1, vec![Gate::H(0), Gate::T(0), Gate::H(0)]);
        let s = full_simplify(&d);
        assert!(equivalent_up_to_phase(&u, &diagram_unitary(&s).unwrap(), 1e-9));
    }

    #[test]
    fn gadget_fusion_merges_equal_targets() {
        let (d, s) = build(
            &[z(), z(), z(), z(), z(), Phase::frac_pi(1, 8), Phase::pi(), Phase::frac_pi(1, 4)],
            &[(0, 1), (2, 3), (4, 0), (4, 2), (4, 5), (6, 0), (6, 2), (6, 7)],
            &[0, 2],
            &[1, 3],
        );
        let mut e = d.clone();
        let r = fuse_gadgets_once(&mut e).unwrap();
        assert_eq!(r.rule, "gadget-fuse");
        assert!(!e.contains(s[6]));
        // π/8 - π/4 = -π/8
        assert_eq!(e.phase(s[5]), &Phase::frac_pi(-1, 8));
        assert!(same(&d, &e));
    }
}
