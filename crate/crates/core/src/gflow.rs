//! Generalised flow on labelled open graphs.
//!
//! Orders are stored as a depth counted from the outputs: outputs have
//! depth 0 and `v ≺ w` iff `depth(v) > depth(w)`.

use std::collections::{BTreeMap, BTreeSet};

use crate::gf2::Gf2Matrix;
use crate::zx::{LabelledOpenGraph, Plane, VertexId};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GflowCert {
    pub g: BTreeMap<VertexId, BTreeSet<VertexId>>,
    pub order: BTreeMap<VertexId, usize>,
}

impl GflowCert {
    /// `v ≺ w`.
    pub fn precedes(&self, v: VertexId, w: VertexId) -> bool {
        match (self.order.get(&v), self.order.get(&w)) {
            (Some(a), Some(b)) => a > b,
            _ => false,
        }
    }
}

/// Vertices with an odd number of neighbours in `k`.
pub fn odd_neighbourhood(graph: &LabelledOpenGraph, k: &BTreeSet<VertexId>) -> BTreeSet<VertexId> {
    let mut odd = BTreeSet::new();
    for &v in k {
        for &w in graph.neighbors(v) {
            if !odd.remove(&w) {
                odd.insert(w);
            }
        }
    }
    odd
}

/// Check every gflow condition for every non-output vertex.
pub fn verify_gflow(log: &LabelledOpenGraph, cert: &GflowCert) -> bool {
    let non_outputs: BTreeSet<VertexId> = log.non_outputs().collect();
    if cert.g.keys().copied().collect::<BTreeSet<_>>() != non_outputs {
        return false;
    }
    if !log.vertices.iter().all(|v| cert.order.contains_key(v)) {
        return false;
    }
    for (&v, gv) in &cert.g {
        if gv.iter().any(|w| !log.vertices.contains(w) || log.inputs.contains(w)) {
            return false;
        }
        let odd = odd_neighbourhood(log, gv);
        if gv.iter().chain(&odd).any(|&w| w != v && !cert.precedes(v, w)) {
            return false;
        }
        let (in_g, in_odd) = (gv.contains(&v), odd.contains(&v));
        let ok = match log.planes.get(&v) {
            Some(Plane::XY) => !in_g && in_odd,
            Some(Plane::XZ) => in_g && in_odd,
            Some(Plane::YZ) => in_g && !in_odd,
            None => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

/// Solve `A·x = b` over GF(2); `a` has one row per equation.
fn solve(a: &Gf2Matrix, b: &[bool]) -> Option<Vec<bool>> {
    let (rows, cols) = (a.rows(), a.cols());
    let mut aug = Gf2Matrix::zeros(rows, cols + 1);
    for (r, &rhs) in b.iter().enumerate().take(rows) {
        for c in 0..cols {
            if a.get(r, c) {
                aug.set(r, c, true);
            }
        }
        aug.set(r, cols, rhs);
    }
    let (red, _, _) = aug.gauss_reduce();
    let mut x = vec![false; cols];
    for r in 0..rows {
        match (0..=cols).find(|&c| red.get(r, c)) {
            None => {}
            Some(c) if c == cols => return None,
            Some(c) => x[c] = red.get(r, cols),
        }
    }
    Some(x)
}

/// Maximally delayed gflow, built layer by layer from the outputs.
pub fn find_maximally_delayed_gflow(log: &LabelledOpenGraph) -> Option<GflowCert> {
    let mut cert = GflowCert::default();
    let mut solved: BTreeSet<VertexId> = log.outputs.clone();
    for &o in &solved {
        cert.order.insert(o, 0);
    }
    let mut unsolved: Vec<VertexId> = log.vertices.iter().copied().filter(|v| !solved.contains(v)).collect();
    let mut depth = 0;
    while !unsolved.is_empty() {
        depth += 1;
        let cands: Vec<VertexId> = solved.iter().copied().filter(|v| !log.inputs.contains(v)).collect();
        let row_of: BTreeMap<VertexId, usize> = unsolved.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut a = Gf2Matrix::zeros(unsolved.len(), cands.len());
        for (j, &c) in cands.iter().enumerate() {
            for w in log.neighbors(c) {
                if let Some(&i) = row_of.get(w) {
                    a.set(i, j, true);
                }
            }
        }
        let mut found = Vec::new();
        for &v in &unsolved {
            let plane = log.planes.get(&v).copied().unwrap_or(Plane::XY);
            let includes_v = plane != Plane::XY;
            if includes_v && log.inputs.contains(&v) {
                continue;
            }
            let mut b = vec![false; unsolved.len()];
            if plane != Plane::YZ {
                b[row_of[&v]] = true;
            }
            if includes_v {
                for w in log.neighbors(v) {
                    if let Some(&i) = row_of.get(w) {
                        b[i] ^= true;
                    }
                }
            }
            if let Some(x) = solve(&a, &b) {
                let mut gv: BTreeSet<VertexId> =
                    cands.iter().zip(&x).filter(|(_, &on)| on).map(|(&c, _)| c).collect();
                if includes_v {
                    gv.insert(v);
                }
                found.push((v, gv));
            }
        }
        if found.is_empty() {
            return None;
        }
        for (v, gv) in found {
            cert.g.insert(v, gv);
            cert.order.insert(v, depth);
            solved.insert(v);
        }
        unsolved.retain(|v| !solved.contains(v));
    }
    Some(cert)
}
