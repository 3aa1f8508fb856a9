//! Choosing a commuting CNOT layer that makes as many frontier rows
//! extractable as possible.
//!
//! A layer is a matrix `G` with unit diagonal such that `G[i][j] = 1`
//! (`i != j`) forces row `j` to have no off-diagonal entries. Applying the
//! layer turns the frontier biadjacency `M` into `G·M`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::gf2::Gf2Matrix;

pub const DEFAULT_NODE_BUDGET: usize = 200_000;
pub const DEFAULT_MAX_EXACT_ROWS: usize = 12;
/// Hard ceiling for [`solve_exact`]; tables grow as `n·2ⁿ`.
pub const EXACT_ROW_LIMIT: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LpError {
    #[error("node budget of {0} exhausted")]
    BudgetExceeded(usize),
    #[error("no layer makes a frontier row extractable")]
    Infeasible,
    #[error("{0} frontier rows exceed the exact solver limit")]
    TooLarge(usize),
    #[error("invalid layer: {0}")]
    Invalid(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Z(usize),
    Y(usize),
    X(usize, usize),
    T(usize, usize),
    G(usize, usize),
    K(usize, usize),
    C,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Z(i) => write!(f, "z_{i}"),
            Var::Y(i) => write!(f, "y_{i}"),
            Var::X(i, j) => write!(f, "x_{i}_{j}"),
            Var::T(i, j) => write!(f, "t_{i}_{j}"),
            Var::G(i, j) => write!(f, "G_{i}_{j}"),
            Var::K(i, j) => write!(f, "k_{i}_{j}"),
            Var::C => write!(f, "c"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Le,
    Ge,
    Eq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub family: &'static str,
    pub terms: Vec<(Var, i64)>,
    pub sense: Sense,
    pub rhs: i64,
}

impl Constraint {
    fn new(family: &'static str, terms: Vec<(Var, i64)>, sense: Sense, rhs: i64) -> Self {
        Constraint { family, terms, sense, rhs }
    }

    pub fn holds(&self, a: &Assignment) -> bool {
        let lhs: i64 = self.terms.iter().map(|(v, k)| k * a.get(v)).sum();
        match self.sense {
            Sense::Le => lhs <= self.rhs,
            Sense::Ge => lhs >= self.rhs,
            Sense::Eq => lhs == self.rhs,
        }
    }
}

/// Integer program over `M`, with every auxiliary variable materialised.
#[derive(Clone, Debug)]
pub struct LpInstance {
    pub m: Gf2Matrix,
    pub objective: Vec<(Var, i64)>,
    pub constraints: Vec<Constraint>,
    pub binaries: Vec<Var>,
    pub integers: Vec<(Var, i64, Option<i64>)>,
}

impl LpInstance {
    pub fn rows(&self) -> usize {
        self.m.rows()
    }

    pub fn cols(&self) -> usize {
        self.m.cols()
    }

    pub fn family(&self, name: &str) -> impl Iterator<Item = &Constraint> + '_ {
        let name = name.to_string();
        self.constraints.iter().filter(move |c| c.family == name)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Assignment(pub BTreeMap<Var, i64>);

impl Assignment {
    pub fn get(&self, v: &Var) -> i64 {
        self.0.get(v).copied().unwrap_or(0)
    }
}

pub fn encode(m: &Gf2Matrix) -> LpInstance {
    let (n, cols) = (m.rows(), m.cols());
    let ni = n as i64;
    let mut cs = Vec::new();
    let mut binaries = Vec::new();
    let mut integers = Vec::new();

    cs.push(Constraint::new("at_least_one", (0..n).map(|i| (Var::Z(i), 1)).collect(), Sense::Ge, 1));
    for i in 0..n {
        let xs = || (0..cols).map(move |j| (Var::X(i, j), 1));
        let mut lo: Vec<_> = xs().collect();
        lo.push((Var::Y(i), -1));
        cs.push(Constraint::new("weight_lower", lo, Sense::Ge, 1));
        let mut hi: Vec<_> = xs().collect();
        hi.push((Var::Y(i), -(cols as i64)));
        cs.push(Constraint::new("weight_upper", hi, Sense::Le, 1));
        cs.push(Constraint::new("y_or_z", vec![(Var::Y(i), 1), (Var::Z(i), 1)], Sense::Eq, 1));
        binaries.extend([Var::Z(i), Var::Y(i)]);
    }
    for i in 0..n {
        for j in 0..cols {
            let (x, t) = (Var::X(i, j), Var::T(i, j));
            cs.push(Constraint::new("t_lower", vec![(t, 1)], Sense::Ge, 0));
            cs.push(Constraint::new("t_upper", vec![(t, 1)], Sense::Le, ni / 2));
            cs.push(Constraint::new("x_lower", vec![(x, 1)], Sense::Ge, 0));
            cs.push(Constraint::new("x_upper", vec![(x, 1)], Sense::Le, 1));
            let mut prod = vec![(x, 1), (t, 2)];
            prod.extend((0..n).filter(|&l| m.get(l, j)).map(|l| (Var::G(i, l), -1)));
            cs.push(Constraint::new("product", prod, Sense::Eq, 0));
            binaries.push(x);
            integers.push((t, 0, Some(ni / 2)));
        }
    }
    for i in 0..n {
        cs.push(Constraint::new("unit_diagonal", vec![(Var::G(i, i), 1)], Sense::Eq, 1));
        for l in 0..n {
            binaries.push(Var::G(i, l));
        }
    }
    for i in 0..n {
        for l in (0..n).filter(|&l| l != i) {
            let k = Var::K(i, l);
            for p in (0..n).filter(|&p| p != l) {
                cs.push(Constraint::new("k_upper", vec![(k, 1), (Var::G(l, p), 1)], Sense::Le, 1));
            }
            let mut lo = vec![(k, 1)];
            lo.extend((0..n).filter(|&p| p != l).map(|p| (Var::G(l, p), 1)));
            cs.push(Constraint::new("k_lower", lo, Sense::Ge, 1));
            cs.push(Constraint::new("row_exclusion", vec![(Var::G(i, l), -1), (k, 1)], Sense::Ge, 0));
            binaries.push(k);
        }
    }
    let mut count = vec![(Var::C, 1)];
    for i in 0..n {
        count.extend((0..n).filter(|&l| l != i).map(|l| (Var::G(i, l), -1)));
    }
    cs.push(Constraint::new("cnot_count", count, Sense::Eq, 0));
    integers.push((Var::C, 0, None));

    let mut objective: Vec<(Var, i64)> = (0..n).map(|i| (Var::Z(i), ni)).collect();
    objective.push((Var::C, -1));
    LpInstance { m: m.clone(), objective, constraints: cs, binaries, integers }
}

/// Complete an assignment from `G` alone.
pub fn assignment_from_g(inst: &LpInstance, g: &Gf2Matrix) -> Assignment {
    let (n, cols) = (inst.rows(), inst.cols());
    let mut a = BTreeMap::new();
    for i in 0..n {
        let mut weight = 0;
        for j in 0..cols {
            let sum = (0..n).filter(|&l| g.get(i, l) && inst.m.get(l, j)).count() as i64;
            a.insert(Var::X(i, j), sum % 2);
            a.insert(Var::T(i, j), sum / 2);
            weight += sum % 2;
        }
        let z = (weight == 1) as i64;
        a.insert(Var::Z(i), z);
        a.insert(Var::Y(i), 1 - z);
        for l in 0..n {
            a.insert(Var::G(i, l), g.get(i, l) as i64);
        }
    }
    let mut c = 0;
    for i in 0..n {
        for l in (0..n).filter(|&l| l != i) {
            let pure = (0..n).all(|p| p == l || !g.get(l, p));
            a.insert(Var::K(i, l), pure as i64);
            c += g.get(i, l) as i64;
        }
    }
    a.insert(Var::C, c);
    Assignment(a)
}

/// First violated constraint or domain bound, if any.
pub fn check_assignment(inst: &LpInstance, a: &Assignment) -> Result<(), String> {
    for v in &inst.binaries {
        if !matches!(a.get(v), 0 | 1) {
            return Err(format!("{v} is not binary"));
        }
    }
    for (v, lo, hi) in &inst.integers {
        let x = a.get(v);
        if x < *lo || hi.is_some_and(|h| x > h) {
            return Err(format!("{v} out of bounds"));
        }
    }
    match inst.constraints.iter().find(|c| !c.holds(a)) {
        Some(c) => Err(format!("{} violated: {}", c.family, render_constraint(c))),
        None => Ok(()),
    }
}

pub fn objective_value(inst: &LpInstance, a: &Assignment) -> i64 {
    inst.objective.iter().map(|(v, k)| k * a.get(v)).sum()
}

fn render_terms(terms: &[(Var, i64)]) -> String {
    let mut s = String::new();
    for (idx, (v, k)) in terms.iter().enumerate() {
        let sign = if *k < 0 { "-" } else if idx > 0 { "+" } else { "" };
        let sep = if idx > 0 { " " } else { "" };
        let mag = k.unsigned_abs();
        if mag == 1 {
            let _ = write!(s, "{sep}{sign}{}{v}", if sign.is_empty() { "" } else { " " });
        } else {
            let _ = write!(s, "{sep}{sign}{}{mag} {v}", if sign.is_empty() { "" } else { " " });
        }
    }
    s
}

fn render_constraint(c: &Constraint) -> String {
    let op = match c.sense {
        Sense::Le => "<=",
        Sense::Ge => ">=",
        Sense::Eq => "=",
    };
    format!("{} {op} {}", render_terms(&c.terms), c.rhs)
}

/// LP-format listing of an instance.
pub fn dump_lp(inst: &LpInstance) -> String {
    let mut s = String::from("Maximize\n obj: ");
    s += &render_terms(&inst.objective);
    s += "\nSubject To\n";
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    for c in &inst.constraints {
        let k = seen.entry(c.family).or_default();
        let _ = writeln!(s, " {}_{}: {}", c.family, k, render_constraint(c));
        *k += 1;
    }
    s += "Bounds\n";
    for (v, lo, hi) in &inst.integers {
        match hi {
            Some(h) => {
                let _ = writeln!(s, " {lo} <= {v} <= {h}");
            }
            None => {
                let _ = writeln!(s, " {v} >= {lo}");
            }
        }
    }
    s += "Generals\n";
    for (v, _, _) in &inst.integers {
        let _ = writeln!(s, " {v}");
    }
    s += "Binaries\n";
    for v in &inst.binaries {
        let _ = writeln!(s, " {v}");
    }
    s += "End\n";
    s
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrontierReduction {
    pub g: Gf2Matrix,
    pub extractable_rows: Vec<usize>,
    pub cnot_count: usize,
    pub objective: i64,
}

impl FrontierReduction {
    pub fn from_g(m: &Gf2Matrix, g: Gf2Matrix) -> Result<Self, LpError> {
        if !is_commuting_layer(&g) || g.rows() != m.rows() {
            return Err(LpError::Invalid("matrix is not a commuting layer".into()));
        }
        let x = g.mul(m).map_err(|e| LpError::Invalid(e.to_string()))?;
        let extractable_rows: Vec<usize> = (0..x.rows()).filter(|&i| x.row_weight(i) == 1).collect();
        let n = g.rows();
        let cnot_count = (0..n).map(|i| g.row_weight(i) - 1).sum();
        let objective = (n * extractable_rows.len()) as i64 - cnot_count as i64;
        Ok(FrontierReduction { g, extractable_rows, cnot_count, objective })
    }

    /// Check the structural invariants against `m`.
    pub fn validate(&self, m: &Gf2Matrix) -> Result<(), LpError> {
        let fresh = FrontierReduction::from_g(m, self.g.clone())?;
        if fresh != *self {
            return Err(LpError::Invalid("reduction bookkeeping disagrees with G·M".into()));
        }
        if self.extractable_rows.is_empty() {
            return Err(LpError::Infeasible);
        }
        Ok(())
    }

    /// Frontier matrix after the layer.
    pub fn apply(&self, m: &Gf2Matrix) -> Gf2Matrix {
        self.g.mul(m).expect("dimensions checked on construction")
    }
}

/// Unit diagonal and the row-exclusion rule.
pub fn is_commuting_layer(g: &Gf2Matrix) -> bool {
    let n = g.rows();
    if g.cols() != n || (0..n).any(|i| !g.get(i, i)) {
        return false;
    }
    (0..n).all(|i| (0..n).all(|j| i == j || !g.get(i, j) || g.row_weight(j) == 1))
}

fn row_words(m: &Gf2Matrix, i: usize) -> Vec<u64> {
    let mut w = vec![0u64; m.cols().div_ceil(64)];
    for j in m.row_support(i) {
        w[j / 64] |= 1 << (j % 64);
    }
    w
}

fn weight_is_one(a: &[u64], b: &[u64]) -> bool {
    a.iter().zip(b).map(|(x, y)| (x ^ y).count_ones()).sum::<u32>() == 1
}

fn rev_key(mask: u32, n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        mask.reverse_bits() >> (32 - n)
    }
}

/// For each row, the cheapest (then lexicographically smallest) source set
/// drawn from each subset of rows that makes the row weight one.
type Choice = Option<(u32, u32, u32)>;

fn choice_tables(m: &Gf2Matrix) -> Vec<Vec<Choice>> {
    let n = m.rows();
    let full = 1usize << n;
    let rows: Vec<Vec<u64>> = (0..n).map(|i| row_words(m, i)).collect();
    let words = m.cols().div_ceil(64);
    let mut acc = vec![vec![0u64; words]; full];
    for s in 1..full {
        let low = s.trailing_zeros() as usize;
        let prev = s & (s - 1);
        let mut v = acc[prev].clone();
        for (a, b) in v.iter_mut().zip(&rows[low]) {
            *a ^= b;
        }
        acc[s] = v;
    }
    (0..n)
        .map(|i| {
            let mut f: Vec<Choice> = vec![None; full];
            for s in 0..full {
                let mut best = if s & (1 << i) == 0 && weight_is_one(&rows[i], &acc[s]) {
                    Some((s.count_ones(), rev_key(s as u32, n), s as u32))
                } else {
                    None
                };
                let mut rest = s;
                while rest != 0 {
                    let b = rest & rest.wrapping_neg();
                    rest ^= b;
                    if let Some(c) = f[s ^ b] {
                        if best.is_none_or(|cur| (c.0, c.1) < (cur.0, cur.1)) {
                            best = Some(c);
                        }
                    }
                }
                f[s] = best;
            }
            f
        })
        .collect()
}

struct Search<'a> {
    n: usize,
    tables: Vec<Vec<Choice>>,
    extractable_alone: Vec<bool>,
    budget: usize,
    nodes: usize,
    best: Option<(i64, usize, Vec<u32>)>,
    m: &'a Gf2Matrix,
}

impl Search<'_> {
    fn leaf(&mut self, sources: usize) {
        let n = self.n;
        let mut masks = vec![0u32; n];
        let (mut gain, mut c) = (0i64, 0usize);
        for (i, mask) in masks.iter_mut().enumerate() {
            let own = 1u32 << i;
            if sources & (1 << i) != 0 {
                *mask = own;
                gain += self.extractable_alone[i] as i64;
            } else if let Some((size, _, t)) = self.tables[i][sources] {
                *mask = own | t;
                gain += 1;
                c += size as usize;
            } else {
                *mask = own;
            }
        }
        if gain == 0 {
            return;
        }
        let obj = n as i64 * gain - c as i64;
        let key: Vec<u32> = masks.iter().map(|&mk| rev_key(mk, n)).collect();
        let better = match &self.best {
            None => true,
            Some((bo, bc, bk)) => match obj.cmp(bo).then(bc.cmp(&c)) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => key < *bk,
            },
        };
        if better {
            self.best = Some((obj, c, key));
        }
    }

    fn upper_bound(&self) -> i64 {
        (self.n * self.n) as i64
    }

    fn dfs(&mut self, row: usize, sources: usize) -> Result<(), LpError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(LpError::BudgetExceeded(self.budget));
        }
        if let Some((bo, bc, _)) = &self.best {
            if self.upper_bound() < *bo || (self.upper_bound() == *bo && *bc == 0) {
                return Ok(());
            }
        }
        if row == self.n {
            self.leaf(sources);
            return Ok(());
        }
        self.dfs(row + 1, sources | (1 << row))?;
        self.dfs(row + 1, sources)
    }
}

/// Optimal layer: maximum objective, then fewest CNOTs, then the
/// lexicographically smallest `G` in row-major order.
pub fn solve_exact(inst: &LpInstance, node_budget: usize) -> Result<FrontierReduction, LpError> {
    let m = &inst.m;
    let n = m.rows();
    if n > EXACT_ROW_LIMIT {
        return Err(LpError::TooLarge(n));
    }
    if n == 0 {
        return Err(LpError::Infeasible);
    }
    let mut search = Search {
        n,
        tables: choice_tables(m),
        extractable_alone: (0..n).map(|i| m.row_weight(i) == 1).collect(),
        budget: node_budget,
        nodes: 0,
        best: None,
        m,
    };
    search.dfs(0, 0)?;
    let (_, _, key) = search.best.ok_or(LpError::Infeasible)?;
    let mut g = Gf2Matrix::zeros(n, n);
    for (i, k) in key.iter().enumerate() {
        for j in 0..n {
            if k >> (n - 1 - j) & 1 == 1 {
                g.set(i, j, true);
            }
        }
    }
    FrontierReduction::from_g(search.m, g)
}

/// A single fanout onto one row, found column by column.
pub fn fanout_fallback(m: &Gf2Matrix) -> Result<FrontierReduction, LpError> {
    let n = m.rows();
    let mut best: Option<FrontierReduction> = None;
    for col in 0..m.cols() {
        let Some(rows) = m.solve_unit_vector(col) else {
            continue;
        };
        let mut g = Gf2Matrix::identity(n);
        for &s in &rows[1..] {
            g.set(rows[0], s, true);
        }
        let r = FrontierReduction::from_g(m, g)?;
        let better = best.as_ref().is_none_or(|b| {
            r.objective > b.objective || (r.objective == b.objective && r.cnot_count < b.cnot_count)
        });
        if better {
            best = Some(r);
        }
    }
    let r = best.ok_or(LpError::Infeasible)?;
    r.validate(m)?;
    Ok(r)
}

/// `(control, target)` pairs, one per off-diagonal entry: `G[i][j] = 1`
/// is the row operation `r_i ← r_i ⊕ r_j`.
pub fn reduction_to_cnots(r: &FrontierReduction) -> Result<Vec<(usize, usize)>, LpError> {
    if !is_commuting_layer(&r.g) {
        return Err(LpError::Invalid("matrix is not a commuting layer".into()));
    }
    let n = r.g.rows();
    let mut out = Vec::new();
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i && r.g.get(i, j)) {
            out.push((i, j));
        }
    }
    let controls: Vec<usize> = out.iter().map(|p| p.0).collect();
    if out.iter().any(|(_, t)| controls.contains(t)) {
        return Err(LpError::Invalid("a qubit is both control and target".into()));
    }
    Ok(out)
}

/// Exact solve when small enough, otherwise the fanout layer.
pub fn choose_layer(m: &Gf2Matrix, max_exact: usize, node_budget: usize) -> Result<FrontierReduction, LpError> {
    if m.rows() <= max_exact.min(EXACT_ROW_LIMIT) {
        match solve_exact(&encode(m), node_budget) {
            Err(LpError::BudgetExceeded(_)) => {}
            other => return other,
        }
    }
    fanout_fallback(m)
}
