//! Dense bit matrices over GF(2).

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Gf2Error {
    #[error("row index {index} out of range for {rows} rows")]
    RowOutOfRange { index: usize, rows: usize },
    #[error("row operation needs two distinct rows, got {0} twice")]
    SameRow(usize),
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Row operation `(i, j)`: row `i` ← row `i` ⊕ row `j`.
pub type RowOp = (usize, usize);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Build from rows of 0/1 entries. All rows must have the same length.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            let r = r.as_ref();
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &b) in r.iter().enumerate() {
                m.set(i, j, b & 1 == 1);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, v: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.words + j / 64];
        if v {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn toggle(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Row `i` as a list of booleans.
    pub fn row(&self, i: usize) -> Vec<bool> {
        (0..self.cols).map(|j| self.get(i, j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect()).collect()
    }

    pub fn row_weight(&self, i: usize) -> usize {
        self.row_words(i).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn row_is_zero(&self, i: usize) -> bool {
        self.row_words(i).iter().all(|&w| w == 0)
    }

    /// Column of the single set bit, if row `i` has weight one.
    pub fn unit_row_col(&self, i: usize) -> Option<usize> {
        if self.row_weight(i) != 1 {
            return None;
        }
        let (k, w) = self.row_words(i).iter().enumerate().find(|(_, w)| **w != 0)?;
        Some(k * 64 + w.trailing_zeros() as usize)
    }

    /// Indices of set bits in row `i`.
    pub fn row_support(&self, i: usize) -> Vec<usize> {
        (0..self.cols).filter(|&j| self.get(i, j)).collect()
    }

    /// `r_i ← r_i ⊕ r_j`.
    pub fn row_add(&mut self, i: usize, j: usize) -> Result<(), Gf2Error> {
        for k in [i, j] {
            if k >= self.rows {
                return Err(Gf2Error::RowOutOfRange { index: k, rows: self.rows });
            }
        }
        if i == j {
            return Err(Gf2Error::SameRow(i));
        }
        self.row_add_unchecked(i, j);
        Ok(())
    }

    fn row_add_unchecked(&mut self, i: usize, j: usize) {
        let w = self.words;
        for k in 0..w {
            let v = self.data[j * w + k];
            self.data[i * w + k] ^= v;
        }
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i != j {
            for k in 0..self.words {
                self.data.swap(i * self.words + k, j * self.words + k);
            }
        }
    }

    /// Apply a sequence of row operations in order.
    pub fn apply_ops(&mut self, ops: &[RowOp]) -> Result<(), Gf2Error> {
        for &(i, j) in ops {
            self.row_add(i, j)?;
        }
        Ok(())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix, Gf2Error> {
        if self.cols != other.rows {
            return Err(Gf2Error::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..other.words {
                        out.data[i * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && (0..self.rows).all(|i| self.unit_row_col(i) == Some(i))
    }

    /// Reduced row echelon form using only row additions.
    ///
    /// Replaying the returned operations on `self` reproduces the returned
    /// matrix exactly.
    pub fn gauss_reduce(&self) -> (Gf2Matrix, Vec<RowOp>, usize) {
        let mut m = self.clone();
        let mut ops = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            if r != pivot_row {
                m.row_add_unchecked(pivot_row, r);
                ops.push((pivot_row, r));
            }
            for other in 0..m.rows {
                if other != pivot_row && m.get(other, col) {
                    m.row_add_unchecked(other, pivot_row);
                    ops.push((other, pivot_row));
                }
            }
            pivot_row += 1;
        }
        (m, ops, pivot_row)
    }

    pub fn rank(&self) -> usize {
        self.gauss_reduce().2
    }

    /// A nonempty row set whose XOR is the unit vector `e_col`.
    pub fn solve_unit_vector(&self, col: usize) -> Option<Vec<usize>> {
        if col >= self.cols {
            return None;
        }
        let mut m = self.clone();
        let mut track = Gf2Matrix::identity(self.rows);
        let mut pivot_row = 0;
        let mut col_row = None;
        for c in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| m.get(r, c)) else {
                continue;
            };
            m.swap_rows(pivot_row, r);
            track.swap_rows(pivot_row, r);
            for other in 0..m.rows {
                if other != pivot_row && m.get(other, c) {
                    m.row_add_unchecked(other, pivot_row);
                    track.row_add_unchecked(other, pivot_row);
                }
            }
            if c == col {
                col_row = Some(pivot_row);
            }
            pivot_row += 1;
        }
        let r = col_row?;
        (m.unit_row_col(r) == Some(col)).then(|| track.row_support(r))
    }

    /// Inverse of a square matrix.
    pub fn inverse(&self) -> Result<Gf2Matrix, Gf2Error> {
        if self.rows != self.cols {
            return Err(Gf2Error::Dimension("inverse of a non-square matrix".into()));
        }
        let (r, ops, rank) = self.gauss_reduce();
        if rank < self.rows || !r.is_identity() {
            return Err(Gf2Error::Singular);
        }
        let mut inv = Gf2Matrix::identity(self.rows);
        for &(i, j) in &ops {
            inv.row_add_unchecked(i, j);
        }
        Ok(inv)
    }

    /// Block Gaussian elimination over columns, with duplicate sub-row
    /// removal per block of `blocksize` columns. Returns the operations and
    /// the rank; `self` is reduced in place (fully when `full_reduce`).
    pub fn block_gauss(&mut self, blocksize: usize, full_reduce: bool) -> (Vec<RowOp>, usize) {
        let blocksize = blocksize.max(1);
        let (rows, cols) = (self.rows, self.cols);
        let mut ops = Vec::new();
        let mut add = |m: &mut Gf2Matrix, target: usize, source: usize| {
            m.row_add_unchecked(target, source);
            ops.push((target, source));
        };
        let mut pivot_row = 0;
        let mut pivot_cols = Vec::new();
        let sections = cols.div_ceil(blocksize);
        for sec in 0..sections {
            let (i0, i1) = (sec * blocksize, ((sec + 1) * blocksize).min(cols));
            let mut chunks: HashMap<Vec<bool>, usize> = HashMap::new();
            for r in pivot_row..rows {
                let t: Vec<bool> = (i0..i1).map(|j| self.get(r, j)).collect();
                if !t.iter().any(|&b| b) {
                    continue;
                }
                match chunks.get(&t) {
                    Some(&r0) => add(self, r, r0),
                    None => {
                        chunks.insert(t, r);
                    }
                }
            }
            for p in i0..i1 {
                if let Some(r0) = (pivot_row..rows).find(|&r0| self.get(r0, p)) {
                    if r0 != pivot_row {
                        add(self, pivot_row, r0);
                    }
                    for r1 in pivot_row + 1..rows {
                        if self.get(r1, p) {
                            add(self, r1, pivot_row);
                        }
                    }
                    pivot_cols.push(p);
                    pivot_row += 1;
                }
            }
        }
        let rank = pivot_row;
        if full_reduce && rank > 0 {
            let mut pivot_row = rank as isize - 1;
            for sec in (0..sections).rev() {
                let (i0, i1) = (sec * blocksize, ((sec + 1) * blocksize).min(cols));
                let mut chunks: HashMap<Vec<bool>, usize> = HashMap::new();
                for r in (0..=pivot_row.max(-1)).rev() {
                    let r = r as usize;
                    let t: Vec<bool> = (i0..i1).map(|j| self.get(r, j)).collect();
                    if !t.iter().any(|&b| b) {
                        continue;
                    }
                    match chunks.get(&t) {
                        Some(&r0) => add(self, r, r0),
                        None => {
                            chunks.insert(t, r);
                        }
                    }
                }
                while let Some(&pcol) = pivot_cols.last() {
                    if !(i0 <= pcol && pcol < i1) {
                        break;
                    }
                    pivot_cols.pop();
                    for r in 0..pivot_row as usize {
                        if self.get(r, pcol) {
                            add(self, r, pivot_row as usize);
                        }
                    }
                    pivot_row -= 1;
                }
            }
        }
        (ops, rank)
    }
}

/// Default block size for [`patel_markov_hayes`]: `max(1, ⌊log₂ n / 2⌋)`.
pub fn default_block_size(n: usize) -> usize {
    if n < 2 {
        return 1;
    }
    ((usize::BITS - 1 - n.leading_zeros()) as usize / 2).max(1)
}

fn lower_synth(a: &mut Gf2Matrix, block: usize) -> Vec<RowOp> {
    let n = a.rows;
    let mut ops = Vec::new();
    for sec in 0..n.div_ceil(block) {
        let (c0, c1) = (sec * block, ((sec + 1) * block).min(n));
        let mut patt: HashMap<Vec<bool>, usize> = HashMap::new();
        for r in c0..n {
            let t: Vec<bool> = (c0..c1).map(|j| a.get(r, j)).collect();
            if !t.iter().any(|&b| b) {
                continue;
            }
            match patt.get(&t) {
                Some(&r0) => {
                    a.row_add_unchecked(r, r0);
                    ops.push((r, r0));
                }
                None => {
                    patt.insert(t, r);
                }
            }
        }
        for col in c0..c1 {
            let mut diag = a.get(col, col);
            for r in col + 1..n {
                if a.get(r, col) {
                    if !diag {
                        a.row_add_unchecked(col, r);
                        ops.push((col, r));
                        diag = true;
                    }
                    a.row_add_unchecked(r, col);
                    ops.push((r, col));
                }
            }
        }
    }
    ops
}

/// Patel–Markov–Hayes synthesis: row operations that reduce `m` to the
/// identity when replayed in order.
pub fn patel_markov_hayes(m: &Gf2Matrix, block: usize) -> Result<Vec<RowOp>, Gf2Error> {
    if m.rows != m.cols {
        return Err(Gf2Error::Dimension("synthesis needs a square matrix".into()));
    }
    let block = block.max(1);
    let mut a = m.clone();
    let mut ops = lower_synth(&mut a, block);
    let mut t = a.transpose();
    let back = lower_synth(&mut t, block);
    if !t.is_identity() {
        return Err(Gf2Error::Singular);
    }
    ops.extend(back.into_iter().rev().map(|(i, j)| (j, i)));
    Ok(ops)
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            writeln!(f, "  {s}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let s: String = (0..self.cols).map(|j| if self.get(i, j) { '1' } else { '0' }).collect();
            if i > 0 {
                f.write_str("\n")?;
            }
            f.write_str(&s)?;
        }
        Ok(())
    }
}
