//! Exact sparse linear algebra over Q and Q(zeta_e).
//!
//! Matrices are stored column-major as sorted sparse columns; all entries of
//! a matrix share one ambient field. Rank and column-space computations use
//! an incremental fraction-free eliminator (cross-multiplication, no
//! divisions) with deterministic pivoting, so repeated runs produce the same
//! bases. Quotient constructions and solving use a fully reduced column
//! echelon form with exact field division.

use std::collections::BTreeMap;

use crate::cyclo::Cyclo;
use crate::{Error, Result};

/// Sorted sparse vector, pairs (row, value) with nonzero values.
pub type SparseVec = Vec<(usize, Cyclo)>;

/// A sparse exact matrix over Q(zeta_e); absent entries are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    e: u64,
    data: Vec<SparseVec>,
}

impl ExactMatrix {
    pub fn zero(rows: usize, cols: usize, e: u64) -> Self {
        Self {
            rows,
            cols,
            e,
            data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize, e: u64) -> Self {
        let mut m = Self::zero(n, n, e);
        for i in 0..n {
            m.data[i].push((i, Cyclo::one(e)));
        }
        m
    }

    /// Builds from dense rows; entries must share the field `e`.
    pub fn from_dense(rows: &[Vec<Cyclo>], e: u64) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        let mut m = Self::zero(r, c, e);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged dense rows");
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    assert_eq!(v.exponent(), e);
                    m.data[j].push((i, v.clone()));
                }
            }
        }
        m
    }

    /// Builds from integer dense rows over Q (e = 1).
    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        let dense: Vec<Vec<Cyclo>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Cyclo::from_i64(1, v)).collect())
            .collect();
        Self::from_dense(&dense, 1)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.data[j]
    }

    /// Replaces a column with a sparse vector; entries must be sorted by row
    /// index and nonzero.
    pub fn set_column(&mut self, j: usize, col: SparseVec) {
        debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(col.iter().all(|(r, v)| *r < self.rows && !v.is_zero()));
        self.data[j] = col;
    }

    pub fn get(&self, i: usize, j: usize) -> Cyclo {
        match self.data[j].binary_search_by_key(&i, |(r, _)| *r) {
            Ok(k) => self.data[j][k].1.clone(),
            Err(_) => Cyclo::zero(self.e),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|c| c.len()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.cols, self.rows, self.e);
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                m.data[*i].push((j, v.clone()));
            }
        }
        // Columns were filled in ascending j order per row, already sorted.
        m
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Validation(format!(
                "shape mismatch: {}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        if self.e != other.e {
            return Err(Error::FieldMismatch(self.e, other.e));
        }
        let mut out = Self::zero(self.rows, other.cols, self.e);
        for j in 0..other.cols {
            let mut acc: BTreeMap<usize, Cyclo> = BTreeMap::new();
            for (k, v) in &other.data[j] {
                for (i, w) in &self.data[*k] {
                    let term = v.try_mul(w)?;
                    match acc.get_mut(i) {
                        Some(cur) => *cur = cur.try_add(&term)?,
                        None => {
                            acc.insert(*i, term);
                        }
                    }
                }
            }
            out.data[j] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        Ok(out)
    }

    /// Applies the matrix to a sparse vector.
    pub fn apply(&self, vec: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Cyclo> = BTreeMap::new();
        for (k, v) in vec {
            for (i, w) in &self.data[*k] {
                let term = v.try_mul(w).expect("field mismatch in apply");
                match acc.get_mut(i) {
                    Some(cur) => *cur = cur.try_add(&term).expect("field mismatch in apply"),
                    None => {
                        acc.insert(*i, term);
                    }
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Stacks two matrices vertically; column counts must agree.
    pub fn stack_vertical(&self, other: &Self) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::Validation("column count mismatch in stack".into()));
        }
        if self.e != other.e {
            return Err(Error::FieldMismatch(self.e, other.e));
        }
        let mut out = Self::zero(self.rows + other.rows, self.cols, self.e);
        for j in 0..self.cols {
            let mut col = self.data[j].clone();
            col.extend(
                other.data[j]
                    .iter()
                    .map(|(i, v)| (i + self.rows, v.clone())),
            );
            out.data[j] = col;
        }
        Ok(out)
    }

    /// Exact rank.
    pub fn rank(&self) -> usize {
        let mut elim = Eliminator::new(self.rows, self.e);
        for col in &self.data {
            elim.offer(col);
            if elim.rank() == self.rows {
                break;
            }
        }
        elim.rank()
    }

    /// Rank together with a basis of the column space, returned as the
    /// original columns at the pivot column indices.
    pub fn column_space(&self) -> (usize, ExactMatrix) {
        let mut elim = Eliminator::new(self.rows, self.e);
        let mut picks = Vec::new();
        for (j, col) in self.data.iter().enumerate() {
            if elim.offer(col) {
                picks.push(j);
            }
            if elim.rank() == self.rows {
                break;
            }
        }
        let mut basis = ExactMatrix::zero(self.rows, picks.len(), self.e);
        for (k, &j) in picks.iter().enumerate() {
            basis.data[k] = self.data[j].clone();
        }
        (picks.len(), basis)
    }

    /// Quotient of the codomain by the column space.
    pub fn cokernel(&self) -> QuotientSpace {
        QuotientSpace::from_relations(self.rows, self.e, self.data.iter())
    }

    /// Embeds every entry into Q(zeta_new); the current exponent must divide
    /// the new one.
    pub fn embed(&self, new_e: u64) -> Result<Self> {
        if new_e == self.e {
            return Ok(self.clone());
        }
        let mut out = Self::zero(self.rows, self.cols, new_e);
        for (j, col) in self.data.iter().enumerate() {
            let mut new_col = Vec::with_capacity(col.len());
            for (i, v) in col {
                new_col.push((*i, v.embed(new_e)?));
            }
            out.data[j] = new_col;
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vec<Cyclo>> {
        let mut out = vec![vec![Cyclo::zero(self.e); self.cols]; self.rows];
        for (j, col) in self.data.iter().enumerate() {
            for (i, v) in col {
                out[*i][j] = v.clone();
            }
        }
        out
    }

    /// One exact solution of A x = b by dense Gauss-Jordan elimination, or
    /// None when the system is inconsistent. Free unknowns are set to zero.
    pub fn solve(&self, b: &SparseVec) -> Option<Vec<Cyclo>> {
        debug_assert!(b.iter().all(|(i, v)| *i < self.rows && v.exponent() == self.e));
        let mut aug = self.to_dense();
        for row in &mut aug {
            row.push(Cyclo::zero(self.e));
        }
        for (i, v) in b {
            aug[*i][self.cols] = v.clone();
        }
        let mut pivot_cols = Vec::new();
        let mut next_row = 0;
        for col in 0..self.cols {
            let Some(p) = (next_row..self.rows).find(|&r| !aug[r][col].is_zero()) else {
                continue;
            };
            aug.swap(next_row, p);
            let inv = aug[next_row][col].inverse().expect("pivot is nonzero");
            for k in col..=self.cols {
                aug[next_row][k] = aug[next_row][k].try_mul(&inv).expect("same field");
            }
            for r in 0..self.rows {
                if r == next_row || aug[r][col].is_zero() {
                    continue;
                }
                let factor = aug[r][col].clone();
                for k in col..=self.cols {
                    let term = factor.try_mul(&aug[next_row][k]).expect("same field");
                    aug[r][k] = aug[r][k].try_sub(&term).expect("same field");
                }
            }
            pivot_cols.push((next_row, col));
            next_row += 1;
        }
        if (next_row..self.rows).any(|r| !aug[r][self.cols].is_zero()) {
            return None;
        }
        let mut x = vec![Cyclo::zero(self.e); self.cols];
        for (r, col) in pivot_cols {
            x[col] = aug[r][self.cols].clone();
        }
        Some(x)
    }
}

fn add_scaled(acc: &mut BTreeMap<usize, Cyclo>, vec: &SparseVec, scale: &Cyclo) {
    for (i, v) in vec {
        let term = scale.try_mul(v).expect("field mismatch");
        match acc.get_mut(i) {
            Some(cur) => {
                *cur = cur.try_add(&term).expect("field mismatch");
                if cur.is_zero() {
                    acc.remove(i);
                }
            }
            None => {
                if !term.is_zero() {
                    acc.insert(*i, term);
                }
            }
        }
    }
}

/// Incremental fraction-free rank engine. Columns are offered left to right;
/// each new column is reduced against the stored pivots by exact
/// cross-multiplication (no divisions). The pivot row of a new column is its
/// lowest remaining nonzero row, which keeps elimination deterministic.
pub struct Eliminator {
    rows: usize,
    e: u64,
    /// (pivot row, reduced vector), in insertion order. Each stored vector is
    /// zero at the pivot rows of all earlier pivots.
    pivots: Vec<(usize, SparseVec)>,
}

impl Eliminator {
    pub fn new(rows: usize, e: u64) -> Self {
        Self {
            rows,
            e,
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_full(&self) -> bool {
        self.pivots.len() == self.rows
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    /// Offers a column; returns true when it enlarged the span.
    pub fn offer(&mut self, col: &SparseVec) -> bool {
        debug_assert!(col.iter().all(|(r, v)| *r < self.rows && v.exponent() == self.e));
        if col.is_empty() {
            return false;
        }
        let mut acc: BTreeMap<usize, Cyclo> = col.iter().cloned().collect();
        for (prow, pvec) in &self.pivots {
            let Some(c) = acc.get(prow).cloned() else {
                continue;
            };
            // acc := plead * acc - c * pvec, eliminating row prow exactly.
            let plead = pvec
                .iter()
                .find(|(r, _)| r == prow)
                .map(|(_, v)| v.clone())
                .expect("pivot entry present");
            for v in acc.values_mut() {
                *v = v.try_mul(&plead).expect("field mismatch");
            }
            add_scaled(&mut acc, pvec, &c.neg());
            debug_assert!(!acc.contains_key(prow));
        }
        if acc.is_empty() {
            return false;
        }
        let prow = *acc.keys().next().expect("nonempty");
        let vec: SparseVec = acc.into_iter().collect();
        self.pivots.push((prow, vec));
        true
    }
}

/// Fully reduced column echelon form with exact field division. Each stored
/// column has value one at its pivot row and zero at every other pivot row,
/// which makes membership tests and coordinate extraction one reduction pass.
pub struct Rref {
    rows: usize,
    e: u64,
    cols: Vec<SparseVec>,
    pivot_rows: Vec<usize>,
    pivot_by_row: BTreeMap<usize, usize>,
}

impl Rref {
    pub fn new(rows: usize, e: u64) -> Self {
        Self {
            rows,
            e,
            cols: Vec::new(),
            pivot_rows: Vec::new(),
            pivot_by_row: BTreeMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.cols.len()
    }

    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivot_rows
    }

    pub fn columns(&self) -> &[SparseVec] {
        &self.cols
    }

    fn reduce(&self, col: &SparseVec) -> (BTreeMap<usize, Cyclo>, Vec<(usize, Cyclo)>) {
        let mut acc: BTreeMap<usize, Cyclo> = col.iter().cloned().collect();
        let mut used: Vec<(usize, Cyclo)> = Vec::new();
        loop {
            let hit = acc
                .iter()
                .find_map(|(r, _)| self.pivot_by_row.get(r).map(|k| (*r, *k)));
            let Some((row, k)) = hit else { break };
            let c = acc.remove(&row).expect("present");
            // Stored columns are zero at other pivot rows, so this eliminates
            // row `row` for good and only touches free rows.
            add_scaled(&mut acc, &self.cols[k], &c.neg());
            acc.remove(&row);
            used.push((k, c));
        }
        (acc, used)
    }

    /// Inserts a column; returns true when it enlarged the span.
    pub fn insert(&mut self, col: &SparseVec) -> bool {
        let (acc, _) = self.reduce(col);
        if acc.is_empty() {
            return false;
        }
        let prow = *acc.keys().next().expect("nonempty");
        let lead = acc.get(&prow).expect("present").clone();
        let inv = lead.inverse().expect("nonzero lead");
        let mut vec: SparseVec = acc
            .into_iter()
            .map(|(r, v)| (r, v.try_mul(&inv).expect("field mismatch")))
            .collect();
        vec.sort_by_key(|(r, _)| *r);
        // Back-substitute the new pivot row out of the stored columns.
        let snapshot = vec.clone();
        for col in self.cols.iter_mut() {
            let Some(pos) = col.iter().position(|(r, _)| *r == prow) else {
                continue;
            };
            let c = col[pos].1.clone();
            let mut acc: BTreeMap<usize, Cyclo> = col.iter().cloned().collect();
            add_scaled(&mut acc, &snapshot, &c.neg());
            *col = acc.into_iter().collect();
        }
        self.cols.push(vec);
        self.pivot_rows.push(prow);
        self.pivot_by_row.insert(prow, self.cols.len() - 1);
        true
    }

    /// True when the column lies in the current span.
    pub fn contains(&self, col: &SparseVec) -> bool {
        self.reduce(col).0.is_empty()
    }

    /// Coordinates of a vector over the stored reduced columns, or None when
    /// it lies outside the span.
    pub fn express(&self, col: &SparseVec) -> Option<Vec<Cyclo>> {
        let (acc, used) = self.reduce(col);
        if !acc.is_empty() {
            return None;
        }
        let mut coords = vec![Cyclo::zero(self.e); self.cols.len()];
        for (k, c) in used {
            coords[k] = coords[k].try_add(&c).expect("field mismatch");
        }
        Some(coords)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
}

/// A quotient of an ambient coordinate space by the span of relation
/// vectors, with an explicit projection and section.
#[derive(Clone, Debug)]
pub struct QuotientSpace {
    pub ambient_dim: usize,
    pub dim: usize,
    e: u64,
    /// Reduced relation basis columns (ambient coordinates).
    relation_basis: Vec<SparseVec>,
    /// dim x ambient projection.
    proj: ExactMatrix,
    /// ambient x dim section; projection * section = identity.
    section: ExactMatrix,
    /// Ambient rows surviving as quotient coordinates, ascending.
    pub free_rows: Vec<usize>,
}

impl QuotientSpace {
    /// Builds the quotient of an ambient space by relation columns.
    pub fn from_relations<'a, I>(ambient_dim: usize, e: u64, relations: I) -> Self
    where
        I: Iterator<Item = &'a SparseVec>,
    {
        let mut rref = Rref::new(ambient_dim, e);
        for rel in relations {
            rref.insert(rel);
        }
        Self::from_rref(ambient_dim, e, rref)
    }

    fn from_rref(ambient_dim: usize, e: u64, rref: Rref) -> Self {
        let pivot_set: std::collections::BTreeSet<usize> =
            rref.pivot_rows().iter().cloned().collect();
        let free_rows: Vec<usize> = (0..ambient_dim).filter(|r| !pivot_set.contains(r)).collect();
        let dim = free_rows.len();
        let row_of: BTreeMap<usize, usize> = free_rows
            .iter()
            .enumerate()
            .map(|(q, r)| (*r, q))
            .collect();
        // proj e_s = e_q(s) for free rows s; proj e_p = -sum over free rows of
        // the reduced relation column with pivot p.
        let mut proj = ExactMatrix::zero(dim, ambient_dim, e);
        for (q, &s) in free_rows.iter().enumerate() {
            proj.set_column(s, vec![(q, Cyclo::one(e))]);
        }
        for (k, &p) in rref.pivot_rows().iter().enumerate() {
            let col: SparseVec = rref.columns()[k]
                .iter()
                .filter(|(r, _)| *r != p)
                .map(|(r, v)| (row_of[r], v.neg()))
                .collect();
            let mut col = col;
            col.sort_by_key(|(r, _)| *r);
            proj.set_column(p, col);
        }
        let mut section = ExactMatrix::zero(ambient_dim, dim, e);
        for (q, &s) in free_rows.iter().enumerate() {
            section.set_column(q, vec![(s, Cyclo::one(e))]);
        }
        let relation_basis = rref.columns().to_vec();
        let out = Self {
            ambient_dim,
            dim,
            e,
            relation_basis,
            proj,
            section,
            free_rows,
        };
        debug_assert!(out
            .relation_basis
            .iter()
            .all(|rel| out.proj.apply(rel).is_empty()));
        out
    }

    pub fn exponent(&self) -> u64 {
        self.e
    }

    /// The dim x ambient projection matrix.
    pub fn projection(&self) -> &ExactMatrix {
        &self.proj
    }

    /// The ambient x dim section matrix.
    pub fn section(&self) -> &ExactMatrix {
        &self.section
    }

    /// Row-reduced relation basis columns.
    pub fn relation_basis(&self) -> &[SparseVec] {
        &self.relation_basis
    }

    /// Projects an ambient sparse vector to quotient coordinates.
    pub fn project(&self, vec: &SparseVec) -> SparseVec {
        self.proj.apply(vec)
    }
}
