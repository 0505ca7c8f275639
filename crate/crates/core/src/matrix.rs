//! Dense matrices over GF(q).

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::field::{FieldElem, FieldError, FieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatrixError {
    #[error("dimension mismatch: {0}")]
    Shape(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row-major dense matrix over a [`FieldSpec`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixGF {
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
    field: FieldSpec,
}

impl fmt::Debug for MatrixGF {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} {}x{} [", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c).0)?;
            }
        }
        write!(f, "]")
    }
}

impl MatrixGF {
    pub fn zeros(rows: usize, cols: usize, field: &FieldSpec) -> Self {
        MatrixGF { rows, cols, data: vec![FieldElem::ZERO; rows * cols], field: field.clone() }
    }

    pub fn identity(n: usize, field: &FieldSpec) -> Self {
        let mut m = Self::zeros(n, n, field);
        for i in 0..n {
            m.set(i, i, FieldElem::ONE);
        }
        m
    }

    /// Build from integer-encoded rows; every row must have `cols` entries.
    pub fn from_rows(rows: &[Vec<u32>], cols: usize, field: &FieldSpec) -> Result<Self, MatrixError> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != cols {
                return Err(MatrixError::Shape(format!("row {i} has {} entries, expected {cols}", row.len())));
            }
            for &v in row {
                data.push(field.elem(v)?);
            }
        }
        Ok(MatrixGF { rows: rows.len(), cols, data, field: field.clone() })
    }

    pub fn from_elems(rows: usize, cols: usize, data: Vec<FieldElem>, field: &FieldSpec) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::Shape(format!("{} entries for a {rows}x{cols} matrix", data.len())));
        }
        if let Some(bad) = data.iter().find(|e| e.value() >= field.order()) {
            return Err(FieldError::OutOfRange { value: bad.value(), q: field.order() }.into());
        }
        Ok(MatrixGF { rows, cols, data, field: field.clone() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn data(&self) -> &[FieldElem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElem) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[FieldElem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    /// Entries as integers, one `Vec` per row.
    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).iter().map(|e| e.value()).collect()).collect()
    }

    pub fn mul(&self, rhs: &MatrixGF) -> Result<MatrixGF, MatrixError> {
        self.field.ensure_same(&rhs.field)?;
        if self.cols != rhs.rows {
            return Err(MatrixError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = MatrixGF::zeros(self.rows, rhs.cols, f);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, f.add(cur, f.mul(a, rhs.get(k, j))));
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, rhs: &MatrixGF) -> Result<MatrixGF, MatrixError> {
        self.field.ensure_same(&rhs.field)?;
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(MatrixError::Shape(format!(
                "{}x{} plus {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(&a, &b)| self.field.add(a, b)).collect();
        Ok(MatrixGF { data, ..self.clone() })
    }

    /// Stack `self` on top of `below`.
    pub fn vstack(&self, below: &MatrixGF) -> Result<MatrixGF, MatrixError> {
        self.field.ensure_same(&below.field)?;
        if self.cols != below.cols {
            return Err(MatrixError::Shape(format!("stacking {} and {} columns", self.cols, below.cols)));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&below.data);
        Ok(MatrixGF { rows: self.rows + below.rows, cols: self.cols, data, field: self.field.clone() })
    }

    /// Place `right` beside `self`.
    pub fn hstack(&self, right: &MatrixGF) -> Result<MatrixGF, MatrixError> {
        self.field.ensure_same(&right.field)?;
        if self.rows != right.rows {
            return Err(MatrixError::Shape(format!("joining {} and {} rows", self.rows, right.rows)));
        }
        let mut data = Vec::with_capacity(self.rows * (self.cols + right.cols));
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(right.row(r));
        }
        Ok(MatrixGF { rows: self.rows, cols: self.cols + right.cols, data, field: self.field.clone() })
    }

    pub fn transpose(&self) -> MatrixGF {
        let mut out = MatrixGF::zeros(self.cols, self.rows, &self.field);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Copy of the rows `start..end`.
    pub fn row_range(&self, start: usize, end: usize) -> MatrixGF {
        MatrixGF {
            rows: end - start,
            cols: self.cols,
            data: self.data[start * self.cols..end * self.cols].to_vec(),
            field: self.field.clone(),
        }
    }

    /// Copy of the columns `start..end`.
    pub fn col_range(&self, start: usize, end: usize) -> MatrixGF {
        let mut data = Vec::with_capacity(self.rows * (end - start));
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        MatrixGF { rows: self.rows, cols: end - start, data, field: self.field.clone() }
    }

    /// Reduced row echelon form (same shape, zero rows last) and rank.
    pub fn rref(&self) -> (MatrixGF, usize) {
        let (m, pivots) = self.rref_with_pivots();
        (m, pivots.len())
    }

    /// Reduced row echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (MatrixGF, Vec<usize>) {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = f.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = m.get(r, j);
                m.set(r, j, f.mul(v, inv));
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let factor = m.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(factor, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Basis (as rows) of the right kernel `{v : self * v = 0}`.
    pub fn nullspace(&self) -> MatrixGF {
        let f = &self.field;
        let (r, pivots) = self.rref_with_pivots();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut out = MatrixGF::zeros(free.len(), self.cols, f);
        for (k, &fc) in free.iter().enumerate() {
            out.set(k, fc, FieldElem::ONE);
            for (i, &pc) in pivots.iter().enumerate() {
                out.set(k, pc, f.neg(r.get(i, fc)));
            }
        }
        out
    }

    /// Solve `self * X = rhs` for a matrix `self` of full column rank.
    /// Returns `None` if `self` is rank deficient or the system is inconsistent.
    pub fn solve_full_column_rank(&self, rhs: &MatrixGF) -> Result<Option<MatrixGF>, MatrixError> {
        if rhs.rows != self.rows {
            return Err(MatrixError::Shape(format!("{} equations, {} right-hand rows", self.rows, rhs.rows)));
        }
        let d = self.cols;
        let aug = self.hstack(rhs)?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() != d || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Ok(None);
        }
        Ok(Some(r.row_range(0, d).col_range(d, aug.cols)))
    }

    /// Matrix with i.i.d. uniform entries.
    pub fn random<R: Rng + ?Sized>(rows: usize, cols: usize, field: &FieldSpec, rng: &mut R) -> Self {
        let q = field.order();
        let data = (0..rows * cols).map(|_| FieldElem(rng.gen_range(0..q) as u8)).collect();
        MatrixGF { rows, cols, data, field: field.clone() }
    }

    /// Uniform over matrices of rank `min(rows, cols)`, by rejection.
    pub fn random_full_rank<R: Rng + ?Sized>(rows: usize, cols: usize, field: &FieldSpec, rng: &mut R) -> Self {
        let target = rows.min(cols);
        loop {
            let m = Self::random(rows, cols, field, rng);
            if m.rank() == target {
                return m;
            }
        }
    }

    /// Uniform over matrices of exactly the given rank.
    ///
    /// Every rank-d matrix factors as A·B with A (rows×d) and B (d×cols) of
    /// full rank in exactly |GL(d)| ways, so independent uniform full-rank
    /// factors give a uniform rank-d product.
    pub fn random_of_rank<R: Rng + ?Sized>(
        rows: usize,
        cols: usize,
        rank: usize,
        field: &FieldSpec,
        rng: &mut R,
    ) -> Result<Self, MatrixError> {
        if rank > rows.min(cols) {
            return Err(MatrixError::Shape(format!("rank {rank} impossible for {rows}x{cols}")));
        }
        if rank == 0 {
            return Ok(Self::zeros(rows, cols, field));
        }
        let a = Self::random_full_rank(rows, rank, field, rng);
        let b = Self::random_full_rank(rank, cols, field, rng);
        a.mul(&b)
    }

    /// Integer index of this matrix among all `rows x cols` matrices
    /// (row-major base-q digits, first entry least significant).
    pub fn index(&self) -> u64 {
        let q = self.field.order() as u64;
        self.data.iter().rev().fold(0u64, |acc, e| acc * q + e.value() as u64)
    }

    /// Inverse of [`MatrixGF::index`].
    pub fn from_index(mut index: u64, rows: usize, cols: usize, field: &FieldSpec) -> Self {
        let q = field.order() as u64;
        let data = (0..rows * cols)
            .map(|_| {
                let v = index % q;
                index /= q;
                FieldElem(v as u8)
            })
            .collect();
        MatrixGF { rows, cols, data, field: field.clone() }
    }
}
