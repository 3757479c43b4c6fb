use alloc::vec;
use alloc::vec::Vec;

use super::{Field, GfError, Result};

/// Dense row-major matrix over a finite field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with the pivot columns.
#[derive(Debug, Clone)]
pub struct RowEchelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl RowEchelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1 % field.order());
        }
        m
    }

    pub fn from_rows(field: Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return Err(GfError::Shape);
            }
            for &v in r {
                data.push(field.check(v)?);
            }
        }
        Ok(Matrix { field, rows: rows.len(), cols, data })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows || self.field != other.field {
            return Err(GfError::Shape);
        }
        let f = self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = f.add(out.get(i, j), f.mul(a, other.get(k, j)));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.rows {
            return Err(GfError::Shape);
        }
        let f = self.field;
        let mut out = vec![0u32; self.cols];
        for (i, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = f.add(*o, f.mul(a, self.get(i, j)));
            }
        }
        Ok(out)
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols || self.field != other.field {
            return Err(GfError::Shape);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { field: self.field, rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix { field: self.field, rows: idx.len(), cols: self.cols, data }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, idx.len());
        for r in 0..self.rows {
            for (j, &c) in idx.iter().enumerate() {
                out.set(r, j, self.get(r, c));
            }
        }
        out
    }

    /// Gauss-Jordan elimination with first-nonzero pivoting.
    pub fn rref(&self) -> RowEchelon {
        let f = self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pr = 0;
        for c in 0..m.cols {
            if pr == m.rows {
                break;
            }
            let Some(sel) = (pr..m.rows).find(|&r| m.get(r, c) != 0) else {
                continue;
            };
            if sel != pr {
                for j in 0..m.cols {
                    m.data.swap(sel * m.cols + j, pr * m.cols + j);
                }
            }
            let inv = f.inv(m.get(pr, c)).expect("pivot is nonzero");
            for j in 0..m.cols {
                let v = f.mul(m.get(pr, j), inv);
                m.set(pr, j, v);
            }
            for r in 0..m.rows {
                if r == pr {
                    continue;
                }
                let factor = m.get(r, c);
                if factor == 0 {
                    continue;
                }
                for j in 0..m.cols {
                    let v = f.sub(m.get(r, j), f.mul(factor, m.get(pr, j)));
                    m.set(r, j, v);
                }
            }
            pivots.push(c);
            pr += 1;
        }
        RowEchelon { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Basis of `{x : self * x^T = 0}` as the rows of the returned matrix.
    pub fn null_space(&self) -> Matrix {
        let f = self.field;
        let ech = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        let mut out = Matrix::zeros(f, free.len(), self.cols);
        for (i, &fc) in free.iter().enumerate() {
            out.set(i, fc, 1 % f.order());
            for (pr, &pc) in ech.pivots.iter().enumerate() {
                out.set(i, pc, f.neg(ech.matrix.get(pr, fc)));
            }
        }
        out
    }

    /// Whether `v` lies in the row span.
    pub fn row_space_contains(&self, v: &[u32]) -> Result<bool> {
        if v.len() != self.cols {
            return Err(GfError::Shape);
        }
        let base = self.rank();
        let ext = self.vstack(&Matrix::from_rows(self.field, self.cols, &[v.to_vec()])?)?;
        Ok(ext.rank() == base)
    }

    /// Solves `x * self = target` for a row vector `x`, if possible.
    pub fn solve_left(&self, target: &[u32]) -> Result<Option<Vec<u32>>> {
        if target.len() != self.cols {
            return Err(GfError::Shape);
        }
        let f = self.field;
        // Work on the augmented transpose [A^T | target^T].
        let mut aug = Matrix::zeros(f, self.cols, self.rows + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(c, r, self.get(r, c));
            }
        }
        for (c, &t) in target.iter().enumerate() {
            aug.set(c, self.rows, f.check(t)?);
        }
        let ech = aug.rref();
        if ech.pivots.contains(&self.rows) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.rows];
        for (pr, &pc) in ech.pivots.iter().enumerate() {
            x[pc] = ech.matrix.get(pr, self.rows);
        }
        Ok(Some(x))
    }
}
