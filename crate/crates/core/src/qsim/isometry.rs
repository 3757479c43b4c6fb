use alloc::vec;
use alloc::vec::Vec;

use super::state::{index_to_tuple, tuple_to_index};
use super::{CMatrix, QsimError, C64};

/// Unitarity tolerance for `V^dagger V = I`.
pub const ISOMETRY_TOL: f64 = 1e-12;

/// Linear isometry from the product of `in_dims` to the product of `out_dims`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearIsometry {
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
    m: CMatrix,
}

impl LinearIsometry {
    pub fn new(in_dims: Vec<usize>, out_dims: Vec<usize>, m: CMatrix) -> Result<Self, QsimError> {
        Self::with_tolerance(in_dims, out_dims, m, ISOMETRY_TOL)
    }

    pub fn with_tolerance(in_dims: Vec<usize>, out_dims: Vec<usize>, m: CMatrix, tol: f64) -> Result<Self, QsimError> {
        let din: usize = in_dims.iter().product();
        let dout: usize = out_dims.iter().product();
        if m.rows() != dout || m.cols() != din {
            return Err(QsimError::DimensionMismatch { expected: dout * din, got: m.rows() * m.cols() });
        }
        let err = m.isometry_error();
        if err > tol {
            return Err(QsimError::NotIsometry(err));
        }
        Ok(LinearIsometry { in_dims, out_dims, m })
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let d = dims.iter().product();
        LinearIsometry { in_dims: dims.clone(), out_dims: dims, m: CMatrix::identity(d) }
    }

    /// `|i> -> |i>` from dimension `din` into `dout >= din`.
    pub fn embedding(din: usize, dout: usize) -> Result<Self, QsimError> {
        if dout < din {
            return Err(QsimError::DimensionMismatch { expected: din, got: dout });
        }
        let m = CMatrix::from_fn(dout, din, |r, c| C64::new(if r == c { 1.0 } else { 0.0 }, 0.0));
        Ok(LinearIsometry { in_dims: vec![din], out_dims: vec![dout], m })
    }

    pub fn in_dims(&self) -> &[usize] {
        &self.in_dims
    }

    pub fn out_dims(&self) -> &[usize] {
        &self.out_dims
    }

    pub fn in_dim(&self) -> usize {
        self.m.cols()
    }

    pub fn out_dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    /// Entrywise complex conjugate (the action on the bra side).
    pub fn conj(&self) -> Self {
        LinearIsometry { in_dims: self.in_dims.clone(), out_dims: self.out_dims.clone(), m: self.m.conj() }
    }

    /// `self * other`: apply `other` first.
    pub fn after(&self, other: &LinearIsometry) -> Result<Self, QsimError> {
        if other.out_dim() != self.in_dim() {
            return Err(QsimError::DimensionMismatch { expected: self.in_dim(), got: other.out_dim() });
        }
        Ok(LinearIsometry { in_dims: other.in_dims.clone(), out_dims: self.out_dims.clone(), m: self.m.mul(&other.m) })
    }

    pub fn tensor(&self, other: &LinearIsometry) -> Self {
        let mut in_dims = self.in_dims.clone();
        in_dims.extend_from_slice(&other.in_dims);
        let mut out_dims = self.out_dims.clone();
        out_dims.extend_from_slice(&other.out_dims);
        LinearIsometry { in_dims, out_dims, m: self.m.kron(&other.m) }
    }

    pub fn isometry_error(&self) -> f64 {
        self.m.isometry_error()
    }
}

/// Bijection on the basis tuples of registers with dimensions `dims`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisPermutation {
    dims: Vec<usize>,
    map: Vec<usize>,
}

impl BasisPermutation {
    /// `map[i]` is the image of basis index `i`.
    pub fn new(dims: Vec<usize>, map: Vec<usize>) -> Result<Self, QsimError> {
        let size: usize = dims.iter().product();
        if map.len() != size {
            return Err(QsimError::DimensionMismatch { expected: size, got: map.len() });
        }
        let mut seen = vec![false; size];
        for &m in &map {
            if m >= size || seen[m] {
                return Err(QsimError::NotBijective);
            }
            seen[m] = true;
        }
        Ok(BasisPermutation { dims, map })
    }

    pub fn from_fn(dims: Vec<usize>, f: impl Fn(&[usize]) -> Vec<usize>) -> Result<Self, QsimError> {
        let size: usize = dims.iter().product();
        let mut map = Vec::with_capacity(size);
        for i in 0..size {
            let img = f(&index_to_tuple(i, &dims));
            if img.len() != dims.len() || img.iter().zip(&dims).any(|(v, d)| v >= d) {
                return Err(QsimError::NotBijective);
            }
            map.push(tuple_to_index(&img, &dims));
        }
        Self::new(dims, map)
    }

    pub fn identity(dims: Vec<usize>) -> Self {
        let size = dims.iter().product();
        BasisPermutation { dims, map: (0..size).collect() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn size(&self) -> usize {
        self.map.len()
    }

    pub fn image(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.map.len()];
        for (i, &m) in self.map.iter().enumerate() {
            inv[m] = i;
        }
        BasisPermutation { dims: self.dims.clone(), map: inv }
    }

    /// Permutation matrix.
    pub fn to_isometry(&self) -> LinearIsometry {
        let n = self.map.len();
        let mut m = CMatrix::zeros(n, n);
        for (i, &j) in self.map.iter().enumerate() {
            m[(j, i)] = C64::new(1.0, 0.0);
        }
        LinearIsometry { in_dims: self.dims.clone(), out_dims: self.dims.clone(), m }
    }
}
