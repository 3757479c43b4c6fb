use alloc::vec;
use alloc::vec::Vec;

use super::eigen::hermitian_eigen;
use super::{CMatrix, PureState, QsimError, Register, RegisterSystem, C64};

/// Schmidt coefficients below this are treated as zero.
pub const SCHMIDT_CUTOFF: f64 = 1e-12;

/// `psi = sum_k sqrt(lambda_k) |left_k> |right_k>`.
#[derive(Debug, Clone)]
pub struct Schmidt {
    /// Descending, summing to one.
    pub lambdas: Vec<f64>,
    /// Over the `left` registers in the given order.
    pub left: Vec<Vec<C64>>,
    /// Over the remaining registers in their original order.
    pub right: Vec<Vec<C64>>,
    pub right_registers: Vec<usize>,
}

/// Schmidt decomposition across `left : rest`, diagonalizing the reduced
/// state of whichever side is smaller.
pub fn schmidt(state: &PureState, left: &[usize]) -> Result<Schmidt, QsimError> {
    if left.is_empty() || left.len() >= state.system().len() {
        return Err(QsimError::EmptyCut);
    }
    let (m, right_registers) = state.coefficient_matrix(left)?;
    let (dl, dr) = (m.rows(), m.cols());
    let mut lambdas = Vec::new();
    let mut lv = Vec::new();
    let mut rv = Vec::new();
    if dr <= dl {
        // M^T conj(M) = sum_k lambda_k e_k e_k^dagger
        let red = m.transpose().mul(&m.conj());
        let (vals, vecs) = hermitian_eigen(&red);
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= SCHMIDT_CUTOFF {
                break;
            }
            let e = vecs.column(k);
            let ce: Vec<C64> = e.iter().map(|z| z.conj()).collect();
            let s = libm::sqrt(lam);
            let l: Vec<C64> = m.mul_vec(&ce).into_iter().map(|z| z / s).collect();
            lambdas.push(lam);
            lv.push(l);
            rv.push(e);
        }
    } else {
        let red = m.mul(&m.adjoint());
        let (vals, vecs) = hermitian_eigen(&red);
        let mt = m.transpose();
        for (k, &lam) in vals.iter().enumerate() {
            if lam <= SCHMIDT_CUTOFF {
                break;
            }
            let l = vecs.column(k);
            let cl: Vec<C64> = l.iter().map(|z| z.conj()).collect();
            let s = libm::sqrt(lam);
            let e: Vec<C64> = mt.mul_vec(&cl).into_iter().map(|z| z / s).collect();
            lambdas.push(lam);
            lv.push(l);
            rv.push(e);
        }
    }
    Ok(Schmidt { lambdas, left: lv, right: rv, right_registers })
}

impl Schmidt {
    /// Coefficient matrix rebuilt from the decomposition (left x right).
    pub fn reconstruct(&self, dl: usize, dr: usize) -> CMatrix {
        let mut m = CMatrix::zeros(dl, dr);
        for (k, &lam) in self.lambdas.iter().enumerate() {
            let s = libm::sqrt(lam);
            for r in 0..dl {
                for c in 0..dr {
                    m[(r, c)] += self.left[k][r] * self.right[k][c] * s;
                }
            }
        }
        m
    }
}

/// `sum_i |i>|i> / sqrt(d)` on (reference, payload).
pub fn entangle_reference(d: usize) -> Result<PureState, QsimError> {
    if !(2..=64).contains(&d) {
        return Err(QsimError::BadDimension(d));
    }
    let sys = RegisterSystem::new(vec![
        Register { label: "reference".into(), dim: d },
        Register { label: "payload".into(), dim: d },
    ])?;
    let mut amps = vec![C64::new(0.0, 0.0); d * d];
    let a = 1.0 / libm::sqrt(d as f64);
    for i in 0..d {
        amps[i * d + i] = C64::new(a, 0.0);
    }
    PureState::new(sys, amps)
}

/// Overlap of the reduced state on the `(reference, output)` pairs with the
/// product of maximally entangled states:
/// `sum_rest |sum_i psi[i, i, rest]|^2 / prod d`.
pub fn entanglement_fidelity(state: &PureState, pairs: &[(usize, usize)]) -> Result<f64, QsimError> {
    let sys = state.system();
    let mut sel = Vec::new();
    for &(r, o) in pairs {
        if sys.dim(r) != sys.dim(o) {
            return Err(QsimError::DimensionMismatch { expected: sys.dim(r), got: sys.dim(o) });
        }
        sel.push(r);
        sel.push(o);
    }
    sys.check_targets(&sel)?;
    let dims = sys.dims();
    let st = sys.strides();
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !sel.contains(i)).collect();
    let base = super::state::offsets(&rest, &dims, &st);
    // Offsets of the diagonal tuples |i1 i1 i2 i2 ...>.
    let mut diag = vec![0usize];
    let mut dprod = 1usize;
    for &(r, o) in pairs {
        let d = dims[r];
        let step = st[r] + st[o];
        dprod *= d;
        diag = diag.iter().flat_map(|&x| (0..d).map(move |i| x + i * step)).collect();
    }
    let amps = state.amplitudes();
    let mut total = 0.0;
    for &b in &base {
        let s: C64 = diag.iter().map(|&o| amps[b + o]).sum();
        total += s.norm_sqr();
    }
    Ok(total / dprod as f64)
}
