//! Quantum one-time pad over qudits with generalized Paulis
//! `X|j> = |j+1 mod d>`, `Z|j> = w^j |j>`, `w = exp(2 pi i / d)`.
//!
//! `Enc_k = X^a Z^b` per register (Z applied first) and `Dec_k` is its
//! exact adjoint `Z^-b X^-a`.

use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::qsim::{CMatrix, DensityMatrix, PureState, QsimError, RegisterSystem, C64};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OtpError {
    #[error("key covers {key} registers, {targets} targeted")]
    KeyShape { key: usize, targets: usize },
    #[error("register {register} has dimension {state}, key expects {key}")]
    DimMismatch { register: usize, state: usize, key: usize },
    #[error("key component {value} out of range for dimension {dim}")]
    OutOfRange { value: u32, dim: usize },
    #[error("dimension {0} unsupported")]
    BadDimension(usize),
    #[error(transparent)]
    Sim(#[from] QsimError),
}

/// Per-register Pauli exponents `(a, b)` with `a, b` in `Z_d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OtpKey {
    dims: Vec<usize>,
    pairs: Vec<(u32, u32)>,
}

/// `ceil(log2(n))` for `n >= 1`.
pub fn ceil_log2(n: u128) -> u32 {
    if n <= 1 {
        0
    } else {
        128 - (n - 1).leading_zeros()
    }
}

impl OtpKey {
    pub fn new(dims: Vec<usize>, pairs: Vec<(u32, u32)>) -> Result<Self, OtpError> {
        if dims.len() != pairs.len() {
            return Err(OtpError::KeyShape { key: pairs.len(), targets: dims.len() });
        }
        for (&d, &(a, b)) in dims.iter().zip(&pairs) {
            if d < 2 {
                return Err(OtpError::BadDimension(d));
            }
            for v in [a, b] {
                if v as usize >= d {
                    return Err(OtpError::OutOfRange { value: v, dim: d });
                }
            }
        }
        Ok(OtpKey { dims, pairs })
    }

    pub fn zero(dims: Vec<usize>) -> Self {
        let pairs = vec![(0, 0); dims.len()];
        OtpKey { dims, pairs }
    }

    /// Number of keys, `prod d^2`.
    pub fn key_count(dims: &[usize]) -> u128 {
        dims.iter().map(|&d| (d * d) as u128).product()
    }

    /// The `idx`-th key in mixed radix order `(a_0, b_0, a_1, b_1, ...)`,
    /// first component most significant.
    pub fn from_index(dims: Vec<usize>, mut idx: u128) -> Result<Self, OtpError> {
        let mut comps = vec![0u32; 2 * dims.len()];
        for (i, c) in comps.iter_mut().enumerate().rev() {
            let d = dims[i / 2] as u128;
            *c = (idx % d) as u32;
            idx /= d;
        }
        Self::from_components(dims, &comps)
    }

    /// From the flat list `(a_0, b_0, a_1, b_1, ...)`.
    pub fn from_components(dims: Vec<usize>, comps: &[u32]) -> Result<Self, OtpError> {
        if comps.len() != 2 * dims.len() {
            return Err(OtpError::KeyShape { key: comps.len() / 2, targets: dims.len() });
        }
        let pairs = comps.chunks(2).map(|c| (c[0], c[1])).collect();
        Self::new(dims, pairs)
    }

    pub fn components(&self) -> Vec<u32> {
        self.pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }

    /// `sum ceil(log2 d^2)` over registers.
    pub fn bit_length(&self) -> u32 {
        Self::bit_length_for(&self.dims)
    }

    pub fn bit_length_for(dims: &[usize]) -> u32 {
        dims.iter().map(|&d| ceil_log2((d * d) as u128)).sum()
    }
}

fn omega_table(d: usize) -> Vec<C64> {
    (0..d)
        .map(|j| {
            let th = 2.0 * core::f64::consts::PI * j as f64 / d as f64;
            C64::new(libm::cos(th), libm::sin(th))
        })
        .collect()
}

/// `X^a Z^b` on one qudit of dimension `d`.
pub fn pauli_matrix(d: usize, a: u32, b: u32) -> CMatrix {
    let w = omega_table(d);
    let (a, b) = (a as usize % d, b as usize % d);
    let mut m = CMatrix::zeros(d, d);
    for j in 0..d {
        m[((j + a) % d, j)] = w[(b * j) % d];
    }
    m
}

/// Monomial unitary on the whole system: basis index `i` goes to
/// `perm[i]` with phase `phase[i]`.
struct Monomial {
    perm: Vec<usize>,
    phase: Vec<C64>,
}

fn monomial(system: &RegisterSystem, targets: &[usize], key: &OtpKey, adjoint: bool) -> Result<Monomial, OtpError> {
    if targets.len() != key.dims.len() {
        return Err(OtpError::KeyShape { key: key.dims.len(), targets: targets.len() });
    }
    system.check_targets(targets)?;
    let dims = system.dims();
    for (&t, &kd) in targets.iter().zip(&key.dims) {
        if dims[t] != kd {
            return Err(OtpError::DimMismatch { register: t, state: dims[t], key: kd });
        }
    }
    let st = system.strides();
    let n = system.total_dim();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut phase = vec![C64::new(1.0, 0.0); n];
    for (&t, &(a, b)) in targets.iter().zip(&key.pairs) {
        let d = dims[t];
        let w = omega_table(d);
        let (a, b) = (a as usize, b as usize);
        for i in 0..n {
            let j = (i / st[t]) % d;
            // Enc: |j> -> w^{bj} |j+a>;  Dec: |j> -> w^{-b(j-a)} |j-a>.
            let (nj, ph) = if adjoint {
                let nj = (j + d - a) % d;
                (nj, w[(d - (b * nj) % d) % d])
            } else {
                ((j + a) % d, w[(b * j) % d])
            };
            phase[i] *= ph;
            perm[i] = perm[i] - j * st[t] + nj * st[t];
        }
    }
    Ok(Monomial { perm, phase })
}

fn apply_pure(psi: &PureState, m: &Monomial) -> PureState {
    let mut out = vec![C64::new(0.0, 0.0); psi.amplitudes().len()];
    for (i, a) in psi.amplitudes().iter().enumerate() {
        out[m.perm[i]] = a * m.phase[i];
    }
    PureState::new(psi.system().clone(), out).expect("unitary preserves the norm")
}

fn apply_density(rho: &DensityMatrix, m: &Monomial) -> DensityMatrix {
    let d = rho.dim();
    let src = rho.matrix();
    let mut out = CMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            out[(m.perm[i], m.perm[j])] = src[(i, j)] * m.phase[i] * m.phase[j].conj();
        }
    }
    DensityMatrix::from_parts(rho.system().clone(), out)
}

/// `Enc_k` on the registers `targets` (key register `i` acts on `targets[i]`).
pub fn otp_enc(psi: &PureState, targets: &[usize], key: &OtpKey) -> Result<PureState, OtpError> {
    Ok(apply_pure(psi, &monomial(psi.system(), targets, key, false)?))
}

pub fn otp_dec(psi: &PureState, targets: &[usize], key: &OtpKey) -> Result<PureState, OtpError> {
    Ok(apply_pure(psi, &monomial(psi.system(), targets, key, true)?))
}

pub fn otp_enc_density(rho: &DensityMatrix, targets: &[usize], key: &OtpKey) -> Result<DensityMatrix, OtpError> {
    Ok(apply_density(rho, &monomial(rho.system(), targets, key, false)?))
}

pub fn otp_dec_density(rho: &DensityMatrix, targets: &[usize], key: &OtpKey) -> Result<DensityMatrix, OtpError> {
    Ok(apply_density(rho, &monomial(rho.system(), targets, key, true)?))
}

/// Max-norm deviation of `(1/d^2) sum_k Enc_k(rho)` from `I/d` for a
/// single-register state.
pub fn key_average_check(d: usize, rho: &DensityMatrix) -> Result<f64, OtpError> {
    if !(2..=16).contains(&d) {
        return Err(OtpError::BadDimension(d));
    }
    if rho.system().dims() != [d] {
        return Err(OtpError::DimMismatch { register: 0, state: rho.dim(), key: d });
    }
    let mut acc = CMatrix::zeros(d, d);
    let w = 1.0 / (d * d) as f64;
    for idx in 0..OtpKey::key_count(&[d]) {
        let k = OtpKey::from_index(vec![d], idx)?;
        acc.add_scaled(otp_enc_density(rho, &[0], &k)?.matrix(), w);
    }
    let target = CMatrix::identity(d).scale(C64::new(1.0 / d as f64, 0.0));
    Ok(acc.max_abs_diff(&target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(d: usize, j: usize) -> PureState {
        PureState::basis(RegisterSystem::from_dims(&[d]).unwrap(), &[j]).unwrap()
    }

    #[test]
    fn key_shape_and_bits() {
        assert_eq!(OtpKey::bit_length_for(&[2]), 2);
        assert_eq!(OtpKey::bit_length_for(&[3]), 4);
        assert_eq!(OtpKey::bit_length_for(&[5, 2]), 5 + 2);
        assert!(OtpKey::new(vec![3], vec![(3, 0)]).is_err());
        assert_eq!(OtpKey::from_index(vec![3], 5).unwrap().pairs(), &[(1, 2)]);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(17), 5);
    }

    #[test]
    fn qutrit_shift_then_phase() {
        let k = OtpKey::new(vec![3], vec![(1, 2)]).unwrap();
        let out = otp_enc(&basis(3, 0), &[0], &k).unwrap();
        assert!((out.fidelity(&basis(3, 1)) - 1.0).abs() < 1e-14);
        // |1> -> w^2 |2>
        let out = otp_enc(&basis(3, 1), &[0], &k).unwrap();
        let w2 = omega_table(3)[2];
        assert!((out.amplitudes()[2] - w2).norm() < 1e-14);
    }

    #[test]
    fn matches_pauli_matrix() {
        for d in 2..5 {
            let sys = RegisterSystem::from_dims(&[d]).unwrap();
            let amps: Vec<C64> = (0..d).map(|j| C64::new(1.0 + j as f64, 0.5 * j as f64)).collect();
            let psi = PureState::normalized(sys, amps).unwrap();
            for idx in 0..(d * d) as u128 {
                let k = OtpKey::from_index(vec![d], idx).unwrap();
                let (a, b) = k.pairs()[0];
                let want = pauli_matrix(d, a, b).mul_vec(psi.amplitudes());
                let got = otp_enc(&psi, &[0], &k).unwrap();
                for (x, y) in got.amplitudes().iter().zip(&want) {
                    assert!((x - y).norm() < 1e-13);
                }
            }
        }
    }
}
