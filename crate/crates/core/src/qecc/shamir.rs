use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::access::{AccessStructure, PartySet};
use crate::gf::{is_prime, Field, Poly};
use crate::qsim::{tuple_to_index, BasisPermutation, CMatrix, LinearIsometry, C64};

use super::{Block, Owner, QeccError, QeccScheme, ShamirParams};

/// Quantum Shamir code for `Th_n^t` (`t > n/2`) over GF(q): the canonical
/// length-`2t-1` code at points `0..2t-2` with the secret as the degree
/// `t-1` coefficient,
/// `|s> -> q^{-(t-1)/2} sum_c |f(0), ..., f(2t-2)>`.
/// Registers `n..2t-2` are pre-erased environment.
pub fn quantum_shamir(t: usize, n: usize, q: u32) -> Result<QeccScheme, QeccError> {
    if t == 0 || n == 0 || 2 * t <= n {
        return Err(QeccError::Params("need n/2 < t"));
    }
    let len = 2 * t - 1;
    if !is_prime(q) || (q as usize) < len.max(n) {
        return Err(QeccError::Params("need a prime q >= max(n, 2t-1)"));
    }
    let field = Field::prime(q)?;
    let qd = q as usize;
    let dims = vec![qd; len];
    let rows: usize = dims.iter().product();
    let amp = C64::new(libm::pow(qd as f64, -((t - 1) as f64) / 2.0), 0.0);
    let mut m = CMatrix::zeros(rows, qd);
    let mut coeffs = vec![0u32; t];
    let mut tuple = vec![0usize; len];
    for s in 0..q {
        for idx in 0..qd.pow(t as u32 - 1) {
            let mut x = idx;
            for c in coeffs.iter_mut().take(t - 1) {
                *c = (x % qd) as u32;
                x /= qd;
            }
            coeffs[t - 1] = s;
            let f = Poly::new(field, coeffs.clone())?;
            for (j, v) in tuple.iter_mut().enumerate() {
                *v = f.eval(j as u32) as usize;
            }
            m[(tuple_to_index(&tuple, &dims), s as usize)] += amp;
        }
    }
    let encoder = LinearIsometry::new(vec![qd], dims, m)?;
    let owners = (0..len).map(|j| if j < n { Owner::Party(j) } else { Owner::Environment }).collect();
    let structure = AccessStructure::threshold(t, n)?;
    let scheme = QeccScheme::new(format!("shamir({t},{n},{q})"), vec![Block { encoder, start: 0 }], owners, n, structure)?;
    Ok(scheme.with_shamir(ShamirParams { t, q }))
}

/// Analytic decoder: a basis permutation on `t` held registers.
#[derive(Debug, Clone, PartialEq)]
pub struct ShamirDecoder {
    pub permutation: BasisPermutation,
    /// Held registers in canonical order; the secret lands in the first.
    pub targets: Vec<usize>,
}

impl ShamirDecoder {
    pub fn output(&self) -> usize {
        self.targets[0]
    }
}

/// `(y_1..y_t) -> (s, f(z_1), ..., f(z_{t-1}))` where `f` interpolates the
/// held values, `s` is its leading coefficient and `z_j` are the remaining
/// canonical points.
pub fn quantum_shamir_decoder(scheme: &QeccScheme, p: PartySet) -> Result<ShamirDecoder, QeccError> {
    let ShamirParams { t, q } = scheme.shamir().ok_or(QeccError::Params("not a quantum Shamir code"))?;
    let held = scheme.held_registers(p);
    if held.len() < t {
        return Err(QeccError::TooFewShares { held: held.len(), need: t });
    }
    let targets: Vec<usize> = held[..t].to_vec();
    let field = Field::prime(q)?;
    let pts: Vec<u32> = targets.iter().map(|&r| r as u32).collect();
    let others: Vec<u32> = (0..(2 * t - 1) as u32).filter(|x| !pts.contains(x)).collect();
    let failed = core::cell::Cell::new(false);
    let permutation = BasisPermutation::from_fn(vec![q as usize; t], |y| {
        let sample: Vec<(u32, u32)> = pts.iter().zip(y).map(|(&x, &v)| (x, v as u32)).collect();
        match Poly::interpolate(field, &sample) {
            Ok(f) => {
                let mut out = vec![f.coeff(t - 1) as usize];
                out.extend(others.iter().map(|&z| f.eval(z) as usize));
                out
            }
            Err(_) => {
                failed.set(true);
                vec![0; t]
            }
        }
    });
    if failed.get() {
        return Err(QeccError::Params("repeated evaluation point"));
    }
    Ok(ShamirDecoder { permutation: permutation?, targets })
}
