use alloc::vec::Vec;

use rand::Rng;

use super::{CMatrix, DensityMatrix, LinearIsometry, PureState, QsimError, RegisterSystem, C64};

/// Standard complex Gaussian sample (Box-Muller).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = libm::sqrt(-2.0 * libm::log(u1));
    let th = 2.0 * core::f64::consts::PI * u2;
    C64::new(r * libm::cos(th), r * libm::sin(th)) * core::f64::consts::FRAC_1_SQRT_2
}

/// Haar-random pure state.
pub fn random_state<R: Rng + ?Sized>(rng: &mut R, system: RegisterSystem) -> Result<PureState, QsimError> {
    let amps = (0..system.total_dim()).map(|_| complex_gaussian(rng)).collect();
    PureState::normalized(system, amps)
}

/// Random mixed state of the given rank (trace of a random pure state on a
/// `dim x rank` system).
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, system: RegisterSystem, rank: usize) -> Result<DensityMatrix, QsimError> {
    let d = system.total_dim();
    let g = CMatrix::from_fn(d, rank.max(1), |_, _| complex_gaussian(rng));
    let m = g.mul(&g.adjoint());
    let tr = m.trace().re;
    DensityMatrix::new(system, m.scale(C64::new(1.0 / tr, 0.0)))
}

/// Orthonormalizes the columns of `m` in place with two passes of modified
/// Gram-Schmidt. Returns `false` if a column is (numerically) dependent.
pub fn orthonormalize_columns(m: &mut CMatrix) -> bool {
    let (rows, cols) = (m.rows(), m.cols());
    for c in 0..cols {
        for _ in 0..2 {
            for p in 0..c {
                let mut dot = C64::new(0.0, 0.0);
                for r in 0..rows {
                    dot += m[(r, p)].conj() * m[(r, c)];
                }
                for r in 0..rows {
                    let v = m[(r, p)];
                    m[(r, c)] -= v * dot;
                }
            }
        }
        let nrm = libm::sqrt((0..rows).map(|r| m[(r, c)].norm_sqr()).sum::<f64>());
        if nrm < 1e-10 {
            return false;
        }
        for r in 0..rows {
            m[(r, c)] /= nrm;
        }
    }
    true
}

/// Haar-like random isometry between the given register shapes.
pub fn random_isometry<R: Rng + ?Sized>(
    rng: &mut R,
    in_dims: Vec<usize>,
    out_dims: Vec<usize>,
) -> Result<LinearIsometry, QsimError> {
    let din: usize = in_dims.iter().product();
    let dout: usize = out_dims.iter().product();
    if dout < din {
        return Err(QsimError::DimensionMismatch { expected: din, got: dout });
    }
    loop {
        let mut m = CMatrix::from_fn(dout, din, |_, _| complex_gaussian(rng));
        if orthonormalize_columns(&mut m) {
            return LinearIsometry::new(in_dims, out_dims, m);
        }
    }
}
