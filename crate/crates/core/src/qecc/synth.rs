use alloc::vec;
use alloc::vec::Vec;

use crate::qsim::{schmidt, CMatrix, LinearIsometry, PureState, RegisterSystem, C64};

use super::QeccError;

/// Largest accepted deviation of the decoding vectors from orthonormality.
pub const KL_THRESHOLD: f64 = 1e-9;

/// Decoder acting on the held registers. The output is the logical register
/// followed, when needed, by one junk register.
#[derive(Debug, Clone, PartialEq)]
pub struct ErasureDecoder {
    /// Held registers in the order the decoder consumes them.
    pub held: Vec<usize>,
    pub isometry: LinearIsometry,
    pub diagnostic: f64,
}

impl ErasureDecoder {
    pub fn logical_dim(&self) -> usize {
        self.isometry.out_dims()[0]
    }
}

/// Candidate decoding vectors `h_{i,k}` (held side) and their deviation from
/// an orthonormal family.
struct Analysis {
    held: Vec<usize>,
    vectors: Vec<Vec<C64>>,
    rank: usize,
    diagnostic: f64,
}

fn analyze(encoder: &LinearIsometry, erased: &[usize]) -> Result<Analysis, QeccError> {
    let out = encoder.out_dims();
    let regs = out.len();
    if let Some(&e) = erased.iter().find(|&&e| e >= regs) {
        return Err(QeccError::Sim(crate::qsim::QsimError::BadRegister(e)));
    }
    let held: Vec<usize> = (0..regs).filter(|r| !erased.contains(r)).collect();
    let kl = encoder.in_dim();
    if held.is_empty() {
        return Ok(Analysis { held, vectors: Vec::new(), rank: 0, diagnostic: 1.0 });
    }
    let sys = RegisterSystem::from_dims(out)?;
    let logical = |i: usize| PureState::new(sys.clone(), encoder.matrix().column(i));
    let zero = logical(0)?;
    // Environment basis e_k with weights lambda_k from |0bar>.
    let (lambdas, env): (Vec<f64>, Vec<Vec<C64>>) = if erased.is_empty() {
        (vec![1.0], vec![vec![C64::new(1.0, 0.0)]])
    } else {
        let s = schmidt(&zero, &held)?;
        (s.lambdas, s.right)
    };
    let mut vectors: Vec<Vec<C64>> = Vec::with_capacity(kl * lambdas.len());
    for i in 0..kl {
        let (m, _) = logical(i)?.coefficient_matrix(&held)?;
        for (lam, e) in lambdas.iter().zip(&env) {
            let ce: Vec<C64> = e.iter().map(|z| z.conj()).collect();
            let s = libm::sqrt(*lam);
            vectors.push(m.mul_vec(&ce).into_iter().map(|z| z / s).collect());
        }
    }
    let mut diagnostic: f64 = 0.0;
    for a in 0..vectors.len() {
        for b in a..vectors.len() {
            let g: C64 = vectors[a].iter().zip(&vectors[b]).map(|(x, y)| x.conj() * y).sum();
            let want = if a == b { 1.0 } else { 0.0 };
            diagnostic = diagnostic.max((g - want).norm());
        }
    }
    Ok(Analysis { held, vectors, rank: lambdas.len(), diagnostic })
}

/// Deviation of the erasure-decoding family from orthonormality; zero when
/// the erased registers are correctable.
pub fn kl_diagnostic(encoder: &LinearIsometry, erased: &[usize]) -> Result<f64, QeccError> {
    Ok(analyze(encoder, erased)?.diagnostic)
}

/// Decoder for the erasure of `erased` (indices into the encoder outputs).
/// With `|0bar> = sum_k sqrt(lambda_k) |a_k>|e_k>` across (held : erased),
/// `h_{i,k} = <e_k|ibar> / sqrt(lambda_k)`; when these are orthonormal the
/// decoder sends `h_{i,k}` to `|i>|k>` and is completed to an isometry.
pub fn synthesize_erasure_decoder(encoder: &LinearIsometry, erased: &[usize]) -> Result<ErasureDecoder, QeccError> {
    let a = analyze(encoder, erased)?;
    if a.diagnostic > KL_THRESHOLD {
        return Err(QeccError::NotCorrectable { diagnostic: a.diagnostic });
    }
    let kl = encoder.in_dim();
    let in_dims: Vec<usize> = a.held.iter().map(|&h| encoder.out_dims()[h]).collect();
    let dh: usize = in_dims.iter().product();
    let junk = dh.div_ceil(kl);
    // Orthonormal basis of the held space: the h vectors first, then the
    // standard basis vectors that survive orthogonalization.
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(dh);
    let push = |v: &[C64], basis: &mut Vec<Vec<C64>>| {
        let mut w = v.to_vec();
        for _ in 0..2 {
            for b in basis.iter() {
                let c: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= c * bi;
                }
            }
        }
        let n = libm::sqrt(w.iter().map(|z| z.norm_sqr()).sum::<f64>());
        if n > 1e-6 {
            basis.push(w.into_iter().map(|z| z / n).collect());
            true
        } else {
            false
        }
    };
    for v in &a.vectors {
        push(v, &mut basis);
    }
    let fixed = basis.len();
    for j in 0..dh {
        if basis.len() == dh {
            break;
        }
        let mut e = vec![C64::new(0.0, 0.0); dh];
        e[j] = C64::new(1.0, 0.0);
        push(&e, &mut basis);
    }
    // h_{i,k} -> |i, k>; completion vectors -> unused slots |i, k>, k >= rank.
    let mut slots: Vec<usize> = Vec::with_capacity(dh);
    for i in 0..kl {
        for k in 0..a.rank {
            slots.push(i * junk + k);
        }
    }
    debug_assert_eq!(slots.len(), fixed);
    for i in 0..kl {
        for k in a.rank..junk {
            slots.push(i * junk + k);
        }
    }
    let mut u = CMatrix::zeros(kl * junk, dh);
    for (b, &row) in basis.iter().zip(&slots) {
        for (c, z) in b.iter().enumerate() {
            u[(row, c)] = z.conj();
        }
    }
    let out_dims = if junk == 1 { vec![kl] } else { vec![kl, junk] };
    let isometry = LinearIsometry::with_tolerance(in_dims, out_dims, u, 1e-10)?;
    Ok(ErasureDecoder { held: a.held, isometry, diagnostic: a.diagnostic })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qecc::quantum_shamir;

    #[test]
    fn no_erasure_inverts_encoder() {
        let s = quantum_shamir(2, 3, 3).unwrap();
        let enc = &s.blocks()[0].encoder;
        let d = synthesize_erasure_decoder(enc, &[]).unwrap();
        let prod = d.isometry.matrix().mul(enc.matrix());
        let junk = d.isometry.out_dims()[1];
        for i in 0..3 {
            for r in 0..prod.rows() {
                let want = if r == i * junk { 1.0 } else { 0.0 };
                assert!((prod[(r, i)] - C64::new(want, 0.0)).norm() < 1e-10);
            }
        }
    }
}
