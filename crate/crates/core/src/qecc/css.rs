use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::access::{AccessStructure, PartySet};
use crate::gf::{dual_and_subcode, LinearCode, Matrix};
use crate::qsim::{tuple_to_index, CMatrix, LinearIsometry, PureState, RegisterSystem, C64, MAX_AMPLITUDES};

use super::{Block, Owner, QeccError, QeccScheme};

/// CSS code of `C2^perp ⊆ C1`: logical basis states are the cosets
/// `|xbar> = |C2^perp|^{-1/2} sum_{y in C2^perp} |x + y>`, one per element of
/// `C1 / C2^perp`. The realized structure is found by exhaustive erasure
/// analysis.
pub fn css_build(c1: &LinearCode, c2: &LinearCode) -> Result<QeccScheme, QeccError> {
    let report = dual_and_subcode(c1, c2)?;
    if !report.contained {
        return Err(QeccError::Params("C2^perp is not contained in C1"));
    }
    let field = c1.field();
    let n = c1.len();
    let q = field.order() as usize;
    let d = report.dual;
    // Coset representatives: extend a basis of C2^perp to one of C1.
    let mut rows: Vec<Vec<u32>> = d.generator().row_vecs();
    let mut logical_rows = Vec::new();
    for g in c1.generator().row_vecs() {
        let current = Matrix::from_rows(field, n, &rows)?;
        if rows.is_empty() || !current.row_space_contains(&g)? {
            rows.push(g.clone());
            logical_rows.push(g);
        }
    }
    let k = logical_rows.len();
    if k == 0 {
        return Err(QeccError::Params("logical dimension below 2"));
    }
    let kl = q.checked_pow(k as u32).ok_or(QeccError::Params("logical dimension too large"))?;
    let dims = vec![q; n];
    let total = q.checked_pow(n as u32).filter(|&t| t <= MAX_AMPLITUDES).ok_or(QeccError::Params("code too large to simulate"))?;
    let dual_words: Vec<Vec<u32>> = d.codewords().collect();
    let amp = C64::new(1.0 / libm::sqrt(dual_words.len() as f64), 0.0);
    let mut m = CMatrix::zeros(total, kl);
    for x in 0..kl {
        let mut rep = vec![0u32; n];
        let mut rest = x;
        for row in logical_rows.iter().rev() {
            let c = (rest % q) as u32;
            rest /= q;
            for (r, &g) in rep.iter_mut().zip(row) {
                *r = field.add(*r, field.mul(c, g));
            }
        }
        for y in &dual_words {
            let word: Vec<usize> = rep.iter().zip(y).map(|(&a, &b)| field.add(a, b) as usize).collect();
            m[(tuple_to_index(&word, &dims), x)] += amp;
        }
    }
    let encoder = LinearIsometry::new(vec![kl], dims, m)?;
    let mut table = vec![false; 1 << n];
    for p in PartySet::all(n) {
        let erased: Vec<usize> = (0..n).filter(|&i| !p.contains(i)).collect();
        table[p.0 as usize] = kl_check(&encoder, &erased)? <= super::KL_THRESHOLD;
    }
    let structure = AccessStructure::from_truth_table(n, table)?;
    let owners = (0..n).map(Owner::Party).collect();
    QeccScheme::new(
        format!("css[[{n},{k}]]_{q}"),
        vec![Block { encoder, start: 0 }],
        owners,
        n,
        structure,
    )
}

/// Knill-Laflamme violation for erasing `erased`:
/// `max_{i,j} |tr_held(|ibar><jbar|) - delta_ij tr_held(|0bar><0bar|)|`.
pub fn kl_check(encoder: &LinearIsometry, erased: &[usize]) -> Result<f64, QeccError> {
    let sys = RegisterSystem::from_dims(encoder.out_dims())?;
    sys.check_targets(erased)?;
    let held: Vec<usize> = (0..sys.len()).filter(|r| !erased.contains(r)).collect();
    let kl = encoder.in_dim();
    let mut mats = Vec::with_capacity(kl);
    for i in 0..kl {
        let psi = PureState::new(sys.clone(), encoder.matrix().column(i))?;
        // rows: held, columns: erased
        let (m, _) = if held.is_empty() {
            let (m, r) = psi.coefficient_matrix(&(0..sys.len()).collect::<Vec<_>>())?;
            (m.transpose(), r)
        } else {
            psi.coefficient_matrix(&held)?
        };
        mats.push(m);
    }
    let red = |i: usize, j: usize| mats[i].transpose().mul(&mats[j].conj());
    let base = red(0, 0);
    let mut worst: f64 = 0.0;
    for i in 0..kl {
        for j in 0..kl {
            let r = red(i, j);
            let dev = if i == j { r.max_abs_diff(&base) } else { r.max_abs_diff(&CMatrix::zeros(r.rows(), r.cols())) };
            worst = worst.max(dev);
        }
    }
    Ok(worst)
}
