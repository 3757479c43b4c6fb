use alloc::vec::Vec;

use crate::access::{AccessStructure, PartySet};
use crate::gf::{Field, Poly};

use super::tape::{TapeReader, TapeShape};
use super::{ceil_log2, SsError};

/// `f(x) = secret + sum_{j=1}^{t-1} r_j x^j` with the `r_j` read from the
/// tape; party `i` (0-based) receives `f(i + 1)`.
pub fn shamir_share(secret: u32, t: usize, n: usize, field: Field, tape: &mut TapeReader) -> Result<Vec<u32>, SsError> {
    check_params(t, n, field)?;
    field.check(secret)?;
    let mut coeffs = Vec::with_capacity(t);
    coeffs.push(secret);
    for _ in 1..t {
        coeffs.push(tape.draw(u64::from(field.order()))? as u32);
    }
    let f = Poly::new(field, coeffs)?;
    Ok((1..=n as u32).map(|x| f.eval(x)).collect())
}

/// Secret from `(point, value)` pairs; the first `t` points are used.
pub fn shamir_rec(field: Field, t: usize, shares: &[(u32, u32)]) -> Result<u32, SsError> {
    if shares.len() < t || t == 0 {
        return Err(SsError::TooFewShares { got: shares.len(), need: t.max(1) });
    }
    Ok(Poly::interpolate(field, &shares[..t])?.eval(0))
}

fn check_params(t: usize, n: usize, field: Field) -> Result<(), SsError> {
    if t == 0 || t > n {
        return Err(SsError::Params("need 1 <= t <= n"));
    }
    if n as u64 >= u64::from(field.order()) {
        return Err(SsError::Params("need n < q"));
    }
    Ok(())
}

/// Threshold scheme `Th_n^t` over a field, one element per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShamirScheme {
    field: Field,
    t: usize,
    n: usize,
}

impl ShamirScheme {
    pub fn new(field: Field, t: usize, n: usize) -> Result<Self, SsError> {
        check_params(t, n, field)?;
        Ok(ShamirScheme { field, t, n })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn structure(&self) -> AccessStructure {
        AccessStructure::threshold(self.t, self.n).expect("validated parameters")
    }

    pub fn tape_shape(&self) -> TapeShape {
        TapeShape(alloc::vec![u64::from(self.field.order()); self.t - 1])
    }

    pub fn share(&self, secret: u32, tape: &mut TapeReader) -> Result<Vec<u32>, SsError> {
        shamir_share(secret, self.t, self.n, self.field, tape)
    }

    pub fn reconstruct(&self, shares: &[Option<u32>], p: PartySet) -> Result<u32, SsError> {
        let pts: Vec<(u32, u32)> = p
            .iter()
            .filter_map(|i| shares.get(i).copied().flatten().map(|v| (i as u32 + 1, v)))
            .collect();
        if pts.len() < self.t {
            return Err(SsError::Unauthorized);
        }
        shamir_rec(self.field, self.t, &pts)
    }

    /// Bits per party share.
    pub fn share_bits(&self) -> u32 {
        ceil_log2(u64::from(self.field.order()))
    }
}
