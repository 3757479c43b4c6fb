//! Exact arithmetic over GF(p) and GF(2^r), dense matrices over those
//! fields, polynomials, and Reed-Solomon codes with erasure decoding.
//!
//! Field elements are plain `u32` values in `[0, q)`. For binary extension
//! fields an element is the bit vector of its polynomial coefficients, least
//! significant bit first.

mod code;
mod matrix;
mod poly;

pub use code::{dual_and_subcode, rs_code, DualReport, LinearCode};
pub use matrix::{Matrix, RowEchelon};
pub use poly::Poly;

use thiserror::Error;

/// Largest supported prime characteristic (fields are capped at 2^16 elements).
pub const MAX_PRIME: u32 = 65521;
/// Largest supported extension degree for GF(2^r).
pub const MAX_BINARY_DEGREE: u32 = 16;

/// Canonical irreducible polynomials for GF(2^r), indexed by `r`, including
/// the leading `x^r` bit. All of them are primitive.
pub const CANONICAL_BINARY_MODULI: [u32; 17] = [
    0, 0b11, 0b111, 0b1011, 0x13, 0x25, 0x43, 0x83, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B,
    0x4443, 0x8003, 0x1100B,
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not a supported prime (primes up to {MAX_PRIME})")]
    NotPrime(u32),
    #[error("extension degree {0} outside 1..={MAX_BINARY_DEGREE}")]
    BadDegree(u32),
    #[error("modulus {modulus:#x} is not an irreducible polynomial of degree {degree}")]
    Reducible { modulus: u32, degree: u32 },
    #[error("element {value} out of range for a field of order {order}")]
    OutOfRange { value: u32, order: u32 },
    #[error("inverse of zero")]
    ZeroInverse,
    #[error("duplicate evaluation point {0}")]
    DuplicatePoint(u32),
    #[error("no interpolation points given")]
    NoPoints,
    #[error("code parameters violate {0}")]
    BadParameters(&'static str),
    #[error("only {known} positions known, need at least {needed}")]
    TooFewPositions { known: usize, needed: usize },
    #[error("known positions do not determine a unique codeword")]
    Underdetermined,
    #[error("known values do not lie on any codeword")]
    Inconsistent,
    #[error("field or length mismatch between codes")]
    Mismatch,
    #[error("matrix dimension mismatch")]
    Shape,
}

pub type Result<T> = core::result::Result<T, GfError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Prime { p: u32 },
    /// `modulus` includes the leading `x^degree` term.
    Binary { degree: u32, modulus: u32 },
}

/// A finite field of prime order or of order 2^r.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Field {
    kind: FieldKind,
    order: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Smallest prime `>= n`.
pub fn next_prime(n: u32) -> u32 {
    let mut c = n.max(2);
    while !is_prime(c) {
        c += 1;
    }
    c
}

fn poly_degree(p: u32) -> i32 {
    31 - p.leading_zeros() as i32
}

/// Remainder of carry-less polynomial division over GF(2).
fn clmod(mut a: u64, m: u64) -> u64 {
    let dm = 63 - m.leading_zeros() as i32;
    while a != 0 && (63 - a.leading_zeros() as i32) >= dm {
        let shift = (63 - a.leading_zeros() as i32) - dm;
        a ^= m << shift;
    }
    a
}

/// Trial division by every polynomial of degree `1..=deg/2`.
fn is_irreducible_gf2(modulus: u32, degree: u32) -> bool {
    if poly_degree(modulus) != degree as i32 {
        return false;
    }
    if degree == 1 {
        return true;
    }
    let max_div_deg = degree / 2;
    for d in 1..=max_div_deg {
        for low in 0..(1u32 << d) {
            let divisor = (1u32 << d) | low;
            if clmod(modulus as u64, divisor as u64) == 0 {
                return false;
            }
        }
    }
    true
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(GfError::NotPrime(p));
        }
        Ok(Field { kind: FieldKind::Prime { p }, order: p })
    }

    /// GF(2^r) with the canonical modulus from [`CANONICAL_BINARY_MODULI`].
    pub fn binary(degree: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_BINARY_DEGREE {
            return Err(GfError::BadDegree(degree));
        }
        Self::binary_with_modulus(degree, CANONICAL_BINARY_MODULI[degree as usize])
    }

    pub fn binary_with_modulus(degree: u32, modulus: u32) -> Result<Self> {
        if degree == 0 || degree > MAX_BINARY_DEGREE {
            return Err(GfError::BadDegree(degree));
        }
        if !is_irreducible_gf2(modulus, degree) {
            return Err(GfError::Reducible { modulus, degree });
        }
        Ok(Field { kind: FieldKind::Binary { degree, modulus }, order: 1 << degree })
    }

    pub fn kind(&self) -> FieldKind {
        self.kind
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn characteristic(&self) -> u32 {
        match self.kind {
            FieldKind::Prime { p } => p,
            FieldKind::Binary { .. } => 2,
        }
    }

    pub fn check(&self, a: u32) -> Result<u32> {
        if a < self.order {
            Ok(a)
        } else {
            Err(GfError::OutOfRange { value: a, order: self.order })
        }
    }

    /// Reduces an arbitrary integer into the field. For binary fields the
    /// integer is read as a bit vector and reduced modulo the field polynomial.
    pub fn from_u64(&self, v: u64) -> u32 {
        match self.kind {
            FieldKind::Prime { p } => (v % p as u64) as u32,
            FieldKind::Binary { modulus, .. } => clmod(v, modulus as u64) as u32,
        }
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order && b < self.order);
        match self.kind {
            FieldKind::Prime { p } => {
                let s = a + b;
                if s >= p {
                    s - p
                } else {
                    s
                }
            }
            FieldKind::Binary { .. } => a ^ b,
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        match self.kind {
            FieldKind::Prime { p } => {
                if a == 0 {
                    0
                } else {
                    p - a
                }
            }
            FieldKind::Binary { .. } => a,
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        debug_assert!(a < self.order && b < self.order);
        match self.kind {
            FieldKind::Prime { p } => ((a as u64 * b as u64) % p as u64) as u32,
            FieldKind::Binary { degree, modulus } => {
                let mut acc: u32 = 0;
                let mut x = a;
                let mut y = b;
                let top = 1u32 << degree;
                while y != 0 {
                    if y & 1 == 1 {
                        acc ^= x;
                    }
                    y >>= 1;
                    x <<= 1;
                    if x & top != 0 {
                        x ^= modulus;
                    }
                }
                acc
            }
        }
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1 % self.order;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        self.check(a)?;
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        // a^(q-2) = a^-1 in any finite field of order q
        Ok(self.pow(a, self.order as u64 - 2))
    }

    pub fn div(&self, a: u32, b: u32) -> Result<u32> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Range-checked entry point for a single field operation. `b` is
    /// ignored by the unary operations.
    pub fn apply(&self, op: FieldOp, a: u32, b: Option<u32>) -> Result<u32> {
        self.check(a)?;
        let b = match b {
            Some(b) => self.check(b)?,
            None => 0,
        };
        match op {
            FieldOp::Add => Ok(self.add(a, b)),
            FieldOp::Sub => Ok(self.sub(a, b)),
            FieldOp::Mul => Ok(self.mul(a, b)),
            FieldOp::Div => self.div(a, b),
            FieldOp::Neg => Ok(self.neg(a)),
            FieldOp::Inv => self.inv(a),
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.order
    }
}
