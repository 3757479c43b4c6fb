use alloc::vec;
use alloc::vec::Vec;

use super::{Field, GfError, Result};

/// Polynomial with coefficients in ascending degree. The zero polynomial has
/// no coefficients; otherwise the last coefficient is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<u32>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<u32>) -> Result<Self> {
        for &c in &coeffs {
            field.check(c)?;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ok(Poly { field, coeffs })
    }

    pub fn zero(field: Field) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[u32] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u32 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: u32) -> u32 {
        let f = self.field;
        self.coeffs.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let c = (0..n).map(|i| f.add(self.coeff(i), other.coeff(i))).collect();
        Poly::new(f, c).expect("sums stay in range")
    }

    pub fn scale(&self, a: u32) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.mul(c, a)).collect()).expect("in range")
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let f = self.field;
        if self.is_zero() || other.is_zero() {
            return Poly::zero(f);
        }
        let mut out = vec![0u32; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out).expect("in range")
    }

    /// Lagrange interpolation through `(x, y)` pairs. The result has degree
    /// below the number of points.
    pub fn interpolate(field: Field, points: &[(u32, u32)]) -> Result<Poly> {
        if points.is_empty() {
            return Err(GfError::NoPoints);
        }
        for (i, &(x, y)) in points.iter().enumerate() {
            field.check(x)?;
            field.check(y)?;
            if points[..i].iter().any(|&(x2, _)| x2 == x) {
                return Err(GfError::DuplicatePoint(x));
            }
        }
        let f = field;
        let mut acc = Poly::zero(f);
        for (i, &(xi, yi)) in points.iter().enumerate() {
            if yi == 0 {
                continue;
            }
            let mut basis = Poly::new(f, vec![1]).expect("1 in range");
            let mut denom = 1;
            for (j, &(xj, _)) in points.iter().enumerate() {
                if i == j {
                    continue;
                }
                basis = basis.mul(&Poly::new(f, vec![f.neg(xj), 1]).expect("in range"));
                denom = f.mul(denom, f.sub(xi, xj));
            }
            acc = acc.add(&basis.scale(f.div(yi, denom)?));
        }
        Ok(acc)
    }
}
