use alloc::vec;
use alloc::vec::Vec;

use super::{Field, GfError, Matrix, Result};

/// Linear code given by a full-rank generator matrix (`k x n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    field: Field,
    n: usize,
    k: usize,
    generator: Matrix,
    points: Option<Vec<u32>>,
}

#[derive(Debug, Clone)]
pub struct DualReport {
    /// Dual of the second code.
    pub dual: LinearCode,
    /// Whether that dual is contained in the first code.
    pub contained: bool,
}

/// Reed-Solomon code: evaluations of polynomials of degree `< k` at `n`
/// distinct points (default `0, 1, ..., n-1`).
pub fn rs_code(field: Field, n: usize, k: usize, points: Option<&[u32]>) -> Result<LinearCode> {
    if k == 0 || k > n {
        return Err(GfError::BadParameters("1 <= k <= n"));
    }
    if n as u64 > field.order() as u64 {
        return Err(GfError::BadParameters("n <= q"));
    }
    let pts: Vec<u32> = match points {
        Some(p) => {
            if p.len() != n {
                return Err(GfError::BadParameters("one evaluation point per position"));
            }
            for (i, &x) in p.iter().enumerate() {
                field.check(x)?;
                if p[..i].contains(&x) {
                    return Err(GfError::DuplicatePoint(x));
                }
            }
            p.to_vec()
        }
        None => (0..n as u32).collect(),
    };
    let mut g = Matrix::zeros(field, k, n);
    for (j, &x) in pts.iter().enumerate() {
        for i in 0..k {
            g.set(i, j, field.pow(x, i as u64));
        }
    }
    Ok(LinearCode { field, n, k, generator: g, points: Some(pts) })
}

/// Dual of `c2` and whether it is a subcode of `c1`.
pub fn dual_and_subcode(c1: &LinearCode, c2: &LinearCode) -> Result<DualReport> {
    if c1.field != c2.field || c1.n != c2.n {
        return Err(GfError::Mismatch);
    }
    let dual = c2.dual();
    let contained = c1.contains_code(&dual)?;
    Ok(DualReport { dual, contained })
}

impl LinearCode {
    /// Builds a code from generator rows, which must be linearly independent.
    pub fn from_generator(generator: Matrix) -> Result<Self> {
        if generator.rank() != generator.rows() {
            return Err(GfError::BadParameters("generator rows linearly independent"));
        }
        Ok(LinearCode {
            field: generator.field(),
            n: generator.cols(),
            k: generator.rows(),
            generator,
            points: None,
        })
    }

    /// Row span of arbitrary (possibly dependent) vectors.
    pub fn span(field: Field, n: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let m = Matrix::from_rows(field, n, rows)?;
        let ech = m.rref();
        let basis = ech.matrix.select_rows(&(0..ech.rank()).collect::<Vec<_>>());
        Self::from_generator(basis)
    }

    pub fn full_space(field: Field, n: usize) -> Self {
        Self::from_generator(Matrix::identity(field, n)).expect("identity has full rank")
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn dimension(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &Matrix {
        &self.generator
    }

    pub fn points(&self) -> Option<&[u32]> {
        self.points.as_deref()
    }

    pub fn encode(&self, message: &[u32]) -> Result<Vec<u32>> {
        for &m in message {
            self.field.check(m)?;
        }
        self.generator.left_mul_vec(message)
    }

    /// Number of codewords, `q^k`, if it fits in a `u64`.
    pub fn size(&self) -> Option<u64> {
        (self.field.order() as u64).checked_pow(self.k as u32)
    }

    /// All codewords in the order of their messages read as base-q numbers
    /// (first message symbol least significant).
    pub fn codewords(&self) -> impl Iterator<Item = Vec<u32>> + '_ {
        let q = self.field.order() as u64;
        let total = self.size().expect("code too large to enumerate");
        (0..total).map(move |mut idx| {
            let mut msg = vec![0u32; self.k];
            for m in msg.iter_mut() {
                *m = (idx % q) as u32;
                idx /= q;
            }
            self.generator.left_mul_vec(&msg).expect("shape checked")
        })
    }

    /// Brute-force minimum Hamming weight of a nonzero codeword; `None` for
    /// the zero code.
    pub fn min_distance(&self) -> Option<usize> {
        self.codewords()
            .map(|c| c.iter().filter(|&&v| v != 0).count())
            .filter(|&w| w > 0)
            .min()
    }

    pub fn contains(&self, word: &[u32]) -> Result<bool> {
        if word.len() != self.n {
            return Err(GfError::Shape);
        }
        if self.k == 0 {
            return Ok(word.iter().all(|&v| v == 0));
        }
        self.generator.row_space_contains(word)
    }

    pub fn contains_code(&self, other: &LinearCode) -> Result<bool> {
        if self.field != other.field || self.n != other.n {
            return Err(GfError::Mismatch);
        }
        for r in 0..other.k {
            if !self.contains(other.generator.row(r))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality of row spaces.
    pub fn same_space(&self, other: &LinearCode) -> Result<bool> {
        Ok(self.k == other.k && self.contains_code(other)?)
    }

    /// `{ x : <x, c> = 0 for all c }`, from the null space of the generator.
    pub fn dual(&self) -> LinearCode {
        let g = if self.k == 0 { Matrix::zeros(self.field, 1, self.n) } else { self.generator.clone() };
        Self::from_generator(g.null_space()).expect("null space basis is independent")
    }

    /// Recovers the full codeword from the values at some positions.
    pub fn erasure_decode(&self, known: &[(usize, u32)]) -> Result<Vec<u32>> {
        let mut positions: Vec<usize> = Vec::new();
        let mut values = Vec::new();
        for &(p, v) in known {
            if p >= self.n {
                return Err(GfError::Shape);
            }
            self.field.check(v)?;
            if let Some(i) = positions.iter().position(|&q| q == p) {
                if values[i] != v {
                    return Err(GfError::Inconsistent);
                }
                continue;
            }
            positions.push(p);
            values.push(v);
        }
        if positions.len() < self.k {
            return Err(GfError::TooFewPositions { known: positions.len(), needed: self.k });
        }
        if self.k == 0 {
            return if values.iter().all(|&v| v == 0) {
                Ok(vec![0; self.n])
            } else {
                Err(GfError::Inconsistent)
            };
        }
        let sub = self.generator.select_cols(&positions);
        let msg = sub.solve_left(&values)?.ok_or(GfError::Inconsistent)?;
        if sub.rank() < self.k {
            return Err(GfError::Underdetermined);
        }
        self.encode(&msg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf(p: u32) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn rs_3_2_has_nine_codewords() {
        let c = rs_code(gf(3), 3, 2, Some(&[0, 1, 2])).unwrap();
        let mut words: Vec<Vec<u32>> = c.codewords().collect();
        words.sort();
        words.dedup();
        assert_eq!(words.len(), 9);
        // oracle: evaluate c0 + c1 x directly
        for c0 in 0..3u32 {
            for c1 in 0..3u32 {
                let w: Vec<u32> = (0..3u32).map(|x| (c0 + c1 * x) % 3).collect();
                assert!(words.contains(&w));
            }
        }
    }

    #[test]
    fn constant_code() {
        let c = rs_code(gf(5), 4, 1, Some(&[1, 2, 3, 4])).unwrap();
        for w in c.codewords() {
            assert!(w.iter().all(|&v| v == w[0]));
        }
        assert_eq!(c.min_distance(), Some(4));
    }

    #[test]
    fn rs_min_distance_is_singleton_bound() {
        for q in [2u32, 3, 5, 7] {
            for n in 1..=6usize.min(q as usize) {
                for k in 1..=n {
                    let c = rs_code(gf(q), n, k, None).unwrap();
                    assert_eq!(c.min_distance(), Some(n - k + 1), "q={q} n={n} k={k}");
                }
            }
        }
    }

    #[test]
    fn rs_parameter_errors() {
        assert!(matches!(rs_code(gf(3), 4, 2, None), Err(GfError::BadParameters(_))));
        assert!(matches!(rs_code(gf(5), 2, 3, None), Err(GfError::BadParameters(_))));
        assert_eq!(rs_code(gf(5), 2, 1, Some(&[1, 1])), Err(GfError::DuplicatePoint(1)));
    }

    #[test]
    fn erasure_decode_examples() {
        let c = rs_code(gf(3), 3, 2, Some(&[0, 1, 2])).unwrap();
        assert_eq!(c.erasure_decode(&[(0, 1), (1, 2)]).unwrap(), vec![1, 2, 0]);
        assert_eq!(c.erasure_decode(&[(0, 1), (1, 2), (2, 0)]).unwrap(), vec![1, 2, 0]);
        assert_eq!(c.erasure_decode(&[(0, 1), (1, 2), (2, 1)]), Err(GfError::Inconsistent));
        assert_eq!(
            c.erasure_decode(&[(0, 1)]),
            Err(GfError::TooFewPositions { known: 1, needed: 2 })
        );
    }

    #[test]
    fn erasure_decode_every_k_subset() {
        for q in [2u32, 3, 5, 7] {
            for n in 1..=5usize.min(q as usize) {
                for k in 1..=n {
                    let c = rs_code(gf(q), n, k, None).unwrap();
                    let words: Vec<Vec<u32>> = c.codewords().collect();
                    for mask in 0u32..(1 << n) {
                        if mask.count_ones() as usize != k {
                            continue;
                        }
                        for w in &words {
                            let known: Vec<(usize, u32)> =
                                (0..n).filter(|i| mask >> i & 1 == 1).map(|i| (i, w[i])).collect();
                            assert_eq!(&c.erasure_decode(&known).unwrap(), w);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dual_examples() {
        let c = rs_code(gf(3), 3, 2, Some(&[0, 1, 2])).unwrap();
        let rep = dual_and_subcode(&c, &c).unwrap();
        assert_eq!(rep.dual.dimension(), 1);
        let rep_code = LinearCode::span(gf(3), 3, &[vec![1, 1, 1]]).unwrap();
        assert!(rep.dual.same_space(&rep_code).unwrap());
        assert!(rep.contained);

        let full = LinearCode::full_space(Field::prime(2).unwrap(), 3);
        let rep = dual_and_subcode(&full, &full).unwrap();
        assert_eq!(rep.dual.dimension(), 0);
        assert!(rep.contained);

        // RS[4,3] over GF(5): brute-force the dual and its membership in
        // RS[4,2] and RS[4,1] independently of the row-reduction path.
        let c2 = rs_code(gf(5), 4, 3, None).unwrap();
        let c2_words: Vec<Vec<u32>> = c2.codewords().collect();
        let mut dual_words = Vec::new();
        for idx in 0..625u32 {
            let x: Vec<u32> = (0..4).map(|i| idx / 5u32.pow(i) % 5).collect();
            if c2_words.iter().all(|c| x.iter().zip(c).map(|(a, b)| a * b).sum::<u32>() % 5 == 0) {
                dual_words.push(x);
            }
        }
        assert_eq!(dual_words.len(), 5);
        for k1 in [1usize, 2] {
            let c1 = rs_code(gf(5), 4, k1, None).unwrap();
            let c1_words: Vec<Vec<u32>> = c1.codewords().collect();
            let oracle = dual_words.iter().all(|w| c1_words.contains(w));
            let rep = dual_and_subcode(&c1, &c2).unwrap();
            assert_eq!(rep.dual.dimension(), 1);
            assert_eq!(rep.contained, oracle, "k1={k1}");
        }
        let c1 = rs_code(gf(5), 4, 2, None).unwrap();
        assert!(dual_and_subcode(&c1, &c2).unwrap().contained);
        let c1 = rs_code(gf(5), 4, 1, None).unwrap();
        assert!(!dual_and_subcode(&c1, &c2).unwrap().contained);

        let other = rs_code(gf(5), 3, 2, None).unwrap();
        assert!(matches!(dual_and_subcode(&c1, &other), Err(GfError::Mismatch)));
    }

    proptest! {
        #[test]
        fn double_dual_is_identity(
            p in prop::sample::select(vec![2u32, 3, 5, 7]),
            n in 1usize..6,
            raw in proptest::collection::vec(0u32..7, 0..30),
        ) {
            let f = gf(p);
            let rows: Vec<Vec<u32>> = raw
                .chunks(n)
                .filter(|c| c.len() == n)
                .map(|c| c.iter().map(|v| v % p).collect())
                .collect();
            let c = if rows.is_empty() {
                LinearCode::full_space(f, n)
            } else {
                LinearCode::span(f, n, &rows).unwrap()
            };
            let dd = c.dual().dual();
            prop_assert!(dd.same_space(&c).unwrap());
            prop_assert_eq!(c.dimension() + c.dual().dimension(), n);
        }
    }
}
