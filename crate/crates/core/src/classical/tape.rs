use alloc::boxed::Box;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SsError;

/// Source of dealer randomness: a seed expanded with ChaCha8, or an explicit
/// list of values (one per draw, each below the draw's bound).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RandomTape {
    Seed(u64),
    Explicit(Vec<u64>),
}

#[derive(Debug, Clone)]
enum Source {
    Rng(Box<ChaCha8Rng>),
    Explicit { values: Vec<u64>, pos: usize },
}

/// Sequential reader over a [`RandomTape`].
#[derive(Debug, Clone)]
pub struct TapeReader {
    src: Source,
    drawn: usize,
}

impl TapeReader {
    pub fn new(tape: &RandomTape) -> Self {
        let src = match tape {
            RandomTape::Seed(s) => Source::Rng(Box::new(ChaCha8Rng::seed_from_u64(*s))),
            RandomTape::Explicit(v) => Source::Explicit { values: v.clone(), pos: 0 },
        };
        TapeReader { src, drawn: 0 }
    }

    pub fn explicit(values: Vec<u64>) -> Self {
        TapeReader { src: Source::Explicit { values, pos: 0 }, drawn: 0 }
    }

    /// Uniform value in `0..bound`.
    pub fn draw(&mut self, bound: u64) -> Result<u64, SsError> {
        if bound == 0 {
            return Err(SsError::Tape("zero bound"));
        }
        self.drawn += 1;
        match &mut self.src {
            Source::Rng(r) => Ok(r.gen_range(0..bound)),
            Source::Explicit { values, pos } => {
                let v = *values.get(*pos).ok_or(SsError::TapeExhausted { drawn: *pos })?;
                *pos += 1;
                if v >= bound {
                    return Err(SsError::TapeValue { value: v, bound });
                }
                Ok(v)
            }
        }
    }

    /// `bits` uniform bits, drawn in chunks of at most 32.
    pub fn draw_bits(&mut self, bits: usize) -> Result<Bits, SsError> {
        let mut out = Bits::zeros(bits);
        let mut at = 0;
        while at < bits {
            let k = (bits - at).min(32);
            let v = self.draw(1u64 << k)?;
            for j in 0..k {
                out.set(at + j, (v >> j) & 1 == 1);
            }
            at += k;
        }
        Ok(out)
    }

    /// Number of draws so far.
    pub fn drawn(&self) -> usize {
        self.drawn
    }

    /// Explicit tapes must be consumed completely.
    pub fn finish(&self) -> Result<(), SsError> {
        match &self.src {
            Source::Explicit { values, pos } if *pos != values.len() => {
                Err(SsError::TapeLeftover { used: *pos, len: values.len() })
            }
            _ => Ok(()),
        }
    }
}

/// Bounds of the successive draws of a sharing call; explicit tapes of this
/// shape are enumerated in mixed radix (first draw most significant).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TapeShape(pub Vec<u64>);

impl TapeShape {
    pub fn push_bits(&mut self, bits: usize) {
        let mut left = bits;
        while left > 0 {
            let k = left.min(32);
            self.0.push(1u64 << k);
            left -= k;
        }
    }

    pub fn extend(&mut self, other: &TapeShape) {
        self.0.extend_from_slice(&other.0);
    }

    /// Number of tapes, `None` on overflow.
    pub fn count(&self) -> Option<u64> {
        self.0.iter().try_fold(1u64, |acc, &b| acc.checked_mul(b))
    }

    /// The `idx`-th tape.
    pub fn tape(&self, mut idx: u64) -> Vec<u64> {
        let mut v = alloc::vec![0; self.0.len()];
        for (slot, &b) in v.iter_mut().zip(&self.0).rev() {
            *slot = idx % b;
            idx /= b;
        }
        v
    }
}

/// Fixed-length bit string, bit `i` stored in byte `i / 8` at position `i % 8`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Bits {
    len: usize,
    bytes: Vec<u8>,
}

impl Bits {
    pub fn zeros(len: usize) -> Self {
        Bits { len, bytes: alloc::vec![0; len.div_ceil(8)] }
    }

    /// First `len` bits of `bytes`.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Self {
        let mut b = Bits::zeros(len);
        let n = b.bytes.len().min(bytes.len());
        b.bytes[..n].copy_from_slice(&bytes[..n]);
        b.mask();
        b
    }

    pub fn from_u64(v: u64, len: usize) -> Self {
        let mut b = Bits::zeros(len);
        for i in 0..len.min(64) {
            b.set(i, (v >> i) & 1 == 1);
        }
        b
    }

    pub fn to_u64(&self) -> u64 {
        (0..self.len.min(64)).filter(|&i| self.get(i)).map(|i| 1u64 << i).sum()
    }

    fn mask(&mut self) {
        if !self.len.is_multiple_of(8) {
            let last = self.bytes.len() - 1;
            self.bytes[last] &= (1u8 << (self.len % 8)) - 1;
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        (self.bytes[i / 8] >> (i % 8)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, v: bool) {
        if v {
            self.bytes[i / 8] |= 1 << (i % 8);
        } else {
            self.bytes[i / 8] &= !(1 << (i % 8));
        }
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// XOR of equal-length strings.
    pub fn xor(&self, other: &Bits) -> Bits {
        assert_eq!(self.len, other.len, "xor of unequal lengths");
        Bits { len: self.len, bytes: self.bytes.iter().zip(&other.bytes).map(|(a, b)| a ^ b).collect() }
    }

    /// Bits `at..at + len`.
    pub fn slice(&self, at: usize, len: usize) -> Bits {
        let mut b = Bits::zeros(len);
        for i in 0..len {
            b.set(i, self.get(at + i));
        }
        b
    }

    pub fn concat(parts: &[Bits]) -> Bits {
        let len = parts.iter().map(|p| p.len).sum();
        let mut b = Bits::zeros(len);
        let mut at = 0;
        for p in parts {
            for i in 0..p.len {
                b.set(at + i, p.get(i));
            }
            at += p.len;
        }
        b
    }
}
