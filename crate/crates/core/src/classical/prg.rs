use alloc::vec;
use alloc::vec::Vec;

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;

use super::tape::Bits;

/// Domain tag prepended to every seed.
pub const PRG_TAG: &[u8] = b"qss/prg/v1";

/// Pluggable PRG backend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrgBackend {
    /// SHAKE-128 over `tag || seed`.
    #[default]
    Shake128,
    /// Linear congruential toy generator. Insecure; only for exhaustive
    /// enumeration tests.
    ToyLcg,
}

impl PrgBackend {
    pub fn name(self) -> &'static str {
        match self {
            PrgBackend::Shake128 => "shake128",
            PrgBackend::ToyLcg => "toy-lcg",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "shake128" => Some(PrgBackend::Shake128),
            "toy-lcg" => Some(PrgBackend::ToyLcg),
            _ => None,
        }
    }

    /// `out_len` bytes expanded from `seed` under the default tag.
    pub fn expand(self, seed: &[u8], out_len: usize) -> Vec<u8> {
        self.expand_tagged(&[], seed, out_len)
    }

    /// `out_len` bytes from `PRG_TAG || tag || seed`. The tag is
    /// length-prefixed so distinct `(tag, seed)` pairs never collide.
    pub fn expand_tagged(self, tag: &[u8], seed: &[u8], out_len: usize) -> Vec<u8> {
        let mut out = vec![0u8; out_len];
        if out_len == 0 {
            return out;
        }
        match self {
            PrgBackend::Shake128 => {
                let mut h = Shake128::default();
                h.update(PRG_TAG);
                h.update(&(tag.len() as u32).to_be_bytes());
                h.update(tag);
                h.update(seed);
                h.finalize_xof().read(&mut out);
            }
            PrgBackend::ToyLcg => {
                let mut s: u64 = 0x9E37_79B9_7F4A_7C15;
                for &b in PRG_TAG.iter().chain(&(tag.len() as u32).to_be_bytes()).chain(tag).chain(seed) {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(u64::from(b) | 1);
                }
                for o in out.iter_mut() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    *o = (s >> 56) as u8;
                }
            }
        }
        out
    }

    /// `bits` output bits.
    pub fn expand_bits(self, tag: &[u8], seed: &Bits, bits: usize) -> Bits {
        let mut s = seed.bytes().to_vec();
        s.extend_from_slice(&(seed.len() as u32).to_be_bytes());
        Bits::from_bytes(&self.expand_tagged(tag, &s, bits.div_ceil(8)), bits)
    }
}

/// Draws `count` values uniform in `0..d` from the PRG stream by rejection
/// sampling on 16-bit words (long-message key derivation).
pub fn expand_to_range(backend: PrgBackend, seed: &[u8], count: usize, d: u64) -> Vec<u64> {
    assert!((2..=1 << 16).contains(&d));
    let limit = (1u64 << 16) - (1u64 << 16) % d;
    let mut out = Vec::with_capacity(count);
    let mut len = 4 * count + 16;
    loop {
        let stream = backend.expand_tagged(b"key", seed, len);
        out.clear();
        for w in stream.chunks_exact(2) {
            let v = u64::from(u16::from_be_bytes([w[0], w[1]]));
            if v < limit {
                out.push(v % d);
                if out.len() == count {
                    return out;
                }
            }
        }
        len *= 2;
    }
}
