//! Classical secret sharing: Shamir, a perfect monotone-formula scheme, a
//! Yao-style wire-key scheme over a pluggable PRG, and a deliberately leaky
//! fixture.
//!
//! The compiler shares a one-time-pad key made of several components in
//! `0..d`. Every scheme except the leaky one shares each component
//! independently; shares and public strings of the components are
//! concatenated.

mod formula;
mod prg;
mod shamir;
mod tape;
mod yao;

pub use formula::{FormulaScheme, FormulaShares};
pub use prg::{expand_to_range, PrgBackend, PRG_TAG};
pub use shamir::{shamir_rec, shamir_share, ShamirScheme};
pub use tape::{Bits, RandomTape, TapeReader, TapeShape};
pub use yao::{YaoMode, YaoScheme, YaoShares};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::access::{AccessError, AccessStructure, PartySet};
use crate::gf::{Field, GfError};

/// Largest per-component tape space enumerated exactly.
pub const EXACT_TAPE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SsError {
    #[error("invalid parameters: {0}")]
    Params(&'static str),
    #[error("secret {secret} outside 0..{domain}")]
    SecretRange { secret: u64, domain: u64 },
    #[error("unauthorized: the shares do not determine the secret")]
    Unauthorized,
    #[error("{got} shares given, {need} needed")]
    TooFewShares { got: usize, need: usize },
    #[error("share of party {} missing", .0 + 1)]
    MissingShare(usize),
    #[error("malformed shares: {0}")]
    Malformed(&'static str),
    #[error("tape exhausted after {drawn} draws")]
    TapeExhausted { drawn: usize },
    #[error("tape value {value} not below bound {bound}")]
    TapeValue { value: u64, bound: u64 },
    #[error("tape has {len} values, {used} used")]
    TapeLeftover { used: usize, len: usize },
    #[error("bad tape: {0}")]
    Tape(&'static str),
    #[error("tape space of {count} exceeds the exact cap {cap}")]
    TapeSpaceTooLarge { count: u128, cap: u64 },
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Access(#[from] AccessError),
}

/// `ceil(log2 n)`.
pub fn ceil_log2(n: u64) -> u32 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros()
    }
}

/// `ceil(log2 base^exp)`, exact.
pub fn ceil_log2_pow(base: u64, exp: u32) -> u32 {
    if exp == 0 || base <= 1 {
        return 0;
    }
    // little-endian 32-bit limbs of base^exp
    let mut limbs: Vec<u64> = vec![1];
    for _ in 0..exp {
        let mut carry = 0u64;
        for l in limbs.iter_mut() {
            let v = *l * base + carry;
            *l = v & 0xFFFF_FFFF;
            carry = v >> 32;
        }
        while carry > 0 {
            limbs.push(carry & 0xFFFF_FFFF);
            carry >>= 32;
        }
    }
    let is_pow2 = limbs.iter().filter(|&&l| l != 0).count() == 1 && limbs.last().is_some_and(|l| l.is_power_of_two());
    let top = *limbs.last().expect("nonempty");
    let bits = 32 * (limbs.len() as u32 - 1) + (64 - top.leading_zeros());
    if is_pow2 {
        bits - 1
    } else {
        bits
    }
}

/// Per-party share bytes and the public byte string.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ShareVector {
    pub parties: Vec<Vec<u8>>,
    pub public: Vec<u8>,
}

impl ShareVector {
    pub fn empty(n: usize) -> Self {
        ShareVector { parties: vec![Vec::new(); n], public: Vec::new() }
    }

    fn append(&mut self, other: &ShareVector) {
        for (a, b) in self.parties.iter_mut().zip(&other.parties) {
            a.extend_from_slice(b);
        }
        self.public.extend_from_slice(&other.public);
    }

    /// Bytes seen by `p`: its shares in party order, then the public string.
    pub fn view(&self, p: PartySet) -> Vec<u8> {
        let mut v = Vec::new();
        for i in p.iter() {
            v.extend_from_slice(&self.parties[i]);
        }
        v.extend_from_slice(&self.public);
        v
    }
}

fn push_elems(out: &mut Vec<u8>, xs: &[u32]) {
    for &x in xs {
        out.extend_from_slice(&(x as u16).to_be_bytes());
    }
}

fn read_elems(bytes: &[u8], field: Field) -> Result<Vec<u32>, SsError> {
    if !bytes.len().is_multiple_of(2) {
        return Err(SsError::Malformed("odd element encoding"));
    }
    bytes
        .chunks(2)
        .map(|c| field.check(u32::from(u16::from_be_bytes([c[0], c[1]]))).map_err(SsError::from))
        .collect()
}

/// Formula scheme that, with probability `eps = num / 2^bits` over the
/// tape, also hands every party the whole key in the clear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeakyScheme {
    inner: FormulaScheme,
    num: u64,
    bits: u32,
}

impl LeakyScheme {
    pub fn new(inner: FormulaScheme, eps: f64) -> Result<Self, SsError> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(SsError::Params("leak probability outside [0, 1]"));
        }
        for bits in 0..=20u32 {
            let scaled = eps * f64::from(1u32 << bits);
            if (scaled - libm::round(scaled)).abs() < 1e-9 {
                return Ok(LeakyScheme { inner, num: libm::round(scaled) as u64, bits });
            }
        }
        Err(SsError::Params("leak probability must be a dyadic rational with at most 20 bits"))
    }

    pub fn inner(&self) -> &FormulaScheme {
        &self.inner
    }

    pub fn epsilon(&self) -> f64 {
        self.num as f64 / f64::from(1u32 << self.bits)
    }

    /// Coin bound; the coin leaks when below `num`.
    pub fn coin(&self) -> (u64, u64) {
        (self.num, 1u64 << self.bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassicalScheme {
    Shamir(ShamirScheme),
    Formula(FormulaScheme),
    Yao(YaoScheme),
    Leaky(LeakyScheme),
}

/// Per-component view distribution of a party set, grouped by likelihood:
/// every class lists how many distinct views share the same vector of tape
/// counts `counts[s]` (one entry per component value `s`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewClasses {
    /// Tapes per component value.
    pub tapes: u64,
    pub classes: Vec<ViewClass>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViewClass {
    pub mult: u64,
    pub counts: Vec<u64>,
}

impl ViewClasses {
    /// True when the view distribution does not depend on the component.
    pub fn is_independent(&self) -> bool {
        self.classes.iter().all(|c| c.counts.windows(2).all(|w| w[0] == w[1]))
    }
}

impl ClassicalScheme {
    pub fn kind(&self) -> &'static str {
        match self {
            ClassicalScheme::Shamir(_) => "shamir",
            ClassicalScheme::Formula(_) => "formula",
            ClassicalScheme::Yao(_) => "yao",
            ClassicalScheme::Leaky(_) => "leaky",
        }
    }

    pub fn structure(&self) -> AccessStructure {
        match self {
            ClassicalScheme::Shamir(s) => s.structure(),
            ClassicalScheme::Formula(s) => s.structure().clone(),
            ClassicalScheme::Yao(s) => s.structure().clone(),
            ClassicalScheme::Leaky(s) => s.inner.structure().clone(),
        }
    }

    pub fn parties(&self) -> usize {
        match self {
            ClassicalScheme::Shamir(s) => s.parties(),
            ClassicalScheme::Formula(s) => s.parties(),
            ClassicalScheme::Yao(s) => s.parties(),
            ClassicalScheme::Leaky(s) => s.inner.parties(),
        }
    }

    /// Component values accepted are `0..component_domain()`.
    pub fn component_domain(&self) -> u64 {
        match self {
            ClassicalScheme::Shamir(s) => u64::from(s.field().order()),
            ClassicalScheme::Formula(s) => u64::from(s.field().order()),
            ClassicalScheme::Yao(s) => 1u64 << s.secret_bits().min(63),
            ClassicalScheme::Leaky(s) => u64::from(s.inner.field().order()),
        }
    }

    fn check_component(&self, v: u64) -> Result<(), SsError> {
        let d = self.component_domain();
        if v >= d {
            return Err(SsError::SecretRange { secret: v, domain: d });
        }
        Ok(())
    }

    /// Draw bounds of one component's sharing (the leaky coin excluded).
    pub fn component_tape_shape(&self, mode: YaoMode) -> TapeShape {
        match self {
            ClassicalScheme::Shamir(s) => s.tape_shape(),
            ClassicalScheme::Formula(s) => s.tape_shape(),
            ClassicalScheme::Yao(s) => s.tape_shape(mode),
            ClassicalScheme::Leaky(s) => s.inner.tape_shape(),
        }
    }

    /// Shares one component (the leaky scheme shares it without a coin).
    pub fn share_component(&self, v: u64, tape: &mut TapeReader, mode: YaoMode) -> Result<ShareVector, SsError> {
        self.check_component(v)?;
        let n = self.parties();
        let mut out = ShareVector::empty(n);
        match self {
            ClassicalScheme::Shamir(s) => {
                for (i, x) in s.share(v as u32, tape)?.into_iter().enumerate() {
                    push_elems(&mut out.parties[i], &[x]);
                }
            }
            ClassicalScheme::Formula(s) | ClassicalScheme::Leaky(LeakyScheme { inner: s, .. }) => {
                let sh = s.share(v as u32, tape)?;
                for (i, xs) in sh.parties.iter().enumerate() {
                    push_elems(&mut out.parties[i], xs);
                }
                push_elems(&mut out.public, &sh.public);
            }
            ClassicalScheme::Yao(s) => {
                let sh = s.share(v, tape, mode)?;
                for (i, k) in sh.keys.iter().enumerate() {
                    out.parties[i] = k.bytes().to_vec();
                }
                out.public = sh.public.bytes().to_vec();
            }
        }
        Ok(out)
    }

    /// Byte lengths of one component's share per party and of its public part.
    pub fn component_lengths(&self) -> (Vec<usize>, usize) {
        match self {
            ClassicalScheme::Shamir(s) => (vec![2; s.parties()], 0),
            ClassicalScheme::Formula(s) | ClassicalScheme::Leaky(LeakyScheme { inner: s, .. }) => {
                (s.slots().iter().map(|&k| 2 * k).collect(), 2 * s.public_slots())
            }
            ClassicalScheme::Yao(s) => (vec![s.lambda().div_ceil(8); s.parties()], s.public_bits().div_ceil(8)),
        }
    }

    /// Recovers one component from its share bytes (`None` for absent parties).
    pub fn reconstruct_component(&self, parties: &[Option<&[u8]>], public: &[u8], p: PartySet) -> Result<u64, SsError> {
        let get = |i: usize| parties.get(i).copied().flatten().ok_or(SsError::MissingShare(i));
        match self {
            ClassicalScheme::Shamir(s) => {
                let mut shares = vec![None; s.parties()];
                for i in p.iter() {
                    shares[i] = Some(read_elems(get(i)?, s.field())?.first().copied().ok_or(SsError::Malformed("empty share"))?);
                }
                Ok(u64::from(s.reconstruct(&shares, p)?))
            }
            ClassicalScheme::Formula(s) | ClassicalScheme::Leaky(LeakyScheme { inner: s, .. }) => {
                let mut shares = vec![None; s.parties()];
                for i in p.iter() {
                    shares[i] = Some(read_elems(get(i)?, s.field())?);
                }
                let public = read_elems(public, s.field())?;
                Ok(u64::from(s.reconstruct(&shares, &public, p)?))
            }
            ClassicalScheme::Yao(s) => {
                let mut keys = vec![None; s.parties()];
                for i in p.iter() {
                    keys[i] = Some(Bits::from_bytes(get(i)?, s.lambda()));
                }
                s.reconstruct(&keys, &Bits::from_bytes(public, s.public_bits()), p)
            }
        }
    }

    /// Per-party share bits for a key of `components` components
    /// (`sum ceil(log |S_i|)` accounting), and public bits.
    pub fn share_bits(&self, components: usize) -> (Vec<u64>, u64) {
        let c = components as u64;
        match self {
            ClassicalScheme::Shamir(s) => (vec![c * u64::from(s.share_bits()); s.parties()], 0),
            ClassicalScheme::Formula(s) => {
                let q = u64::from(s.field().order());
                (
                    s.slots().iter().map(|&k| u64::from(ceil_log2_pow(q, (k * components) as u32))).collect(),
                    u64::from(ceil_log2_pow(q, (s.public_slots() * components) as u32)),
                )
            }
            ClassicalScheme::Leaky(l) => {
                let s = &l.inner;
                let q = u64::from(s.field().order());
                // flag plus leaked key
                let extra = 1 + u64::from(ceil_log2_pow(q, components as u32));
                (
                    s.slots().iter().map(|&k| extra + u64::from(ceil_log2_pow(q, (k * components) as u32))).collect(),
                    u64::from(ceil_log2_pow(q, (s.public_slots() * components) as u32)),
                )
            }
            ClassicalScheme::Yao(s) => (vec![c * s.lambda() as u64; s.parties()], c * s.public_bits() as u64),
        }
    }

    /// Shares a whole key. Leaky: draws the coin first, then shares every
    /// component; on a leak each party's share is prefixed by `1 || key`,
    /// else by `0 || 0...`.
    pub fn share_key(&self, key: &[u64], tape: &mut TapeReader, mode: YaoMode) -> Result<ShareVector, SsError> {
        let n = self.parties();
        let mut out = ShareVector::empty(n);
        if let ClassicalScheme::Leaky(l) = self {
            let (num, bound) = l.coin();
            let leak = tape.draw(bound)? < num;
            let mut prefix = vec![u8::from(leak)];
            let shown: Vec<u32> = key.iter().map(|&k| if leak { k as u32 } else { 0 }).collect();
            for &k in key {
                self.check_component(k)?;
            }
            push_elems(&mut prefix, &shown);
            for p in out.parties.iter_mut() {
                p.extend_from_slice(&prefix);
            }
        }
        for &k in key {
            let sv = self.share_component(k, tape, mode)?;
            out.append(&sv);
        }
        Ok(out)
    }

    /// Recovers a key of `components` components from the shares of `p`.
    pub fn reconstruct_key(&self, shares: &ShareVector, p: PartySet, components: usize) -> Result<Vec<u64>, SsError> {
        let n = self.parties();
        if shares.parties.len() != n {
            return Err(SsError::Malformed("party count"));
        }
        let (lens, plen) = self.component_lengths();
        let prefix = match self {
            ClassicalScheme::Leaky(_) => 1 + 2 * components,
            _ => 0,
        };
        for i in p.iter() {
            if shares.parties[i].len() != prefix + components * lens[i] {
                return Err(SsError::Malformed("share length"));
            }
        }
        if shares.public.len() != components * plen {
            return Err(SsError::Malformed("public length"));
        }
        let mut key = Vec::with_capacity(components);
        for c in 0..components {
            let parts: Vec<Option<&[u8]>> = (0..n)
                .map(|i| {
                    p.contains(i).then(|| {
                        let at = prefix + c * lens[i];
                        &shares.parties[i][at..at + lens[i]]
                    })
                })
                .collect();
            key.push(self.reconstruct_component(&parts, &shares.public[c * plen..(c + 1) * plen], p)?);
        }
        Ok(key)
    }

    /// Exact per-component view classes of `p` for component values
    /// `0..domain`, enumerating every tape.
    pub fn view_classes(&self, p: PartySet, domain: u64, mode: YaoMode) -> Result<ViewClasses, SsError> {
        let shape = self.component_tape_shape(mode);
        let count = shape.count().filter(|&c| c <= EXACT_TAPE_CAP).ok_or_else(|| SsError::TapeSpaceTooLarge {
            count: shape.0.iter().map(|&b| u128::from(b)).product(),
            cap: EXACT_TAPE_CAP,
        })?;
        let mut table: BTreeMap<Vec<u8>, Vec<u64>> = BTreeMap::new();
        for s in 0..domain {
            for idx in 0..count {
                let mut tape = TapeReader::explicit(shape.tape(idx));
                let sv = self.share_component(s, &mut tape, mode)?;
                tape.finish()?;
                table.entry(sv.view(p)).or_insert_with(|| vec![0; domain as usize])[s as usize] += 1;
            }
        }
        Ok(group(count, table))
    }

    /// Same as [`Self::view_classes`] from `samples` seeded tapes per value.
    pub fn sampled_view_classes(
        &self,
        p: PartySet,
        domain: u64,
        mode: YaoMode,
        samples: u64,
        seed: u64,
    ) -> Result<ViewClasses, SsError> {
        let mut table: BTreeMap<Vec<u8>, Vec<u64>> = BTreeMap::new();
        for s in 0..domain {
            let mut tape = TapeReader::new(&RandomTape::Seed(seed ^ s.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
            for _ in 0..samples {
                let sv = self.share_component(s, &mut tape, mode)?;
                table.entry(sv.view(p)).or_insert_with(|| vec![0; domain as usize])[s as usize] += 1;
            }
        }
        Ok(group(samples, table))
    }
}

fn group(tapes: u64, table: BTreeMap<Vec<u8>, Vec<u64>>) -> ViewClasses {
    let mut classes: BTreeMap<Vec<u64>, u64> = BTreeMap::new();
    for (_, counts) in table {
        *classes.entry(counts).or_insert(0) += 1;
    }
    ViewClasses { tapes, classes: classes.into_iter().map(|(counts, mult)| ViewClass { mult, counts }).collect() }
}
