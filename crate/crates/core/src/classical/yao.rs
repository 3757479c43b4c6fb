use alloc::vec;
use alloc::vec::Vec;

use crate::access::{AccessStructure, GateKind, MonotoneCircuit, PartySet, Wire};
use crate::gf::{Field, Poly};

use super::prg::PrgBackend;
use super::tape::{Bits, TapeReader, TapeShape};
use super::SsError;

/// How gate masks `G(K)` are produced while dealing.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum YaoMode {
    Real,
    /// Masks under keys that `P` cannot unlock are fresh uniform tape bits;
    /// masks under keys `P` can derive stay real.
    Hybrid(PartySet),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct GateLayout {
    /// For threshold gates: GF(2^r) and the number of r-bit key blocks.
    shamir: Option<(Field, usize)>,
    /// Shamir points of each input (1-based, consecutive).
    points: Vec<Vec<u32>>,
    /// Ciphertext bit length per input slot (one shared slot for AND).
    cts: Vec<usize>,
}

/// Wire-key scheme over a monotone circuit. Every wire carries a λ-bit key;
/// party `i` holds the key of `x_i`. Each gate publishes ciphertexts that
/// open its output key from enough input keys:
/// OR `K_out ^ G(K_j)` per input, AND `K_out ^ G(K_1) ^ ... ^ G(K_m)`,
/// threshold gates Shamir-share `K_out` blockwise over GF(2^r), `2^r > W`,
/// and publish `share_j ^ G(K_j)`. The secret is published as
/// `s ^ G(K_output)`. Authorized sets recover it by forward chaining.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YaoScheme {
    structure: AccessStructure,
    circuit: MonotoneCircuit,
    lambda: usize,
    secret_bits: usize,
    backend: PrgBackend,
    layout: Vec<GateLayout>,
}

/// Keys handed to the parties and the public string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct YaoShares {
    pub keys: Vec<Bits>,
    pub public: Bits,
}

fn tag(gate: usize, slot: usize) -> Vec<u8> {
    let mut t = b"yao/gate".to_vec();
    t.extend_from_slice(&(gate as u32).to_be_bytes());
    t.extend_from_slice(&(slot as u32).to_be_bytes());
    t
}

const OUT_TAG: &[u8] = b"yao/out";

impl YaoScheme {
    pub fn new(structure: &AccessStructure, lambda: usize, secret_bits: usize, backend: PrgBackend) -> Result<Self, SsError> {
        if lambda == 0 || lambda > 4096 {
            return Err(SsError::Params("lambda must be in 1..=4096"));
        }
        if secret_bits > 64 {
            return Err(SsError::Params("at most 64 secret bits per component"));
        }
        let circuit = structure.to_circuit()?;
        let mut layout = Vec::new();
        for g in circuit.gates() {
            let m = g.inputs.len();
            let l = match g.kind {
                GateKind::Or => GateLayout { shamir: None, points: Vec::new(), cts: vec![lambda; m] },
                GateKind::And => GateLayout { shamir: None, points: Vec::new(), cts: vec![lambda] },
                GateKind::Threshold(_) | GateKind::WeightedThreshold { .. } => {
                    let w = g.input_weights();
                    let total: u32 = w.iter().sum();
                    let r = 32 - total.leading_zeros();
                    let field = Field::binary(r.max(1))?;
                    let blocks = lambda.div_ceil(r as usize);
                    let mut next = 1u32;
                    let mut points = Vec::new();
                    let mut cts = Vec::new();
                    for &wj in &w {
                        points.push((next..next + wj).collect());
                        cts.push(wj as usize * blocks * r as usize);
                        next += wj;
                    }
                    GateLayout { shamir: Some((field, blocks)), points, cts }
                }
            };
            layout.push(l);
        }
        Ok(YaoScheme { structure: structure.clone(), circuit, lambda, secret_bits, backend, layout })
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    pub fn secret_bits(&self) -> usize {
        self.secret_bits
    }

    pub fn backend(&self) -> PrgBackend {
        self.backend
    }

    pub fn parties(&self) -> usize {
        self.circuit.parties()
    }

    fn wire_index(&self, w: Wire) -> usize {
        match w {
            Wire::Var(i) => i,
            Wire::Gate(g) => self.circuit.parties() + g,
        }
    }

    fn wires(&self) -> usize {
        self.circuit.parties() + self.circuit.gates().len()
    }

    /// Bit length of the public string.
    pub fn public_bits(&self) -> usize {
        self.layout.iter().flat_map(|l| &l.cts).sum::<usize>() + self.secret_bits
    }

    /// Wires whose keys `p` can derive.
    fn known_wires(&self, p: PartySet) -> Vec<bool> {
        let gv = self.circuit.gate_values(p);
        let n = self.circuit.parties();
        (0..self.wires()).map(|w| if w < n { p.contains(w) } else { gv[w - n] }).collect()
    }

    pub fn tape_shape(&self, mode: YaoMode) -> TapeShape {
        let mut s = TapeShape::default();
        s.push_bits(self.wires() * self.lambda);
        let known = match mode {
            YaoMode::Real => None,
            YaoMode::Hybrid(p) => Some(self.known_wires(p)),
        };
        for (g, l) in self.circuit.gates().iter().zip(&self.layout) {
            if let Some((f, blocks)) = l.shamir {
                let t = g.threshold() as usize;
                s.0.extend(core::iter::repeat_n(u64::from(f.order()), blocks * (t - 1)));
            }
            if let Some(k) = &known {
                for (j, &w) in g.inputs.iter().enumerate() {
                    if !k[self.wire_index(w)] {
                        s.push_bits(self.mask_len(l, j));
                    }
                }
            }
        }
        if let Some(k) = &known {
            if !k[self.wire_index(self.circuit.output())] {
                s.push_bits(self.secret_bits);
            }
        }
        s
    }

    /// AND and OR masks are key-sized; threshold masks cover the slot's shares.
    fn mask_len(&self, l: &GateLayout, slot: usize) -> usize {
        if l.shamir.is_some() {
            l.cts[slot]
        } else {
            self.lambda
        }
    }

    pub fn share(&self, secret: u64, tape: &mut TapeReader, mode: YaoMode) -> Result<YaoShares, SsError> {
        if self.secret_bits < 64 && secret >> self.secret_bits != 0 {
            return Err(SsError::SecretRange { secret, domain: 1u64 << self.secret_bits });
        }
        let known = match mode {
            YaoMode::Real => None,
            YaoMode::Hybrid(p) => Some(self.known_wires(p)),
        };
        let all = tape.draw_bits(self.wires() * self.lambda)?;
        let keys: Vec<Bits> = (0..self.wires()).map(|w| all.slice(w * self.lambda, self.lambda)).collect();
        let mask = |gate: usize, slot: usize, wire: usize, bits: usize, tape: &mut TapeReader| -> Result<Bits, SsError> {
            match &known {
                Some(k) if !k[wire] => tape.draw_bits(bits),
                _ => Ok(self.backend.expand_bits(&tag(gate, slot), &keys[wire], bits)),
            }
        };
        let mut public = Vec::new();
        for (gi, (g, l)) in self.circuit.gates().iter().zip(&self.layout).enumerate() {
            let k_out = &keys[self.circuit.parties() + gi];
            match g.kind {
                GateKind::Or => {
                    for (j, &w) in g.inputs.iter().enumerate() {
                        let m = mask(gi, j, self.wire_index(w), self.lambda, tape)?;
                        public.push(k_out.xor(&m));
                    }
                }
                GateKind::And => {
                    let mut c = k_out.clone();
                    for (j, &w) in g.inputs.iter().enumerate() {
                        c = c.xor(&mask(gi, j, self.wire_index(w), self.lambda, tape)?);
                    }
                    public.push(c);
                }
                GateKind::Threshold(_) | GateKind::WeightedThreshold { .. } => {
                    let (f, blocks) = l.shamir.expect("threshold layout");
                    let r = f.order().trailing_zeros() as usize;
                    let t = g.threshold() as usize;
                    let mut polys = Vec::with_capacity(blocks);
                    for b in 0..blocks {
                        let len = r.min(self.lambda - b * r);
                        let mut coeffs = vec![k_out.slice(b * r, len).to_u64() as u32];
                        for _ in 1..t {
                            coeffs.push(tape.draw(u64::from(f.order()))? as u32);
                        }
                        polys.push(Poly::new(f, coeffs)?);
                    }
                    for (j, &w) in g.inputs.iter().enumerate() {
                        let mut parts = Vec::new();
                        for &pt in &l.points[j] {
                            for p in &polys {
                                parts.push(Bits::from_u64(u64::from(p.eval(pt)), r));
                            }
                        }
                        let share = Bits::concat(&parts);
                        let m = mask(gi, j, self.wire_index(w), share.len(), tape)?;
                        public.push(share.xor(&m));
                    }
                }
            }
        }
        let out = self.wire_index(self.circuit.output());
        let pad = match &known {
            Some(k) if !k[out] => tape.draw_bits(self.secret_bits)?,
            _ => self.backend.expand_bits(OUT_TAG, &keys[out], self.secret_bits),
        };
        public.push(Bits::from_u64(secret, self.secret_bits).xor(&pad));
        let n = self.circuit.parties();
        Ok(YaoShares { keys: keys[..n].to_vec(), public: Bits::concat(&public) })
    }

    /// Forward chaining from the keys of `p`.
    pub fn reconstruct(&self, keys: &[Option<Bits>], public: &Bits, p: PartySet) -> Result<u64, SsError> {
        if public.len() != self.public_bits() {
            return Err(SsError::Malformed("public string length"));
        }
        let n = self.circuit.parties();
        let mut known: Vec<Option<Bits>> = vec![None; self.wires()];
        for i in p.iter() {
            let k = keys.get(i).cloned().flatten().ok_or(SsError::MissingShare(i))?;
            if k.len() != self.lambda {
                return Err(SsError::Malformed("key length"));
            }
            known[i] = Some(k);
        }
        let g_of = |gate: usize, slot: usize, k: &Bits, bits: usize| self.backend.expand_bits(&tag(gate, slot), k, bits);
        let mut at = 0;
        for (gi, (g, l)) in self.circuit.gates().iter().zip(&self.layout).enumerate() {
            let inputs: Vec<Option<Bits>> = g.inputs.iter().map(|&w| known[self.wire_index(w)].clone()).collect();
            let key = match g.kind {
                GateKind::Or => {
                    let mut key = None;
                    for (j, k) in inputs.iter().enumerate() {
                        let c = public.slice(at + j * self.lambda, self.lambda);
                        if let (None, Some(k)) = (&key, k) {
                            key = Some(c.xor(&g_of(gi, j, k, self.lambda)));
                        }
                    }
                    key
                }
                GateKind::And => {
                    let mut c = public.slice(at, self.lambda);
                    let mut ok = true;
                    for (j, k) in inputs.iter().enumerate() {
                        match k {
                            Some(k) => c = c.xor(&g_of(gi, j, k, self.lambda)),
                            None => ok = false,
                        }
                    }
                    ok.then_some(c)
                }
                GateKind::Threshold(_) | GateKind::WeightedThreshold { .. } => {
                    let (f, blocks) = l.shamir.expect("threshold layout");
                    let r = f.order().trailing_zeros() as usize;
                    let t = g.threshold() as usize;
                    let mut pts: Vec<Vec<(u32, u32)>> = vec![Vec::new(); blocks];
                    let mut off = at;
                    for (j, k) in inputs.iter().enumerate() {
                        if let Some(k) = k {
                            let share = public.slice(off, l.cts[j]).xor(&g_of(gi, j, k, l.cts[j]));
                            for (pi, &pt) in l.points[j].iter().enumerate() {
                                for (b, bp) in pts.iter_mut().enumerate() {
                                    let v = share.slice((pi * blocks + b) * r, r).to_u64() as u32;
                                    bp.push((pt, v));
                                }
                            }
                        }
                        off += l.cts[j];
                    }
                    if pts[0].len() >= t {
                        let mut parts = Vec::new();
                        for (b, bp) in pts.iter().enumerate() {
                            let v = Poly::interpolate(f, &bp[..t])?.eval(0);
                            let len = r.min(self.lambda - b * r);
                            parts.push(Bits::from_u64(u64::from(v), len));
                        }
                        Some(Bits::concat(&parts))
                    } else {
                        None
                    }
                }
            };
            at += l.cts.iter().sum::<usize>();
            known[n + gi] = key;
        }
        let out = self.wire_index(self.circuit.output());
        let k = known[out].as_ref().ok_or(SsError::Unauthorized)?;
        let ct = public.slice(at, self.secret_bits);
        Ok(ct.xor(&self.backend.expand_bits(OUT_TAG, k, self.secret_bits)).to_u64())
    }
}
