use alloc::vec;
use alloc::vec::Vec;

use crate::access::{AccessStructure, GateKind, MonotoneCircuit, PartySet, Wire};
use crate::gf::{next_prime, Field, Poly};

use super::tape::{TapeReader, TapeShape};
use super::{ceil_log2_pow, SsError};

/// Formula tree with every leaf bound to a share slot of its party.
#[derive(Debug, Clone, PartialEq, Eq)]
enum Node {
    Leaf { party: usize, slot: usize },
    /// Constant-1 subformula: its value is published.
    Public { slot: usize },
    /// Constant-0 subformula: nothing is handed out.
    Nothing,
    /// Additive split.
    And(Vec<Node>),
    /// Replication.
    Or(Vec<Node>),
    /// Shamir at points `1..=children.len()`.
    Th { t: usize, children: Vec<Node> },
}

/// Perfect scheme for a monotone formula over GF(p): AND splits additively,
/// OR replicates, threshold gates Shamir-share, weighted gates give input
/// `j` its `w_j` Shamir points. Circuits with fan-out are unrolled into a
/// formula. Shares are laid out in depth-first order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaScheme {
    structure: AccessStructure,
    field: Field,
    root: Node,
    slots: Vec<usize>,
    public_slots: usize,
    draws: usize,
}

struct Builder<'a> {
    circuit: &'a MonotoneCircuit,
    slots: Vec<usize>,
    public_slots: usize,
    draws: usize,
    max_points: usize,
}

impl Builder<'_> {
    fn wire(&mut self, w: Wire) -> Result<Node, SsError> {
        match w {
            Wire::Var(i) => {
                let slot = self.slots[i];
                self.slots[i] += 1;
                Ok(Node::Leaf { party: i, slot })
            }
            Wire::Gate(g) => {
                let gate = &self.circuit.gates()[g];
                let mut kids = Vec::new();
                match &gate.kind {
                    GateKind::And if gate.inputs.is_empty() => {
                        let slot = self.public_slots;
                        self.public_slots += 1;
                        Ok(Node::Public { slot })
                    }
                    GateKind::Or if gate.inputs.is_empty() => Ok(Node::Nothing),
                    GateKind::And => {
                        self.draws += gate.inputs.len() - 1;
                        for &i in &gate.inputs {
                            kids.push(self.wire(i)?);
                        }
                        Ok(Node::And(kids))
                    }
                    GateKind::Or => {
                        for &i in &gate.inputs {
                            kids.push(self.wire(i)?);
                        }
                        Ok(Node::Or(kids))
                    }
                    GateKind::Threshold(_) | GateKind::WeightedThreshold { .. } => {
                        let t = gate.threshold() as usize;
                        self.draws += t - 1;
                        for (&i, &w) in gate.inputs.iter().zip(&gate.input_weights()) {
                            for _ in 0..w {
                                kids.push(self.wire(i)?);
                            }
                        }
                        self.max_points = self.max_points.max(kids.len());
                        Ok(Node::Th { t, children: kids })
                    }
                }
            }
        }
    }
}

/// Elements handed out by one sharing: per party in slot order, plus the
/// public list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaShares {
    pub parties: Vec<Vec<u32>>,
    pub public: Vec<u32>,
}

impl FormulaScheme {
    /// Field is GF(p) with `p` the least prime `>= max(secret_domain, max fan-in + 1)`.
    pub fn new(structure: &AccessStructure, secret_domain: u64) -> Result<Self, SsError> {
        let circuit = structure.to_circuit()?;
        let n = circuit.parties();
        let mut b = Builder { circuit: &circuit, slots: vec![0; n], public_slots: 0, draws: 0, max_points: 0 };
        let root = b.wire(circuit.output())?;
        let need = secret_domain.max(b.max_points as u64 + 1).max(2);
        if need > 65521 {
            return Err(SsError::Params("secret domain too large for the formula field"));
        }
        let field = Field::prime(next_prime(need as u32))?;
        Ok(FormulaScheme {
            structure: structure.clone(),
            field,
            root,
            slots: b.slots,
            public_slots: b.public_slots,
            draws: b.draws,
        })
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn parties(&self) -> usize {
        self.slots.len()
    }

    /// Field elements held by each party.
    pub fn slots(&self) -> &[usize] {
        &self.slots
    }

    pub fn public_slots(&self) -> usize {
        self.public_slots
    }

    pub fn tape_shape(&self) -> TapeShape {
        TapeShape(vec![u64::from(self.field.order()); self.draws])
    }

    pub fn share(&self, secret: u32, tape: &mut TapeReader) -> Result<FormulaShares, SsError> {
        self.field.check(secret)?;
        let mut out = FormulaShares {
            parties: self.slots.iter().map(|&s| vec![0; s]).collect(),
            public: vec![0; self.public_slots],
        };
        self.share_node(&self.root, secret, tape, &mut out)?;
        Ok(out)
    }

    fn share_node(&self, node: &Node, v: u32, tape: &mut TapeReader, out: &mut FormulaShares) -> Result<(), SsError> {
        let f = self.field;
        let q = u64::from(f.order());
        match node {
            Node::Leaf { party, slot } => out.parties[*party][*slot] = v,
            Node::Public { slot } => out.public[*slot] = v,
            Node::Nothing => {}
            Node::And(kids) => {
                let mut rest = v;
                let mut pieces = Vec::with_capacity(kids.len());
                for _ in 1..kids.len() {
                    let r = tape.draw(q)? as u32;
                    rest = f.sub(rest, r);
                    pieces.push(r);
                }
                pieces.push(rest);
                for (k, p) in kids.iter().zip(pieces) {
                    self.share_node(k, p, tape, out)?;
                }
            }
            Node::Or(kids) => {
                for k in kids {
                    self.share_node(k, v, tape, out)?;
                }
            }
            Node::Th { t, children } => {
                let mut coeffs = vec![v];
                for _ in 1..*t {
                    coeffs.push(tape.draw(q)? as u32);
                }
                let poly = Poly::new(f, coeffs)?;
                for (j, k) in children.iter().enumerate() {
                    self.share_node(k, poly.eval(j as u32 + 1), tape, out)?;
                }
            }
        }
        Ok(())
    }

    /// Secret from the shares of `p`; `None` entries are missing shares.
    pub fn reconstruct(&self, shares: &[Option<Vec<u32>>], public: &[u32], p: PartySet) -> Result<u32, SsError> {
        self.rec_node(&self.root, shares, public, p)?.ok_or(SsError::Unauthorized)
    }

    fn rec_node(
        &self,
        node: &Node,
        shares: &[Option<Vec<u32>>],
        public: &[u32],
        p: PartySet,
    ) -> Result<Option<u32>, SsError> {
        let f = self.field;
        Ok(match node {
            Node::Leaf { party, slot } if p.contains(*party) => {
                let s = shares.get(*party).and_then(|s| s.as_ref()).ok_or(SsError::MissingShare(*party))?;
                Some(*s.get(*slot).ok_or(SsError::Malformed("short formula share"))?)
            }
            Node::Leaf { .. } | Node::Nothing => None,
            Node::Public { slot } => Some(*public.get(*slot).ok_or(SsError::Malformed("short public string"))?),
            Node::And(kids) => {
                let mut acc = 0;
                for k in kids {
                    match self.rec_node(k, shares, public, p)? {
                        Some(x) => acc = f.add(acc, x),
                        None => return Ok(None),
                    }
                }
                Some(acc)
            }
            Node::Or(kids) => {
                for k in kids {
                    if let Some(x) = self.rec_node(k, shares, public, p)? {
                        return Ok(Some(x));
                    }
                }
                None
            }
            Node::Th { t, children } => {
                let mut pts = Vec::new();
                for (j, k) in children.iter().enumerate() {
                    if pts.len() == *t {
                        break;
                    }
                    if let Some(x) = self.rec_node(k, shares, public, p)? {
                        pts.push((j as u32 + 1, x));
                    }
                }
                if pts.len() < *t {
                    None
                } else {
                    Some(Poly::interpolate(f, &pts)?.eval(0))
                }
            }
        })
    }

    /// `ceil(log2 p^slots_i)` per party.
    pub fn share_bits(&self) -> Vec<u32> {
        self.slots.iter().map(|&s| ceil_log2_pow(u64::from(self.field.order()), s as u32)).collect()
    }
}
