//! Quantum erasure-correcting codes: quantum Shamir threshold codes, CSS
//! codes, multi-copy threshold codes, weighted expansion and tree
//! composition, with a generic erasure decoder synthesized from the code
//! itself.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::access::{AccessError, AccessStructure, PartySet};
use crate::gf::GfError;
use crate::qsim::{LinearIsometry, PureState, QsimError};

mod compose;
mod css;
mod lemma3;
mod shamir;
mod synth;

pub use compose::{multicopy_threshold, tree_qecc, weighted_expand};
pub use css::{css_build, kl_check};
pub use lemma3::{lemma3_params, m_min, Lemma3Params, M_MIN_HORIZON};
pub use shamir::{quantum_shamir, quantum_shamir_decoder, ShamirDecoder};
pub use synth::{kl_diagnostic, synthesize_erasure_decoder, ErasureDecoder, KL_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QeccError {
    #[error("invalid parameters: {0}")]
    Params(&'static str),
    #[error("erasures not correctable (KL diagnostic {diagnostic:e})")]
    NotCorrectable { diagnostic: f64 },
    #[error("{held} shares held, {need} needed")]
    TooFewShares { held: usize, need: usize },
    #[error("circuit is not a tree")]
    NotTree,
    #[error(transparent)]
    Sim(#[from] QsimError),
    #[error(transparent)]
    Field(#[from] GfError),
    #[error(transparent)]
    Access(#[from] AccessError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Owner {
    Party(usize),
    /// Pre-erased padding, held by nobody.
    Environment,
}

/// One copy of the logical input encoded into a consecutive run of registers.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub encoder: LinearIsometry,
    pub start: usize,
}

impl Block {
    pub fn registers(&self) -> core::ops::Range<usize> {
        self.start..self.start + self.encoder.out_dims().len()
    }
}

/// Canonical quantum Shamir data kept for the analytic decoder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShamirParams {
    pub t: usize,
    pub q: u32,
}

/// Encoder (one block per consumed copy) plus register ownership.
#[derive(Debug, Clone, PartialEq)]
pub struct QeccScheme {
    name: String,
    logical_dim: usize,
    blocks: Vec<Block>,
    owners: Vec<Owner>,
    parties: usize,
    structure: AccessStructure,
    shamir: Option<ShamirParams>,
}

impl QeccScheme {
    /// Blocks must tile the registers in order.
    pub fn new(
        name: String,
        blocks: Vec<Block>,
        owners: Vec<Owner>,
        parties: usize,
        structure: AccessStructure,
    ) -> Result<Self, QeccError> {
        let logical_dim = match blocks.first() {
            Some(b) if b.encoder.in_dims().len() == 1 => b.encoder.in_dim(),
            _ => return Err(QeccError::Params("need at least one single-register block")),
        };
        let mut next = 0;
        for b in &blocks {
            if b.start != next || b.encoder.in_dims() != [logical_dim] {
                return Err(QeccError::Params("blocks must tile the registers with equal logical dims"));
            }
            next = b.registers().end;
        }
        if next != owners.len() {
            return Err(QeccError::Params("one owner per register"));
        }
        if owners.iter().any(|o| matches!(o, Owner::Party(p) if *p >= parties)) || structure.parties() != parties {
            return Err(QeccError::Params("owner outside the party range"));
        }
        Ok(QeccScheme { name, logical_dim, blocks, owners, parties, structure, shamir: None })
    }

    pub(crate) fn with_shamir(mut self, p: ShamirParams) -> Self {
        self.shamir = Some(p);
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn logical_dim(&self) -> usize {
        self.logical_dim
    }

    /// Copies of the logical input consumed by one encoding.
    pub fn copies(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn owners(&self) -> &[Owner] {
        &self.owners
    }

    pub fn parties(&self) -> usize {
        self.parties
    }

    /// Realized access structure.
    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    pub fn shamir(&self) -> Option<ShamirParams> {
        self.shamir
    }

    /// Classical bits carried inside the code (none for these pure codes).
    pub fn classical_bits(&self) -> u64 {
        0
    }

    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().flat_map(|b| b.encoder.out_dims().iter().copied()).collect()
    }

    pub fn party_registers(&self, party: usize) -> Vec<usize> {
        (0..self.owners.len()).filter(|&r| self.owners[r] == Owner::Party(party)).collect()
    }

    pub fn held_registers(&self, p: PartySet) -> Vec<usize> {
        (0..self.owners.len())
            .filter(|&r| matches!(self.owners[r], Owner::Party(i) if p.contains(i)))
            .collect()
    }

    pub fn environment(&self) -> Vec<usize> {
        (0..self.owners.len()).filter(|&r| self.owners[r] == Owner::Environment).collect()
    }

    /// Largest encoder error `|V^dagger V - I|` over the blocks.
    pub fn isometry_error(&self) -> f64 {
        self.blocks.iter().map(|b| b.encoder.isometry_error()).fold(0.0, f64::max)
    }

    /// Erasure decoder for `p`: the first block whose held registers
    /// correct the rest, acting on a minimal correctable subset of them.
    /// Register indices are global.
    pub fn decoder(&self, p: PartySet) -> Result<(usize, ErasureDecoder), QeccError> {
        let held = self.held_registers(p);
        let mut best = f64::INFINITY;
        for (c, b) in self.blocks.iter().enumerate() {
            let range = b.registers();
            let mut erased: Vec<usize> = range.clone().filter(|r| !held.contains(r)).map(|r| r - b.start).collect();
            let mine: Vec<usize> = range.filter(|r| held.contains(r)).map(|r| r - b.start).collect();
            if mine.is_empty() {
                continue;
            }
            // Erase every held register the others can do without.
            for &r in mine.iter().rev() {
                let mut more = erased.clone();
                more.push(r);
                if more.len() < b.encoder.out_dims().len() && kl_diagnostic(&b.encoder, &more)? <= KL_THRESHOLD {
                    erased = more;
                }
            }
            match synthesize_erasure_decoder(&b.encoder, &erased) {
                Ok(mut d) => {
                    for h in &mut d.held {
                        *h += b.start;
                    }
                    return Ok((c, d));
                }
                Err(QeccError::NotCorrectable { diagnostic }) => best = best.min(diagnostic),
                Err(e) => return Err(e),
            }
        }
        Err(QeccError::NotCorrectable { diagnostic: best })
    }

    /// Encodes register `inputs[c]` of `state` with block `c`; the outputs
    /// of each block take the place of its input register. With consecutive
    /// inputs starting at `o`, code register `r` ends up at position `o + r`.
    pub fn encode(&self, state: &PureState, inputs: &[usize]) -> Result<PureState, QeccError> {
        if inputs.len() != self.blocks.len() {
            return Err(QeccError::Params("one input register per copy"));
        }
        let mut order: Vec<usize> = (0..inputs.len()).collect();
        order.sort_by_key(|&c| core::cmp::Reverse(inputs[c]));
        let mut out = state.clone();
        for c in order {
            out = out.apply_isometry(&self.blocks[c].encoder, &[inputs[c]], None)?;
        }
        Ok(out)
    }

    /// Decodes for `p` inside `state`, whose code registers start at
    /// `offset`. Returns the new state, the copy that was recovered and the
    /// position of the logical register.
    pub fn decode(&self, state: &PureState, offset: usize, p: PartySet) -> Result<(PureState, usize, usize), QeccError> {
        let (copy, dec) = self.decoder(p)?;
        let targets: Vec<usize> = dec.held.iter().map(|h| h + offset).collect();
        let out = state.apply_isometry(&dec.isometry, &targets, None)?;
        let pos = targets.iter().copied().min().unwrap_or(offset);
        Ok((out, copy, pos))
    }
}
