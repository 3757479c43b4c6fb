//! Share-size accounting. Quantum shares count `ceil(log2 dim)` qubits per
//! party; classical shares count the encoded bits.

use alloc::vec::Vec;

use crate::classical::ceil_log2;
use crate::qecc::{lemma3_params, Lemma3Params};
use crate::qotp::OtpKey;

use super::{CompilerError, Mode, QssScheme};

#[derive(Debug, Clone, PartialEq)]
pub struct SizeReport {
    pub secret_dim: usize,
    pub copies: usize,
    /// Registers held by each party.
    pub qudits: Vec<usize>,
    /// `ceil(log2 prod dims)` per party.
    pub qubits: Vec<u64>,
    pub classical_bits: Vec<u64>,
    pub public_bits: u64,
    /// Counted total: quantum plus classical bits over parties, plus public bits.
    pub total: u64,
    /// Pad key bits `2c ceil(log2 d)`.
    pub key_bits: u64,
    /// `size(QC) + key_bits * size(SS)`, with `size(SS)` the total share
    /// size of one classical sharing of a single key component.
    pub formula_total: u64,
    /// `formula_total != total`.
    pub diverges: bool,
    /// Largest per-party share over `log2 d`.
    pub info_ratio: f64,
    pub long_message: Option<LongMessageReport>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LongMessageReport {
    pub params: Lemma3Params,
    /// `N r / (m n)`.
    pub quantum_ratio: f64,
    /// `32 / (2t - n)`.
    pub bound: f64,
    /// Classical seed bits per party over `m`.
    pub classical_ratio: f64,
}

/// Counts the shares of `scheme`; `m` overrides the message length of the
/// long-message accounting.
pub fn size_report(scheme: &QssScheme, m: Option<u64>) -> Result<SizeReport, CompilerError> {
    let n = scheme.parties();
    let d = scheme.secret_dim();
    let c = scheme.copies();
    let qc = scheme.qecc();
    let dims = qc.dims();
    let mut qudits = Vec::with_capacity(n);
    let mut qubits = Vec::with_capacity(n);
    for i in 0..n {
        let regs = qc.party_registers(i);
        qudits.push(regs.len());
        qubits.push(regs.iter().map(|&r| u64::from(ceil_log2(dims[r] as u64))).sum::<u64>());
    }
    let (classical_bits, public_bits) = scheme.ss().share_bits(scheme.ss_components());
    let total = qubits.iter().sum::<u64>() + classical_bits.iter().sum::<u64>() + public_bits;
    let key_bits = u64::from(OtpKey::bit_length_for(&alloc::vec![d; c]));
    let (one, one_public) = scheme.ss().share_bits(1);
    let formula_total = qubits.iter().sum::<u64>() + key_bits * (one.iter().sum::<u64>() + one_public);
    let largest = qubits.iter().zip(&classical_bits).map(|(q, b)| q + b).max().unwrap_or(0);
    let info_ratio = largest as f64 / libm::log2(d as f64);
    let long_message = match scheme.mode() {
        Mode::LongMessage(l) => {
            let (ln, lt, lm) = l.accounted;
            let params = lemma3_params(ln, lt, m.unwrap_or(lm))?;
            let seed_bits = classical_bits.iter().copied().max().unwrap_or(0);
            Some(LongMessageReport {
                quantum_ratio: params.ratio(),
                bound: params.ratio_bound(),
                classical_ratio: seed_bits as f64 / params.m as f64,
                params,
            })
        }
        _ => None,
    };
    Ok(SizeReport {
        secret_dim: d,
        copies: c,
        qudits,
        qubits,
        classical_bits,
        public_bits,
        total,
        key_bits,
        formula_total,
        diverges: formula_total != total,
        info_ratio,
        long_message,
    })
}
