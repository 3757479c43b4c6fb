//! Scheme assembly: the classical scheme realizes `f`, the code realizes
//! some `f' >= f`.

use alloc::format;
use alloc::string::String;

use crate::access::{AccessStructure, MonotoneCircuit, WeightFunction};
use crate::classical::{ceil_log2, ClassicalScheme, FormulaScheme, LeakyScheme, PrgBackend, ShamirScheme, YaoScheme};
use crate::gf::{next_prime, Field};
use crate::qecc::{multicopy_threshold, quantum_shamir, tree_qecc, weighted_expand, QeccScheme};

use super::{CompilerError, LongMessage, Mode, QssScheme};

/// Classical scheme used for the pad key.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SsKind {
    Formula,
    /// Threshold structures only.
    Shamir,
    /// Formula scheme that leaks the key with probability `eps`.
    Leaky(f64),
    Yao { lambda: usize, backend: PrgBackend },
}

/// `max(1, n - 2t + 2)`.
pub fn copies_required(t: usize, n: usize) -> usize {
    (n + 2).saturating_sub(2 * t).max(1)
}

fn threshold_of(f: &AccessStructure) -> Result<Option<usize>, CompilerError> {
    let n = f.parties();
    let t = f.analyze(None)?.heaviness;
    Ok(match t {
        Some(t) if AccessStructure::threshold(t, n)?.truth_table()? == f.truth_table()? => Some(t),
        _ => None,
    })
}

fn classical(f: &AccessStructure, kind: SsKind, d: usize) -> Result<(ClassicalScheme, Mode), CompilerError> {
    let n = f.parties();
    Ok(match kind {
        SsKind::Formula => (ClassicalScheme::Formula(FormulaScheme::new(f, d as u64)?), Mode::Perfect),
        SsKind::Shamir => {
            let t = threshold_of(f)?.ok_or_else(|| CompilerError::Scheme(String::from("shamir SS realizes threshold structures only")))?;
            let field = Field::prime(next_prime(d.max(n + 1) as u32)).map_err(crate::classical::SsError::from)?;
            (ClassicalScheme::Shamir(ShamirScheme::new(field, t, n)?), Mode::Perfect)
        }
        SsKind::Leaky(eps) => {
            let s = LeakyScheme::new(FormulaScheme::new(f, d as u64)?, eps)?;
            let eps = s.epsilon();
            (ClassicalScheme::Leaky(s), Mode::Statistical { eps })
        }
        SsKind::Yao { lambda, backend } => {
            let bits = ceil_log2(d as u64) as usize;
            (ClassicalScheme::Yao(YaoScheme::new(f, lambda, bits, backend)?), Mode::Computational { lambda })
        }
    })
}

fn no_cloning_error(f: &AccessStructure) -> Result<(), CompilerError> {
    if !f.analyze(None)?.no_cloning {
        return Err(CompilerError::Scheme(String::from(
            "f is not no-cloning: a set and its complement are both authorized, so both could rebuild the secret and clone it",
        )));
    }
    Ok(())
}

/// Heavy `f` (smallest authorized set `t > n/2`): `f' = Th_n^t` realized by
/// the quantum Shamir code over GF(q), `q` the least prime `>= 2t - 1`
/// unless given. Secrets live in dimension `q`.
pub fn heavy(f: &AccessStructure, ss: SsKind, q: Option<u32>) -> Result<QssScheme, CompilerError> {
    no_cloning_error(f)?;
    let n = f.parties();
    let t = f
        .analyze(None)?
        .heaviness
        .ok_or_else(|| CompilerError::Scheme(String::from("no set is authorized")))?;
    if 2 * t <= n {
        return Err(CompilerError::Scheme(format!(
            "f is not heavy: an authorized set of {t} parties is at most half of {n}; lift it or use a multi-copy scheme"
        )));
    }
    let q = q.unwrap_or_else(|| next_prime((2 * t - 1) as u32));
    let qc = quantum_shamir(t, n, q)?;
    let (ss, mode) = classical(f, ss, q as usize)?;
    QssScheme::new(format!("heavy(t={t},q={q})"), f.clone(), ss, qc, mode)
}

/// `Th_n^t` with `copies_required(t, n)` copies of the secret.
pub fn multicopy(t: usize, n: usize, ss: SsKind, q: Option<u32>) -> Result<QssScheme, CompilerError> {
    let f = AccessStructure::threshold(t, n)?;
    let q = q.unwrap_or_else(|| next_prime((n + 1).max(2 * t - 1) as u32));
    let qc = multicopy_threshold(t, n, q)?;
    let (ss, mode) = classical(&f, ss, q as usize)?;
    QssScheme::new(format!("multicopy({t},{n},{q})"), f, ss, qc, mode)
}

/// Weighted-heavy `f`: every authorized set outweighs half of `W`. The code
/// is the quantum Shamir `(t, W)` code, party `i` holding `w(i)` shares,
/// with `t` the lightest authorized weight.
pub fn weighted(f: &AccessStructure, w: &WeightFunction, ss: SsKind, q: Option<u32>) -> Result<QssScheme, CompilerError> {
    no_cloning_error(f)?;
    let report = f.analyze(Some(w))?.weighted.ok_or_else(|| CompilerError::Scheme(String::from("no weight report")))?;
    let t = report
        .min_authorized_weight
        .ok_or_else(|| CompilerError::Scheme(String::from("no set is authorized")))? as usize;
    let total = w.total() as usize;
    if !report.weighted_heavy {
        return Err(CompilerError::Scheme(format!("f is not weighted-heavy: an authorized set weighs {t} of {total}")));
    }
    let q = q.unwrap_or_else(|| next_prime((2 * t - 1).max(total) as u32));
    let inner = quantum_shamir(t, total, q)?;
    let qc = weighted_expand(&inner, w)?;
    let (ss, mode) = classical(f, ss, q as usize)?;
    QssScheme::new(format!("weighted(t={t},W={total},q={q})"), f.clone(), ss, qc, mode)
}

/// Tree of heavy (weighted) threshold gates: the code composes the gates'
/// quantum Shamir codes and realizes the tree exactly.
pub fn tree(circuit: &MonotoneCircuit, ss: SsKind, q: Option<u32>) -> Result<QssScheme, CompilerError> {
    let f = AccessStructure::from_circuit(circuit.clone());
    let need = circuit.gates().iter().map(|g| (2 * g.threshold()).saturating_sub(1).max(g.total_weight())).max().unwrap_or(2);
    let q = q.unwrap_or_else(|| next_prime(need));
    let qc = tree_qecc(circuit, q)?;
    let (ss, mode) = classical(&f, ss, q as usize)?;
    QssScheme::new(format!("tree(q={q})"), f, ss, qc, mode)
}

/// Long-message scheme for `Th_n^t` and `m`-qubit messages. The classical
/// scheme shares a seed of `seed_components` elements of `Z_q` and the pad
/// key is its PRG expansion. The simulated code is the quantum Shamir code
/// (the `[[3,1,2]]_3` code for `(3,2)`); the long-message code itself is
/// only accounted for.
pub fn long_message(n: usize, t: usize, m: u64, seed_components: usize, backend: PrgBackend) -> Result<QssScheme, CompilerError> {
    if 2 * t <= n || t > n {
        return Err(CompilerError::Scheme(String::from("long-message mode needs n/2 < t <= n")));
    }
    if m == 0 || seed_components == 0 {
        return Err(CompilerError::Scheme(String::from("message and seed lengths must be positive")));
    }
    crate::qecc::lemma3_params(n, t, m)?;
    let f = AccessStructure::threshold(t, n)?;
    let q = next_prime((2 * t - 1) as u32);
    let qc: QeccScheme = quantum_shamir(t, n, q)?;
    let (ss, _) = classical(&f, SsKind::Shamir, q as usize)?;
    let mode = Mode::LongMessage(LongMessage { backend, seed_components, accounted: (n, t, m) });
    QssScheme::new(format!("longmsg({n},{t},{m})"), f, ss, qc, mode)
}
