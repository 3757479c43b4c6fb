//! The compiler: a classical scheme shares the one-time-pad key, the pad
//! encrypts the secret, and a QECC spreads the ciphertext over the parties.
//! Also the long-message variant, scheme builders and the exact
//! correctness and privacy harnesses.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use crate::access::{AccessError, AccessStructure, PartySet};
use crate::classical::{ClassicalScheme, PrgBackend, RandomTape, ShareVector, SsError, TapeReader, YaoMode};
use crate::qecc::{Owner, QeccError, QeccScheme};
use crate::qotp::{otp_dec, otp_enc, OtpError, OtpKey};
use crate::qsim::{entangle_reference, entanglement_fidelity, PureState, QsimError};

mod build;
mod privacy;
mod size;

pub use build::{copies_required, heavy, long_message, multicopy, tree, weighted, SsKind};
pub use privacy::{tomographic_family, verify_privacy, PrivacyMode, PrivacyReport, HOEFFDING_DELTA};
pub use size::{size_report, LongMessageReport, SizeReport};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompilerError {
    #[error("invalid scheme: {0}")]
    Scheme(String),
    #[error("unauthorized set")]
    Unauthorized,
    #[error("set is authorized; privacy is not defined for it")]
    Authorized,
    #[error("secret input: {0}")]
    Input(&'static str),
    #[error("corrupted deal: {0}")]
    Deal(&'static str),
    #[error("no witness-encryption backend is available")]
    WitnessUnsupported,
    #[error("{0} exceeds the simulation cap")]
    Cap(&'static str),
    #[error(transparent)]
    Ss(#[from] SsError),
    #[error(transparent)]
    Qecc(#[from] QeccError),
    #[error(transparent)]
    Otp(#[from] OtpError),
    #[error(transparent)]
    Sim(#[from] QsimError),
    #[error(transparent)]
    Access(#[from] AccessError),
}

/// Long-message mode: the classical scheme shares a short seed and the pad
/// key is `PRG(seed)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LongMessage {
    pub backend: PrgBackend,
    /// Seed length in components of `Z_d`.
    pub seed_components: usize,
    /// Parameters being accounted for, `(n, t, m)`.
    pub accounted: (usize, usize, u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Perfect,
    /// Classical scheme leaks with probability `eps`.
    Statistical { eps: f64 },
    Computational { lambda: usize },
    LongMessage(LongMessage),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QssScheme {
    name: String,
    structure: AccessStructure,
    ss: ClassicalScheme,
    qecc: QeccScheme,
    mode: Mode,
}

impl QssScheme {
    /// Checks `f' >= f` pointwise, no-cloning for single-copy codes, and
    /// that key components fit the classical scheme.
    pub fn new(name: String, structure: AccessStructure, ss: ClassicalScheme, qecc: QeccScheme, mode: Mode) -> Result<Self, CompilerError> {
        let n = structure.parties();
        if ss.parties() != n || qecc.parties() != n {
            return Err(CompilerError::Scheme(format!("party counts differ: f {n}, SS {}, QC {}", ss.parties(), qecc.parties())));
        }
        let ss_f = ss.structure();
        for p in PartySet::all(n) {
            let f = structure.eval(p);
            if f && !qecc.structure().eval(p) {
                return Err(CompilerError::Scheme(format!("QC does not dominate f at {p}")));
            }
            if f != ss_f.eval(p) {
                return Err(CompilerError::Scheme(format!("SS does not realize f at {p}")));
            }
        }
        if qecc.copies() == 1 && !structure.analyze(None)?.no_cloning {
            return Err(CompilerError::Scheme(String::from(
                "f is not no-cloning: some set and its complement are both authorized, and a single copy cannot be given to both",
            )));
        }
        if ss.component_domain() < qecc.logical_dim() as u64 {
            return Err(CompilerError::Scheme(String::from("classical domain smaller than the secret dimension")));
        }
        Ok(QssScheme { name, structure, ss, qecc, mode })
    }

    pub fn with_name(mut self, name: String) -> Self {
        self.name = name;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn structure(&self) -> &AccessStructure {
        &self.structure
    }

    pub fn ss(&self) -> &ClassicalScheme {
        &self.ss
    }

    pub fn qecc(&self) -> &QeccScheme {
        &self.qecc
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn parties(&self) -> usize {
        self.structure.parties()
    }

    pub fn secret_dim(&self) -> usize {
        self.qecc.logical_dim()
    }

    pub fn copies(&self) -> usize {
        self.qecc.copies()
    }

    /// Components handed to the classical scheme: the key, or the seed.
    pub fn ss_components(&self) -> usize {
        match self.mode {
            Mode::LongMessage(l) => l.seed_components,
            _ => 2 * self.copies(),
        }
    }

    /// Pad key from the classically shared components.
    pub fn key_from(&self, x: &[u64]) -> Result<OtpKey, CompilerError> {
        let d = self.secret_dim();
        let comps: Vec<u32> = match self.mode {
            Mode::LongMessage(l) => {
                let seed: Vec<u8> = x.iter().flat_map(|&v| (v as u16).to_be_bytes()).collect();
                crate::classical::expand_to_range(l.backend, &seed, 2 * self.copies(), d as u64)
                    .into_iter()
                    .map(|v| v as u32)
                    .collect()
            }
            _ => x.iter().map(|&v| v as u32).collect(),
        };
        Ok(OtpKey::from_components(vec![d; self.copies()], &comps)?)
    }
}

/// One run of the sharing: the global state, register ownership and the
/// classical shares.
#[derive(Debug, Clone, PartialEq)]
pub struct Deal {
    pub scheme: String,
    pub state: PureState,
    /// Register indices of each party.
    pub party_map: Vec<Vec<usize>>,
    pub environment: Vec<usize>,
    /// Registers outside the protocol (a tester's reference system).
    pub reference: Vec<usize>,
    pub classical: Vec<Vec<u8>>,
    pub public: Vec<u8>,
    pub tape: RandomTape,
}

impl Deal {
    /// Position of code register 0 in the state.
    pub fn code_offset(&self) -> usize {
        self.party_map.iter().flatten().chain(&self.environment).copied().min().unwrap_or(0)
    }
}

/// Shares the secret held in `secret_regs` (consecutive, one per copy).
/// Tape order: pad key (or seed), then the classical scheme.
pub fn qss_share(scheme: &QssScheme, input: &PureState, secret_regs: &[usize], tape: &RandomTape) -> Result<Deal, CompilerError> {
    let c = scheme.copies();
    let d = scheme.secret_dim();
    if secret_regs.len() != c {
        return Err(CompilerError::Input("one secret register per copy required"));
    }
    let o = secret_regs[0];
    if secret_regs.iter().enumerate().any(|(j, &r)| r != o + j) {
        return Err(CompilerError::Input("secret registers must be consecutive"));
    }
    input.system().check_targets(secret_regs)?;
    if secret_regs.iter().any(|&r| input.system().dim(r) != d) {
        return Err(CompilerError::Input("secret register dimension differs from the scheme's"));
    }
    let mut reader = TapeReader::new(tape);
    let mut x = Vec::with_capacity(scheme.ss_components());
    for _ in 0..scheme.ss_components() {
        x.push(reader.draw(d as u64)?);
    }
    let key = scheme.key_from(&x)?;
    let encrypted = otp_enc(input, secret_regs, &key)?;
    let state = scheme.qecc.encode(&encrypted, secret_regs)?;
    let mode = YaoMode::Real;
    let shares = scheme.ss.share_key(&x, &mut reader, mode)?;
    reader.finish()?;
    let regs = scheme.qecc.owners().len();
    let mut party_map = vec![Vec::new(); scheme.parties()];
    let mut environment = Vec::new();
    for (r, owner) in scheme.qecc.owners().iter().enumerate() {
        match owner {
            Owner::Party(i) => party_map[*i].push(o + r),
            Owner::Environment => environment.push(o + r),
        }
    }
    let reference = (0..state.system().len()).filter(|&i| i < o || i >= o + regs).collect();
    Ok(Deal {
        scheme: scheme.name.clone(),
        state,
        party_map,
        environment,
        reference,
        classical: shares.parties,
        public: shares.public,
        tape: tape.clone(),
    })
}

/// Output of reconstruction: the state with the secret in register `output`.
#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub state: PureState,
    pub output: usize,
    /// Which copy of the input was recovered.
    pub copy: usize,
}

pub fn qss_reconstruct(scheme: &QssScheme, deal: &Deal, p: PartySet, witness: Option<&[u8]>) -> Result<Reconstruction, CompilerError> {
    if witness.is_some() {
        return Err(CompilerError::WitnessUnsupported);
    }
    if deal.classical.len() != scheme.parties() || deal.party_map.len() != scheme.parties() {
        return Err(CompilerError::Deal("party count"));
    }
    let shares = ShareVector { parties: deal.classical.clone(), public: deal.public.clone() };
    let x = match scheme.ss.reconstruct_key(&shares, p, scheme.ss_components()) {
        Err(SsError::Unauthorized) => return Err(CompilerError::Unauthorized),
        other => other?,
    };
    let key = scheme.key_from(&x)?;
    let offset = deal.code_offset();
    let (state, copy, output) = match scheme.qecc.decode(&deal.state, offset, p) {
        Err(QeccError::NotCorrectable { .. }) => return Err(CompilerError::Unauthorized),
        other => other?,
    };
    let d = scheme.secret_dim();
    let (a, b) = key.pairs()[copy];
    let k = OtpKey::new(vec![d], vec![(a, b)])?;
    let state = otp_dec(&state, &[output], &k)?;
    Ok(Reconstruction { state, output, copy })
}

/// References for every copy followed by the payloads, shared with `tape`.
pub fn reference_deal(scheme: &QssScheme, tape: &RandomTape) -> Result<Deal, CompilerError> {
    let c = scheme.copies();
    let d = scheme.secret_dim();
    let mut st = entangle_reference(d)?;
    for _ in 1..c {
        st = st.tensor(&entangle_reference(d)?)?;
    }
    let order: Vec<usize> = (0..c).map(|i| 2 * i).chain((0..c).map(|i| 2 * i + 1)).collect();
    let st = st.permute_registers(&order)?;
    qss_share(scheme, &st, &(c..2 * c).collect::<Vec<_>>(), tape)
}

/// Entanglement fidelity of the reconstructed output with the reference of
/// the recovered copy.
pub fn verify_correctness(scheme: &QssScheme, p: PartySet, tape: &RandomTape) -> Result<f64, CompilerError> {
    if !scheme.structure.eval(p) {
        return Err(CompilerError::Unauthorized);
    }
    let deal = reference_deal(scheme, tape)?;
    let r = qss_reconstruct(scheme, &deal, p, None)?;
    // References precede the code registers and are untouched by decoding.
    Ok(entanglement_fidelity(&r.state, &[(r.copy, r.output)])?)
}
