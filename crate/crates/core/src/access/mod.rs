//! Monotone access structures over `n` parties: representations, the
//! predicates used to pick a quantum code (no-cloning, heaviness, weighted
//! heaviness), monotone span programs, and the lifting/witness families.
//!
//! Parties are 0-based in the API and printed 1-based.

mod circuit;
mod msp;
mod props;

pub use circuit::{Gate, GateKind, MonotoneCircuit, Wire};
pub use msp::MonotoneSpanProgram;
pub use props::{
    prop1_lift, prop1_msp_stack, prop5_build, prop6_build, prop6_witness, Prop6Tree,
};

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::gf::GfError;

/// Largest `n` for which predicates are decided by enumerating all subsets.
pub const EXHAUSTIVE_MAX_PARTIES: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AccessError {
    #[error("party {party} out of range for {n} parties")]
    PartyOutOfRange { party: usize, n: usize },
    #[error("{n} parties exceeds the limit of {max}")]
    TooManyParties { n: usize, max: usize },
    #[error("gate {gate} reads a wire that is not defined before it")]
    BadCircuit { gate: usize },
    #[error("gate {gate} has an invalid threshold or weight list")]
    BadThreshold { gate: usize },
    #[error("truth table is not monotone")]
    NotMonotone,
    #[error("truth table has {got} entries, expected {expected}")]
    TableSize { got: usize, expected: usize },
    #[error("weight function must have one weight per party and positive total")]
    BadWeights,
    #[error("the function is not heavy")]
    NotHeavy,
    #[error("{0} parties is not a positive multiple of 9")]
    NotMultipleOfNine(usize),
    #[error("{0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// Set of parties as a bit mask (bit `i` is party `i`, 0-based).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PartySet(pub u64);

impl PartySet {
    pub const MAX_PARTIES: usize = 64;

    pub const fn empty() -> Self {
        PartySet(0)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            PartySet(u64::MAX)
        } else {
            PartySet((1u64 << n) - 1)
        }
    }

    pub fn from_parties(parties: &[usize]) -> Self {
        PartySet(parties.iter().fold(0, |m, &i| m | (1u64 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        PartySet(self.0 | 1 << i)
    }

    pub fn without(self, i: usize) -> Self {
        PartySet(self.0 & !(1 << i))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn complement(self, n: usize) -> Self {
        PartySet(!self.0 & Self::full(n).0)
    }

    pub fn is_subset(self, other: PartySet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: PartySet) -> Self {
        PartySet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&i| self.contains(i))
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Highest party index plus one.
    pub fn span(self) -> usize {
        64 - self.0.leading_zeros() as usize
    }

    /// Every subset of `{0..n}` in increasing mask order.
    pub fn all(n: usize) -> impl Iterator<Item = PartySet> {
        (0..1u64 << n).map(PartySet)
    }

    fn lex_key(self) -> Vec<usize> {
        self.to_vec()
    }
}

impl fmt::Debug for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// 1-based, e.g. `{1,3}`.
impl fmt::Display for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", i + 1)?;
        }
        f.write_str("}")
    }
}

/// Integer weights, one per party.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightFunction {
    weights: Vec<u32>,
}

impl WeightFunction {
    pub fn new(weights: Vec<u32>) -> Result<Self, AccessError> {
        if weights.iter().map(|&w| w as u64).sum::<u64>() == 0 {
            return Err(AccessError::BadWeights);
        }
        Ok(WeightFunction { weights })
    }

    pub fn uniform(n: usize) -> Self {
        WeightFunction { weights: vec![1; n] }
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn parties(&self) -> usize {
        self.weights.len()
    }

    pub fn total(&self) -> u64 {
        self.weights.iter().map(|&w| w as u64).sum()
    }

    pub fn weight_of(&self, p: PartySet) -> u64 {
        p.iter().filter(|&i| i < self.weights.len()).map(|i| self.weights[i] as u64).sum()
    }

    /// Strict-majority threshold `floor(W/2) + 1`.
    pub fn majority(&self) -> u64 {
        self.total() / 2 + 1
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Representation {
    /// Minimal authorized sets; the empty family is the constant 0 and the
    /// family `{{}}` is the constant 1.
    MinSets(Vec<PartySet>),
    Circuit(MonotoneCircuit),
    /// Indexed by party mask; `n <= 20`.
    TruthTable(Vec<bool>),
}

/// A monotone function `f : {0,1}^n -> {0,1}`; `P` is authorized iff `f(P) = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AccessStructure {
    n: usize,
    repr: Representation,
}

/// Result of [`AccessStructure::analyze`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Analysis {
    pub parties: usize,
    pub monotone: bool,
    pub no_cloning: bool,
    /// Smallest authorized set size; `None` if nothing is authorized.
    pub heaviness: Option<usize>,
    /// `heaviness >= floor(n/2) + 1` (vacuously true with nothing authorized).
    pub heavy: bool,
    pub weighted: Option<WeightedReport>,
    /// Minimal authorized sets in lexicographic order.
    pub min_sets: Vec<PartySet>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedReport {
    pub total: u64,
    /// `floor(W/2) + 1`.
    pub threshold: u64,
    /// Smallest weight of an authorized set.
    pub min_authorized_weight: Option<u64>,
    pub weighted_heavy: bool,
}

fn sort_lex(sets: &mut [PartySet]) {
    sets.sort_by_key(|s| s.lex_key());
}

fn minimize(mut sets: Vec<PartySet>) -> Vec<PartySet> {
    sets.sort_by_key(|s| (s.len(), s.0));
    sets.dedup();
    let mut out: Vec<PartySet> = Vec::new();
    for s in sets {
        if !out.iter().any(|m| m.is_subset(s)) {
            out.push(s);
        }
    }
    sort_lex(&mut out);
    out
}

impl AccessStructure {
    pub fn from_min_sets(n: usize, sets: Vec<PartySet>) -> Result<Self, AccessError> {
        if n > PartySet::MAX_PARTIES {
            return Err(AccessError::TooManyParties { n, max: PartySet::MAX_PARTIES });
        }
        for s in &sets {
            if s.span() > n {
                return Err(AccessError::PartyOutOfRange { party: s.span(), n });
            }
        }
        Ok(AccessStructure { n, repr: Representation::MinSets(minimize(sets)) })
    }

    pub fn from_circuit(c: MonotoneCircuit) -> Self {
        AccessStructure { n: c.parties(), repr: Representation::Circuit(c) }
    }

    /// Accepts non-monotone tables too; `analyze` reports monotonicity.
    pub fn from_truth_table(n: usize, table: Vec<bool>) -> Result<Self, AccessError> {
        if n > EXHAUSTIVE_MAX_PARTIES {
            return Err(AccessError::TooManyParties { n, max: EXHAUSTIVE_MAX_PARTIES });
        }
        if table.len() != 1 << n {
            return Err(AccessError::TableSize { got: table.len(), expected: 1 << n });
        }
        Ok(AccessStructure { n, repr: Representation::TruthTable(table) })
    }

    /// `Th_n^t` as a single threshold gate.
    pub fn threshold(t: usize, n: usize) -> Result<Self, AccessError> {
        Ok(Self::from_circuit(MonotoneCircuit::single_gate(n, GateKind::Threshold(t as u32))?))
    }

    /// `(w, t)`-weighted threshold as a single gate.
    pub fn weighted_threshold(w: &WeightFunction, t: u64) -> Result<Self, AccessError> {
        let kind = GateKind::WeightedThreshold { weights: w.weights().to_vec(), t: t as u32 };
        Ok(Self::from_circuit(MonotoneCircuit::single_gate(w.parties(), kind)?))
    }

    pub fn constant(n: usize, value: bool) -> Self {
        let sets = if value { vec![PartySet::empty()] } else { Vec::new() };
        AccessStructure { n, repr: Representation::MinSets(sets) }
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn representation(&self) -> &Representation {
        &self.repr
    }

    pub fn circuit(&self) -> Option<&MonotoneCircuit> {
        match &self.repr {
            Representation::Circuit(c) => Some(c),
            _ => None,
        }
    }

    pub fn check_set(&self, p: PartySet) -> Result<(), AccessError> {
        if p.span() > self.n {
            return Err(AccessError::PartyOutOfRange { party: p.span(), n: self.n });
        }
        Ok(())
    }

    pub fn evaluate(&self, p: PartySet) -> Result<bool, AccessError> {
        self.check_set(p)?;
        Ok(self.eval(p))
    }

    /// Unchecked evaluation; parties beyond `n` are ignored.
    pub fn eval(&self, p: PartySet) -> bool {
        match &self.repr {
            Representation::MinSets(sets) => sets.iter().any(|m| m.is_subset(p)),
            Representation::Circuit(c) => c.evaluate(p),
            Representation::TruthTable(t) => t[(p.0 & PartySet::full(self.n).0) as usize],
        }
    }

    pub fn truth_table(&self) -> Result<Vec<bool>, AccessError> {
        if self.n > EXHAUSTIVE_MAX_PARTIES {
            return Err(AccessError::TooManyParties { n: self.n, max: EXHAUSTIVE_MAX_PARTIES });
        }
        Ok(PartySet::all(self.n).map(|p| self.eval(p)).collect())
    }

    /// Minimal authorized sets in lexicographic order.
    pub fn min_sets(&self) -> Result<Vec<PartySet>, AccessError> {
        if let Representation::MinSets(s) = &self.repr {
            return Ok(s.clone());
        }
        let table = self.truth_table()?;
        let mut out: Vec<PartySet> = PartySet::all(self.n)
            .filter(|p| table[p.0 as usize] && p.iter().all(|i| !table[p.without(i).0 as usize]))
            .collect();
        sort_lex(&mut out);
        Ok(out)
    }

    /// Equivalent structure as a circuit: the given circuit, or the DNF over
    /// the minimal sets (an OR of ANDs, single-party terms read directly).
    pub fn to_circuit(&self) -> Result<MonotoneCircuit, AccessError> {
        if let Representation::Circuit(c) = &self.repr {
            return Ok(c.clone());
        }
        let sets = self.min_sets()?;
        let mut gates = Vec::new();
        let mut terms = Vec::new();
        for s in &sets {
            if s.len() == 1 {
                terms.push(Wire::Var(s.iter().next().expect("one party")));
            } else {
                gates.push(Gate::new(GateKind::And, s.iter().map(Wire::Var).collect()));
                terms.push(Wire::Gate(gates.len() - 1));
            }
        }
        if terms.len() == 1 {
            return MonotoneCircuit::new(self.n, gates, terms[0]);
        }
        gates.push(Gate::new(GateKind::Or, terms));
        let out = Wire::Gate(gates.len() - 1);
        MonotoneCircuit::new(self.n, gates, out)
    }

    /// `f(P) <= g(P)` for every `P`.
    pub fn dominated_by(&self, g: &AccessStructure) -> Result<bool, AccessError> {
        if self.n != g.n {
            return Ok(false);
        }
        if self.n > EXHAUSTIVE_MAX_PARTIES {
            return Err(AccessError::TooManyParties { n: self.n, max: EXHAUSTIVE_MAX_PARTIES });
        }
        Ok(PartySet::all(self.n).all(|p| !self.eval(p) || g.eval(p)))
    }

    /// Decides every predicate by enumerating all `2^n` subsets.
    pub fn analyze(&self, w: Option<&WeightFunction>) -> Result<Analysis, AccessError> {
        if let Some(w) = w {
            if w.parties() != self.n {
                return Err(AccessError::BadWeights);
            }
        }
        let n = self.n;
        let table = self.truth_table()?;
        let full = PartySet::full(n);
        // P -> P + {i} for every cover relation; this covers every pair P <= Q.
        let monotone = PartySet::all(n).all(|p| {
            !table[p.0 as usize] || (0..n).all(|i| table[p.with(i).0 as usize])
        });
        let no_cloning = PartySet::all(n)
            .all(|p| !(table[p.0 as usize] && table[(full.0 & !p.0) as usize]));
        let heaviness =
            PartySet::all(n).filter(|p| table[p.0 as usize]).map(|p| p.len()).min();
        let heavy = heaviness.is_none_or(|t| t > n / 2);
        let weighted = w.map(|w| {
            let min_w = PartySet::all(n)
                .filter(|p| table[p.0 as usize])
                .map(|p| w.weight_of(p))
                .min();
            let threshold = w.majority();
            WeightedReport {
                total: w.total(),
                threshold,
                min_authorized_weight: min_w,
                weighted_heavy: min_w.is_none_or(|m| m >= threshold),
            }
        });
        Ok(Analysis { parties: n, monotone, no_cloning, heaviness, heavy, weighted, min_sets: self.min_sets()? })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(one_based: &[usize]) -> PartySet {
        PartySet::from_parties(&one_based.iter().map(|i| i - 1).collect::<Vec<_>>())
    }

    #[test]
    fn threshold_evaluation() {
        let f = AccessStructure::threshold(2, 3).unwrap();
        assert!(f.evaluate(ps(&[1, 3])).unwrap());
        assert!(!f.evaluate(ps(&[2])).unwrap());
        assert!(matches!(f.evaluate(ps(&[4])), Err(AccessError::PartyOutOfRange { .. })));
    }

    #[test]
    fn nested_circuit_evaluation() {
        // AND(x1, TH2(x2, x3, x4))
        let c = MonotoneCircuit::new(
            4,
            vec![
                Gate::new(GateKind::Threshold(2), vec![Wire::Var(1), Wire::Var(2), Wire::Var(3)]),
                Gate::new(GateKind::And, vec![Wire::Var(0), Wire::Gate(0)]),
            ],
            Wire::Gate(1),
        )
        .unwrap();
        let f = AccessStructure::from_circuit(c);
        for p in PartySet::all(4) {
            let inner = [1, 2, 3].iter().filter(|&&i| p.contains(i)).count() >= 2;
            assert_eq!(f.eval(p), p.contains(0) && inner, "{p}");
        }
        assert!(f.eval(ps(&[1, 3, 4])));
    }

    #[test]
    fn analyze_threshold_2_of_3() {
        let a = AccessStructure::threshold(2, 3).unwrap().analyze(None).unwrap();
        assert!(a.monotone && a.no_cloning && a.heavy);
        assert_eq!(a.heaviness, Some(2));
        assert_eq!(a.min_sets, vec![ps(&[1, 2]), ps(&[1, 3]), ps(&[2, 3])]);
    }

    #[test]
    fn analyze_threshold_2_of_4_clones() {
        let a = AccessStructure::threshold(2, 4).unwrap().analyze(None).unwrap();
        assert!(!a.no_cloning);
        assert!(!a.heavy);
    }

    #[test]
    fn analyze_min_sets_heavy4() {
        let f = AccessStructure::from_min_sets(4, vec![ps(&[1, 2, 3]), ps(&[2, 3, 4])]).unwrap();
        let a = f.analyze(None).unwrap();
        assert!(a.heavy && a.no_cloning && a.monotone);
        assert_eq!(a.heaviness, Some(3));
    }

    #[test]
    fn non_monotone_table_detected() {
        let f = AccessStructure::from_truth_table(2, vec![false, true, false, false]).unwrap();
        assert!(!f.analyze(None).unwrap().monotone);
    }

    #[test]
    fn weighted_report() {
        let w = WeightFunction::new(vec![2, 1, 1]).unwrap();
        let f = AccessStructure::weighted_threshold(&w, 3).unwrap();
        let a = f.analyze(Some(&w)).unwrap();
        let r = a.weighted.unwrap();
        assert_eq!((r.total, r.threshold, r.min_authorized_weight), (4, 3, Some(3)));
        assert!(r.weighted_heavy);
    }

    #[test]
    fn dnf_matches_min_sets() {
        let f = AccessStructure::from_min_sets(4, vec![ps(&[1, 2, 3]), ps(&[2, 3, 4]), ps(&[1])])
            .unwrap();
        let c = AccessStructure::from_circuit(f.to_circuit().unwrap());
        assert_eq!(f.truth_table().unwrap(), c.truth_table().unwrap());
        // {1} absorbs {1,2,3}
        assert_eq!(f.min_sets().unwrap(), vec![ps(&[1]), ps(&[2, 3, 4])]);
    }

    #[test]
    fn party_set_display() {
        assert_eq!(alloc::format!("{}", ps(&[1, 3])), "{1,3}");
        assert_eq!(alloc::format!("{}", PartySet::empty()), "{}");
    }
}
